"""Best-approximation solvers and optimality certification.

Two solvers are provided: an exact minimax LP solved by a dense simplex
routine implemented here (instances are tiny, and an in-house pivot rule
keeps certificates bit-reproducible), and the classical alternating
Diliberto-Straus sweep, which is guaranteed to converge to the optimum only
on full product grids and is therefore flagged non-certifying elsewhere.

``certify`` ties the two dual views together: a closed extremal bolt of the
residual proves optimality; failing that, a strictly better LP solution
proves non-optimality; anything in between is reported as undecided.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .bolts import (
    ClosedBolt,
    as_closed,
    bolt_functional,
    default_tolerance,
    find_closed_extremal_bolt,
)
from .errors import SolverInternalError
from .measures import SignedMeasure, SingerReport, measure_from_closed_bolt, verify_singer
from .space import (
    FunctionOnX,
    SumElement,
    TwoAlgebraSpace,
    evaluate_sum,
    sum_element,
    uniform_norm,
    zero_sum_element,
)


class SolveMethod(enum.Enum):
    LP = "lp"
    DILIBERTO_STRAUS = "ds"


class Verdict(enum.Enum):
    OPTIMAL = "Optimal"
    NOT_OPTIMAL = "NotOptimal"
    UNDECIDED = "Undecided"


@dataclass(frozen=True, eq=False)
class ApproximationResult:
    """A computed approximant with its residual and uniform error.

    ``history`` records the error after each sweep for the alternating
    method (leading entry is the error of the zero approximant).
    """

    u: SumElement
    error: float
    residual: FunctionOnX
    method: SolveMethod
    iterations: int
    history: tuple[float, ...] | None = None


@dataclass(frozen=True, eq=False)
class Certificate:
    """Optimality verdict with its witnesses.

    Optimal: a closed extremal bolt (and its induced dual measure with the
    three-condition report) unless the residual is numerically zero, in
    which case the certificate is trivial and the bolt may be absent.
    NotOptimal: a strictly better sum element is attached as evidence.
    ``gap`` is the certificate slack: norm minus |bolt functional| when a
    bolt is present, otherwise norm minus the best error found.
    """

    verdict: Verdict
    error: float
    gap: float
    bolt: ClosedBolt | None = None
    dual: SignedMeasure | None = None
    singer: SingerReport | None = None
    improvement: SumElement | None = None
    improved_error: float | None = None


# --- exact minimax LP --------------------------------------------------------
#
# minimize t  s.t.  -t <= f(x) - g[s(x)] - h[p(x)] <= t  for every point x,
# with h[0] anchored to 0 to remove the constant-shift degeneracy. Free
# variables are split into nonnegative pairs; both inequality families get
# slacks. One bootstrap pivot on the t column (its coefficient is -1 in every
# row) makes the slack basis feasible, after which standard primal pivoting
# applies: Dantzig's rule first, Bland's rule beyond a pivot budget so the
# iteration provably terminates.

_RATIO_EPS = 1e-9


def _pivot(T: np.ndarray, basis: np.ndarray, r: int, j: int) -> None:
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    basis[r] = j


def _minimax_simplex(
    space: TwoAlgebraSpace, f_scaled: np.ndarray, opt_eps: float
) -> tuple[np.ndarray, np.ndarray, int]:
    """Solve the anchored minimax LP; returns (g, h, pivot count)."""
    n = space.n_points
    ns, nh = space.n_s, space.n_p - 1
    it = 2 * ns + 2 * nh          # column of t
    n_cols = it + 1 + 2 * n
    m = 2 * n

    T = np.zeros((m + 1, n_cols + 1))
    rows = np.arange(n)
    s = space.s_class
    p = space.p_class

    T[rows, s] = 1.0              # gp
    T[rows, ns + s] = -1.0        # gm
    anch = p > 0
    T[rows[anch], 2 * ns + p[anch] - 1] = 1.0        # hp
    T[rows[anch], 2 * ns + nh + p[anch] - 1] = -1.0  # hm
    T[n + rows, :it] = -T[rows, :it]
    T[:m, it] = -1.0
    T[rows, it + 1 + rows] = 1.0
    T[n + rows, it + 1 + n + rows] = 1.0
    T[rows, -1] = f_scaled
    T[n + rows, -1] = -f_scaled
    T[m, it] = 1.0                # objective: minimize t

    basis = np.arange(it + 1, it + 1 + m)

    pivots = 0
    r0 = int(np.argmin(T[:m, -1]))
    if T[r0, -1] < 0:
        _pivot(T, basis, r0, it)
        pivots += 1

    dantzig_cap = 100 + 10 * (m + n_cols)
    max_pivots = 1000 + 200 * (m + n_cols)
    while True:
        red = T[m, :n_cols]
        if pivots < dantzig_cap:
            j = int(np.argmin(red))
            if red[j] >= -opt_eps:
                break
        else:
            neg = np.flatnonzero(red < -opt_eps)
            if neg.size == 0:
                break
            j = int(neg[0])
        col = T[:m, j]
        pos = np.flatnonzero(col > _RATIO_EPS)
        if pos.size == 0:
            raise SolverInternalError(
                "minimax LP produced an unbounded direction"
            )
        ratios = T[pos, -1] / col[pos]
        cand = pos[ratios == ratios.min()]
        r = int(cand[np.argmin(basis[cand])])
        _pivot(T, basis, r, j)
        pivots += 1
        if pivots > max_pivots:
            raise SolverInternalError("simplex pivot budget exhausted")

    x = np.zeros(n_cols)
    x[basis] = T[:m, -1]
    g = x[:ns] - x[ns:2 * ns]
    h = np.zeros(space.n_p)
    if nh:
        h[1:] = x[2 * ns:2 * ns + nh] - x[2 * ns + nh:2 * ns + 2 * nh]
    return g, h, pivots


def solve_lp(
    space: TwoAlgebraSpace, f: FunctionOnX, tol: float = 1e-9
) -> ApproximationResult:
    """Exact best approximation in the uniform norm via the minimax LP.

    ``tol`` governs the optimality test (reduced-cost threshold on the
    norm-scaled problem). The LP is always feasible and bounded, so this
    never fails on valid input.
    """
    if len(f) != space.n_points:
        raise SolverInternalError("function length does not match the space")
    if tol <= 0:
        raise ValueError("tol must be positive")
    scale = uniform_norm(f)
    if scale == 0.0:
        u = zero_sum_element(space)
        return ApproximationResult(
            u=u, error=0.0, residual=f, method=SolveMethod.LP, iterations=0
        )
    g, h, pivots = _minimax_simplex(space, f.values / scale, opt_eps=tol * 1e-2)
    u = sum_element(g * scale, h * scale)
    residual = f - evaluate_sum(space, u)
    return ApproximationResult(
        u=u,
        error=uniform_norm(residual),
        residual=residual,
        method=SolveMethod.LP,
        iterations=pivots,
    )


def diliberto_straus(
    space: TwoAlgebraSpace,
    f: FunctionOnX,
    max_iter: int = 10000,
    tol: float | None = None,
) -> ApproximationResult:
    """Alternating sweep: recenter the residual per s-class, then per p-class.

    The error sequence never increases. Iteration stops when the per-sweep
    decrease drops below ``tol`` (scale-relative by default) or at
    ``max_iter`` sweeps. Convergence to the optimum is classical on full
    product grids only; certify the result on other partition pairs.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if len(f) != space.n_points:
        raise SolverInternalError("function length does not match the space")
    if tol is None:
        tol = default_tolerance(uniform_norm(f))
    elif tol <= 0:
        raise ValueError("tol must be positive")

    r = f.values.copy()
    g = np.zeros(space.n_s)
    h = np.zeros(space.n_p)
    history = [float(np.max(np.abs(r)))]
    sweeps = 0
    for sweeps in range(1, max_iter + 1):
        for cls, vec in ((space.s_class, g), (space.p_class, h)):
            mx = np.full(vec.shape[0], -np.inf)
            mn = np.full(vec.shape[0], np.inf)
            np.maximum.at(mx, cls, r)
            np.minimum.at(mn, cls, r)
            center = 0.5 * (mx + mn)
            vec += center
            r -= center[cls]
        err = float(np.max(np.abs(r)))
        if err > history[-1]:
            raise SolverInternalError(
                "uniform error increased during an alternating sweep"
            )
        decrease = history[-1] - err
        history.append(err)
        if decrease < tol:
            break

    residual = FunctionOnX(r)
    return ApproximationResult(
        u=sum_element(g, h),
        error=uniform_norm(residual),
        residual=residual,
        method=SolveMethod.DILIBERTO_STRAUS,
        iterations=sweeps,
        history=tuple(history),
    )


def certify(
    space: TwoAlgebraSpace,
    f: FunctionOnX,
    u0: SumElement,
    tol: float | None = None,
) -> Certificate:
    """Decide whether u0 is a best approximation to f.

    A closed extremal bolt of the residual proves optimality and is returned
    with its induced dual measure and condition report. A numerically zero
    residual is trivially optimal even when the space admits no closed bolt.
    Otherwise the LP is consulted: a strictly better approximant (beyond the
    tolerance) proves non-optimality; a difference inside the tolerance band
    is reported as undecided rather than guessed.
    """
    residual = f - evaluate_sum(space, u0)
    err = uniform_norm(residual)
    tol_eff = default_tolerance(err) if tol is None else tol

    bolt = find_closed_extremal_bolt(space, residual, tol_eff)
    if bolt is not None:
        mu = measure_from_closed_bolt(space, bolt)
        singer = verify_singer(space, mu, f, u0, tol_eff)
        gap = err - abs(bolt_functional(bolt, residual))
        return Certificate(
            verdict=Verdict.OPTIMAL,
            error=err,
            gap=gap,
            bolt=bolt,
            dual=mu,
            singer=singer,
        )
    if err <= tol_eff:
        # exact (or numerically exact) interpolant: nothing can beat error 0
        return Certificate(verdict=Verdict.OPTIMAL, error=err, gap=err)

    lp = solve_lp(space, f)
    gap = err - lp.error
    if lp.error < err - tol_eff:
        return Certificate(
            verdict=Verdict.NOT_OPTIMAL,
            error=err,
            gap=gap,
            improvement=lp.u,
            improved_error=lp.error,
        )
    return Certificate(verdict=Verdict.UNDECIDED, error=err, gap=gap)


def duality_gap(
    space: TwoAlgebraSpace,
    f: FunctionOnX,
    u0: SumElement,
    bolt: ClosedBolt,
) -> float:
    """‖f − u0‖ minus |bolt functional at f|; nonnegative for closed bolts.

    Zero (within tolerance) exactly when the bolt certifies optimality of u0.
    """
    if not isinstance(bolt, ClosedBolt):
        bolt = as_closed(space, bolt)
    residual = f - evaluate_sum(space, u0)
    return uniform_norm(residual) - abs(bolt_functional(bolt, f))


