"""Signed measures on the finite space and dual optimality certificates.

Measures are atom-weight vectors; every Borel-style operation collapses to
subset sums. The three dual-certificate conditions checked here are: unit
total variation, orthogonality to both induced algebras, and the residual
pinned to ±its norm on the positive/negative supports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bolts import Bolt, ClosedBolt, as_closed, default_tolerance, validate_bolt
from .errors import MeasureWalkError, SpaceValidationError
from .space import (
    FunctionOnX,
    Side,
    SumElement,
    TwoAlgebraSpace,
    evaluate_sum,
    uniform_norm,
)


@dataclass(frozen=True, eq=False)
class SignedMeasure:
    """Real atom weight per point (or per class, for pushforward images)."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1:
            raise SpaceValidationError("measure weights must be a flat sequence")
        if not np.all(np.isfinite(w)):
            raise SpaceValidationError("measure weights must be finite")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def total_variation(self) -> float:
        return float(np.sum(np.abs(self.weights)))

    def __len__(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True, eq=False)
class JordanPair:
    """Positive/negative parts with their (strictly positive) supports."""

    mu_plus: SignedMeasure
    mu_minus: SignedMeasure
    supp_plus: frozenset[int]
    supp_minus: frozenset[int]


@dataclass(frozen=True)
class SingerReport:
    """Outcome of the three dual-certificate conditions, with magnitudes.

    ``passed`` is the conjunction; a passing report certifies that the
    checked sum element is a best approximation.
    """

    total_variation_ok: bool
    orthogonal_ok: bool
    sign_condition_ok: bool
    total_variation_violation: float
    orthogonality_violation: float
    sign_violation: float

    @property
    def passed(self) -> bool:
        return self.total_variation_ok and self.orthogonal_ok and self.sign_condition_ok


def pushforward(
    space: TwoAlgebraSpace, mu: SignedMeasure, side: Side
) -> SignedMeasure:
    """Image measure on the quotient classes: sum the atoms over each fiber.

    Total variation never increases (opposite-sign atoms may land in the
    same class and cancel).
    """
    if len(mu) != space.n_points:
        raise SpaceValidationError("measure length does not match the space")
    cls = space.class_of(side)
    sums = np.bincount(cls, weights=mu.weights, minlength=space.n_classes(side))
    return SignedMeasure(sums)


def change_of_variables_check(
    space: TwoAlgebraSpace,
    mu: SignedMeasure,
    side: Side,
    g_class_values,
) -> tuple[float, float]:
    """Both sides of the substitution identity for the projection map.

    lhs integrates g composed with the projection against mu; rhs integrates
    g against the pushforward. They agree exactly in exact arithmetic.
    """
    g = np.asarray(g_class_values, dtype=np.float64)
    if g.shape[0] != space.n_classes(side):
        raise SpaceValidationError("class value vector has the wrong length")
    cls = space.class_of(side)
    lhs = float(np.dot(g[cls], mu.weights))
    rhs = float(np.dot(g, pushforward(space, mu, side).weights))
    return lhs, rhs


def is_orthogonal(
    space: TwoAlgebraSpace, mu: SignedMeasure, tol: float | None = None
) -> bool:
    """True iff every pushforward atom (both sides) is at most tol in magnitude.

    This is equivalent to mu integrating every sum g∘s + h∘p to zero.
    """
    if tol is None:
        tol = default_tolerance(mu.total_variation)
    for side in (Side.S, Side.P):
        atoms = pushforward(space, mu, side).weights
        if atoms.size and np.max(np.abs(atoms)) > tol:
            return False
    return True


def jordan(mu: SignedMeasure) -> JordanPair:
    """Split into positive and negative parts; exact on atoms."""
    w = mu.weights
    plus = np.where(w > 0, w, 0.0)
    minus = np.where(w < 0, -w, 0.0)
    return JordanPair(
        mu_plus=SignedMeasure(plus),
        mu_minus=SignedMeasure(minus),
        supp_plus=frozenset(np.flatnonzero(w > 0).tolist()),
        supp_minus=frozenset(np.flatnonzero(w < 0).tolist()),
    )


def verify_singer(
    space: TwoAlgebraSpace,
    mu: SignedMeasure,
    f: FunctionOnX,
    u0: SumElement,
    tol: float | None = None,
) -> SingerReport:
    """Check the three dual-certificate conditions for mu against f and u0."""
    residual = f - evaluate_sum(space, u0)
    norm = uniform_norm(residual)
    if tol is None:
        tol = default_tolerance(norm)

    tv_violation = abs(mu.total_variation - 1.0)

    orth_violation = 0.0
    for side in (Side.S, Side.P):
        atoms = pushforward(space, mu, side).weights
        if atoms.size:
            orth_violation = max(orth_violation, float(np.max(np.abs(atoms))))

    pair = jordan(mu)
    sign_violation = 0.0
    r = residual.values
    for x in pair.supp_plus:
        sign_violation = max(sign_violation, abs(r[x] - norm))
    for x in pair.supp_minus:
        sign_violation = max(sign_violation, abs(r[x] + norm))

    return SingerReport(
        total_variation_ok=tv_violation <= tol,
        orthogonal_ok=orth_violation <= tol,
        sign_condition_ok=sign_violation <= tol,
        total_variation_violation=tv_violation,
        orthogonality_violation=orth_violation,
        sign_violation=sign_violation,
    )


def measure_from_closed_bolt(
    space: TwoAlgebraSpace, bolt: ClosedBolt
) -> SignedMeasure:
    """Representing measure of the bolt functional: ±1/n atoms along the bolt.

    Atoms accumulate on revisited points. The result is orthogonal to both
    algebras by construction, with total variation 1 exactly when the odd
    and even position sets are disjoint.
    """
    if not isinstance(bolt, ClosedBolt):
        bolt = as_closed(space, bolt)
    w = np.zeros(space.n_points)
    n = bolt.n
    idx = np.array(bolt.points, dtype=np.int64)
    signs = np.ones(n)
    signs[1::2] = -1.0
    np.add.at(w, idx, signs / n)
    return SignedMeasure(w)


def extract_bolt_from_measure(
    space: TwoAlgebraSpace,
    mu: SignedMeasure,
    residual: FunctionOnX,
    tol: float | None = None,
) -> ClosedBolt:
    """Walk the supports of mu to a closed bolt extremal for the residual.

    Starting from the smallest positive-support point, repeatedly step within
    the current class (link sides alternating) to the smallest point of
    opposite sign. Orthogonality forces such a point to exist in every class
    the walk visits; on a finite space the walk must repeat a (point, side)
    state, and the enclosed cycle is the certificate bolt.

    Raises MeasureWalkError when a class fiber has no opposite-sign support
    point, which means mu is not a valid dual certificate.
    """
    if len(mu) != space.n_points:
        raise SpaceValidationError("measure length does not match the space")
    w = mu.weights
    plus = np.flatnonzero(w > 0)
    if plus.size == 0:
        raise MeasureWalkError(
            "measure has empty positive support", point=-1, side=Side.S.value
        )

    x = int(plus[0])
    side = Side.S
    seen: dict[tuple[int, Side], int] = {}
    walk: list[tuple[int, Side]] = []
    while (x, side) not in seen:
        seen[(x, side)] = len(walk)
        walk.append((x, side))
        fiber = space.fibers_of(side)[int(space.class_of(side)[x])]
        want_negative = w[x] > 0
        if want_negative:
            eligible = fiber[w[fiber] < 0]
        else:
            eligible = fiber[w[fiber] > 0]
        if eligible.size == 0:
            raise MeasureWalkError(
                f"no opposite-sign support point shares the {side.value}-class "
                f"of point {x}; the measure is not orthogonal",
                point=x,
                side=side.value,
            )
        x = int(eligible[0])
        side = side.other()

    start = seen[(x, side)]
    cycle = walk[start:]
    points = [state[0] for state in cycle]
    first_link = cycle[0][1]
    return as_closed(space, validate_bolt(space, points, first_link))
