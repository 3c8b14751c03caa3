"""Bolts, bolt functionals, and the closed extremal bolt search.

A bolt is an ordered point sequence whose consecutive points alternately
share an s-class and a p-class. A closed bolt wraps around with even length.
The normalized alternating-sign evaluation functional attached to a bolt
annihilates every sum g∘s + h∘p when the bolt is closed, which is what makes
closed bolts usable as optimality certificates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoltValidationError
from .space import AlgebraElement, FunctionOnX, Side, TwoAlgebraSpace


def default_tolerance(scale: float, base: float = 1e-9) -> float:
    """Scale-relative tolerance used across extremal-set and certificate checks."""
    return base * max(1.0, float(scale))


@dataclass(frozen=True)
class Bolt:
    """Validated bolt: point indices plus the type of the first link.

    Link k (1-based, between points[k-1] and points[k]) has type
    ``first_link`` when k is odd and the opposite type when k is even.
    """

    points: tuple[int, ...]
    first_link: Side

    @property
    def n(self) -> int:
        return len(self.points)

    def link_side(self, k: int) -> Side:
        """Type of 1-based link k (k = n means the wrap-around link)."""
        return self.first_link if k % 2 == 1 else self.first_link.other()


class ClosedBolt(Bolt):
    """A bolt whose wrap-around link is also valid; always even length."""


def validate_bolt(
    space: TwoAlgebraSpace, points, first_link: Side
) -> Bolt:
    """Check the bolt conditions and return a Bolt, or raise with the failure.

    Violations carry the 0-based link position and the failed condition.
    """
    pts = tuple(int(x) for x in points)
    if len(pts) < 2:
        raise BoltValidationError(
            f"a bolt needs at least 2 points, got {len(pts)}",
            position=0, condition="length",
        )
    for i, x in enumerate(pts):
        if not (0 <= x < space.n_points):
            raise BoltValidationError(
                f"point index {x} at position {i} is out of range",
                position=i, condition="point_range",
            )
    bolt = Bolt(points=pts, first_link=first_link)
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        if a == b:
            raise BoltValidationError(
                f"consecutive points at positions {i},{i + 1} are equal ({a})",
                position=i, condition="consecutive_equal",
            )
        side = bolt.link_side(i + 1)
        cls = space.class_of(side)
        if cls[a] != cls[b]:
            raise BoltValidationError(
                f"link {i + 1} requires equal {side.value}-class but "
                f"point {a} has class {cls[a]} and point {b} has class {cls[b]}",
                position=i, condition="class_mismatch",
            )
    return bolt


def is_closed(space: TwoAlgebraSpace, bolt: Bolt) -> bool:
    """True iff the length is even and the wrap-around link is valid."""
    n = bolt.n
    if n % 2 != 0:
        return False
    a, b = bolt.points[-1], bolt.points[0]
    if a == b:
        return False
    cls = space.class_of(bolt.link_side(n))
    return bool(cls[a] == cls[b])


def as_closed(space: TwoAlgebraSpace, bolt: Bolt) -> ClosedBolt:
    if not is_closed(space, bolt):
        raise BoltValidationError(
            "bolt is not closed", position=bolt.n - 1, condition="not_closed"
        )
    return ClosedBolt(points=bolt.points, first_link=bolt.first_link)


def rotated(space: TwoAlgebraSpace, bolt: ClosedBolt, shift: int = 2) -> ClosedBolt:
    """Rotate the start of a closed bolt by an even shift."""
    if shift % 2 != 0:
        raise BoltValidationError(
            "rotation shift must be even to preserve link parity",
            position=0, condition="rotation_parity",
        )
    k = shift % bolt.n
    pts = bolt.points[k:] + bolt.points[:k]
    return as_closed(space, validate_bolt(space, pts, bolt.first_link))


def reversed_bolt(space: TwoAlgebraSpace, bolt: ClosedBolt) -> ClosedBolt:
    """Traverse a closed bolt backwards; the first link flips type."""
    pts = (bolt.points[0],) + bolt.points[:0:-1]
    return as_closed(space, validate_bolt(space, pts, bolt.first_link.other()))


def _signs(n: int) -> np.ndarray:
    s = np.ones(n)
    s[1::2] = -1.0
    return s


def bolt_functional(bolt: Bolt, F: FunctionOnX) -> float:
    """(1/n) of the alternating-sign sum of F over the bolt points.

    The leading point enters with a plus sign.
    """
    vals = F.values[list(bolt.points)]
    return float(np.dot(_signs(bolt.n), vals)) / bolt.n


@dataclass(frozen=True)
class BoltFunctionalReport:
    """Norm of the bolt functional on the whole function space.

    ``value`` is the exact total variation of the atom-weight vector
    sum_i (-1)^(i+1) δ_{x_i} / n. The norm is 1 exactly when the points at
    odd (1-based) positions do not meet the points at even positions.
    """

    value: float
    n: int
    norm_is_one: bool
    odd_set: frozenset[int]
    even_set: frozenset[int]


def functional_norm(bolt: Bolt) -> BoltFunctionalReport:
    odd = bolt.points[0::2]   # 1-based odd positions carry +1
    even = bolt.points[1::2]
    net: dict[int, int] = {}
    for x in odd:
        net[x] = net.get(x, 0) + 1
    for x in even:
        net[x] = net.get(x, 0) - 1
    total = sum(abs(c) for c in net.values())  # integer; exact
    odd_set, even_set = frozenset(odd), frozenset(even)
    return BoltFunctionalReport(
        value=total / bolt.n,
        n=bolt.n,
        norm_is_one=odd_set.isdisjoint(even_set),
        odd_set=odd_set,
        even_set=even_set,
    )


def annihilation_gap(
    space: TwoAlgebraSpace, bolt: Bolt, v: AlgebraElement
) -> float:
    """|functional| applied to a single-algebra element composed with its projection.

    Bounded by (2/n)·max|class value| for every valid bolt; vanishes for
    closed bolts, where interior cancellations telescope completely.
    """
    return abs(bolt_functional(bolt, v.compose(space)))


def extremal_point_sets(
    residual: FunctionOnX, tol: float = 0.0
) -> tuple[frozenset[int], frozenset[int]]:
    """Points where the residual is within tol of +norm / -norm.

    A zero-norm residual makes every point extremal with both signs.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    r = residual.values
    norm = float(np.max(np.abs(r)))
    plus = frozenset(np.flatnonzero(r >= norm - tol).tolist())
    minus = frozenset(np.flatnonzero(r <= -norm + tol).tolist())
    return plus, minus


# --- closed extremal bolt search -------------------------------------------
#
# Search states are (point, side of the next link, sign used at the point).
# An edge goes to a same-class point of the opposite sign, so any directed
# cycle alternates link types and signs; its length is automatically even and
# its point sequence is a closed bolt extremal for the residual.


def _successor_table(
    space: TwoAlgebraSpace,
    plus: frozenset[int],
    minus: frozenset[int],
) -> dict[tuple[Side, int, int], np.ndarray]:
    """For (link side, class, target sign): sorted extremal points in the fiber."""
    table: dict[tuple[Side, int, int], np.ndarray] = {}
    for side in (Side.S, Side.P):
        for c, fiber in enumerate(space.fibers_of(side)):
            in_plus = np.array([x for x in fiber.tolist() if x in plus], dtype=np.int64)
            in_minus = np.array([x for x in fiber.tolist() if x in minus], dtype=np.int64)
            table[(side, c, +1)] = in_plus
            table[(side, c, -1)] = in_minus
    return table


def _cycle_through(
    space: TwoAlgebraSpace,
    table: dict[tuple[Side, int, int], np.ndarray],
    root: tuple[int, Side, int],
) -> list[int] | None:
    """Depth-first search for a path from root back to root.

    Successors are explored in ascending point order and each state is
    visited at most once, so the result is deterministic.
    """

    def successors(state):
        x, side, sign = state
        cls = int(space.class_of(side)[x])
        nxt_side = side.other()
        for y in table[(side, cls, -sign)].tolist():
            if y != x:
                yield (y, nxt_side, -sign)

    visited = {root}
    path = [root]
    iters = [successors(root)]
    while iters:
        nxt = next(iters[-1], None)
        if nxt is None:
            iters.pop()
            path.pop()
            continue
        if nxt == root:
            return [s[0] for s in path]
        if nxt in visited:
            continue
        visited.add(nxt)
        path.append(nxt)
        iters.append(successors(nxt))
    return None


def find_closed_extremal_bolt(
    space: TwoAlgebraSpace,
    residual: FunctionOnX,
    tol: float | None = None,
) -> ClosedBolt | None:
    """Search for a closed bolt alternating between the two extremal sets.

    Returns None when no such bolt exists (a legal outcome). The returned
    bolt always leads with a positive extremal point, so its induced measure
    satisfies the dual sign condition as stated. The search is deterministic:
    positive start points are scanned in ascending order and, per start
    point, the lexicographically smallest of the candidate cycles is kept.
    """
    if len(residual) != space.n_points:
        raise ValueError("residual length does not match the space")
    norm = float(np.max(np.abs(residual.values)))
    if tol is None:
        tol = default_tolerance(norm)
    plus, minus = extremal_point_sets(residual, tol)
    if not plus or not minus:
        return None
    table = _successor_table(space, plus, minus)

    # every cycle alternates signs, so rooting at positive states loses nothing
    for x0 in sorted(plus):
        candidates: list[tuple[list[int], Side]] = []
        for side in (Side.S, Side.P):
            cyc = _cycle_through(space, table, (x0, side, +1))
            if cyc is not None:
                candidates.append((cyc, side))
        if candidates:
            pts, side = min(candidates, key=lambda c: c[0])
            return as_closed(space, validate_bolt(space, pts, side))
    return None
