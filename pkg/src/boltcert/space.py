"""Finite two-algebra approximation spaces.

A space is a finite point set together with two surjective class maps
(partitions). Each partition induces a function algebra: the functions that
are constant on every class of that partition. Everything downstream
(bolts, dual measures, solvers) works on top of this data model.

All types are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import SpaceValidationError


class Side(enum.Enum):
    """Which of the two partitions (equivalently, which algebra or link type)."""

    S = "S"
    P = "P"

    def other(self) -> "Side":
        return Side.P if self is Side.S else Side.S


def _normalize_classes(raw: Sequence[int], name: str) -> np.ndarray:
    """Renumber class indices to a dense 0..k-1 range, preserving grouping.

    Original indices may be any nonnegative integers; they are mapped to
    contiguous indices in ascending order of the original values.
    """
    arr = np.asarray(raw)
    if arr.ndim != 1:
        raise SpaceValidationError(f"{name} must be a flat sequence")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(arr == np.floor(arr)):
            bad = int(np.argmax(arr != np.floor(arr)))
            raise SpaceValidationError(
                f"{name}[{bad}] = {arr[bad]!r} is not an integer", index=bad
            )
        arr = arr.astype(np.int64)
    arr = arr.astype(np.int64)
    if arr.size and arr.min() < 0:
        bad = int(np.argmax(arr < 0))
        raise SpaceValidationError(
            f"{name}[{bad}] = {arr[bad]} is out of range (negative)", index=bad
        )
    _, dense = np.unique(arr, return_inverse=True)
    return dense.astype(np.int64)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class TwoAlgebraSpace:
    """Finite point set with two partition projections.

    ``s_class[i]`` / ``p_class[i]`` give the class index of point ``i`` under
    each projection; both maps are surjective onto ``range(n_s)`` /
    ``range(n_p)``. ``coords`` is an optional (n, 2) array used only when
    drawing diagrams; ``labels`` are optional human-readable point names.
    """

    s_class: np.ndarray
    p_class: np.ndarray
    labels: tuple[str, ...] | None = None
    coords: np.ndarray | None = None
    # fibers: per-class point index arrays, precomputed for hot loops
    s_fibers: tuple[np.ndarray, ...] = field(init=False, repr=False)
    p_fibers: tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self):
        s = _freeze(np.asarray(self.s_class, dtype=np.int64))
        p = _freeze(np.asarray(self.p_class, dtype=np.int64))
        object.__setattr__(self, "s_class", s)
        object.__setattr__(self, "p_class", p)
        n = s.shape[0]
        if n < 1:
            raise SpaceValidationError("a space needs at least one point")
        if p.shape[0] != n:
            raise SpaceValidationError(
                f"s_class has {n} entries but p_class has {p.shape[0]}"
            )
        for name, cls in (("s_class", s), ("p_class", p)):
            k = int(cls.max()) + 1
            if not np.array_equal(np.unique(cls), np.arange(k)):
                raise SpaceValidationError(
                    f"{name} indices are not contiguous from 0; "
                    "construct spaces via build_from_partitions"
                )
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != n:
                raise SpaceValidationError(
                    f"expected {n} labels, got {len(labels)}"
                )
            object.__setattr__(self, "labels", labels)
        if self.coords is not None:
            coords = np.asarray(self.coords, dtype=np.float64)
            if coords.shape != (n, 2):
                raise SpaceValidationError(
                    f"coords must have shape ({n}, 2), got {coords.shape}"
                )
            object.__setattr__(self, "coords", _freeze(coords))
        object.__setattr__(
            self, "s_fibers",
            tuple(_freeze(np.flatnonzero(s == c)) for c in range(int(s.max()) + 1)),
        )
        object.__setattr__(
            self, "p_fibers",
            tuple(_freeze(np.flatnonzero(p == c)) for c in range(int(p.max()) + 1)),
        )

    @property
    def n_points(self) -> int:
        return self.s_class.shape[0]

    @property
    def n_s(self) -> int:
        return len(self.s_fibers)

    @property
    def n_p(self) -> int:
        return len(self.p_fibers)

    def class_of(self, side: Side) -> np.ndarray:
        return self.s_class if side is Side.S else self.p_class

    def fibers_of(self, side: Side) -> tuple[np.ndarray, ...]:
        return self.s_fibers if side is Side.S else self.p_fibers

    def n_classes(self, side: Side) -> int:
        return self.n_s if side is Side.S else self.n_p

    def point_name(self, i: int) -> str:
        if self.labels is not None:
            return self.labels[i]
        return str(i)


@dataclass(frozen=True, eq=False)
class FunctionOnX:
    """A real value per point; compared and measured in the uniform norm."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise SpaceValidationError("function values must be a flat sequence")
        if not np.all(np.isfinite(v)):
            bad = int(np.argmax(~np.isfinite(v)))
            raise SpaceValidationError(
                f"values[{bad}] = {v[bad]!r} is not finite", index=bad
            )
        object.__setattr__(self, "values", _freeze(v))

    @property
    def norm(self) -> float:
        return uniform_norm(self)

    def __len__(self) -> int:
        return self.values.shape[0]

    def __sub__(self, other: "FunctionOnX") -> "FunctionOnX":
        if len(other) != len(self):
            raise SpaceValidationError(
                f"length mismatch: {len(self)} vs {len(other)}"
            )
        return FunctionOnX(self.values - other.values)

    def __add__(self, other: "FunctionOnX") -> "FunctionOnX":
        if len(other) != len(self):
            raise SpaceValidationError(
                f"length mismatch: {len(self)} vs {len(other)}"
            )
        return FunctionOnX(self.values + other.values)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """An element of one induced algebra: a value per class of that side."""

    side: Side
    class_values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.class_values, dtype=np.float64)
        if v.ndim != 1:
            raise SpaceValidationError("class_values must be a flat sequence")
        if not np.all(np.isfinite(v)):
            raise SpaceValidationError("class_values must be finite")
        object.__setattr__(self, "class_values", _freeze(v))

    def compose(self, space: TwoAlgebraSpace) -> FunctionOnX:
        """The function on points obtained by composing with the projection."""
        cls = space.class_of(self.side)
        if self.class_values.shape[0] != space.n_classes(self.side):
            raise SpaceValidationError(
                f"algebra element has {self.class_values.shape[0]} class values "
                f"but the space has {space.n_classes(self.side)} {self.side.value}-classes"
            )
        return FunctionOnX(self.class_values[cls])

    @property
    def sup(self) -> float:
        return float(np.max(np.abs(self.class_values))) if self.class_values.size else 0.0


@dataclass(frozen=True, eq=False)
class SumElement:
    """A sum ``g∘s + h∘p`` with g on the S side and h on the P side."""

    g: AlgebraElement
    h: AlgebraElement

    def __post_init__(self):
        if self.g.side is not Side.S or self.h.side is not Side.P:
            raise SpaceValidationError("SumElement needs g on side S and h on side P")


def sum_element(g_values: Iterable[float], h_values: Iterable[float]) -> SumElement:
    """Convenience constructor from raw class-value sequences."""
    return SumElement(
        g=AlgebraElement(Side.S, np.asarray(list(g_values), dtype=np.float64)),
        h=AlgebraElement(Side.P, np.asarray(list(h_values), dtype=np.float64)),
    )


def zero_sum_element(space: TwoAlgebraSpace) -> SumElement:
    return sum_element(np.zeros(space.n_s), np.zeros(space.n_p))


def build_from_partitions(
    n_points: int,
    s_class: Sequence[int],
    p_class: Sequence[int],
    labels: Sequence[str] | None = None,
    coords: Sequence[Sequence[float]] | None = None,
) -> TwoAlgebraSpace:
    """Build a space from two class maps.

    Class indices need not be contiguous; they are renumbered densely
    (ascending in the original values) while the grouping is preserved.
    """
    if n_points < 1:
        raise SpaceValidationError("empty point set")
    for name, m in (("s_class", s_class), ("p_class", p_class)):
        if len(m) != n_points:
            raise SpaceValidationError(
                f"{name} has {len(m)} entries for {n_points} points"
            )
    return TwoAlgebraSpace(
        s_class=_normalize_classes(s_class, "s_class"),
        p_class=_normalize_classes(p_class, "p_class"),
        labels=tuple(labels) if labels is not None else None,
        coords=np.asarray(coords, dtype=np.float64) if coords is not None else None,
    )


def build_grid(nx: int, ny: int) -> TwoAlgebraSpace:
    """Product grid: point (i, j) has s-class i (column) and p-class j (row).

    Point order is row-major with the column index varying fastest, so point
    ``k`` sits at ``(k % nx, k // nx)``. This is the classical special case
    where one algebra is the functions of x and the other the functions of y.
    """
    if nx < 1 or ny < 1:
        raise SpaceValidationError("grid dimensions must be at least 1")
    jj, ii = np.divmod(np.arange(nx * ny), nx)
    coords = np.stack([ii, jj], axis=1).astype(np.float64)
    return TwoAlgebraSpace(s_class=ii, p_class=jj, coords=coords)


def _cluster_by_gaps(values: np.ndarray, tol: float) -> np.ndarray:
    """Cluster scalars by sorting and cutting gaps greater than tol.

    Clusters are numbered in ascending value order, which makes the result
    independent of the input ordering.
    """
    order = np.argsort(values, kind="stable")
    cls = np.empty(values.shape[0], dtype=np.int64)
    current = 0
    cls[order[0]] = 0
    for prev, cur in zip(order[:-1], order[1:]):
        if values[cur] - values[prev] > tol:
            current += 1
        cls[cur] = current
    return cls


def build_ridge(
    points: Sequence[Sequence[float]],
    a: Sequence[float],
    b: Sequence[float],
    tol: float = 0.0,
) -> TwoAlgebraSpace:
    """Space on d-dimensional sample points with direction-projection classes.

    The s-partition clusters the dot products ``a·x`` (values within ``tol``
    of each other, closed transitively, share a class); the p-partition does
    the same for ``b·x``. First two coordinates of the points are kept for
    diagram emission.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise SpaceValidationError("points must be a nonempty list of d-vectors")
    if tol < 0:
        raise SpaceValidationError("tol must be nonnegative")
    a_vec = np.asarray(a, dtype=np.float64)
    b_vec = np.asarray(b, dtype=np.float64)
    if not a_vec.any() or not b_vec.any():
        raise SpaceValidationError("directions a and b must be nonzero")
    if a_vec.shape != (pts.shape[1],) or b_vec.shape != (pts.shape[1],):
        raise SpaceValidationError("direction dimension does not match the points")
    coords = pts[:, :2] if pts.shape[1] >= 2 else np.stack(
        [pts[:, 0], np.zeros(pts.shape[0])], axis=1
    )
    return TwoAlgebraSpace(
        s_class=_cluster_by_gaps(pts @ a_vec, tol),
        p_class=_cluster_by_gaps(pts @ b_vec, tol),
        coords=coords,
    )


def evaluate_sum(space: TwoAlgebraSpace, u: SumElement) -> FunctionOnX:
    """Pointwise values ``g[s(x)] + h[p(x)]``."""
    g = u.g.compose(space).values
    h = u.h.compose(space).values
    return FunctionOnX(g + h)


def uniform_norm(F: FunctionOnX) -> float:
    """Max absolute value over the points; zero only for the zero function."""
    return float(np.max(np.abs(F.values)))


def factors_through(space: TwoAlgebraSpace, F: FunctionOnX, side: Side) -> bool:
    """True iff F is constant on every class of the given side."""
    if len(F) != space.n_points:
        raise SpaceValidationError("function length does not match the space")
    v = F.values
    return all(np.all(v[fib] == v[fib[0]]) for fib in space.fibers_of(side))
