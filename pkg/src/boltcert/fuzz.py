"""Seeded random generators for spaces, functions, measures, and bolts.

Used by the selftest command and by the property/acceptance test corpora.
Everything is driven by a numpy Generator so runs are reproducible.
"""

from __future__ import annotations

import numpy as np

from .bolts import Bolt, ClosedBolt, as_closed, validate_bolt
from .measures import SignedMeasure
from .space import (
    AlgebraElement,
    FunctionOnX,
    Side,
    SumElement,
    TwoAlgebraSpace,
    build_from_partitions,
    build_grid,
    sum_element,
)


def _random_partition(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """Surjective class map of n points onto k classes."""
    cls = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)])
    rng.shuffle(cls)
    return cls


def random_space(
    rng: np.random.Generator,
    n_max: int = 60,
    grid_fraction: float = 0.3,
) -> TwoAlgebraSpace:
    """Random grid or random-partition space with at most n_max points.

    Class counts are biased coarse so that most instances pose a nontrivial
    approximation problem (fine partitions make one algebra everything).
    """
    if rng.random() < grid_fraction:
        nx = int(rng.integers(1, 9))
        ny = int(rng.integers(1, 9))
        return build_grid(nx, ny)
    n = int(rng.integers(2, n_max + 1))
    k_cap = max(1, min(n, 12))
    k_s = int(rng.integers(1, k_cap + 1))
    k_p = int(rng.integers(1, k_cap + 1))
    return build_from_partitions(
        n,
        _random_partition(rng, n, k_s),
        _random_partition(rng, n, k_p),
    )


def random_function(
    rng: np.random.Generator, space: TwoAlgebraSpace, scale: float = 1.0
) -> FunctionOnX:
    return FunctionOnX(scale * rng.standard_normal(space.n_points))


def random_sum_element(
    rng: np.random.Generator, space: TwoAlgebraSpace, scale: float = 1.0
) -> SumElement:
    return sum_element(
        scale * rng.standard_normal(space.n_s),
        scale * rng.standard_normal(space.n_p),
    )


def random_algebra_element(
    rng: np.random.Generator, space: TwoAlgebraSpace, side: Side | None = None
) -> AlgebraElement:
    if side is None:
        side = Side.S if rng.random() < 0.5 else Side.P
    return AlgebraElement(side, rng.standard_normal(space.n_classes(side)))


def random_measure(
    rng: np.random.Generator, space: TwoAlgebraSpace, scale: float = 1.0
) -> SignedMeasure:
    return SignedMeasure(scale * rng.standard_normal(space.n_points))


def random_bolt(
    rng: np.random.Generator,
    space: TwoAlgebraSpace,
    max_len: int = 12,
    attempts: int = 20,
) -> Bolt | None:
    """Random walk along alternating links; None if the space is too rigid."""
    for _ in range(attempts):
        x = int(rng.integers(0, space.n_points))
        side = Side.S if rng.random() < 0.5 else Side.P
        first = side
        pts = [x]
        target = int(rng.integers(2, max_len + 1))
        while len(pts) < target:
            fiber = space.fibers_of(side)[int(space.class_of(side)[x])]
            options = fiber[fiber != x]
            if options.size == 0:
                break
            x = int(options[rng.integers(0, options.size)])
            pts.append(x)
            side = side.other()
        if len(pts) >= 2:
            return validate_bolt(space, pts, first)
    return None


def random_closed_bolt(
    rng: np.random.Generator,
    space: TwoAlgebraSpace,
    attempts: int = 20,
    max_steps: int = 200,
) -> ClosedBolt | None:
    """Walk (point, next-link) states until one repeats; the loop is closed.

    Returns None when the walk keeps dead-ending (e.g. all classes on one
    side are singletons, so no closed bolt exists).
    """
    for _ in range(attempts):
        x = int(rng.integers(0, space.n_points))
        side = Side.S if rng.random() < 0.5 else Side.P
        seen: dict[tuple[int, Side], int] = {}
        walk: list[tuple[int, Side]] = []
        for _ in range(max_steps):
            if (x, side) in seen:
                cycle = walk[seen[(x, side)]:]
                return as_closed(
                    space,
                    validate_bolt(space, [s[0] for s in cycle], cycle[0][1]),
                )
            seen[(x, side)] = len(walk)
            walk.append((x, side))
            fiber = space.fibers_of(side)[int(space.class_of(side)[x])]
            options = fiber[fiber != x]
            if options.size == 0:
                break
            x = int(options[rng.integers(0, options.size)])
            side = side.other()
    return None
