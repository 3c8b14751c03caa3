"""Fuzzed invariant suites behind the ``selftest`` CLI command.

Each suite returns a list of counterexample records (empty means pass).
Library functions are referenced through their modules so that an injected
fault in any of them is caught rather than bypassed.
"""

from __future__ import annotations

import numpy as np

from . import bolts, measures, solvers, space as space_mod
from .fuzz import (
    random_algebra_element,
    random_bolt,
    random_closed_bolt,
    random_function,
    random_measure,
    random_space,
    random_sum_element,
)


def check_weak_duality(seed: int, cases: int = 200) -> list[dict]:
    """|bolt functional at f| never exceeds ‖f − u‖ for any closed bolt and u."""
    rng = np.random.default_rng(seed)
    failures = []
    for i in range(cases):
        sp = random_space(rng, n_max=40)
        bolt = random_closed_bolt(rng, sp)
        if bolt is None:
            continue
        f = random_function(rng, sp)
        u = random_sum_element(rng, sp)
        lhs = abs(bolts.bolt_functional(bolt, f))
        rhs = space_mod.uniform_norm(f - space_mod.evaluate_sum(sp, u))
        scale = max(1.0, space_mod.uniform_norm(f), rhs)
        if lhs > rhs + 1e-10 * scale:
            failures.append({
                "suite": "weak_duality", "case": i,
                "bolt": list(bolt.points), "first_link": bolt.first_link.value,
                "functional": lhs, "error": rhs,
            })
    return failures


def check_annihilation_bound(seed: int, cases: int = 500) -> list[dict]:
    """Single-algebra elements feel at most 2/n of their sup through a bolt."""
    rng = np.random.default_rng(seed)
    failures = []
    for i in range(cases):
        sp = random_space(rng, n_max=40)
        bolt = random_bolt(rng, sp)
        if bolt is None:
            continue
        v = random_algebra_element(rng, sp)
        gap = bolts.annihilation_gap(sp, bolt, v)
        bound = (2.0 / bolt.n) * v.sup
        if gap > bound + 1e-12 * max(1.0, v.sup):
            failures.append({
                "suite": "annihilation_bound", "case": i,
                "bolt": list(bolt.points), "gap": gap, "bound": bound,
            })
        if bolts.is_closed(sp, bolt) and gap > 1e-12 * max(1.0, v.sup):
            failures.append({
                "suite": "annihilation_bound", "case": i,
                "bolt": list(bolt.points), "gap": gap, "bound": 0.0,
                "note": "closed bolt must annihilate",
            })
    return failures


def check_pushforward(seed: int, cases: int = 300) -> list[dict]:
    """Images contract total variation and satisfy change of variables."""
    rng = np.random.default_rng(seed)
    failures = []
    for i in range(cases):
        sp = random_space(rng, n_max=40)
        mu = random_measure(rng, sp)
        scale = max(1.0, mu.total_variation)
        for side in (space_mod.Side.S, space_mod.Side.P):
            nu = measures.pushforward(sp, mu, side)
            if nu.total_variation > mu.total_variation + 1e-12 * scale:
                failures.append({
                    "suite": "pushforward", "case": i, "side": side.value,
                    "tv_image": nu.total_variation, "tv_source": mu.total_variation,
                })
            g = rng.standard_normal(sp.n_classes(side))
            lhs, rhs = measures.change_of_variables_check(sp, mu, side, g)
            if abs(lhs - rhs) > 1e-12 * max(1.0, abs(lhs), abs(rhs)):
                failures.append({
                    "suite": "pushforward", "case": i, "side": side.value,
                    "lhs": lhs, "rhs": rhs,
                })
    return failures


def check_singer_roundtrip(seed: int, cases: int = 60) -> list[dict]:
    """Certified optima produce passing dual measures that walk back to bolts."""
    rng = np.random.default_rng(seed)
    failures = []
    for i in range(cases):
        sp = random_space(rng, n_max=30)
        f = random_function(rng, sp)
        lp = solvers.solve_lp(sp, f)
        cert = solvers.certify(sp, f, lp.u)
        if cert.verdict is solvers.Verdict.NOT_OPTIMAL:
            failures.append({
                "suite": "singer_roundtrip", "case": i,
                "note": "LP solution certified NotOptimal",
                "error": cert.error, "improved_error": cert.improved_error,
            })
            continue
        if cert.bolt is None or cert.error <= bolts.default_tolerance(cert.error):
            continue
        if cert.singer is None or not cert.singer.passed:
            failures.append({
                "suite": "singer_roundtrip", "case": i,
                "note": "induced measure failed a dual-certificate condition",
                "error": cert.error,
            })
            continue
        residual = f - space_mod.evaluate_sum(sp, lp.u)
        back = measures.extract_bolt_from_measure(sp, cert.dual, residual)
        v1 = abs(bolts.bolt_functional(cert.bolt, residual))
        v2 = abs(bolts.bolt_functional(back, residual))
        if abs(v1 - v2) > 1e-9 * max(1.0, v1):
            failures.append({
                "suite": "singer_roundtrip", "case": i,
                "note": "extracted bolt has a different functional value",
                "value_forward": v1, "value_back": v2,
            })
    return failures


SUITES = {
    "weak_duality": check_weak_duality,
    "annihilation_bound": check_annihilation_bound,
    "pushforward": check_pushforward,
    "singer_roundtrip": check_singer_roundtrip,
}


def run_all(seed: int) -> dict[str, list[dict]]:
    return {name: fn(seed) for name, fn in SUITES.items()}
