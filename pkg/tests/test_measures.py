import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import boltcert as bc
from boltcert.fuzz import (
    random_closed_bolt,
    random_function,
    random_measure,
    random_space,
)

S, P = bc.Side.S, bc.Side.P

CANONICAL_MU = [0.25, -0.25, -0.25, 0.25]


class TestPushforward:
    def test_alternating_measure_vanishes(self, grid22):
        mu = bc.SignedMeasure(CANONICAL_MU)
        assert np.array_equal(bc.pushforward(grid22, mu, S).weights, [0.0, 0.0])
        assert np.array_equal(bc.pushforward(grid22, mu, P).weights, [0.0, 0.0])

    def test_point_mass_lands_on_its_class(self, grid22):
        mu = bc.SignedMeasure([0.0, 0.0, 0.0, 1.0])
        nu = bc.pushforward(grid22, mu, S)
        assert np.array_equal(nu.weights, [0.0, 1.0])

    def test_same_sign_atoms_preserve_variation(self, grid22):
        mu = bc.SignedMeasure([1.0, 1.0, 1.0, 1.0])
        nu = bc.pushforward(grid22, mu, P)
        assert np.array_equal(nu.weights, [2.0, 2.0])
        assert nu.total_variation == mu.total_variation

    @settings(deadline=None, max_examples=60)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_contraction_and_linearity(self, seed):
        rng = np.random.default_rng(seed)
        sp = random_space(rng, n_max=25)
        mu = random_measure(rng, sp)
        nu = random_measure(rng, sp)
        a, b = rng.standard_normal(2)
        for side in (S, P):
            img = bc.pushforward(sp, mu, side)
            assert img.total_variation <= mu.total_variation + 1e-12 * max(
                1.0, mu.total_variation
            )
            combo = bc.SignedMeasure(a * mu.weights + b * nu.weights)
            lhs = bc.pushforward(sp, combo, side).weights
            rhs = a * img.weights + b * bc.pushforward(sp, nu, side).weights
            assert np.allclose(lhs, rhs, rtol=0, atol=1e-12 * max(1, np.max(np.abs(rhs))))


class TestChangeOfVariables:
    def test_constant_gives_total_mass(self, grid22, rng):
        mu = bc.SignedMeasure(rng.standard_normal(4))
        lhs, rhs = bc.change_of_variables_check(grid22, mu, S, [1.0, 1.0])
        assert lhs == pytest.approx(float(np.sum(mu.weights)), abs=1e-15)
        assert rhs == pytest.approx(lhs, abs=1e-15)

    def test_orthogonal_measure_integrates_to_zero(self, grid22):
        mu = bc.SignedMeasure(CANONICAL_MU)
        lhs, rhs = bc.change_of_variables_check(grid22, mu, S, [5.0, 7.0])
        assert lhs == 0.0 and rhs == 0.0

    @settings(deadline=None, max_examples=60)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_equality_fuzzed(self, seed):
        rng = np.random.default_rng(seed)
        sp = random_space(rng, n_max=25)
        mu = random_measure(rng, sp)
        side = S if rng.random() < 0.5 else P
        g = rng.standard_normal(sp.n_classes(side))
        lhs, rhs = bc.change_of_variables_check(sp, mu, side, g)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))


class TestOrthogonality:
    def test_alternating_measure_is_orthogonal(self, grid22):
        assert bc.is_orthogonal(grid22, bc.SignedMeasure(CANONICAL_MU), tol=0.0)

    def test_point_mass_is_not(self, grid22):
        assert not bc.is_orthogonal(grid22, bc.SignedMeasure([1, 0, 0, 0]), tol=1e-12)

    def test_zero_measure_is_orthogonal(self, grid22):
        assert bc.is_orthogonal(grid22, bc.SignedMeasure([0.0] * 4), tol=0.0)

    def test_matches_spanning_indicator_test_both_directions(self, rng):
        # indicator functions of the classes span each algebra, so annihilating
        # them all is the same statement as orthogonality
        for _ in range(60):
            sp = random_space(rng, n_max=25)
            if rng.random() < 0.5:
                mu = random_measure(rng, sp)
            else:
                bolt = random_closed_bolt(rng, sp)
                if bolt is None:
                    continue
                mu = bc.measure_from_closed_bolt(sp, bolt)
            tol = 1e-9
            direct = True
            for side in (S, P):
                for c in range(sp.n_classes(side)):
                    indicator = np.zeros(sp.n_classes(side))
                    indicator[c] = 1.0
                    lhs, _ = bc.change_of_variables_check(sp, mu, side, indicator)
                    if abs(lhs) > tol:
                        direct = False
            assert bc.is_orthogonal(sp, mu, tol) == direct


class TestJordan:
    def test_sign_split(self):
        pair = bc.jordan(bc.SignedMeasure(CANONICAL_MU))
        assert pair.supp_plus == {0, 3}
        assert pair.supp_minus == {1, 2}
        recon = pair.mu_plus.weights - pair.mu_minus.weights
        assert np.array_equal(recon, CANONICAL_MU)

    def test_nonnegative_measure(self):
        pair = bc.jordan(bc.SignedMeasure([1.0, 0.0, 2.0]))
        assert pair.supp_minus == frozenset()
        assert np.array_equal(pair.mu_minus.weights, [0.0, 0.0, 0.0])

    def test_zero_measure(self):
        pair = bc.jordan(bc.SignedMeasure([0.0, 0.0]))
        assert pair.supp_plus == pair.supp_minus == frozenset()


class TestVerifySinger:
    def test_canonical_certificate_passes(self, canonical):
        sp, f, u0 = canonical
        report = bc.verify_singer(sp, bc.SignedMeasure(CANONICAL_MU), f, u0, tol=1e-9)
        assert report.passed
        assert report.total_variation_violation <= 1e-15
        assert report.orthogonality_violation == 0.0
        assert report.sign_violation <= 1e-15

    def test_scaling_breaks_only_total_variation(self, canonical):
        sp, f, u0 = canonical
        mu = bc.SignedMeasure(np.array(CANONICAL_MU) * 2)
        report = bc.verify_singer(sp, mu, f, u0, tol=1e-9)
        assert not report.total_variation_ok
        assert report.orthogonal_ok and report.sign_condition_ok

    def test_point_mass_breaks_only_orthogonality(self, canonical):
        sp, f, u0 = canonical
        mu = bc.SignedMeasure([1.0, 0.0, 0.0, 0.0])  # at the residual max
        report = bc.verify_singer(sp, mu, f, u0, tol=1e-9)
        assert report.total_variation_ok and report.sign_condition_ok
        assert not report.orthogonal_ok


class TestMeasureFromClosedBolt:
    def test_canonical_placement(self, grid22):
        bolt = bc.as_closed(grid22, bc.validate_bolt(grid22, [0, 1, 3, 2], P))
        mu = bc.measure_from_closed_bolt(grid22, bolt)
        assert np.array_equal(mu.weights, CANONICAL_MU)

    def test_revisits_accumulate(self):
        sp = bc.build_from_partitions(3, [0, 0, 1], [0, 0, 1])
        bolt = bc.as_closed(sp, bc.validate_bolt(sp, [0, 1, 0, 1], S))
        mu = bc.measure_from_closed_bolt(sp, bolt)
        assert np.array_equal(mu.weights, [0.5, -0.5, 0.0])

    @settings(deadline=None, max_examples=60)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_always_orthogonal(self, seed):
        rng = np.random.default_rng(seed)
        sp = random_space(rng, n_max=25)
        bolt = random_closed_bolt(rng, sp)
        if bolt is None:
            return
        mu = bc.measure_from_closed_bolt(sp, bolt)
        assert bc.is_orthogonal(sp, mu, tol=1e-12)
        assert mu.total_variation <= 1.0 + 1e-12
        rep = bc.functional_norm(bolt)
        if rep.norm_is_one:
            assert mu.total_variation == pytest.approx(1.0, abs=1e-12)


class TestExtractBoltFromMeasure:
    def test_canonical_walk(self, grid22):
        mu = bc.SignedMeasure(CANONICAL_MU)
        residual = bc.FunctionOnX(CANONICAL_MU)
        bolt = bc.extract_bolt_from_measure(grid22, mu, residual)
        assert bc.is_closed(grid22, bolt)
        assert abs(bc.bolt_functional(bolt, residual)) == pytest.approx(0.25, abs=1e-15)

    def test_invalid_measure_reports_walk_failure(self, grid22):
        mu = bc.SignedMeasure([1.0, 0.0, 0.0, 0.0])
        with pytest.raises(bc.MeasureWalkError) as exc:
            bc.extract_bolt_from_measure(grid22, mu, bc.FunctionOnX([1, 0, 0, 0]))
        assert exc.value.point == 0

    def test_empty_positive_support_rejected(self, grid22):
        mu = bc.SignedMeasure([-1.0, 0.0, 0.0, 0.0])
        with pytest.raises(bc.MeasureWalkError):
            bc.extract_bolt_from_measure(grid22, mu, bc.FunctionOnX([0, 0, 0, 0]))

    def test_block_diagonal_walk_stays_in_block(self):
        # two disjoint 2x2 grids; the measure lives on the first block
        sp = bc.build_from_partitions(
            8,
            [0, 1, 0, 1, 2, 3, 2, 3],
            [0, 0, 1, 1, 2, 2, 3, 3],
        )
        mu = bc.SignedMeasure(CANONICAL_MU + [0.0] * 4)
        residual = bc.FunctionOnX(CANONICAL_MU + [0.0] * 4)
        bolt = bc.extract_bolt_from_measure(sp, mu, residual)
        assert set(bolt.points) <= {0, 1, 2, 3}
        assert bc.is_closed(sp, bolt)

    def test_round_trip_preserves_functional_value(self, rng):
        checked = 0
        while checked < 40:
            sp = random_space(rng, n_max=25)
            f = random_function(rng, sp)
            lp = bc.solve_lp(sp, f)
            if lp.error <= 1e-9:
                continue
            bolt = bc.find_closed_extremal_bolt(sp, lp.residual)
            if bolt is None:
                continue
            checked += 1
            mu = bc.measure_from_closed_bolt(sp, bolt)
            back = bc.extract_bolt_from_measure(sp, mu, lp.residual)
            v1 = abs(bc.bolt_functional(bolt, lp.residual))
            v2 = abs(bc.bolt_functional(back, lp.residual))
            assert v2 == pytest.approx(v1, abs=1e-9 * max(1.0, v1))
