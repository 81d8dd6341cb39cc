import cmath
import math

import numpy as np
import numpy.testing as npt
import pytest
from scipy.optimize import brentq

from helpers import elementary_brute, match_cost
from spinmultipoles.core import ZETA_INF, Constellation, DomainError, SpinLabel
from spinmultipoles.convert import state_from_constellation
from spinmultipoles.multipoles import (
    coherent_spectrum_lengths,
    multipoles_from_constellation,
    multipoles_from_state,
    noon_extreme_multipole,
)
from spinmultipoles.transitions import (
    TransitionSpec,
    ring_constellation,
    ring_multipoles_closed_form,
    spread_constellation,
    spread_elementary_closed_form,
    spread_small_t_quadratic,
    spread_state_closed_form,
    transition_sweep,
)


def assert_same_stars(got: Constellation, want_zetas, tol=1e-12):
    want = Constellation.from_zetas(got.spin.two_s, want_zetas)
    assert match_cost(got.unit_vectors(), want.unit_vectors()) < tol


def noon_zetas(two_s):
    return [cmath.exp(2j * math.pi * j / two_s) for j in range(two_s)]


class TestRingConstellation:
    def test_equator_is_noon(self):
        c = ring_constellation(SpinLabel(8), math.pi / 2)
        assert_same_stars(c, noon_zetas(8))

    def test_poles(self):
        assert ring_constellation(SpinLabel(4), 0.0).finite_zetas() == [0j] * 4
        assert ring_constellation(SpinLabel(4), math.pi).n_infinite == 4

    @pytest.mark.parametrize("two_s", [2, 3, 6])
    def test_only_extreme_elementaries_survive(self, two_s):
        theta = 1.1
        zetas = ring_constellation(SpinLabel(two_s), theta).finite_zetas()
        tau = math.tan(theta / 2)
        for j in range(1, two_s):
            assert abs(elementary_brute(zetas, j)) < 1e-12 * tau
        want_top = (-1) ** (two_s + 1) * tau**two_s
        assert abs(elementary_brute(zetas, two_s) - want_top) < 1e-12

    def test_angle_range(self):
        with pytest.raises(DomainError):
            ring_constellation(SpinLabel(2), -0.1)
        with pytest.raises(DomainError):
            ring_constellation(SpinLabel(2), math.pi + 0.1)


class TestRingClosedForm:
    def test_frozen_spin_one(self):
        got = ring_multipoles_closed_form(SpinLabel(2), math.pi / 3)
        npt.assert_allclose(got, [1 / 3, 8 / 25, 26 / 75], atol=1e-15)

    @pytest.mark.parametrize("two_s", [2, 4, 6, 8, 10, 12])
    def test_matches_pipeline(self, two_s):
        spin = SpinLabel(two_s)
        for theta in np.linspace(0.0, math.pi, 25):
            got = ring_multipoles_closed_form(spin, theta)
            want = multipoles_from_constellation(ring_constellation(spin, theta)).lengths_sq()
            npt.assert_allclose(got, want, atol=1e-8)

    def test_equator_kills_odd_ranks(self):
        spin = SpinLabel(10)
        got = ring_multipoles_closed_form(spin, math.pi / 2)
        coh = coherent_spectrum_lengths(spin)
        assert np.all(got[1:10:2] < 1e-30)
        npt.assert_allclose(got[2:10:2], coh[2:10:2], rtol=1e-14)

    def test_pole_limits_are_coherent(self):
        spin = SpinLabel(6)
        coh = coherent_spectrum_lengths(spin)
        npt.assert_allclose(ring_multipoles_closed_form(spin, 0.0), coh, atol=1e-15)
        npt.assert_allclose(ring_multipoles_closed_form(spin, math.pi), coh, atol=1e-15)

    def test_sum_rule_along_family(self):
        spin = SpinLabel(9)
        for theta in np.linspace(0.0, math.pi, 50):
            total = ring_multipoles_closed_form(spin, theta).sum()
            assert abs(total - 1.0) < 1e-9

    def test_needs_two_stars(self):
        with pytest.raises(DomainError):
            ring_multipoles_closed_form(SpinLabel(1), 0.5)

    def test_abrupt_switch_near_equator(self):
        # the odd-rank damping is a plateau with a narrow cliff at the equator
        spin = SpinLabel(12)
        coh1 = coherent_spectrum_lengths(spin)[1]

        def damping(theta):
            return ring_multipoles_closed_form(spin, theta)[1] / coh1

        for deg in (10, 30, 50, 60, 70):
            assert damping(math.radians(deg)) > 0.99
        cross = brentq(lambda th: damping(th) - 0.5, math.radians(80), math.radians(90))
        off_equator = 90.0 - math.degrees(cross)
        assert 4.0 < off_equator < 5.0
        assert damping(math.radians(89.6)) < 0.01
        assert damping(math.radians(90.4)) < 0.01


class TestSpreadConstellation:
    @pytest.mark.parametrize("symmetric", [False, True])
    def test_stacked_at_start(self, symmetric):
        zetas = spread_constellation(SpinLabel(6), 0.0, symmetric=symmetric).finite_zetas()
        npt.assert_allclose(zetas, [1.0 + 0j] * 6, atol=1e-15)

    @pytest.mark.parametrize("symmetric", [False, True])
    @pytest.mark.parametrize("two_s", [4, 5])
    def test_uniform_at_end(self, two_s, symmetric):
        c = spread_constellation(SpinLabel(two_s), 1.0, symmetric=symmetric)
        if symmetric:
            # rigid rotation of the root set; compare spacing-invariant lengths
            got = multipoles_from_constellation(c).lengths_sq()
            want = multipoles_from_constellation(
                Constellation.from_zetas(two_s, noon_zetas(two_s))
            ).lengths_sq()
            npt.assert_allclose(got, want, atol=1e-12)
        else:
            assert_same_stars(c, noon_zetas(two_s))

    @pytest.mark.parametrize("two_s", [4, 5])
    def test_symmetric_layout_is_conjugation_closed(self, two_s):
        zetas = spread_constellation(SpinLabel(two_s), 0.37, symmetric=True).finite_zetas()
        mirrored = [z.conjugate() for z in zetas]
        c = Constellation.from_zetas(two_s, zetas)
        m = Constellation.from_zetas(two_s, mirrored)
        assert match_cost(c.unit_vectors(), m.unit_vectors()) < 1e-12

    def test_fraction_range(self):
        with pytest.raises(DomainError):
            spread_constellation(SpinLabel(2), -0.01)
        with pytest.raises(DomainError):
            spread_constellation(SpinLabel(2), 1.01)


class TestSpreadElementaryClosedForm:
    @pytest.mark.parametrize("two_s", [3, 4, 10])
    def test_order_one_symmetric_sine_ratio(self, two_s):
        for t in (0.1, 0.35, 0.8):
            got = spread_elementary_closed_form(SpinLabel(two_s), t, 1, symmetric=True)
            want = math.sin(math.pi * t) / math.sin(math.pi * t / two_s)
            assert got.imag == 0.0
            assert abs(got.real - want) < 1e-12

    @pytest.mark.parametrize("symmetric", [False, True])
    @pytest.mark.parametrize("two_s", [3, 4, 10, 12])
    def test_matches_roots(self, two_s, symmetric):
        spin = SpinLabel(two_s)
        for t in np.linspace(0.0, 1.0, 25):
            zetas = spread_constellation(spin, t, symmetric=symmetric).finite_zetas()
            for order in (1, 2, 3):
                got = spread_elementary_closed_form(spin, t, order, symmetric=symmetric)
                assert abs(got - elementary_brute(zetas, order)) < 1e-9

    def test_limit_at_zero_is_binomial(self):
        for order in (1, 2, 3):
            got = spread_elementary_closed_form(SpinLabel(9), 0.0, order)
            assert got == math.comb(9, order)

    def test_order_two_from_order_one_doubling(self):
        spin = SpinLabel(7)
        for t in (0.11, 0.29, 0.5):
            e1 = spread_elementary_closed_form(spin, t, 1)
            e1_doubled = spread_elementary_closed_form(spin, 2 * t, 1)
            e2 = spread_elementary_closed_form(spin, t, 2)
            assert abs(e2 - 0.5 * (e1 * e1 - e1_doubled)) < 1e-12

    def test_low_orders_vanish_when_spread_completes(self):
        for order in (1, 2, 3):
            got = spread_elementary_closed_form(SpinLabel(8), 1.0, order)
            assert abs(got) < 1e-12

    def test_contract_orders_only(self):
        with pytest.raises(DomainError):
            spread_elementary_closed_form(SpinLabel(4), 0.5, 0)
        with pytest.raises(DomainError):
            spread_elementary_closed_form(SpinLabel(4), 0.5, 4)


class TestSpreadStateClosedForm:
    @pytest.mark.parametrize("symmetric", [False, True])
    @pytest.mark.parametrize("two_s", [3, 4, 10, 12])
    def test_same_ray_as_root_pipeline(self, two_s, symmetric):
        spin = SpinLabel(two_s)
        for t in np.linspace(0.0, 1.0, 9):
            a = spread_state_closed_form(spin, t, symmetric=symmetric).amps
            b = state_from_constellation(
                spread_constellation(spin, t, symmetric=symmetric)
            ).amps
            assert abs(abs(np.vdot(a, b)) - 1.0) < 1e-12

    def test_lengths_match_pipeline(self):
        spin = SpinLabel(11)
        for t in np.linspace(0.0, 1.0, 9):
            got = multipoles_from_state(spread_state_closed_form(spin, t)).lengths_sq()
            want = multipoles_from_constellation(spread_constellation(spin, t)).lengths_sq()
            npt.assert_allclose(got, want, atol=1e-12)

    def test_noon_at_completion(self):
        spin = SpinLabel(8)
        top = multipoles_from_state(spread_state_closed_form(spin, 1.0)).length_sq(8)
        assert abs(top - noon_extreme_multipole(spin)) < 1e-12

    @pytest.mark.parametrize("two_s", [3, 4, 9, 12])
    def test_both_variants_share_lengths(self, two_s):
        spin = SpinLabel(two_s)
        for t in np.linspace(0.0, 1.0, 11):
            uni = multipoles_from_constellation(spread_constellation(spin, t)).lengths_sq()
            sym = multipoles_from_constellation(
                spread_constellation(spin, t, symmetric=True)
            ).lengths_sq()
            npt.assert_allclose(uni, sym, atol=1e-9)


class TestSmallTQuadratic:
    @pytest.mark.parametrize("two_s", [3, 4, 10, 12])
    def test_leading_coefficient(self, two_s):
        spin = SpinLabel(two_s)
        t = 1e-3
        for order in (1, 2, 3):
            c = spread_small_t_quadratic(spin, order)
            if c == 0.0:
                continue
            e = spread_elementary_closed_form(spin, t, order, symmetric=True).real
            measured = (math.comb(two_s, order) - e) / (t * t)
            assert abs(measured - c) < 1e-4 * c

    @pytest.mark.parametrize("two_s", [3, 4, 10, 12])
    def test_remainder_is_quartic(self, two_s):
        # Richardson: halving t by 10 must shrink the residual ~1e4 times
        spin = SpinLabel(two_s)
        for order in (1, 2, 3):
            c = spread_small_t_quadratic(spin, order)
            errs = []
            for t in (1e-2, 1e-3):
                e = spread_elementary_closed_form(spin, t, order, symmetric=True).real
                errs.append(abs(e - (math.comb(two_s, order) - c * t * t)))
            assert errs[1] <= max(3e-3 * errs[0], 1e-11)

    def test_degenerate_cases_are_flat(self):
        assert spread_small_t_quadratic(SpinLabel(1), 1) == 0.0
        assert spread_small_t_quadratic(SpinLabel(3), 3) == 0.0  # e_3 of 3 stars is rigid

    def test_bad_order(self):
        with pytest.raises(DomainError):
            spread_small_t_quadratic(SpinLabel(4), 0)


class TestTransitionSpecAndSweep:
    def test_spec_dispatch(self):
        spin = SpinLabel(4)
        ring = TransitionSpec("ring", spin, 0.7).constellation()
        assert_same_stars(ring, ring_constellation(spin, 0.7).finite_zetas())
        sym = TransitionSpec("spread_symmetric", spin, 0.3).constellation()
        assert_same_stars(sym, spread_constellation(spin, 0.3, symmetric=True).finite_zetas())

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            TransitionSpec("spiral", SpinLabel(2), 0.5)
        with pytest.raises(DomainError):
            TransitionSpec("ring", SpinLabel(2), 3.5)
        with pytest.raises(DomainError):
            TransitionSpec("spread_unidirectional", SpinLabel(2), 1.2)

    def test_sweep_rows_and_agreement(self):
        spin = SpinLabel(4)
        rows = transition_sweep("ring", spin, 7)
        assert len(rows) == 7 * 5
        assert rows[0][0] == 0.0 and abs(rows[-1][0] - math.pi) < 1e-15
        for _, _, pipe, closed in rows:
            assert abs(pipe - closed) < 1e-8

    def test_sweep_spread_agreement(self):
        rows = transition_sweep("spread_symmetric", SpinLabel(5), 9)
        assert len(rows) == 9 * 6
        assert rows[-1][0] == 1.0
        for _, _, pipe, closed in rows:
            assert abs(pipe - closed) < 1e-9

    def test_sweep_sum_rule_per_sample(self):
        rows = transition_sweep("spread_unidirectional", SpinLabel(6), 50)
        by_param = {}
        for param, _, pipe, _ in rows:
            by_param.setdefault(param, 0.0)
            by_param[param] += pipe
        assert len(by_param) == 50
        for total in by_param.values():
            assert abs(total - 1.0) < 1e-9

    def test_sweep_bad_args(self):
        with pytest.raises(DomainError):
            transition_sweep("spiral", SpinLabel(4), 5)
        with pytest.raises(DomainError):
            transition_sweep("ring", SpinLabel(4), 1)
