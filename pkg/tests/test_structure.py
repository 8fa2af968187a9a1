import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from plasmode.errors import DegenerateContrastError, PoleError, ValidationError
from plasmode.structure import (
    LayeredStructure,
    MaterialProfile,
    alternating_lambda,
    alternating_profile,
    contrasts,
    epsilon_from_lambda,
    equidistant,
    explicit,
    extreme,
    geometric,
    make_structure,
    random_structure,
    ratio_table,
)

from conftest import structures


class TestGenerators:
    def test_equidistant_19(self):
        s = make_structure({"generator": "equidistant", "N": 19})
        assert s.radii == tuple(float(r) for r in range(19, 0, -1))

    def test_geometric_19(self):
        s = make_structure({"generator": "geometric", "N": 19, "r1": 1.0, "s": 0.8})
        assert s.radii[1] == 0.8
        assert s.radii[18] == pytest.approx(0.8 ** 18, rel=1e-14)
        for a, b in zip(s.radii, s.radii[1:]):
            assert b == pytest.approx(0.8 * a, rel=1e-15)

    def test_single_layer(self):
        s = make_structure({"generator": "explicit", "radii": [1]})
        assert s.N == 1 and s.radii == (1.0,)

    def test_bare_radii_read_as_explicit(self):
        assert make_structure({"radii": [3, 2]}).radii == (3.0, 2.0)

    def test_extreme_offsets(self):
        s = extreme(3, 1e4, [2.0, 1.0, 0.0])
        assert s.radii == (1e4 + 2, 1e4 + 1, 1e4)

    def test_extreme_default_offsets(self):
        s = make_structure({"generator": "extreme", "N": 4, "R": 100.0})
        assert s.radii == (103.0, 102.0, 101.0, 100.0)

    @pytest.mark.parametrize("radii, fragment", [
        ((1.0, 2.0), "r_2"),
        ((2.0, 2.0), "r_2"),
        ((1.0, -0.5), "r_2"),
        ((0.0,), "r_1"),
        ((float("nan"),), "r_1"),
    ])
    def test_invalid_radii_name_entry(self, radii, fragment):
        with pytest.raises(ValidationError, match=fragment):
            LayeredStructure(radii)

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            LayeredStructure(())

    @pytest.mark.parametrize("s", [0.0, 1.0, 1.5, -0.2])
    def test_geometric_scale_range(self, s):
        with pytest.raises(ValidationError, match="scale"):
            geometric(3, 1.0, s)

    @pytest.mark.parametrize("N", [0, -1, 2.5])
    def test_bad_layer_count(self, N):
        with pytest.raises(ValidationError):
            equidistant(N)

    def test_extreme_needs_decreasing_offsets(self):
        with pytest.raises(ValidationError, match="offsets"):
            extreme(3, 10.0, [1.0, 1.0, 0.0])

    def test_unknown_generator(self):
        with pytest.raises(ValidationError, match="unknown"):
            make_structure({"generator": "spiral", "N": 2})

    def test_bad_dimension(self):
        with pytest.raises(ValidationError):
            LayeredStructure((1.0,), dimension=4)

    def test_random_structure_valid(self, rng):
        for N in range(1, 15):
            s = random_structure(rng, N)
            assert s.N == N
            assert all(a > b for a, b in zip(s.radii, s.radii[1:]))


class TestRatioTable:
    def test_two_layers(self):
        t = ratio_table(explicit([2, 1]), 3)
        assert t.t(1, 2) == 0.125

    def test_four_layers(self):
        t = ratio_table(explicit([4, 3, 2, 1]), 3)
        assert t.t(2, 3) == pytest.approx((2 / 3) ** 3, rel=1e-15)

    def test_2d_order_one(self):
        t = ratio_table(explicit([1, 0.8], 2), 2)
        assert t.t(1, 2) == pytest.approx(0.64, rel=1e-15)

    def test_exact_powering(self):
        s = explicit([4, 3, 2, 1])
        t = ratio_table(s, 3)
        assert t.t(1, 4) == (1.0 / 4.0) ** 3

    def test_bad_exponent(self):
        with pytest.raises(ValidationError):
            ratio_table(explicit([2, 1]), 0)

    @given(structures(min_n=2, max_n=12), st.sampled_from([2, 3, 4, 6]))
    def test_multiplicative_and_bounded(self, s, p):
        t = ratio_table(s, p)
        N = s.N
        for i in range(1, N + 1):
            for j in range(i + 1, N + 1):
                assert 0 < t.t(i, j) < 1
                for k in range(j + 1, N + 1):
                    assert t.t(i, k) == pytest.approx(t.t(i, j) * t.t(j, k), rel=1e-12)


class TestContrasts:
    def test_single_sphere_zero(self):
        c = contrasts(MaterialProfile(1.0, (-2.0,)), 3)
        assert c.values[0] == 0

    def test_alternating_eps_star_two(self):
        c = contrasts(alternating_profile(2.0, 0.0, 1.0, 5), 3)
        assert np.all(c.values[::2] == 0) and np.all(c.values[1::2] == 1)

    def test_2d_direct(self):
        c = contrasts(MaterialProfile(1.0, (-3.0,)), 2)
        assert c.values[0] == -0.5

    def test_general_formula(self):
        eps = (3.0, 0.5, 7.0)
        c = contrasts(MaterialProfile(2.0, eps), 3)
        full = (2.0,) + eps
        expect = [(2 * full[j - 1] + full[j]) / (full[j - 1] - full[j]) for j in range(1, 4)]
        assert np.allclose(c.values, expect, rtol=1e-15)

    def test_degenerate_names_interface(self):
        with pytest.raises(DegenerateContrastError) as exc:
            contrasts(MaterialProfile(1.0, (2.0, 2.0)), 3)
        assert exc.value.index == 2

    def test_degenerate_against_background(self):
        with pytest.raises(DegenerateContrastError) as exc:
            contrasts(MaterialProfile(1.0, (1.0,)), 2)
        assert exc.value.index == 1

    @given(st.floats(0.01, 50.0), st.floats(0.1, 5.0), st.integers(1, 12))
    def test_alternating_pattern_exact(self, eps_star, eps0, N):
        prof = alternating_profile(eps_star, 0.0, eps0, N)
        lam3 = contrasts(prof, 3).values
        lam2 = contrasts(prof, 2).values
        assert np.all(lam3[::2] == lam3[0]) and np.all(lam3[1::2] == 1 - lam3[0])
        assert np.all(lam2[::2] == lam2[0]) and np.all(lam2[1::2] == -lam2[0])
        # the odd entry follows the general formula
        assert lam3[0] == pytest.approx((2 * eps0 - eps_star) / (eps0 + eps_star), rel=1e-13)
        if N >= 2:
            # the even entry equals the general formula up to rounding
            general = (2 * (-eps_star) + eps0) / (-eps_star - eps0)
            assert lam3[1] == pytest.approx(general, rel=1e-12, abs=1e-13)


class TestAlternatingProfile:
    def test_three_layers(self):
        p = alternating_profile(2.0, 0.0, 1.0, 3)
        assert p.eps == (-2, 1, -2)

    def test_lossy(self):
        p = alternating_profile(1.0, 0.01, 1.0, 2)
        assert p.eps == (complex(-1, 0.01), 1)

    def test_zero_contrast_at_eps_star_two(self):
        p = alternating_profile(2.0, 0.0, 1.0, 19)
        assert contrasts(p, 3).values[0] == 0

    @pytest.mark.parametrize("eps_star", [0.0, -1.0])
    def test_eps_star_positive(self, eps_star):
        with pytest.raises(ValidationError):
            alternating_profile(eps_star, 0.0, 1.0, 2)

    def test_negative_delta(self):
        with pytest.raises(ValidationError):
            alternating_profile(1.0, -0.1, 1.0, 2)


class TestEpsilonFromLambda:
    def test_frohlich(self):
        assert epsilon_from_lambda(0.0, 1.0, 3) == -2.0

    def test_table_values(self):
        assert round(epsilon_from_lambda(1.9931, 1.0, 3), 4) == -0.0023
        assert round(epsilon_from_lambda(-0.2404, 1.0, 3), 4) == -2.9494

    def test_pole(self):
        with pytest.raises(PoleError):
            epsilon_from_lambda(-1.0)

    def test_2d_inverse(self):
        assert epsilon_from_lambda(-0.5, 1.0, 2) == -3.0

    @given(st.floats(-0.999, 1.999), st.floats(0.1, 10.0))
    def test_round_trip_3d(self, lam, eps0):
        eps = epsilon_from_lambda(lam, eps0, 3)
        back = contrasts(alternating_profile(-eps, 0.0, eps0, 1), 3).values[0]
        assert back.real == pytest.approx(lam, abs=1e-12)

    @given(st.floats(-0.999, 0.999), st.floats(0.1, 10.0))
    def test_round_trip_2d(self, lam, eps0):
        eps = epsilon_from_lambda(lam, eps0, 2)
        back = contrasts(alternating_profile(-eps, 0.0, eps0, 1), 2).values[0]
        assert back.real == pytest.approx(lam, abs=1e-12)

    def test_alternating_lambda_helper(self):
        assert alternating_lambda(2.0, 0.0, 1.0, 3) == 0
        assert math.isclose(alternating_lambda(3.0, 0.0, 1.0, 2).real, -0.5)
