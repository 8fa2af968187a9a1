import numpy as np
import pytest
from hypothesis import given, strategies as st

from plasmode.drude import (
    DrudeParams,
    PeakMatch,
    SweepResult,
    drude_eps,
    metal_lambda,
    peak_match,
    polarization_tensor,
    sweep,
)
from plasmode.errors import SingularSystemError, ValidationError
from plasmode.linalg import eig_dense, k_matrix
from plasmode.modes import solve_modes_3d
from plasmode.structure import alternating_profile, contrasts, equidistant, explicit

from conftest import structures

P = DrudeParams()


class TestDrudeEps:
    def test_high_frequency_limit(self):
        assert drude_eps(1e25, P) == pytest.approx(P.eps_inf, rel=1e-15)

    def test_plasma_frequency_small_damping(self):
        p = DrudeParams(tau=1e6)
        assert abs(drude_eps(p.omega_p, p)) < 1e-9 * p.eps_inf

    def test_metallic_regime(self):
        w = 1e15
        eps = drude_eps(w, P)
        assert eps == pytest.approx(P.eps_inf * (1 - 4e30 / (1e15 * (1e15 + 1e14j))), rel=1e-15)
        assert eps.real < 0 and eps.imag > 0

    def test_array(self):
        out = drude_eps(np.array([1e14, 1e15]), P)
        assert out.shape == (2,)
        assert out[1] == drude_eps(1e15, P)

    @pytest.mark.parametrize("w", [0.0, -1e14, float("nan")])
    def test_positive_frequency(self, w):
        with pytest.raises(ValidationError):
            drude_eps(w, P)

    @pytest.mark.parametrize("kw", [{"eps_inf": 0}, {"tau": -1}, {"eps0": 0}, {"omega_p": -1.0}])
    def test_params_validated(self, kw):
        with pytest.raises(ValidationError):
            DrudeParams(**kw)

    def test_default_background(self):
        assert P.eps0 == pytest.approx(1.33 ** 2 * 9e-12)


class TestLambda:
    @given(st.floats(1e13, 1e16))
    def test_matches_direct_formula(self, w):
        eps = drude_eps(w, P)
        eps_star, delta = -eps.real, eps.imag
        e0 = P.eps0
        direct = (2 * e0 - eps_star + 1j * delta) / (e0 + eps_star - 1j * delta)
        assert metal_lambda(eps, e0) == pytest.approx(direct, rel=1e-12)

    def test_matches_contrast_module(self):
        eps = drude_eps(8e14, P)
        prof = alternating_profile(-eps.real, eps.imag, P.eps0, 3)
        assert contrasts(prof, 3).values[0] == pytest.approx(metal_lambda(eps, P.eps0), rel=1e-12)


class TestPolarizationTensor:
    def test_single_layer(self):
        s = explicit([1.7])
        assert k_matrix(s).tolist() == [[0.0]]
        M = polarization_tensor(s, 1.0)
        assert M.shape == (1, 1) and M[0, 0] == pytest.approx(1.0, rel=1e-15)

    def test_large_imaginary_decay(self):
        s = equidistant(5)
        n1 = np.linalg.norm(polarization_tensor(s, 1e3j))
        n2 = np.linalg.norm(polarization_tensor(s, 1e4j))
        assert n1 / n2 == pytest.approx(10, rel=1e-2)

    def test_pole_order_one(self):
        s = equidistant(4)
        lam = float(np.max(eig_dense(k_matrix(s)).real))
        norms = [np.linalg.norm(polarization_tensor(s, lam + 1j * d)) for d in (1e-3, 1e-4, 1e-5)]
        slopes = np.diff(np.log10(norms)) / -1.0
        assert np.allclose(slopes, -1, atol=0.05)

    def test_exact_mode_is_singular(self):
        with pytest.raises(SingularSystemError) as exc:
            polarization_tensor(explicit([1.0]), 0.0)
        assert exc.value.nearest_lambda == 0.0

    def test_rejects_2d(self):
        with pytest.raises(ValidationError):
            polarization_tensor(explicit([1.0], 2), 0.5)

    @given(structures(min_n=1, max_n=8), st.floats(-1, 2), st.floats(0.01, 1.0))
    def test_resolvent_identity(self, s, re, im):
        lam = complex(re, im)
        M = polarization_tensor(s, lam)
        r = s.as_array()
        A = lam * np.eye(s.N) - k_matrix(s).T
        assert np.allclose(np.diag(r[0] ** 3 / r ** 3) @ M @ A, np.eye(s.N), atol=1e-9)


class TestSweep:
    def test_shapes_and_finiteness(self):
        sr = sweep(equidistant(5), points=200)
        assert sr.omegas.shape == sr.lambdas.shape == sr.norm_m.shape == (200,)
        assert np.all(np.isfinite(sr.norm_m))
        assert np.all(np.diff(sr.omegas) > 0)
        assert sr.omegas[0] == pytest.approx(2e14) and sr.omegas[-1] == pytest.approx(2e15)

    def test_frobenius_matches_svd(self):
        s = equidistant(7)
        sr = sweep(s, points=300)
        for i in np.linspace(0, 299, 5).astype(int):
            sv = np.linalg.svd(polarization_tensor(s, sr.lambdas[i]), compute_uv=False)
            assert sr.norm_m[i] == pytest.approx(np.sqrt(np.sum(sv ** 2)), rel=1e-12)

    def test_spectral_norm(self):
        s = equidistant(4)
        sr = sweep(s, points=50, norm="spectral")
        sv = np.linalg.svd(polarization_tensor(s, sr.lambdas[10]), compute_uv=False)
        assert sr.norm_m[10] == pytest.approx(sv[0], rel=1e-12)
        assert sr.norm == "spectral"

    def test_unknown_norm(self):
        with pytest.raises(ValidationError):
            sweep(explicit([1.0]), points=5, norm="nuclear")

    def test_no_plasma_is_flat(self):
        sr = sweep(equidistant(5), DrudeParams(omega_p=0.0), points=100)
        assert np.allclose(sr.norm_m, sr.norm_m[0], rtol=1e-14)
        assert sr.peaks.size == 0

    def test_damping_lowers_peaks(self):
        s = equidistant(9)
        low = sweep(s, P, points=2000)
        high = sweep(s, DrudeParams(tau=1e15), points=2000)
        assert low.peaks.size >= 1
        # for every peak of the lightly damped sweep, the heavier damping is lower there
        assert np.all(high.norm_m[low.peaks] < low.norm_m[low.peaks])
        assert high.norm_m.max() < low.norm_m.max()

    def test_single_layer_one_peak_at_frohlich(self):
        s = explicit([1.0])
        sr = sweep(s, points=2000)
        matches = peak_match(sr, solve_modes_3d(s))
        assert len(matches) == 1
        m = matches[0]
        assert m.mode_lambda == 0.0 and m.distance < 0.05
        # Re lambda crosses zero near the peak
        i = sr.peaks[0]
        assert abs(sr.lambdas[i].real) < 0.05

    def test_peaks_are_strict_local_maxima(self):
        sr = sweep(equidistant(7), points=500)
        for i in sr.peaks:
            assert sr.norm_m[i] > sr.norm_m[i - 1] and sr.norm_m[i] > sr.norm_m[i + 1]

    def test_peak_count_bounded_by_modes(self):
        s = equidistant(17)
        sr = sweep(s)
        assert 1 <= sr.peaks.size <= 17 // 2 + 1 + 17 // 2

    def test_threads_are_bit_identical(self, monkeypatch):
        s = equidistant(6)
        monkeypatch.delenv("PLASMODE_THREADS", raising=False)
        a = sweep(s, points=300)
        monkeypatch.setenv("PLASMODE_THREADS", "4")
        b = sweep(s, points=300)
        assert np.array_equal(a.norm_m, b.norm_m)
        assert np.array_equal(a.peaks, b.peaks)

    @pytest.mark.parametrize("value", ["0", "x", "-2"])
    def test_bad_thread_env(self, monkeypatch, value):
        monkeypatch.setenv("PLASMODE_THREADS", value)
        with pytest.raises(ValidationError):
            sweep(explicit([1.0]), points=5)

    @pytest.mark.parametrize("lo, hi, pts", [(0.0, 1e15, 10), (2e15, 1e15, 10), (1e14, 1e15, 1), (1e14, 1e15, 2.5)])
    def test_bad_grid(self, lo, hi, pts):
        with pytest.raises(ValidationError):
            sweep(explicit([1.0]), P, lo, hi, pts)


class TestPeakMatch:
    def test_empty_peaks(self):
        sr = SweepResult(np.array([1.0, 2.0]), np.zeros(2), np.zeros(2, complex), np.ones(2), np.zeros(0, int))
        assert peak_match(sr, [0.0, 1.0]) == []

    def test_empty_modes(self):
        sr = sweep(explicit([1.0]), points=50)
        assert peak_match(sr, []) == []

    def test_nearest(self):
        sr = SweepResult(np.array([1.0, 2.0, 3.0]), np.zeros(3),
                         np.array([0, 0.42 + 0.1j, 0]), np.array([0, 1.0, 0]), np.array([1]))
        assert peak_match(sr, [-0.5, 0.4, 1.2]) == [PeakMatch(2.0, 0.4, pytest.approx(0.02))]

    def test_seventeen_layers_match_modes(self):
        s = equidistant(17)
        matches = peak_match(sweep(s), solve_modes_3d(s))
        assert matches
        assert all(m.distance < 0.05 for m in matches)
