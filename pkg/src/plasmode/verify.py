"""Randomized oracle-equivalence and identity suites.

Every suite draws from a ``numpy.random.Generator`` seeded by the caller,
so a report is reproducible from the seed it reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

from .charpoly import (
    alternating_lambdas,
    det_recursive,
    eval_charpoly,
    fq_dp,
    fq_enum,
    g_coeff,
    g_count,
)
from .field import field_coeffs, perturbation_amplitude, transmission_residual
from .linalg import assemble_2d, eig_dense, k_matrix, lu_det, p_matrix_3d
from .modes import solve_modes_2d, solve_modes_3d
from .structure import MaterialProfile, alternating_profile, contrasts, random_structure, ratio_table

__all__ = ["SuiteResult", "SUITES", "run_all"]

BOUND_SLACK = 1e-9


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, detail: str):
        self.checks += 1
        if not ok:
            self.failures.append(detail)


def _rel(x, y):
    return abs(x - y) / max(1.0, abs(x), abs(y))


def determinant_oracles(rng, nmax=12, trials=50, points=10, tol=1e-8) -> SuiteResult:
    """fq_enum, fq_dp, det_recursive and LU of P_N agree at complex lambda."""
    res = SuiteResult("determinant-oracles")
    for N in range(2, nmax + 1):
        for _ in range(trials):
            s = random_structure(rng, N)
            t = ratio_table(s, 3)
            enum, dp = fq_enum(t), fq_dp(t)
            for lam in rng.uniform(-1.5, 2.5, points) + 1j * rng.uniform(-1, 1, points):
                vals = [
                    complex(eval_charpoly(enum, lam)),
                    complex(eval_charpoly(dp, lam)),
                    det_recursive(s, lam=lam),
                    complex(lu_det(p_matrix_3d(s.radii, alternating_lambdas(lam, N)))),
                ]
                worst = max(_rel(a, b) for i, a in enumerate(vals) for b in vals[i + 1:])
                res.check(worst <= tol, f"N={N} lam={lam:.6g}: pairwise deviation {worst:.3e}")
    return res


def spectral_equivalence(rng, nmax=12, trials=20, tol=1e-6) -> SuiteResult:
    """eig(K_N) equals the mode multiset from the roots of f_N."""
    res = SuiteResult("spectral-equivalence")
    for N in range(1, nmax + 1):
        for _ in range(trials):
            s = random_structure(rng, N)
            ms = solve_modes_3d(s)
            eig = np.sort(eig_dense(k_matrix(s)).real)
            dev = float(np.abs(eig - ms.lambdas).max())
            res.check(dev <= tol, f"N={N}: max deviation {dev:.3e}")
    return res


def g_identities(rng=None, nmax=22) -> SuiteResult:
    """Exact-integer identities of the signed counts."""
    from math import comb

    res = SuiteResult("g-identities")
    g = g_coeff
    for N in range(1, nmax + 1):
        L = N // 2
        res.check(g(N, 0) == 1, f"g_{N},0 != 1")
        res.check(g(N, 1) == ((-1) ** N - 1) // 2, f"g_{N},1")
        if N >= 2:
            res.check(g(N, 2) == -L, f"g_{N},2")
        res.check(g(N, 2 * L) == (-1) ** L, f"g_{N},2L")
        for k in range(L + 1):
            res.check(g(N, 2 * k) == (-1) ** k * comb(L, k), f"closed form g_{N},{2 * k}")
        if N <= 16:
            for k in range(N + 1):
                res.check(g(N, k) == g_count(N, k), f"brute-force g_{N},{k}")
    for M in range(1, nmax // 2 + 1):
        if 2 * M + 1 <= nmax:
            res.check(g(2 * M + 1, 2 * M + 1) == (-1) ** (M + 1), f"g_{2 * M + 1},{2 * M + 1}")
        for k in range(1, M + 1):
            res.check(g(2 * M, 2 * k - 1) == 0, f"g_{2 * M},{2 * k - 1} != 0")
            if 2 * M + 1 <= nmax:
                res.check(g(2 * M + 1, 2 * k) == g(2 * M, 2 * k), f"odd/even step at M={M}, k={k}")
        for k in range(2, M + 1):
            if 2 * M + 2 <= nmax:
                res.check(g(2 * M + 2, 2 * k) == -g(2 * M + 1, 2 * k - 2) + g(2 * M + 1, 2 * k),
                          f"even recursion at M={M}, k={k}")
            if 2 * M + 1 <= nmax:
                res.check(g(2 * M + 1, 2 * k - 1) == -g(2 * M - 1, 2 * k - 3) + g(2 * M - 1, 2 * k - 1),
                          f"odd recursion at M={M}, k={k}")
    return res


def root_bounds(rng, nmax=19, trials=200, tol=1e-8) -> SuiteResult:
    """q in [-1/4, 2], lambda in [-1, 2], 2D lambda in [-1, 1]; small residuals."""
    res = SuiteResult("root-bounds")
    for _ in range(trials):
        N = int(rng.integers(1, nmax + 1))
        s = random_structure(rng, N)
        ms = solve_modes_3d(s)
        scale = ms.charpoly.scale
        for m in ms.modes:
            res.check(-0.25 - BOUND_SLACK <= m.q_star <= 2 + BOUND_SLACK, f"N={N}: q*={m.q_star!r}")
            for lam in (m.lambda_plus, m.lambda_minus):
                res.check(-1 - BOUND_SLACK <= lam <= 2 + BOUND_SLACK, f"N={N}: lambda={lam!r}")
            res.check(m.residual <= tol * scale, f"N={N}: residual {m.residual:.3e} vs scale {scale:.3e}")
        n = int(rng.integers(1, 4))
        vals = solve_modes_2d(s.with_dimension(2), n)
        res.check(bool(np.all(np.abs(vals) <= 1 + BOUND_SLACK)), f"N={N}, n={n}: 2D value out of [-1, 1]")
    return res


def two_d_determinant(rng, nmax=10, trials=20) -> SuiteResult:
    """det(lam S + C) vanishes at the eigenvalues of -S C."""
    res = SuiteResult("2d-determinant")
    for _ in range(trials):
        N = int(rng.integers(1, nmax + 1))
        n = int(rng.integers(1, 4))
        s = random_structure(rng, N, dimension=2)
        sm = assemble_2d(s, contrasts(alternating_profile(2.0, 0.0, 1.0, N), 2), n)
        scale = max(np.linalg.norm(sm.C, 2), 1.0) ** N
        for lam in solve_modes_2d(s, n):
            d = abs(lu_det(lam * sm.S + sm.C))
            res.check(d <= 1e-8 * scale, f"N={N}, n={n}: |det| = {d:.3e} at {lam:.6g}")
    return res


def transmission(rng, nmax=10, trials=50, tol=1e-10) -> SuiteResult:
    """Transmission residuals and amplitude consistency for positive permittivities."""
    res = SuiteResult("transmission")
    for _ in range(trials):
        N = int(rng.integers(1, nmax + 1))
        s = random_structure(rng, N)
        prof = MaterialProfile(float(rng.uniform(0.5, 3.0)), tuple(rng.uniform(0.1, 10.0, N)))
        fc = field_coeffs(s, prof)
        r = transmission_residual(fc, s, prof)
        res.check(r < tol, f"N={N}: residual {r:.3e}")
        amp = perturbation_amplitude(s, prof)
        dev = abs(amp - fc.b[0]) / max(abs(amp), abs(fc.b[0]), 1e-300)
        res.check(dev < tol, f"N={N}: amplitude {amp!r} vs b_0 {fc.b[0]!r}")
    return res


def alternating_routes(rng, nmax=10, trials=20, tol=1e-10) -> SuiteResult:
    """Resolvent-of-K route equals the general route on alternating profiles."""
    res = SuiteResult("alternating-routes")
    for _ in range(trials):
        N = int(rng.integers(1, nmax + 1))
        s = random_structure(rng, N)
        prof = alternating_profile(float(rng.uniform(0.1, 20.0)), float(rng.uniform(1e-3, 1.0)), 1.0, N)
        a = perturbation_amplitude(s, prof, "general")
        b = perturbation_amplitude(s, prof, "alternating")
        dev = abs(a - b) / max(abs(a), abs(b), 1e-300)
        res.check(dev < tol, f"N={N}: routes differ by {dev:.3e}")
    return res


SUITES: dict = {
    "determinant-oracles": determinant_oracles,
    "spectral-equivalence": spectral_equivalence,
    "g-identities": g_identities,
    "root-bounds": root_bounds,
    "2d-determinant": two_d_determinant,
    "transmission": transmission,
    "alternating-routes": alternating_routes,
}


def run_all(seed: int, nmax: int = 12, trials: int = 50) -> List[SuiteResult]:
    """Run every suite with one generator per suite, all derived from ``seed``."""
    seqs = np.random.SeedSequence(seed).spawn(len(SUITES))
    kwargs: dict = {
        "determinant-oracles": dict(nmax=nmax, trials=trials),
        "spectral-equivalence": dict(nmax=nmax, trials=max(1, trials // 2)),
        "g-identities": dict(),
        "root-bounds": dict(trials=trials * 4),
        "2d-determinant": dict(nmax=nmax, trials=trials),
        "transmission": dict(nmax=min(nmax, 10), trials=trials),
        "alternating-routes": dict(nmax=min(nmax, 10), trials=trials),
    }
    out = []
    for (name, fn), ss in zip(SUITES.items(), seqs):
        out.append(fn(np.random.default_rng(ss), **kwargs[name]))
    return out
