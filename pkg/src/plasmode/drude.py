"""Drude dispersion and the polarization-tensor frequency sweep.

Only the odd (metal) layers follow the Drude law; even layers and the
background keep eps0.  All contrasts are ratios, so the absolute unit of
the permittivities (F/m here) cancels and needs no normalization.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, NamedTuple

import numpy as np

from .errors import SingularSystemError, ValidationError
from .linalg import eig_dense, k_matrix, lin_solve
from .structure import LayeredStructure

__all__ = [
    "DrudeParams",
    "SweepResult",
    "PeakMatch",
    "drude_eps",
    "polarization_tensor",
    "sweep",
    "peak_match",
    "THREADS_ENV",
]

THREADS_ENV = "PLASMODE_THREADS"
EPS_PRIME = 9e-12


@dataclass(frozen=True)
class DrudeParams:
    eps_inf: float = EPS_PRIME
    omega_p: float = 2e15
    tau: float = 1e14
    eps0: float = 1.33 ** 2 * EPS_PRIME

    def __post_init__(self):
        for name in ("eps_inf", "tau", "eps0"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"Drude parameter {name} = {getattr(self, name)!r} must be positive")
        if not self.omega_p >= 0:
            raise ValidationError(f"plasma frequency omega_p = {self.omega_p!r} must be non-negative")


def drude_eps(omega, p: DrudeParams):
    """eps'(1 - omega_p**2 / (omega (omega + i tau))), elementwise."""
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)):
        raise ValidationError("angular frequency must be positive")
    out = p.eps_inf * (1 - p.omega_p ** 2 / (w * (w + 1j * p.tau)))
    return out[()] if out.ndim == 0 else out


def metal_lambda(eps, eps0: float):
    """3D contrast of a metal layer against eps0."""
    eps = np.asarray(eps, dtype=complex)
    return (2 * eps0 + eps) / (eps0 - eps)


def polarization_tensor(s: LayeredStructure, lam: complex, K=None) -> np.ndarray:
    """r_1**-3 Upsilon (lam I - K^T)^{-1}."""
    if s.dimension != 3:
        raise ValidationError("the polarization tensor is defined for 3D structures")
    N = s.N
    K = k_matrix(s) if K is None else K
    A = complex(lam) * np.eye(N) - K.T
    try:
        R = lin_solve(A, np.eye(N, dtype=complex))
    except SingularSystemError as exc:
        vals = eig_dense(K)
        nearest = float(vals[np.argmin(np.abs(vals - lam))].real)
        raise SingularSystemError(f"lambda = {lam!r} is a mode of K_N",
                                  nearest_lambda=nearest) from exc
    r = s.as_array()
    return (r ** 3 / r[0] ** 3)[:, None] * R


def _norm(M, kind):
    if kind == "frobenius":
        return float(np.linalg.norm(M, "fro"))
    if kind == "spectral":
        return float(np.linalg.norm(M, 2))
    raise ValidationError(f"unknown norm {kind!r} (use 'frobenius' or 'spectral')")


@dataclass(frozen=True)
class SweepResult:
    omegas: np.ndarray
    eps: np.ndarray
    lambdas: np.ndarray
    norm_m: np.ndarray
    peaks: np.ndarray  # indices of strict local maxima of norm_m
    norm: str = "frobenius"


def _strict_peaks(y: np.ndarray) -> np.ndarray:
    if y.size < 3:
        return np.zeros(0, dtype=int)
    inner = (y[1:-1] > y[:-2]) & (y[1:-1] > y[2:])
    return np.flatnonzero(inner) + 1


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValidationError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def sweep(s: LayeredStructure, p: DrudeParams = DrudeParams(), omega_low: float = 2e14,
          omega_high: float = 2e15, points: int = 2000, norm: str = "frobenius") -> SweepResult:
    """Frobenius (or spectral) norm of M over a log-spaced frequency grid."""
    if not 0 < omega_low < omega_high:
        raise ValidationError(f"need 0 < omega_low < omega_high, got {omega_low!r}, {omega_high!r}")
    if int(points) != points or points < 2:
        raise ValidationError(f"points must be an integer >= 2, got {points!r}")
    _norm(np.eye(1), norm)
    omegas = np.geomspace(omega_low, omega_high, int(points))
    eps = drude_eps(omegas, p)
    lambdas = metal_lambda(eps, p.eps0)
    K = k_matrix(s)

    def one(lam):
        return _norm(polarization_tensor(s, lam, K), norm)

    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(one, lambdas))  # map keeps index order
    else:
        values = [one(lam) for lam in lambdas]
    norm_m = np.array(values)
    return SweepResult(omegas, eps, lambdas, norm_m, _strict_peaks(norm_m), norm)


class PeakMatch(NamedTuple):
    omega: float
    mode_lambda: float
    distance: float


def peak_match(sr: SweepResult, mode_lambdas) -> List[PeakMatch]:
    """Pair every sweep peak with the mode lambda nearest to Re lambda(omega_peak).

    ``mode_lambdas`` is a ModeSet or any collection of mode values.
    """
    modes = np.asarray(getattr(mode_lambdas, "lambdas", mode_lambdas), dtype=float)
    out = []
    if modes.size == 0:
        return out
    for i in sr.peaks:
        re = float(sr.lambdas[i].real)
        k = int(np.argmin(np.abs(modes - re)))
        out.append(PeakMatch(float(sr.omegas[i]), float(modes[k]), abs(re - float(modes[k]))))
    return out
