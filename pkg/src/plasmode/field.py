"""Layered potential from the transmission system.

In 3D the background is H = a0 x_1 and layer j carries

    u = a_j x_1 + b_j x_1 / |x|**3,

with a_0 = a0 outside and b_N = 0 in the core.  In 2D (order n) the
per-order term is (a_j r**n + b_j r**-n) cos(n theta).  In both cases the
jumps d_j = a_j - a_{j-1} solve a single N x N system:

    3D:  P^T d = a0 e          2D:  P~ d = a0 e

and then a = Xi d + a0 e, b = Xi^T Upsilon d.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import SingularSystemError, ValidationError
from .linalg import (
    alternating_ones,
    assemble_2d,
    assemble_3d,
    eig_dense,
    k_matrix,
    lin_solve,
    ones,
)
from .structure import LayeredStructure, MaterialProfile, contrasts

__all__ = [
    "FieldCoefficients",
    "field_coeffs",
    "eval_potential",
    "transmission_residual",
    "perturbation_amplitude",
    "alternating_amplitude",
]


@dataclass(frozen=True)
class FieldCoefficients:
    """``a[j-1]`` is a_j (j = 1..N); ``b[j]`` is b_j (j = 0..N-1); b_N = 0 implicitly."""

    a: np.ndarray
    b: np.ndarray
    a0: complex
    dimension: int = 3
    n: Optional[int] = None

    @property
    def N(self) -> int:
        return len(self.a)

    def layer(self, j: int):
        """(a_j, b_j) for layer j = 0..N, where layer 0 is the background."""
        a = self.a0 if j == 0 else self.a[j - 1]
        b = self.b[j] if j < self.N else 0.0
        return a, b


def _check(s: LayeredStructure, profile: MaterialProfile, n):
    if profile.N != s.N:
        raise ValidationError(f"profile has {profile.N} layers, structure has {s.N}")
    if s.dimension == 2:
        if n is None:
            n = 1
        if int(n) != n or n < 1:
            raise ValidationError(f"multipole order n must be a positive integer, got {n!r}")
        return int(n)
    return None


def _active_interfaces(profile: MaterialProfile) -> list:
    eps = profile.full()
    return [j for j in range(1, len(eps)) if eps[j - 1] != eps[j]]


def _reduced(s: LayeredStructure, profile: MaterialProfile, keep: list):
    sub = LayeredStructure(tuple(s.radii[j - 1] for j in keep), s.dimension)
    eps = profile.full()
    # the material just inside interface j is eps_j
    sub_profile = MaterialProfile(profile.eps0, tuple(eps[j] for j in keep),
                                  profile.eps_star if len(keep) == s.N else None, profile.delta)
    return sub, sub_profile


def _nearest_mode(s: LayeredStructure, lam, n) -> Optional[float]:
    if s.dimension == 3:
        vals = eig_dense(k_matrix(s))
    else:
        from .modes import solve_modes_2d
        vals = solve_modes_2d(s, n)
    return complex(vals[np.argmin(np.abs(vals - lam))]).real


def _jumps(s: LayeredStructure, profile: MaterialProfile, n):
    # returns (d, matrices) with d solving the transmission system for a0 = 1
    c = contrasts(profile, s.dimension)
    if s.dimension == 3:
        sm = assemble_3d(s, c)
        A = sm.P.T
    else:
        sm = assemble_2d(s, c, n)
        A = sm.P
    try:
        d = lin_solve(A, ones(s.N).astype(complex))
    except SingularSystemError as exc:
        nearest = _nearest_mode(s, c.values[0], n) if c.alternating else None
        raise SingularSystemError("transmission system is singular (plasmon resonance)",
                                  nearest_lambda=nearest) from exc
    return d, sm


def field_coeffs(s: LayeredStructure, profile: MaterialProfile, a0: complex = 1.0,
                 n: Optional[int] = None) -> FieldCoefficients:
    """Coefficients of the potential for background amplitude ``a0``.

    Interfaces with no permittivity jump are removed before assembly, and
    the merged layers share one coefficient pair.
    """
    n = _check(s, profile, n)
    N = s.N
    keep = _active_interfaces(profile)
    a = np.full(N, complex(a0))
    b = np.zeros(N, dtype=complex)
    if not keep:
        return FieldCoefficients(a, b, complex(a0), s.dimension, n)
    sub, sub_profile = _reduced(s, profile, keep)
    d, sm = _jumps(sub, sub_profile, n)
    d = a0 * d
    a_red = sm.Xi @ d + a0
    b_red = sm.Xi.T @ (np.diag(sm.Upsilon) * d)
    # layer j (original) lies inside the last kept interface at or above it;
    # above the first kept interface it is background-like
    k = -1
    for j in range(1, N + 1):
        while k + 1 < len(keep) and keep[k + 1] <= j:
            k += 1
        a[j - 1] = a0 if k < 0 else a_red[k]
    for j in range(0, N):
        # b_j belongs to layer j; find the first kept interface strictly inside layer j
        nxt = next((m for m, jj in enumerate(keep) if jj > j), None)
        b[j] = 0.0 if nxt is None else b_red[nxt]
    return FieldCoefficients(a, b, complex(a0), s.dimension, n)


def _layer_index(s: LayeredStructure, rho: float) -> int:
    # layer j spans r_{j+1} < rho <= r_j; rho > r_1 is the background
    r = s.as_array()
    return int(np.count_nonzero(r >= rho))


def eval_potential(fc: FieldCoefficients, s: LayeredStructure, point) -> complex:
    """u at a point (3 coordinates in 3D, 2 in 2D)."""
    x = np.asarray(point, dtype=float)
    if x.shape != (fc.dimension,):
        raise ValidationError(f"expected a {fc.dimension}D point, got shape {x.shape}")
    rho = float(np.linalg.norm(x))
    j = _layer_index(s, rho)
    a, b = fc.layer(j)
    if rho == 0.0:
        if b != 0:
            raise ValidationError("the decaying term is singular at the origin")
        return complex(a * (x[0] if fc.dimension == 3 else 0.0))
    if fc.dimension == 3:
        return complex(a * x[0] + b * x[0] / rho ** 3)
    n = fc.n
    angular = np.cos(n * np.arctan2(x[1], x[0]))
    return complex((a * rho ** n + b * rho ** (-n)) * angular)


def transmission_residual(fc: FieldCoefficients, s: LayeredStructure, profile: MaterialProfile) -> float:
    """Largest relative jump of u or eps du/dr over all interfaces.

    Evaluated from the radial factors directly; each jump is normalized by
    the sum of the magnitudes of the terms entering it.
    """
    eps = profile.full()
    r = s.as_array()
    worst = 0.0
    for j in range(1, s.N + 1):
        ao, bo = fc.layer(j - 1)
        ai, bi = fc.layer(j)
        rho = r[j - 1]
        if fc.dimension == 3:
            go, gi = ao * rho, ai * rho
            ho, hi = bo / rho ** 2, bi / rho ** 2
            # d/dr of (a r + b r^-2) = a - 2 b r^-3; multiply by rho to share the scale
            fo, fi = (go, -2 * ho), (gi, -2 * hi)
        else:
            n = fc.n
            go, gi = ao * rho ** n, ai * rho ** n
            ho, hi = bo * rho ** (-n), bi * rho ** (-n)
            fo, fi = (n * go, -n * ho), (n * gi, -n * hi)
        jump_u = (go + ho) - (gi + hi)
        scale_u = abs(go) + abs(ho) + abs(gi) + abs(hi)
        flux_o = eps[j - 1] * (fo[0] + fo[1])
        flux_i = eps[j] * (fi[0] + fi[1])
        scale_f = abs(eps[j - 1]) * (abs(fo[0]) + abs(fo[1])) + abs(eps[j]) * (abs(fi[0]) + abs(fi[1]))
        for jump, scale in ((jump_u, scale_u), (flux_o - flux_i, scale_f)):
            if scale > 0:
                worst = max(worst, abs(jump) / scale)
    return float(worst)


def perturbation_amplitude(s: LayeredStructure, profile: MaterialProfile, variant: str = "general",
                           n: Optional[int] = None) -> complex:
    """Far-field coefficient b_0 / a0.

    ``variant="alternating"`` uses the resolvent of K_N applied to the
    alternating vector (3D alternating profiles only); ``"general"`` solves
    with the assembled P_N.  The two agree on alternating profiles.
    """
    n = _check(s, profile, n)
    if variant == "alternating":
        if s.dimension != 3 or not profile.alternating:
            raise ValidationError("the alternating variant needs a 3D alternating profile")
        lam = contrasts(profile, 3).values[0]
        return alternating_amplitude(s, lam)
    if variant != "general":
        raise ValidationError(f"unknown variant {variant!r} (use 'general' or 'alternating')")
    keep = _active_interfaces(profile)
    if not keep:
        return 0j
    sub, sub_profile = _reduced(s, profile, keep)
    d, sm = _jumps(sub, sub_profile, n)
    return complex(np.diag(sm.Upsilon) @ d)


def _resolvent_solve(s: LayeredStructure, lam: complex, rhs: np.ndarray) -> np.ndarray:
    K = k_matrix(s)
    A = lam * np.eye(s.N) - K.T
    try:
        return lin_solve(A, rhs.astype(complex))
    except SingularSystemError as exc:
        vals = eig_dense(K)
        nearest = float(vals[np.argmin(np.abs(vals - lam))].real)
        raise SingularSystemError(f"lambda = {lam!r} is a mode of K_N",
                                  nearest_lambda=nearest) from exc


def alternating_amplitude(s: LayeredStructure, lam: complex) -> complex:
    """e^T Upsilon (lam I - K^T)^{-1} e~ for the alternating design in 3D."""
    if s.dimension != 3:
        raise ValidationError("alternating_amplitude needs a 3D structure")
    x = _resolvent_solve(s, complex(lam), alternating_ones(s.N))
    return complex(s.as_array() ** 3 @ x)
