"""Plasmon modes: real roots of f_N, the lambda pairs they generate, 2D spectra
and SPR-like bands where |f_N| stays uniformly small."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .charpoly import CharPoly, charpoly_3d
from .horner import condition_scale
from .errors import TheoremViolation, ValidationError
from .linalg import assemble_2d, eig_dense, real_spectrum
from .structure import (
    LayeredStructure,
    alternating_profile,
    contrasts,
    epsilon_from_lambda,
)

__all__ = [
    "PlasmonMode",
    "ModeSet",
    "Band",
    "find_q_roots",
    "solve_modes_3d",
    "solve_modes_2d",
    "band_scan",
    "lambda_pair",
]

Q_LOW, Q_HIGH = -0.25, 2.0
BOUND_SLACK = 1e-9
IMAG_TOL = 1e-6
MERGE_TOL = 1e-10
CLUSTER_TOL = 1e-3
NEWTON_MAXITER = 60


@dataclass(frozen=True)
class PlasmonMode:
    q_star: float
    lambda_plus: float
    lambda_minus: float
    eps_plus: float
    eps_minus: float
    residual: float
    multiplicity: int = 1
    at_pole: bool = False  # lambda_minus == -1, eps_minus reported as -inf


@dataclass(frozen=True)
class ModeSet:
    modes: tuple
    has_zero_mode: bool
    N: int
    structure: LayeredStructure
    eps0: float = 1.0
    charpoly: Optional[CharPoly] = None

    @property
    def zero_mode_eps(self) -> Optional[float]:
        return -2.0 * self.eps0 if self.has_zero_mode else None

    @property
    def lambdas(self) -> np.ndarray:
        """All N mode values of lambda, ascending (zero mode included for odd N)."""
        vals = [m.lambda_plus for m in self.modes] + [m.lambda_minus for m in self.modes]
        if self.has_zero_mode:
            vals.append(0.0)
        return np.sort(np.array(vals, dtype=float))


@dataclass(frozen=True)
class Band:
    q_low: float
    q_high: float
    max_abs_f: float


def lambda_pair(q: float):
    """Both roots of lam**2 - lam = q; they sum to one."""
    root = math.sqrt(max(1 + 4 * q, 0.0))
    plus = (1 + root) / 2
    return plus, 1 - plus


def _newton(cp: CharPoly, z, tol=1e-14, maxiter=NEWTON_MAXITER):
    """Newton on f_N; returns (z, converged).  Needs a simple root to converge."""
    last = None
    for _ in range(maxiter):
        f = cp(z)
        d = cp.derivative(z)
        if d == 0 or f == 0:
            # exact zero is only trusted once the iteration has been contracting fast
            return z, last is not None and last < 1e-8 * max(1.0, abs(z))
        step = f / d
        z = z - step
        last = abs(step)
        if last < tol * max(1.0, abs(z)):
            return z, True
    return z, False


def _schroeder(cp: CharPoly, z, maxiter=NEWTON_MAXITER):
    # Newton on f / f', quadratic at roots of any multiplicity
    for _ in range(maxiter):
        f = cp(z)
        d1 = cp.derivative(z)
        d2 = cp.derivative(z, 2)
        den = d1 * d1 - f * d2
        if den == 0 or f == 0:
            break
        step = f * d1 / den
        z = z - step
        if abs(step) < 1e-14 * max(1.0, abs(z)):
            break
    return z


def _refine_cluster(cp: CharPoly, center: float, m: int) -> float:
    # an m-fold root is a simple root of the (m-1)-th derivative
    z = center
    for _ in range(NEWTON_MAXITER):
        f = cp.derivative(z, m - 1)
        d = cp.derivative(z, m)
        if d == 0:
            break
        step = f / d
        z = z - step
        if abs(step) < 1e-14 * max(1.0, abs(z)):
            break
    return float(np.real(z))


def _derivative_scale(cp: CharPoly, q: float, order: int) -> float:
    c = cp.q_coeffs
    for _ in range(order):
        c = np.polyder(c)
    return float(condition_scale(c, q)) if c.size else 0.0


def find_q_roots(cp: CharPoly) -> np.ndarray:
    """All L real roots of f_N, descending, repeated by multiplicity.

    Companion-matrix eigenvalues seed Newton refinement on the compensated
    Horner value.  Iterates that stay complex or converge only linearly come
    from a multiple root split by rounding: they are pulled in with a
    Schroeder step, grouped, and a group of size m is refined as a simple
    root of the (m-1)-th derivative, accepted only if all lower derivatives
    vanish there.  A group that is neither real nor a verified multiple root
    raises TheoremViolation.  Reliable up to multiplicity ~10; beyond that a
    multiple root is numerically indistinguishable from a cluster.
    """
    L = cp.L
    if L < 1:
        raise ValidationError(f"f_N has degree {L}; there are no quadratic modes to find")
    pool = []
    for seed in np.roots(cp.q_coeffs):
        z, converged = _newton(cp, complex(seed))
        if not (converged and abs(z.imag) <= IMAG_TOL):
            z = complex(_schroeder(cp, z))
        pool.append(complex(z))
    real: List[float] = []
    while pool:
        cluster = [pool.pop(0)]
        grown = True
        while grown:
            grown = False
            for z in list(pool):
                if min(abs(z - c) for c in cluster) <= CLUSTER_TOL * max(1.0, abs(z)):
                    cluster.append(z)
                    pool.remove(z)
                    grown = True
        m = len(cluster)
        if m > 1:
            root = _refine_cluster(cp, float(np.mean([z.real for z in cluster])), m)
            if all(abs(cp.derivative(root, j)) <= 1e-6 * _derivative_scale(cp, root, j) for j in range(m)):
                real.extend([root] * m)
                continue
        worst = max(cluster, key=lambda z: abs(z.imag))
        if abs(worst.imag) > IMAG_TOL:
            raise TheoremViolation(
                f"f_N root {worst!r} does not settle on the real axis (imaginary part {abs(worst.imag):.3e})"
            )
        real.extend(z.real for z in cluster)
    roots = np.sort(np.array(real))[::-1]
    lo, hi = Q_LOW - BOUND_SLACK, Q_HIGH + BOUND_SLACK
    bad = roots[(roots < lo) | (roots > hi)]
    if bad.size:
        raise TheoremViolation(f"f_N root {bad[0]!r} lies outside [-1/4, 2]")
    return roots


def solve_modes_3d(s: LayeredStructure, eps0: float = 1.0, method: str = "dp") -> ModeSet:
    """Every plasmon mode of the alternating design on ``s``."""
    if s.dimension != 3:
        raise ValidationError("solve_modes_3d needs a 3D structure")
    cp = charpoly_3d(s, method)
    modes = []
    if cp.L >= 1:
        roots = find_q_roots(cp)
        for q in roots:
            lp, lm = lambda_pair(q)
            at_pole = lm == -1
            eps_minus = -math.inf if at_pole else epsilon_from_lambda(lm, eps0, 3)
            modes.append(PlasmonMode(
                q_star=float(q),
                lambda_plus=lp,
                lambda_minus=lm,
                eps_plus=epsilon_from_lambda(lp, eps0, 3),
                eps_minus=eps_minus,
                residual=float(abs(cp(q))),
                multiplicity=int(np.count_nonzero(np.abs(roots - q) <= MERGE_TOL * max(1.0, abs(q)))),
                at_pole=at_pole,
            ))
    return ModeSet(tuple(modes), bool(s.N % 2), s.N, s, float(eps0), cp)


def solve_modes_2d(s: LayeredStructure, n: int = 1) -> np.ndarray:
    """Mode values of the 2D contrast for multipole order ``n``, ascending.

    These are the eigenvalues of -S C, since S**2 = I turns |lam S + C| = 0
    into an eigenproblem.
    """
    if s.dimension != 2:
        raise ValidationError("solve_modes_2d needs a 2D structure")
    # any alternating profile yields the same S and C
    profile = alternating_profile(2.0, 0.0, 1.0, s.N)
    sm = assemble_2d(s, contrasts(profile, 2), n)
    A = -sm.S @ sm.C
    vals = real_spectrum(eig_dense(A), max(np.linalg.norm(sm.C), 1.0))
    bad = vals[(vals < -1 - BOUND_SLACK) | (vals > 1 + BOUND_SLACK)]
    if bad.size:
        raise TheoremViolation(f"2D mode {bad[0]!r} lies outside [-1, 1]")
    return vals


def band_scan(cp: CharPoly, q_low: float, q_high: float, threshold: float = 1e-4,
              grid_step: float = 1e-4) -> List[Band]:
    """Maximal grid intervals of [q_low, q_high] on which |f_N| <= threshold."""
    if not q_low < q_high:
        raise ValidationError(f"need q_low < q_high, got [{q_low}, {q_high}]")
    if not grid_step > 0:
        raise ValidationError(f"grid step must be positive, got {grid_step}")
    count = int(math.floor((q_high - q_low) / grid_step + 1e-9)) + 1
    q = q_low + grid_step * np.arange(count)
    if q[-1] < q_high:
        q = np.append(q, q_high)
    f = np.abs(cp(q))
    inside = f <= threshold
    bands = []
    start = None
    for i, flag in enumerate(inside):
        if flag and start is None:
            start = i
        if start is not None and (not flag or i == len(q) - 1):
            stop = i if flag else i - 1
            if stop > start:
                bands.append(Band(float(q[start]), float(q[stop]), float(f[start:stop + 1].max())))
            start = None
    return bands
