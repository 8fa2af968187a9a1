"""Concentric layered geometries, material profiles and interface contrasts.

Index convention used throughout the package: layers are numbered
``1..N`` from the outside in, ``radii[0]`` is the outermost radius r_1, and
the background medium is layer 0 with permittivity ``eps0``.  Interface
``j`` sits at r_j and separates layer ``j-1`` (outside) from layer ``j``
(inside), so its contrast uses ``(eps[j-1], eps[j])`` with ``eps[0] = eps0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import DegenerateContrastError, PoleError, ValidationError

__all__ = [
    "LayeredStructure",
    "MaterialProfile",
    "ContrastVector",
    "RadiusRatioTable",
    "make_structure",
    "explicit",
    "equidistant",
    "geometric",
    "extreme",
    "random_structure",
    "ratio_table",
    "contrasts",
    "alternating_profile",
    "alternating_lambda",
    "epsilon_from_lambda",
]


@dataclass(frozen=True)
class LayeredStructure:
    """Radii r_1 > r_2 > ... > r_N > 0 of a concentric structure."""

    radii: tuple
    dimension: int = 3

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if self.dimension not in (2, 3):
            raise ValidationError(f"dimension must be 2 or 3, got {self.dimension!r}")
        if len(radii) < 1:
            raise ValidationError("a structure needs at least one layer (N >= 1)")
        for j, r in enumerate(radii, start=1):
            if not math.isfinite(r) or r <= 0:
                raise ValidationError(f"radius r_{j} = {r!r} must be finite and positive")
        for j in range(1, len(radii)):
            if not radii[j] < radii[j - 1]:
                raise ValidationError(
                    f"radii must be strictly decreasing: r_{j + 1} = {radii[j]!r} >= r_{j} = {radii[j - 1]!r}"
                )

    @property
    def N(self) -> int:
        return len(self.radii)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.radii, dtype=float)

    def with_dimension(self, dimension: int) -> "LayeredStructure":
        return LayeredStructure(self.radii, dimension)


def explicit(radii: Sequence[float], dimension: int = 3) -> LayeredStructure:
    return LayeredStructure(tuple(radii), dimension)


def _check_count(N):
    if int(N) != N or N < 1:
        raise ValidationError(f"layer count N must be a positive integer, got {N!r}")
    return int(N)


def equidistant(N: int, dimension: int = 3) -> LayeredStructure:
    """Unit-spaced layers, r_i = N - i + 1."""
    N = _check_count(N)
    return LayeredStructure(tuple(float(N - i) for i in range(N)), dimension)


def geometric(N: int, r1: float = 1.0, s: float = 0.8, dimension: int = 3) -> LayeredStructure:
    """Layers shrinking by a constant factor, r_{i+1} = s r_i."""
    N = _check_count(N)
    if not 0 < s < 1:
        raise ValidationError(f"scale s = {s!r} must lie in (0, 1)")
    if not r1 > 0:
        raise ValidationError(f"r1 = {r1!r} must be positive")
    radii = [float(r1)]
    for _ in range(N - 1):
        radii.append(radii[-1] * s)
    return LayeredStructure(tuple(radii), dimension)


def extreme(N: int, R: float, offsets: Sequence[float], dimension: int = 3) -> LayeredStructure:
    """Very large layers r_i = R + c_i with strictly decreasing offsets c_i."""
    N = _check_count(N)
    offsets = [float(c) for c in offsets]
    if len(offsets) != N:
        raise ValidationError(f"extreme generator needs N = {N} offsets, got {len(offsets)}")
    for i in range(1, N):
        if not offsets[i] < offsets[i - 1]:
            raise ValidationError(
                f"offsets must be strictly decreasing: c_{i + 1} = {offsets[i]!r} >= c_{i} = {offsets[i - 1]!r}"
            )
    return LayeredStructure(tuple(R + c for c in offsets), dimension)


def make_structure(spec: Mapping, dimension: Optional[int] = None) -> LayeredStructure:
    """Build a structure from a generator descriptor.

    ``spec`` is a mapping with a ``generator`` key (``explicit``,
    ``equidistant``, ``geometric`` or ``extreme``) plus that generator's
    parameters.  A bare ``{"radii": [...]}`` is read as explicit.

    >>> make_structure({"generator": "geometric", "N": 3, "r1": 1.0, "s": 0.5}).radii
    (1.0, 0.5, 0.25)
    """
    spec = dict(spec)
    dim = int(dimension if dimension is not None else spec.get("dimension", 3))
    kind = spec.get("generator", "explicit" if "radii" in spec else None)
    if kind == "explicit":
        if "radii" not in spec:
            raise ValidationError("explicit generator requires 'radii'")
        return explicit(spec["radii"], dim)
    if kind == "equidistant":
        return equidistant(spec["N"], dim)
    if kind == "geometric":
        return geometric(spec["N"], spec.get("r1", 1.0), spec.get("s", 0.8), dim)
    if kind == "extreme":
        N = _check_count(spec["N"])
        offsets = spec.get("offsets")
        if offsets is None:
            offsets = [float(N - i) for i in range(1, N + 1)]
        return extreme(N, spec["R"], offsets, dim)
    raise ValidationError(f"unknown structure generator {kind!r}")


def random_structure(rng: np.random.Generator, N: int, dimension: int = 3,
                     core=(0.1, 0.5), gap=(0.05, 0.5)) -> LayeredStructure:
    """Random structure with an innermost radius and layer gaps drawn uniformly."""
    inner = rng.uniform(*core)
    gaps = rng.uniform(*gap, size=N - 1)
    radii = inner + np.concatenate([np.cumsum(gaps[::-1])[::-1], [0.0]])
    return LayeredStructure(tuple(radii), dimension)


@dataclass(frozen=True)
class RadiusRatioTable:
    """``values[i, j] = (r_j / r_i) ** p`` with 0-based indices (full matrix)."""

    p: int
    values: np.ndarray

    @property
    def N(self) -> int:
        return self.values.shape[0]

    def t(self, i: int, j: int) -> float:
        """1-based accessor matching t^i_j."""
        return float(self.values[i - 1, j - 1])

    def weights(self) -> np.ndarray:
        """Scale-free factors w_j = t^1_j so that t^i_j = w_j / w_i."""
        return self.values[0].copy()


def ratio_table(s: LayeredStructure, p: int) -> RadiusRatioTable:
    if int(p) != p or p < 1:
        raise ValidationError(f"exponent p must be a positive integer, got {p!r}")
    r = s.as_array()
    values = (r[None, :] / r[:, None]) ** int(p)
    values.setflags(write=False)
    return RadiusRatioTable(int(p), values)


@dataclass(frozen=True)
class MaterialProfile:
    """Background permittivity plus one permittivity per layer.

    When ``eps_star`` is set the profile is the alternating metal/dielectric
    design: odd layers ``-eps_star + i delta``, even layers ``eps0``.
    """

    eps0: float
    eps: tuple
    eps_star: Optional[float] = None
    delta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.eps0) and self.eps0 > 0):
            raise ValidationError(f"background permittivity eps0 = {self.eps0!r} must be positive")
        object.__setattr__(self, "eps", tuple(complex(e) for e in self.eps))
        if not self.eps:
            raise ValidationError("material profile needs at least one layer permittivity")
        for j, e in enumerate(self.eps, start=1):
            if not (math.isfinite(e.real) and math.isfinite(e.imag)):
                raise ValidationError(f"eps_{j} = {e!r} is not finite")

    @property
    def N(self) -> int:
        return len(self.eps)

    @property
    def alternating(self) -> bool:
        return self.eps_star is not None

    def full(self) -> np.ndarray:
        """(eps_0, eps_1, ..., eps_N) as a complex array."""
        return np.array((complex(self.eps0),) + self.eps)


def alternating_profile(eps_star: float, delta: float = 0.0, eps0: float = 1.0, N: int = 1) -> MaterialProfile:
    if not eps_star > 0:
        raise ValidationError(f"eps_star = {eps_star!r} must be positive")
    if delta < 0:
        raise ValidationError(f"loss delta = {delta!r} must be non-negative")
    N = _check_count(N)
    metal = complex(-eps_star, delta)
    eps = tuple(metal if j % 2 == 1 else complex(eps0) for j in range(1, N + 1))
    return MaterialProfile(float(eps0), eps, float(eps_star), float(delta))


def alternating_lambda(eps_star, delta, eps0, dimension: int = 3) -> complex:
    """Contrast of the odd (metal) interfaces in the alternating design."""
    metal = complex(-eps_star, delta)
    if dimension == 3:
        return (2 * eps0 + metal) / (eps0 - metal)
    return (eps0 + metal) / (eps0 - metal)


@dataclass(frozen=True)
class ContrastVector:
    values: np.ndarray
    dimension: int
    alternating: bool = False

    @property
    def N(self) -> int:
        return len(self.values)


def contrasts(profile: MaterialProfile, dimension: int = 3) -> ContrastVector:
    """Per-interface contrasts; see the module docstring for indexing.

    For alternating profiles the even interfaces are filled as ``1 - lam``
    (3D) or ``-lam`` (2D) from the single metal contrast, which is the same
    value up to rounding and keeps the pattern exact.
    """
    if dimension not in (2, 3):
        raise ValidationError(f"dimension must be 2 or 3, got {dimension!r}")
    eps = profile.full()
    for j in range(1, len(eps)):
        if eps[j - 1] == eps[j]:
            raise DegenerateContrastError(j)
    if profile.alternating:
        lam = alternating_lambda(profile.eps_star, profile.delta, profile.eps0, dimension)
        other = 1 - lam if dimension == 3 else -lam
        vals = np.array([lam if j % 2 == 1 else other for j in range(1, profile.N + 1)], dtype=complex)
        return ContrastVector(vals, dimension, alternating=True)
    outer, inner = eps[:-1], eps[1:]
    if dimension == 3:
        vals = (2 * outer + inner) / (outer - inner)
    else:
        vals = (outer + inner) / (outer - inner)
    return ContrastVector(vals, dimension)


def epsilon_from_lambda(lam: float, eps0: float = 1.0, dimension: int = 3) -> float:
    """Odd-layer permittivity whose contrast against ``eps0`` equals ``lam``.

    Raises PoleError at ``lam == -1`` where the permittivity is unbounded.
    """
    if lam == -1:
        raise PoleError("lambda = -1 maps to an unbounded permittivity")
    if dimension == 3:
        return eps0 * (lam - 2) / (lam + 1)
    if dimension == 2:
        return eps0 * (lam - 1) / (lam + 1)
    raise ValidationError(f"dimension must be 2 or 3, got {dimension!r}")
