"""Characteristic polynomial f_N(q) of the alternating layered design.

With q = lam**2 - lam and L = N // 2 the determinant factors as

    |P_N(lam)| = (-1)**L * lam**(N - 2L) * f_N(q),
    f_N(q)     = sum_k 2**k * q**(L - k) * c_k,

where c_k sums, over ascending index tuples i_1 < ... < i_2k, the sign
(-1)**(i_1 + ... + i_2k) times t[i_1, i_2] * t[i_3, i_4] * ... .  The c_k
are stored without the 2**k factor so they stay comparable to the signed
counts g_{N,2k} they tend to when all radii coincide.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import EnumerationSizeError, ValidationError
from .horner import comp_horner, condition_scale
from .structure import LayeredStructure, RadiusRatioTable, ratio_table

__all__ = [
    "Method",
    "CharPoly",
    "fq_enum",
    "fq_dp",
    "fq_fit",
    "charpoly_3d",
    "g_coeff",
    "g_count",
    "g_table",
    "det_recursive",
    "alternating_lambdas",
    "eval_charpoly",
    "extreme_coeffs",
    "ENUM_MAX_N",
]

ENUM_MAX_N = 24


class Method(str, enum.Enum):
    ENUMERATION = "enumeration"
    DP = "dp"
    RECURSION_FIT = "recursion-fit"
    LIMIT = "extreme-limit"


@dataclass(frozen=True)
class CharPoly:
    N: int
    coeffs: np.ndarray  # c_0 .. c_L, without the 2**k factor
    method: Method = Method.DP
    tail: Optional[np.ndarray] = None  # low-order parts when coeffs are double-double

    @property
    def L(self) -> int:
        return self.N // 2

    @property
    def q_coeffs(self) -> np.ndarray:
        """Coefficients of f_N in q, highest power first: 2**k c_k for k = 0..L."""
        return self.coeffs * 2.0 ** np.arange(self.L + 1)

    @property
    def q_tail(self) -> Optional[np.ndarray]:
        if self.tail is None:
            return None
        return self.tail * 2.0 ** np.arange(self.L + 1)

    @property
    def scale(self) -> float:
        return float(np.abs(self.q_coeffs).max())

    def __call__(self, q):
        return comp_horner(self.q_coeffs, q, self.q_tail)

    def derivative(self, q, order: int = 1):
        c = self.q_coeffs
        for _ in range(order):
            c = np.polyder(c)
        if c.size == 0:
            return np.zeros_like(np.asarray(q), dtype=np.result_type(np.asarray(q), float))[()]
        return comp_horner(c, q)

    def residual_scale(self, q) -> float:
        return float(condition_scale(self.q_coeffs, q))


def _table_for(t, N):
    if isinstance(t, LayeredStructure):
        t = ratio_table(t, 3)
    if N is not None and N != t.N:
        raise ValidationError(f"N = {N} does not match a {t.N}-layer ratio table")
    return t


def fq_enum(t: RadiusRatioTable, N: Optional[int] = None) -> CharPoly:
    """c_k by explicit enumeration of every ascending 2k-tuple.

    Sums run in lexicographic tuple order, so results are bit-reproducible.
    """
    t = _table_for(t, N)
    N = t.N
    if N > ENUM_MAX_N:
        raise EnumerationSizeError(f"enumeration is capped at N = {ENUM_MAX_N} (got {N}); use fq_dp")
    T = t.values
    L = N // 2
    coeffs = np.zeros(L + 1)
    for k in range(L + 1):
        total = 0.0
        for idx in itertools.combinations(range(1, N + 1), 2 * k):
            term = -1.0 if sum(idx) % 2 else 1.0
            for l in range(k):
                term *= T[idx[2 * l] - 1, idx[2 * l + 1] - 1]
            total += term
        coeffs[k] = total
    return CharPoly(N, coeffs, Method.ENUMERATION)


def fq_dp(t: RadiusRatioTable, N: Optional[int] = None, exact: bool = True) -> CharPoly:
    """c_k in O(N L) by scanning indices with one open-pair slot.

    Pairs in a tuple are consecutive in sorted order, so at any index at
    most one pair is open.  Opening at i contributes (-1)**i / w_i and
    closing at j contributes (-1)**j * w_j, with w_j = t[1, j].

    With ``exact=True`` the scan runs in rational arithmetic on the stored
    float weights and the result is kept as a double-double (``coeffs`` +
    ``tail``).  The top roots of clustered spectra move by ~1e-5 under a
    one-ulp coefficient perturbation, so plain float coefficients are not
    enough to pin them.
    """
    t = _table_for(t, N)
    N = t.N
    L = N // 2
    w = t.weights()
    if not exact:
        closed = np.zeros(L + 1)
        closed[0] = 1.0
        open_ = np.zeros(L + 1)
        for i in range(1, N + 1):
            sign = -1.0 if i % 2 else 1.0
            opened = closed * (sign / w[i - 1])
            closed[1:] += open_[:-1] * (sign * w[i - 1])
            open_ += opened
        return CharPoly(N, closed.copy(), Method.DP)
    closed = [Fraction(1)] + [Fraction(0)] * L
    open_ = [Fraction(0)] * (L + 1)
    for i in range(1, N + 1):
        wi = Fraction(float(w[i - 1]))
        close_w = wi if i % 2 == 0 else -wi
        open_w = 1 / close_w
        opened = [c * open_w for c in closed]
        for k in range(L, 0, -1):
            closed[k] += open_[k - 1] * close_w
        open_ = [a + b for a, b in zip(open_, opened)]
    hi = np.array([float(c) for c in closed])
    lo = np.array([float(c - Fraction(h)) for c, h in zip(closed, hi)])
    return CharPoly(N, hi, Method.DP, lo)


def charpoly_3d(s: LayeredStructure, method: str = "dp") -> CharPoly:
    if s.dimension != 3:
        raise ValidationError("the characteristic polynomial is defined for 3D structures")
    method = Method(method)
    if method is Method.DP:
        return fq_dp(ratio_table(s, 3))
    if method is Method.ENUMERATION:
        return fq_enum(ratio_table(s, 3))
    if method is Method.RECURSION_FIT:
        return fq_fit(s)
    raise ValidationError(f"method {method.value!r} needs no structure; use extreme_coeffs")


# -- signed counts g_{N,k} ---------------------------------------------------

def _check_gk(N, k):
    if N < 0 or not 0 <= k <= N:
        raise ValidationError(f"g_{{N,k}} needs 0 <= k <= N, got N = {N}, k = {k}")


@lru_cache(maxsize=None)
def _g_row(N: int) -> tuple:
    # coefficients of prod_{i=1..N} (1 + (-1)**i x), exact integers
    row = [1]
    for i in range(1, N + 1):
        s = -1 if i % 2 else 1
        nxt = row + [0]
        for k in range(len(row)):
            nxt[k + 1] += s * row[k]
        row = nxt
    return tuple(row)


def g_coeff(N: int, k: int) -> int:
    """Signed count sum over k-subsets of {1..N} of (-1)**(sum of elements).

    Even k uses the closed form (-1)**(k/2) * C(N//2, k/2); odd k comes from
    the exact expansion of prod (1 + (-1)**i x).
    """
    _check_gk(N, k)
    if k % 2 == 0:
        return (-1) ** (k // 2) * math.comb(N // 2, k // 2)
    return _g_row(N)[k]


def g_count(N: int, k: int) -> int:
    """Brute-force signed count over all k-subsets (exponential; small N only)."""
    _check_gk(N, k)
    return sum(-1 if sum(c) % 2 else 1 for c in itertools.combinations(range(1, N + 1), k))


def g_table(N: int) -> list:
    return [g_coeff(N, k) for k in range(N + 1)]


def extreme_coeffs(N: int) -> CharPoly:
    """Limit polynomial for r_i = R + c_i, R -> infinity: f_N = (q - 2)**(N//2)."""
    if N < 1:
        raise ValidationError(f"N must be >= 1, got {N}")
    L = N // 2
    coeffs = np.array([g_coeff(N, 2 * k) for k in range(L + 1)], dtype=float)
    return CharPoly(N, coeffs, Method.LIMIT)


# -- determinants --------------------------------------------------------------

def alternating_lambdas(lam: complex, N: int) -> np.ndarray:
    return np.array([lam if j % 2 == 1 else 1 - lam for j in range(1, N + 1)], dtype=complex)


def _small_det(A):
    n = A.shape[0]
    if n == 1:
        return A[0, 0]
    if n == 2:
        return A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    return (A[0, 0] * (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
            - A[0, 1] * (A[1, 0] * A[2, 2] - A[1, 2] * A[2, 0])
            + A[0, 2] * (A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0]))


def det_recursive(s: LayeredStructure, lambdas: Optional[Sequence[complex]] = None,
                  lam: Optional[complex] = None) -> complex:
    """|P_N| by recursing over interior blocks P^i_M.

    Pass general contrasts ``lambdas`` or a single ``lam`` for the
    alternating pattern.  Blocks of size <= 3 are expanded by cofactors and
    empty blocks count as 1.
    """
    from .linalg import p_matrix_3d

    N = s.N
    if lambdas is None:
        if lam is None:
            raise ValidationError("det_recursive needs either lambdas or lam")
        lambdas = alternating_lambdas(lam, N)
    lambdas = np.asarray(lambdas, dtype=complex)
    if lambdas.size != N:
        raise ValidationError(f"{lambdas.size} contrasts for a {N}-layer structure")
    r = s.as_array()
    P = p_matrix_3d(r, lambdas)

    def t(i, j):
        return (r[j - 1] / r[i - 1]) ** 3

    def lm(j):
        return lambdas[j - 1]

    memo = {}

    def block(i, M):
        n = M - i + 1
        if n <= 0:
            return 1.0
        if n <= 3:
            return _small_det(P[i - 1:M, i - 1:M])
        key = (i, M)
        if key in memo:
            return memo[key]
        head = lm(i) + (lm(i + 1) - 1) * t(i, i + 1)
        tail = lm(M) + (lm(M - 1) - 1) * t(M - 1, M)
        tail_c = (lm(M - 1) + 1) * (lm(M - 1) - 2) * t(M - 1, M)
        head_c = (lm(i + 1) - 2) * t(i, i + 1) * (lm(i + 1) + 1)
        val = (head * tail * block(i + 1, M - 1)
               - head * tail_c * block(i + 1, M - 2)
               - head_c * tail * block(i + 2, M - 1)
               + head_c * tail_c * block(i + 2, M - 2))
        memo[key] = val
        return val

    return complex(block(1, N))


def eval_charpoly(cp: CharPoly, lam) -> complex:
    """|P_N(lam)| from the factored form, with f_N evaluated by compensated Horner."""
    lam = np.asarray(lam, dtype=complex)
    L = cp.L
    q = lam * lam - lam
    val = (-1) ** L * cp(q)
    if cp.N % 2:
        val = val * lam
    return val[()] if np.ndim(val) == 0 else val


def fq_fit(s: LayeredStructure) -> CharPoly:
    """Recover c_k by interpolating det_recursive at L + 1 Chebyshev nodes in q.

    Independent of the combinatorial routes; accuracy degrades for large L.
    """
    N = s.N
    L = N // 2
    if L == 0:
        return CharPoly(N, np.ones(1), Method.RECURSION_FIT)
    k = np.arange(L + 1)
    q = 0.875 + 1.125 * np.cos(np.pi * (2 * k + 1) / (2 * (L + 1)))
    lam = (1 + np.sqrt(1 + 4 * q)) / 2
    f = np.array([det_recursive(s, lam=x) for x in lam]) * (-1) ** L
    if N % 2:
        f = f / lam
    V = np.vander(q, L + 1)
    a = np.linalg.solve(V, f.real)
    coeffs = a / 2.0 ** np.arange(L + 1)
    return CharPoly(N, coeffs, Method.RECURSION_FIT)
