"""System matrices of the layered transmission problem and dense primitives.

Dense LU, solves and eigenvalues are delegated to LAPACK through scipy and
numpy; this module adds the pivot checks, spectrum flattening and error
mapping the rest of the package relies on.  Entries are not pre-balanced,
which keeps the dynamic range safe for N <= 64 with the intended geometries.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, SingularSystemError, TheoremViolation, ValidationError
from .structure import ContrastVector, LayeredStructure

__all__ = [
    "SystemMatrices",
    "assemble_3d",
    "assemble_2d",
    "k_matrix",
    "xi_matrix",
    "xi_inverse",
    "shift_matrix",
    "ones",
    "alternating_ones",
    "lu_det",
    "lin_solve",
    "eig_dense",
    "real_spectrum",
]

SINGULAR_PIVOT = 1e-300


@dataclass(frozen=True)
class SystemMatrices:
    P: np.ndarray
    Upsilon: np.ndarray
    Xi: np.ndarray
    shiftM: np.ndarray
    K: Optional[np.ndarray] = None
    S: Optional[np.ndarray] = None
    C: Optional[np.ndarray] = None
    order: Optional[int] = None

    @property
    def e(self) -> np.ndarray:
        return ones(self.P.shape[0])

    @property
    def e_tilde(self) -> np.ndarray:
        return alternating_ones(self.P.shape[0])


def ones(N: int) -> np.ndarray:
    return np.ones(N)


def alternating_ones(N: int) -> np.ndarray:
    """(1, -1, 1, ..., (-1)^(N-1))."""
    return (-1.0) ** np.arange(N)


def xi_matrix(N: int) -> np.ndarray:
    """Lower-triangular matrix of ones (partial sums)."""
    return np.tril(np.ones((N, N)))


def xi_inverse(N: int) -> np.ndarray:
    return np.eye(N) - np.eye(N, k=-1)


def shift_matrix(N: int) -> np.ndarray:
    """Ones on the superdiagonal."""
    return np.eye(N, k=1)


def _check_dim(s: LayeredStructure, c: ContrastVector, dim: int):
    if s.dimension != dim or c.dimension != dim:
        raise ValidationError(
            f"dimension mismatch: expected {dim}D structure and contrasts, got {s.dimension}D / {c.dimension}D"
        )
    if c.N != s.N:
        raise ValidationError(f"{c.N} contrasts for a {s.N}-layer structure")


def p_matrix_3d(radii: np.ndarray, lambdas) -> np.ndarray:
    r = np.asarray(radii, dtype=float)
    N = r.size
    P = np.empty((N, N), dtype=complex)
    ratio = 2 * (r[:, None] / r[None, :]) ** 3
    lower = np.tril(np.ones((N, N), dtype=bool), k=-1)
    P[:] = -1.0
    P[lower] = ratio[lower]
    P[np.diag_indices(N)] = np.asarray(lambdas, dtype=complex)
    return P


def k_matrix(s: LayeredStructure) -> np.ndarray:
    """Radius-only matrix whose spectrum is the set of alternating-design modes.

    Defined by ``P_N(lam) = (lam I - K) D`` with ``D = diag((-1)^(j-1))``,
    which gives diagonal ``(1 + (-1)^i)/2``, upper entries ``(-1)^(j-1)`` and
    lower entries ``(-1)^j 2 (r_i/r_j)^3`` (1-based i, j).
    """
    r = s.as_array()
    N = r.size
    idx = np.arange(1, N + 1)
    sign_col = (-1.0) ** idx
    K = np.empty((N, N))
    upper = np.triu(np.ones((N, N), dtype=bool), k=1)
    lower = np.tril(np.ones((N, N), dtype=bool), k=-1)
    K[upper] = np.broadcast_to(-sign_col[None, :], (N, N))[upper]
    K[lower] = (sign_col[None, :] * 2 * (r[:, None] / r[None, :]) ** 3)[lower]
    K[np.diag_indices(N)] = (1 + sign_col) / 2
    return K


def assemble_3d(s: LayeredStructure, c: ContrastVector) -> SystemMatrices:
    _check_dim(s, c, 3)
    N = s.N
    r = s.as_array()
    return SystemMatrices(
        P=p_matrix_3d(r, c.values),
        Upsilon=np.diag(r ** 3),
        Xi=xi_matrix(N),
        shiftM=shift_matrix(N),
        K=k_matrix(s) if c.alternating else None,
    )


def p_matrix_2d(radii: np.ndarray, lambdas, n: int) -> np.ndarray:
    r = np.asarray(radii, dtype=float)
    N = r.size
    P = np.empty((N, N), dtype=complex)
    ratio = (r[None, :] / r[:, None]) ** (2 * n)
    upper = np.triu(np.ones((N, N), dtype=bool), k=1)
    P[:] = -1.0
    P[upper] = ratio[upper]
    P[np.diag_indices(N)] = np.asarray(lambdas, dtype=complex)
    return P


def assemble_2d(s: LayeredStructure, c: ContrastVector, n: int = 1) -> SystemMatrices:
    """Order-n matrices; for alternating contrasts also ``S`` and ``C`` with P = lam S + C."""
    _check_dim(s, c, 2)
    if int(n) != n or n < 1:
        raise ValidationError(f"multipole order n must be a positive integer, got {n!r}")
    n = int(n)
    N = s.N
    r = s.as_array()
    S = C = None
    if c.alternating:
        S = np.diag(alternating_ones(N))
        C = p_matrix_2d(r, np.zeros(N), n).real
    return SystemMatrices(
        P=p_matrix_2d(r, c.values, n),
        Upsilon=np.diag(r ** (2 * n)),
        Xi=xi_matrix(N),
        shiftM=shift_matrix(N),
        S=S,
        C=C,
        order=n,
    )


def _lu(A):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    return lu, piv


def lu_det(A) -> complex:
    """Determinant from an LU factorisation with partial pivoting."""
    A = np.asarray(A)
    if A.size == 0:
        return 1.0
    lu, piv = _lu(A)
    swaps = np.count_nonzero(piv != np.arange(piv.size))
    det = np.prod(np.diag(lu))
    return -det if swaps % 2 else det


def lin_solve(A, b) -> np.ndarray:
    """Solve ``A x = b``; a pivot below ``1e-300 * max|A|`` raises SingularSystemError."""
    A = np.asarray(A)
    b = np.asarray(b)
    if b.shape[0] != A.shape[0]:
        raise ValidationError(f"right-hand side of length {b.shape[0]} for a {A.shape[0]}x{A.shape[0]} system")
    lu, piv = _lu(A)
    scale = np.abs(A).max() if A.size else 1.0
    if np.abs(np.diag(lu)).min() <= SINGULAR_PIVOT * scale:
        raise SingularSystemError("singular system")
    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)


def eig_dense(A, vectors: bool = False, check: bool = True):
    """Eigenvalues (optionally eigenvectors) of a dense matrix.

    With ``vectors=True`` each pair is checked for ``|Av - lam v| <= 1e-8 |A|``.
    """
    A = np.asarray(A)
    try:
        if not vectors:
            return np.linalg.eigvals(A)
        w, V = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration did not converge: {exc}") from exc
    if check:
        norm = np.linalg.norm(A, 2)
        res = np.linalg.norm(A @ V - V * w[None, :], axis=0)
        bad = np.flatnonzero(res > 1e-8 * max(norm, 1e-300))
        if bad.size:
            raise ConvergenceError(f"eigenpair backward error {res[bad].max():.3e} exceeds 1e-8 |A|")
    return w, V


def real_spectrum(values, scale: float, rel_tol: float = 1e-7) -> np.ndarray:
    """Drop imaginary parts below ``rel_tol * scale``; larger ones are a TheoremViolation."""
    values = np.asarray(values)
    imag = np.abs(values.imag)
    if imag.size and imag.max() > rel_tol * scale:
        raise TheoremViolation(
            f"eigenvalue with imaginary part {imag.max():.3e} (> {rel_tol:g} * {scale:.3e}) in a spectrum that must be real"
        )
    return np.sort(values.real)
