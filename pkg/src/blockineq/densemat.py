"""Dense complex matrix arithmetic and a self-contained Hermitian eigensolver.

All matrices are plain ``numpy.ndarray`` objects with ``complex128`` dtype.
Every positivity decision in the package funnels through
:func:`hermitian_eigenvalues` / :func:`is_psd`, so the eigensolver here is
deliberately dependency-free: a cyclic complex Jacobi iteration that is
numerically robust at the desk scale this package targets (dimension <= 64).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, HermiticityError, ShapeError

# Hermiticity acceptance for eigensolver inputs, relative to max(1, ||X||_F).
HERMITICITY_RTOL = 1e-10
# Off-diagonal Frobenius mass at which the Jacobi sweep loop stops.
JACOBI_RTOL = 1e-13
MAX_SWEEPS = 100
# Default tolerance for positivity decisions, relative to max(1, ||X||_F).
DEFAULT_TOL = 1e-9


def as_matrix(x, allow_empty: bool = False) -> np.ndarray:
    """Validate ``x`` as a dense complex matrix and return it as complex128.

    Raises
    ------
    ShapeError
        If ``x`` is not two-dimensional, or is empty while ``allow_empty``
        is false.
    ValueError
        If any entry is NaN or infinite.
    """
    mat = np.asarray(x, dtype=np.complex128)
    if mat.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got ndim={mat.ndim}")
    if not allow_empty and (mat.shape[0] == 0 or mat.shape[1] == 0):
        raise ShapeError(f"matrix must be non-empty, got shape {mat.shape}")
    if mat.size and not (np.all(np.isfinite(mat.real)) and np.all(np.isfinite(mat.imag))):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return mat


def frobenius(x: np.ndarray) -> float:
    """Frobenius norm of a matrix."""
    return float(np.linalg.norm(x))


def require_square(x: np.ndarray) -> int:
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {x.shape}")
    return x.shape[0]


def matmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Matrix product ``x @ y`` with an explicit conformability check."""
    if x.shape[1] != y.shape[0]:
        raise ShapeError(f"cannot multiply {x.shape} by {y.shape}")
    return np.asarray(x, dtype=np.complex128) @ np.asarray(y, dtype=np.complex128)


def conj_transpose(x: np.ndarray) -> np.ndarray:
    """Conjugate transpose (adjoint) ``x*``."""
    return np.conj(x).T.copy()


def trace(x: np.ndarray) -> complex:
    """Sum of diagonal entries of a square matrix."""
    require_square(x)
    return complex(np.trace(x))


def kron(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Kronecker product; block (i, j) of the result is ``x[i, j] * y``."""
    return np.kron(np.asarray(x, dtype=np.complex128), np.asarray(y, dtype=np.complex128))


def determinant(x: np.ndarray) -> complex:
    """Determinant via LU with partial pivoting; ``det`` of 0x0 is 1."""
    n = require_square(x)
    if n == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(np.asarray(x, dtype=np.complex128)))


@dataclass(frozen=True)
class EigenResult:
    """Spectrum of a Hermitian matrix.

    Attributes
    ----------
    values : numpy.ndarray
        Real eigenvalues sorted ascending; length equals the input dimension.
    offdiag_residual : float
        Off-diagonal Frobenius mass left when the sweep loop stopped.
    sweeps : int
        Number of full Jacobi sweeps performed.
    """

    values: np.ndarray
    offdiag_residual: float
    sweeps: int


def hermiticity_defect(x: np.ndarray) -> float:
    """Frobenius norm of ``x - x*``; zero exactly when ``x`` is Hermitian."""
    return float(np.linalg.norm(x - x.conj().T))


def hermitian_eigenvalues(x: np.ndarray) -> EigenResult:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    The input must be Hermitian up to ``HERMITICITY_RTOL * max(1, ||x||_F)``;
    it is symmetrized as ``(x + x*) / 2`` before solving, which absorbs
    rounding noise from upstream arithmetic. Sweeps continue until the
    off-diagonal Frobenius mass drops below ``JACOBI_RTOL * max(1, ||x||_F)``
    or ``MAX_SWEEPS`` sweeps have run.

    Returns
    -------
    EigenResult
        Eigenvalues sorted ascending plus convergence diagnostics.

    Raises
    ------
    HermiticityError
        If the input is not Hermitian within tolerance.
    ConvergenceError
        If the sweep budget is exhausted; carries the final off-diagonal mass.
    """
    n = require_square(x)
    if n == 0:
        return EigenResult(np.empty(0, dtype=np.float64), 0.0, 0)
    x = np.asarray(x, dtype=np.complex128)
    scale = max(1.0, frobenius(x))
    defect = hermiticity_defect(x)
    if defect > HERMITICITY_RTOL * scale:
        raise HermiticityError(
            f"matrix is not Hermitian: ||X - X*||_F = {defect:.3e} "
            f"exceeds {HERMITICITY_RTOL:.0e} * {scale:.3e}"
        )
    herm = (x + x.conj().T) / 2.0
    if n == 1:
        return EigenResult(np.array([herm[0, 0].real]), 0.0, 0)

    # Nested lists of native complex beat ndarray indexing for the tiny,
    # scalar-heavy rotation updates below.
    a = [[complex(herm[i, j]) for j in range(n)] for i in range(n)]
    threshold = JACOBI_RTOL * scale
    skip = threshold / (2.0 * n)  # entries this small cannot push the mass over threshold
    sweeps = 0
    offdiag = _offdiag_mass(a, n)
    while offdiag >= threshold and sweeps < MAX_SWEEPS:
        sweeps += 1
        for p in range(n - 1):
            row_p = a[p]
            for q in range(p + 1, n):
                apq = row_p[q]
                mag = abs(apq)
                if mag <= skip:
                    continue
                _rotate(a, n, p, q, apq, mag)
        offdiag = _offdiag_mass(a, n)
    if offdiag >= threshold:
        raise ConvergenceError(
            f"Jacobi sweeps did not converge in {MAX_SWEEPS} sweeps "
            f"(off-diagonal mass {offdiag:.3e} >= {threshold:.3e})",
            offdiag_residual=offdiag,
        )
    values = np.sort(np.array([a[i][i].real for i in range(n)]))
    return EigenResult(values, offdiag, sweeps)


def _offdiag_mass(a: list[list[complex]], n: int) -> float:
    total = 0.0
    for i in range(n):
        row = a[i]
        for j in range(i + 1, n):
            v = row[j]
            total += v.real * v.real + v.imag * v.imag
    return math.sqrt(2.0 * total)


def _rotate(a: list[list[complex]], n: int, p: int, q: int, apq: complex, mag: float) -> None:
    """Apply the unitary plane rotation annihilating entry (p, q) in place."""
    phase = apq / mag
    tau = (a[q][q].real - a[p][p].real) / (2.0 * mag)
    t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    u12 = s * phase
    u21 = -s * phase.conjugate()
    # columns: A <- A U
    for i in range(n):
        row = a[i]
        aip = row[p]
        aiq = row[q]
        row[p] = aip * c + aiq * u21
        row[q] = aip * u12 + aiq * c
    # rows: A <- U* A
    c12 = u12.conjugate()
    c21 = u21.conjugate()
    row_p = a[p]
    row_q = a[q]
    for j in range(n):
        apj = row_p[j]
        aqj = row_q[j]
        row_p[j] = apj * c + aqj * c21
        row_q[j] = apj * c12 + aqj * c
    # the pivot pair is zero by construction; pin it to kill rounding residue
    a[p][q] = 0.0
    a[q][p] = 0.0


def is_psd(x: np.ndarray, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Decide positive semidefiniteness of a Hermitian matrix.

    Returns ``(ok, min_eig)`` where ``ok`` is true iff the minimum eigenvalue
    is at least ``-tol * max(1, ||x||_F)``. The eigenvalue is returned for
    reporting either way. Verdicts are memoized on the matrix bytes, because
    precondition checks revisit the same matrix many times per suite.
    """
    if tol < 0:
        raise ValueError(f"tolerance must be nonnegative, got {tol}")
    mat = np.ascontiguousarray(np.asarray(x, dtype=np.complex128))
    n = require_square(mat)
    return _psd_cached(mat.tobytes(), n, float(tol))


@lru_cache(maxsize=512)
def _psd_cached(buf: bytes, n: int, tol: float) -> tuple[bool, float]:
    mat = np.frombuffer(buf, dtype=np.complex128).reshape(n, n)
    result = hermitian_eigenvalues(mat)
    if result.values.size == 0:
        return True, 0.0
    min_eig = float(result.values[0])
    return min_eig >= -tol * max(1.0, frobenius(mat)), min_eig
