"""Dense complex linear algebra primitives.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; every public
function accepts anything array-like and returns a fresh array.

Block convention for bipartite operators on ``C^M (x) C^N``: block ``(i, j)``
occupies rows ``i*N:(i+1)*N`` and columns ``j*N:(j+1)*N`` (0-based).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    InvalidInput,
    NotHermitian,
    NotPSD,
    NotSquare,
    NotUnitary,
)

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-10
DEFAULT_TOL = 1e-9


class EigenSystem(NamedTuple):
    """Ascending real eigenvalues and the matching orthonormal eigenvectors (columns)."""

    values: np.ndarray
    vectors: np.ndarray


def as_matrix(a, *, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInput(f"{name} has non-finite entries")
    return m


def fro(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def _require_square(a: np.ndarray, name: str) -> None:
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"{name} must be square, got shape {a.shape}")


def hermitian_defect(a: np.ndarray) -> float:
    """``||A - A^dag||_F / ||A||_F`` (0 for the zero matrix)."""
    scale = fro(a)
    if scale == 0.0:
        return 0.0
    return fro(a - dagger(a)) / scale


def hermitian_eig(a, *, herm_tol: float = HERMITIAN_TOL) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as ``(A + A^dag)/2`` before decomposing, after
    checking that the relative anti-Hermitian part is below ``herm_tol``.
    """
    m = as_matrix(a)
    _require_square(m, "matrix")
    defect = hermitian_defect(m)
    if defect > herm_tol:
        raise NotHermitian(f"relative Hermitian defect {defect:.3e} exceeds {herm_tol:.1e}")
    h = 0.5 * (m + dagger(m))
    try:
        values, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceFailure(str(exc)) from exc
    return EigenSystem(values, vectors)


def psd_sqrt(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; anything below
    ``-tol`` raises :class:`NotPSD`. ``tol`` is absolute.
    """
    values, vectors = hermitian_eig(a)
    if values.size and values[0] < -tol:
        raise NotPSD(f"minimum eigenvalue {values[0]:.3e} below -{tol:.1e}")
    root = np.sqrt(np.clip(values, 0.0, None))
    return (vectors * root) @ dagger(vectors)


def pseudo_inverse(a, rank_tol: float = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a Hermitian PSD matrix.

    Eigenvalues above ``rank_tol * lambda_max`` are inverted, the rest are
    treated as zero.
    """
    values, vectors = hermitian_eig(a)
    lam_max = values[-1] if values.size else 0.0
    if lam_max <= 0.0:
        return np.zeros_like(vectors)
    keep = values > rank_tol * lam_max
    inv = np.zeros_like(values)
    inv[keep] = 1.0 / values[keep]
    return (vectors * inv) @ dagger(vectors)


def partial_transpose(rho, dim_a: int, dim_b: int) -> np.ndarray:
    """Transpose the A factor: output block ``(i, j)`` is input block ``(j, i)``."""
    m = as_matrix(rho, name="rho")
    d = dim_a * dim_b
    if dim_a < 1 or dim_b < 1 or m.shape != (d, d):
        raise DimensionMismatch(f"expected {d}x{d} for {dim_a}x{dim_b} system, got {m.shape}")
    t = m.reshape(dim_a, dim_b, dim_a, dim_b).transpose(2, 1, 0, 3)
    return t.reshape(d, d).copy()


def block(rho: np.ndarray, i: int, j: int, dim_b: int) -> np.ndarray:
    """Copy of block ``(i, j)`` of a block matrix with ``dim_b``-sized blocks."""
    return rho[i * dim_b:(i + 1) * dim_b, j * dim_b:(j + 1) * dim_b].copy()


def unitary_defect(u: np.ndarray) -> float:
    n = u.shape[1]
    return fro(dagger(u) @ u - np.eye(n))


def check_unitary(u, size: int | None = None, *, tol: float = UNITARY_TOL,
                  name: str = "unitary") -> np.ndarray:
    """Validate and return ``u`` as a complex array; raise :class:`NotUnitary` otherwise."""
    m = as_matrix(u, name=name)
    if m.shape[0] != m.shape[1]:
        raise NotUnitary(f"{name} must be square, got shape {m.shape}")
    if size is not None and m.shape[0] != size:
        raise DimensionMismatch(f"{name} must be {size}x{size}, got {m.shape}")
    defect = unitary_defect(m)
    if defect > tol * max(1, m.shape[0]):
        raise NotUnitary(f"{name} has ||U^dag U - I||_F = {defect:.3e}")
    return m


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a complex Ginibre matrix.

    The phases of ``R``'s diagonal are folded back into ``Q`` so the result
    does not depend on LAPACK's sign convention.
    """
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    phases = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return q * phases
