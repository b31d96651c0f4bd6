"""Canonical block-triangular factorization ``rho = X^dag X``.

``X`` is block upper triangular with block ``(i, j) = S_ij X_i`` for
``i <= j``, where ``S_ii = I`` and nothing below the diagonal. Only the
pivot blocks ``X_i`` and the strictly-upper ``S_ij`` are stored. Indices
are 0-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping, Sequence

import numpy as np

from .errors import MalformedFactor, NotPSD, RangeViolation
from .linalg import DEFAULT_TOL, as_matrix, check_unitary, dagger, fro

if TYPE_CHECKING:
    from .states import BipartiteState


@dataclass(frozen=True, eq=False)
class BlockFactor:
    """Pivot blocks ``X[k]`` and couplings ``S[(i, j)]`` (``i < j``) of a block factor.

    Couplings missing from ``S`` are taken to be zero. ``basis`` records the
    A-side basis (columns) the blocks refer to. ``block_cholesky`` produces
    Hermitian PSD pivots; other constructors (e.g. a gauge transform) may
    not, and every consumer uses ``X_k^dag`` explicitly.
    """

    dim_a: int
    dim_b: int
    X: tuple[np.ndarray, ...]
    S: Mapping[tuple[int, int], np.ndarray] = field(default_factory=dict)
    basis: np.ndarray | None = None
    reconstruction_residual: float | None = None

    def __post_init__(self) -> None:
        m, n = self.dim_a, self.dim_b
        if m < 1 or n < 1:
            raise MalformedFactor(f"dimensions must be positive, got {m}x{n}")
        if len(self.X) != m:
            raise MalformedFactor(f"expected {m} pivot blocks, got {len(self.X)}")
        xs = []
        for k, x in enumerate(self.X):
            x = as_matrix(x, name=f"X[{k}]")
            if x.shape != (n, n):
                raise MalformedFactor(f"X[{k}] must be {n}x{n}, got {x.shape}")
            xs.append(x)
        s_full: dict[tuple[int, int], np.ndarray] = {}
        for key, s in self.S.items():
            i, j = key
            if not (0 <= i < j < m):
                raise MalformedFactor(f"coupling key {key} must satisfy 0 <= i < j < {m}")
            s = as_matrix(s, name=f"S{key}")
            if s.shape != (n, n):
                raise MalformedFactor(f"S{key} must be {n}x{n}, got {s.shape}")
            s_full[(i, j)] = s
        for i in range(m):
            for j in range(i + 1, m):
                s_full.setdefault((i, j), np.zeros((n, n), dtype=np.complex128))
        basis = np.eye(m, dtype=np.complex128) if self.basis is None else check_unitary(self.basis, m, name="basis")
        object.__setattr__(self, "X", tuple(xs))
        object.__setattr__(self, "S", s_full)
        object.__setattr__(self, "basis", basis)

    def coupling(self, i: int, j: int) -> np.ndarray:
        """``S_ij`` with the implicit conventions ``S_ii = I`` and ``S_ij = 0`` for ``i > j``."""
        if i == j:
            return np.eye(self.dim_b, dtype=np.complex128)
        if i > j:
            return np.zeros((self.dim_b, self.dim_b), dtype=np.complex128)
        return self.S[(i, j)]

    def row_family(self, k: int) -> list[np.ndarray]:
        """The couplings ``S_ki`` for ``i > k``."""
        return [self.S[(k, i)] for i in range(k + 1, self.dim_a)]


def gram_blocks(factor: BlockFactor) -> np.ndarray:
    """Assemble ``rho`` blockwise: ``rho_ij = sum_{k<=i} X_k^dag S_ki^dag S_kj X_k`` for ``i <= j``."""
    m, n = factor.dim_a, factor.dim_b
    rows = [[factor.coupling(k, j) @ factor.X[k] for j in range(m)] for k in range(m)]
    rho = np.zeros((m * n, m * n), dtype=np.complex128)
    for i in range(m):
        for j in range(i, m):
            acc = np.zeros((n, n), dtype=np.complex128)
            for k in range(i + 1):
                acc += dagger(rows[k][i]) @ rows[k][j]
            rho[i * n:(i + 1) * n, j * n:(j + 1) * n] = acc
            if j != i:
                rho[j * n:(j + 1) * n, i * n:(i + 1) * n] = dagger(acc)
    return rho


def _assemble(factor: BlockFactor, adjoint: bool) -> np.ndarray:
    m, n = factor.dim_a, factor.dim_b
    out = np.zeros((m * n, m * n), dtype=np.complex128)
    for i in range(m):
        out[i * n:(i + 1) * n, i * n:(i + 1) * n] = factor.X[i]
        for j in range(i + 1, m):
            s = factor.S[(i, j)]
            if adjoint:
                s = dagger(s)
            out[i * n:(i + 1) * n, j * n:(j + 1) * n] = s @ factor.X[i]
    return out


def assemble_X(factor: BlockFactor) -> np.ndarray:
    """Block upper-triangular ``X`` with block ``(i, j) = S_ij X_i``."""
    return _assemble(factor, adjoint=False)


def assemble_Y(factor: BlockFactor) -> np.ndarray:
    """As :func:`assemble_X` with every coupling replaced by its adjoint."""
    return _assemble(factor, adjoint=True)


def block_cholesky(rho: "BipartiteState", tol: float = DEFAULT_TOL) -> BlockFactor:
    """Factor ``rho`` as ``X^dag X`` with Hermitian PSD pivot blocks.

    Row by row: the Schur complement ``G_i`` gives ``X_i = sqrt(G_i)`` and
    each coupling is ``S_ij = X_i^+ R_ij X_i^+``. Eigenvalues of ``G_i`` at
    or below ``tol * ||rho||_F`` are treated as exact zeros, so ``X_i`` and
    its pseudoinverse share one rank decision.

    Raises
    ------
    NotPSD
        A Schur complement has an eigenvalue below ``-tol * ||rho||_F``.
    RangeViolation
        Some ``R_ij`` has columns outside ``range(X_i)``, so no coupling
        ``S_ij`` reproduces it. Generic states of rank below
        ``(M - 1) * N`` hit this: a pivot block with couplings is singular.
    """
    m, n = rho.dim_a, rho.dim_b
    mat = rho.matrix
    scale = fro(mat)
    cut = tol * scale
    xs: list[np.ndarray] = []
    couplings: dict[tuple[int, int], np.ndarray] = {}
    # rows[k][j] holds the computed block S_kj X_k for j >= k
    rows: list[dict[int, np.ndarray]] = []

    def blk(i: int, j: int) -> np.ndarray:
        return mat[i * n:(i + 1) * n, j * n:(j + 1) * n]

    for i in range(m):
        g = blk(i, i).copy()
        for k in range(i):
            g -= dagger(rows[k][i]) @ rows[k][i]
        g = 0.5 * (g + dagger(g))
        vals, vecs = np.linalg.eigh(g)
        if vals[0] < -cut:
            raise NotPSD(f"Schur complement of block {i} has eigenvalue {vals[0]:.3e} "
                         f"below -{cut:.3e}")
        keep = vals > cut
        root = np.where(keep, np.sqrt(np.where(keep, vals, 0.0)), 0.0)
        inv_root = np.where(keep, 1.0 / np.where(keep, root, 1.0), 0.0)
        x_i = (vecs * root) @ dagger(vecs)
        x_pinv = (vecs * inv_root) @ dagger(vecs)
        xs.append(x_i)
        row = {i: x_i}
        for j in range(i + 1, m):
            r = blk(i, j).copy()
            for k in range(i):
                r -= dagger(rows[k][i]) @ rows[k][j]
            s = x_pinv @ r @ x_pinv
            defect = fro(x_i @ s @ x_i - r)
            if defect > cut:
                raise RangeViolation(f"block ({i}, {j}) is not of the form X[{i}] S X[{i}] "
                                     f"(defect {defect:.3e} > {cut:.3e})")
            couplings[(i, j)] = s
            row[j] = s @ x_i
        rows.append(row)

    factor = BlockFactor(m, n, tuple(xs), couplings)
    residual = fro(gram_blocks(factor) - mat) / scale if scale > 0 else 0.0
    object.__setattr__(factor, "reconstruction_residual", residual)
    return factor


def gauge(factor: BlockFactor, unitaries: Sequence[np.ndarray]) -> BlockFactor:
    """Apply the block-unitary gauge ``X_k -> W_k X_k``, ``S_kj -> W_k S_kj W_k^dag``.

    The reconstructed state is unchanged.
    """
    if len(unitaries) != factor.dim_a:
        raise MalformedFactor(f"need {factor.dim_a} gauge unitaries, got {len(unitaries)}")
    ws = [check_unitary(w, factor.dim_b, name=f"W[{k}]") for k, w in enumerate(unitaries)]
    xs = tuple(w @ x for w, x in zip(ws, factor.X))
    s = {(i, j): ws[i] @ v @ dagger(ws[i]) for (i, j), v in factor.S.items()}
    return BlockFactor(factor.dim_a, factor.dim_b, xs, s, factor.basis)
