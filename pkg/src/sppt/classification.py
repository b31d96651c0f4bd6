"""PPT, SPPT and super-SPPT verdicts with their numeric residuals."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InternalError
from .factorization import BlockFactor, assemble_Y, block_cholesky, gram_blocks
from .linalg import DEFAULT_TOL, check_unitary, dagger, fro, partial_transpose
from .states import BipartiteState

# residuals within this factor of tol are reported as marginal
MARGINAL_FACTOR = 10.0


def is_ppt(rho: BipartiteState, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Return ``(flag, lambda_min)`` for the partial transpose of ``rho``.

    The flag is ``lambda_min >= -tol * ||rho||_F``.
    """
    pt = partial_transpose(rho.matrix, rho.dim_a, rho.dim_b)
    lam_min = float(np.linalg.eigvalsh(0.5 * (pt + dagger(pt)))[0])
    return lam_min >= -tol * fro(rho.matrix), lam_min


def sppt_residuals(factor: BlockFactor) -> tuple[float, float]:
    """Componentwise and operator-form SPPT defects, both relative to ``||rho||_F``.

    The componentwise defect is the largest
    ``|| sum_{k<=i} X_k^dag (S_kj^dag S_ki - S_ki S_kj^dag) X_k ||_F`` over
    ``i <= j``; the operator form is ``||Y^dag Y - rho^Gamma||_F``.
    """
    m = factor.dim_a
    rho = gram_blocks(factor)
    scale = fro(rho)
    if scale == 0.0:
        return 0.0, 0.0
    worst = 0.0
    for i in range(m):
        for j in range(i, m):
            acc = np.zeros((factor.dim_b, factor.dim_b), dtype=np.complex128)
            for k in range(i + 1):
                s_ki, s_kj = factor.coupling(k, i), factor.coupling(k, j)
                x = factor.X[k]
                acc += dagger(x) @ (dagger(s_kj) @ s_ki - s_ki @ dagger(s_kj)) @ x
            worst = max(worst, fro(acc))
    y = assemble_Y(factor)
    op = fro(dagger(y) @ y - partial_transpose(rho, m, factor.dim_b))
    return worst / scale, op / scale


def is_sppt(factor: BlockFactor, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Return ``(flag, residual)``; the residual is the larger of :func:`sppt_residuals`."""
    residual = max(sppt_residuals(factor))
    return residual <= tol, residual


def is_super_sppt(factor: BlockFactor, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Return ``(flag, residual)`` for ``S_ki S_kj^dag = S_kj^dag S_ki`` over ``k < i <= j``.

    Each commutator norm is divided by ``max(1, ||S_ki||_F ||S_kj||_F)``.
    With ``i == j`` this is normality of ``S_ki``.
    """
    m = factor.dim_a
    worst = 0.0
    for k in range(m):
        for i in range(k + 1, m):
            s_ki = factor.S[(k, i)]
            for j in range(i, m):
                s_kj_h = dagger(factor.S[(k, j)])
                comm = fro(s_ki @ s_kj_h - s_kj_h @ s_ki)
                worst = max(worst, comm / max(1.0, fro(s_ki) * fro(s_kj_h)))
    return worst <= tol, worst


@dataclass(frozen=True, eq=False)
class Classification:
    ppt: bool
    ppt_min_eig: float
    sppt: bool
    sppt_residual: float
    super_sppt: bool
    ssppt_residual: float
    basis: np.ndarray
    tol: float
    marginal: tuple[str, ...] = ()
    factor: BlockFactor | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if (self.super_sppt and not self.sppt) or (self.sppt and not self.ppt):
            raise InternalError(
                f"verdict chain broken: ppt={self.ppt} sppt={self.sppt} super_sppt={self.super_sppt} "
                f"(ppt_min_eig={self.ppt_min_eig:.3e}, sppt_residual={self.sppt_residual:.3e}, "
                f"ssppt_residual={self.ssppt_residual:.3e})")


def to_basis(rho: BipartiteState, basis: np.ndarray) -> BipartiteState:
    """Express ``rho`` in the A-basis given by the columns of ``basis``."""
    w = np.kron(basis, np.eye(rho.dim_b))
    return rho.with_matrix(dagger(w) @ rho.matrix @ w)


def classify(rho: BipartiteState, basis: np.ndarray | None = None,
             tol: float = DEFAULT_TOL) -> Classification:
    """Classify ``rho`` with respect to the A-basis whose vectors are the columns of ``basis``."""
    m = rho.dim_a
    u = np.eye(m, dtype=np.complex128) if basis is None else check_unitary(basis, m, name="basis")
    local = rho if basis is None else to_basis(rho, u)
    factor = block_cholesky(local, tol)
    factor = BlockFactor(factor.dim_a, factor.dim_b, factor.X, factor.S, u, factor.reconstruction_residual)

    ppt, lam = is_ppt(local, tol)
    sppt, sppt_res = is_sppt(factor, tol)
    ssppt, ssppt_res = is_super_sppt(factor, tol)

    marginal = []
    scale = fro(rho.matrix)
    if -MARGINAL_FACTOR * tol * scale <= lam < -tol * scale / MARGINAL_FACTOR:
        marginal.append("ppt")
    for name, res in (("sppt", sppt_res), ("super_sppt", ssppt_res)):
        if tol / MARGINAL_FACTOR < res <= MARGINAL_FACTOR * tol:
            marginal.append(name)
    return Classification(ppt, lam, sppt, sppt_res, ssppt, ssppt_res, u, tol, tuple(marginal), factor)
