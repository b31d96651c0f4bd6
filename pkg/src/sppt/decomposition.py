"""Explicit separable decompositions of super-SPPT states.

Row ``k`` of the factor contributes
``rho_k = sum_{i,j>=k} |i><j| (x) X_k^dag S_ki^dag S_kj X_k``. When the
couplings ``{S_ki : i > k}`` are normal and mutually commuting they share
an orthonormal eigenbasis ``u_l``, and ``rho_k`` splits into pure product
terms ``|psi_l><psi_l| (x) v_l v_l^dag`` with
``psi_l = |k> + sum_{i>k} conj(lambda_l^(ki)) |i>`` and ``v_l = X_k^dag u_l``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .classification import is_super_sppt
from .errors import DiagonalizationFailure, DimensionMismatch, NotCommutingFamily, NotSuperSPPT
from .factorization import BlockFactor, gram_blocks
from .linalg import DEFAULT_TOL, as_matrix, dagger, fro
from .states import BipartiteState

MAX_ATTEMPTS = 8
MAX_DEPTH = 8


@dataclass(frozen=True, eq=False)
class JointSpectrum:
    """Common eigenvectors (columns of ``vectors``) and ``eigenvalues[s, l] = u_l^dag S_s u_l``."""

    vectors: np.ndarray
    eigenvalues: np.ndarray
    row: int = 0

    @property
    def projectors(self) -> list[np.ndarray]:
        return [np.outer(u, u.conj()) for u in self.vectors.T]


def commutation_residual(family: Sequence[np.ndarray]) -> float:
    """Largest ``||A B^dag - B^dag A||_F / max(1, ||A|| ||B||)`` over ordered pairs, including ``A = B``."""
    worst = 0.0
    for a_idx, a in enumerate(family):
        for b in family[a_idx:]:
            bh = dagger(b)
            worst = max(worst, fro(a @ bh - bh @ a) / max(1.0, fro(a) * fro(b)))
    return worst


def _leakage(basis: np.ndarray, family: Sequence[np.ndarray]) -> float:
    worst = 0.0
    for s in family:
        d = dagger(basis) @ s @ basis
        off = d - np.diag(np.diagonal(d))
        worst = max(worst, fro(off) / max(1.0, fro(s)))
    return worst


def _mixing(family: Sequence[np.ndarray], rng: np.random.Generator) -> np.ndarray:
    """Random real combination of the Hermitian and anti-Hermitian parts of the family."""
    n = family[0].shape[0]
    h = np.zeros((n, n), dtype=np.complex128)
    for s in family:
        alpha, beta = rng.standard_normal(2)
        h += alpha * (s + dagger(s)) + beta * 1j * (dagger(s) - s)
    return 0.5 * (h + dagger(h))


def _clusters(values: np.ndarray, gap: float) -> list[np.ndarray]:
    groups, start = [], 0
    for idx in range(1, len(values) + 1):
        if idx == len(values) or values[idx] - values[idx - 1] > gap:
            groups.append(np.arange(start, idx))
            start = idx
    return groups


def _refine(family, basis, rng, tol, depth):
    """Re-diagonalize the family inside the subspace spanned by ``basis`` columns."""
    local = [dagger(basis) @ s @ basis for s in family]
    if depth > MAX_DEPTH or _leakage(np.eye(basis.shape[1]), local) <= tol:
        return basis
    values, vecs = np.linalg.eigh(_mixing(local, rng))
    out = basis @ vecs
    spread = max(1.0, float(np.max(np.abs(values))))
    for group in _clusters(values, 1e-6 * spread):
        if len(group) > 1:
            out[:, group] = _refine(family, out[:, group], rng, tol, depth + 1)
    return out


def joint_eigenbasis(family: Sequence[np.ndarray], tol: float = DEFAULT_TOL,
                     seed: int = 0, row: int = 0) -> JointSpectrum:
    """Orthonormal basis diagonalizing every member of a commuting normal family.

    A random Hermitian combination of the family is diagonalized; the basis
    is accepted once every member's off-diagonal part (relative to
    ``max(1, ||S||_F)``) is at most ``tol``. After ``MAX_ATTEMPTS`` fresh
    draws the near-degenerate eigenspaces are split recursively.

    Raises
    ------
    NotCommutingFamily
        The family fails the commutation/normality test at ``tol``.
    DiagonalizationFailure
        No acceptable basis was found.
    """
    fam = [as_matrix(s, name="family member") for s in family]
    if not fam:
        raise DimensionMismatch("family must contain at least one matrix")
    n = fam[0].shape[0]
    if any(s.shape != (n, n) for s in fam):
        raise DimensionMismatch("family members must share one square shape")
    residual = commutation_residual(fam)
    if residual > tol:
        raise NotCommutingFamily(f"commutation residual {residual:.3e} exceeds {tol:.1e}")

    rng = np.random.default_rng(seed)
    basis = None
    for _ in range(MAX_ATTEMPTS):
        _, vecs = np.linalg.eigh(_mixing(fam, rng))
        if _leakage(vecs, fam) <= tol:
            basis = vecs
            break
    if basis is None:
        basis = _refine(fam, np.eye(n, dtype=np.complex128), rng, tol, 0)
        if _leakage(basis, fam) > tol:
            raise DiagonalizationFailure(
                f"off-diagonal leakage {_leakage(basis, fam):.3e} exceeds {tol:.1e}")
    eig = np.array([np.einsum("il,ij,jl->l", basis.conj(), s, basis) for s in fam])
    return JointSpectrum(basis, eig, row)


@dataclass(frozen=True)
class ProductTerm:
    weight: float
    vec_a: np.ndarray
    vec_b: np.ndarray
    row: int | None = None

    def operator(self) -> np.ndarray:
        a = np.outer(self.vec_a, self.vec_a.conj())
        b = np.outer(self.vec_b, self.vec_b.conj())
        return self.weight * np.kron(a, b)


@dataclass(frozen=True, eq=False)
class SeparableDecomposition:
    """Weighted pure product terms whose sum is the decomposed state."""

    dim_a: int
    dim_b: int
    terms: tuple[ProductTerm, ...] = field(default_factory=tuple)

    def reconstruct(self) -> np.ndarray:
        d = self.dim_a * self.dim_b
        out = np.zeros((d, d), dtype=np.complex128)
        for t in self.terms:
            out += t.operator()
        return out

    def row_sum(self, k: int) -> np.ndarray:
        """Sum of the terms generated by factor row ``k``."""
        d = self.dim_a * self.dim_b
        out = np.zeros((d, d), dtype=np.complex128)
        for t in self.terms:
            if t.row == k:
                out += t.operator()
        return out


def _is_scalar(s: np.ndarray, tol: float) -> bool:
    n = s.shape[0]
    return fro(s - (np.trace(s) / n) * np.eye(n)) <= tol * max(1.0, fro(s))


def separable_decomposition(factor: BlockFactor, tol: float = DEFAULT_TOL,
                            seed: int = 0) -> SeparableDecomposition:
    """Decompose the state of a super-SPPT ``factor`` into at most ``M*N`` pure product terms.

    Terms are ordered by row ``k`` and then by eigenvector ``l``; terms
    with weight below ``tol * ||rho||_F`` are dropped. A row whose couplings
    are all scalar (in particular the last row) uses the eigenvectors of
    ``X_k X_k^dag`` so that its B-vectors come out orthogonal.
    """
    ok, residual = is_super_sppt(factor, tol)
    if not ok:
        raise NotSuperSPPT(f"super-SPPT residual {residual:.3e} exceeds {tol:.1e}")
    m, n = factor.dim_a, factor.dim_b
    cut = tol * fro(gram_blocks(factor))
    terms: list[ProductTerm] = []
    for k in range(m):
        family = factor.row_family(k)
        x = factor.X[k]
        if all(_is_scalar(s, tol) for s in family):
            _, vecs = np.linalg.eigh(x @ dagger(x))
        else:
            vecs = joint_eigenbasis(family, tol, seed, row=k).vectors
        for l in range(n):
            u = vecs[:, l]
            psi = np.zeros(m, dtype=np.complex128)
            psi[k] = 1.0
            for i in range(k + 1, m):
                psi[i] = np.conj(u.conj() @ factor.S[(k, i)] @ u)
            v = dagger(x) @ u
            na, nb = np.linalg.norm(psi), np.linalg.norm(v)
            weight = float(na ** 2 * nb ** 2)
            if weight < cut or nb == 0.0:
                continue
            terms.append(ProductTerm(weight, psi / na, v / nb, k))
    return SeparableDecomposition(m, n, tuple(terms))


@dataclass(frozen=True)
class VerificationReport:
    residual: float
    min_weight: float
    max_norm_defect: float
    term_count: int
    tol: float
    passed: bool
    messages: tuple[str, ...] = ()


def verify_decomposition(decomp: SeparableDecomposition, rho: BipartiteState,
                         tol: float = DEFAULT_TOL) -> VerificationReport:
    """Check ``sum_t w_t (a_t a_t^dag) (x) (b_t b_t^dag) == rho`` directly.

    Passes iff the relative Frobenius residual is at most ``tol`` and no
    weight is negative. Unit-norm defects of the vectors are reported but
    do not fail the check.
    """
    if (decomp.dim_a, decomp.dim_b) != (rho.dim_a, rho.dim_b):
        raise DimensionMismatch(
            f"decomposition is {decomp.dim_a}x{decomp.dim_b}, state is {rho.dim_a}x{rho.dim_b}")
    messages = []
    for idx, t in enumerate(decomp.terms):
        if len(t.vec_a) != rho.dim_a or len(t.vec_b) != rho.dim_b:
            raise DimensionMismatch(f"term {idx} has vectors of the wrong length")
    scale = fro(rho.matrix)
    diff = fro(decomp.reconstruct() - rho.matrix)
    residual = diff / scale if scale > 0 else diff
    weights = [t.weight for t in decomp.terms]
    min_weight = min(weights) if weights else 0.0
    defects = [max(abs(np.linalg.norm(t.vec_a) - 1), abs(np.linalg.norm(t.vec_b) - 1))
               for t in decomp.terms]
    max_defect = float(max(defects)) if defects else 0.0

    negative = [idx for idx, w in enumerate(weights) if w < 0]
    if negative:
        messages.append(f"negative weight in terms {negative}")
    if residual > tol:
        messages.append(f"reconstruction residual {residual:.3e} exceeds {tol:.1e}")
    if max_defect > 1e-9:
        messages.append(f"vectors deviate from unit norm by up to {max_defect:.3e}")
    passed = not negative and residual <= tol
    return VerificationReport(float(residual), float(min_weight), max_defect,
                              len(decomp.terms), tol, passed, tuple(messages))
