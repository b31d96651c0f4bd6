"""Bipartite density operators and their constructors.

States may be unnormalized; ``normalized`` only records whether the trace
is (and must stay) one.  Random constructors draw from
``numpy.random.default_rng(seed)`` (PCG64), so a seed fixes the output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidProbability,
    NotDensityMatrix,
    NotHermitian,
    NotPSD,
    OutOfRange,
)
from .factorization import BlockFactor, gram_blocks
from .linalg import (
    HERMITIAN_TOL,
    as_matrix,
    block,
    check_unitary,
    dagger,
    fro,
    hermitian_defect,
    random_unitary,
)

PSD_TOL = 1e-9
TRACE_TOL = 1e-10
PROB_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density operator on ``C^dim_a (x) C^dim_b`` in the computational product basis."""

    dim_a: int
    dim_b: int
    matrix: np.ndarray
    normalized: bool = True

    def __post_init__(self) -> None:
        m = as_matrix(self.matrix, name="state matrix")
        d = self.dim_a * self.dim_b
        if self.dim_a < 1 or self.dim_b < 1 or m.shape != (d, d):
            raise DimensionMismatch(
                f"state matrix must be {d}x{d} for a {self.dim_a}x{self.dim_b} system, got {m.shape}")
        if hermitian_defect(m) > HERMITIAN_TOL:
            raise NotHermitian("state matrix is not Hermitian")
        scale = fro(m)
        lam_min = float(np.linalg.eigvalsh(0.5 * (m + dagger(m)))[0])
        if lam_min < -PSD_TOL * scale:
            raise NotPSD(f"state matrix has eigenvalue {lam_min:.3e}")
        if self.normalized and abs(np.trace(m).real - 1.0) > TRACE_TOL:
            raise NotDensityMatrix(f"normalized state has trace {np.trace(m).real!r}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dims(self) -> tuple[int, int]:
        return self.dim_a, self.dim_b

    def block(self, i: int, j: int) -> np.ndarray:
        return block(self.matrix, i, j, self.dim_b)

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def normalize(self) -> "BipartiteState":
        """Rescaled copy with unit trace."""
        return BipartiteState(self.dim_a, self.dim_b, self.matrix / self.trace(), True)

    def with_matrix(self, matrix: np.ndarray) -> "BipartiteState":
        return BipartiteState(self.dim_a, self.dim_b, matrix, self.normalized)


def werner(p: float) -> BipartiteState:
    """Two-qubit Werner state ``W_p``; PPT exactly for ``p >= 1/2``, ``W_{3/4} = I/4``."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"p must lie in [0, 1], got {p}")
    w = np.zeros((4, 4), dtype=np.complex128)
    w[0, 0] = w[3, 3] = 2 * p
    w[1, 1] = w[2, 2] = 3 - 2 * p
    w[1, 2] = w[2, 1] = 4 * p - 3
    return BipartiteState(2, 2, w / 6.0, True)


def _check_probs(probs, shape=None) -> np.ndarray:
    p = np.asarray(probs, dtype=float)
    if shape is not None and p.shape != shape:
        raise DimensionMismatch(f"probabilities must have shape {shape}, got {p.shape}")
    if not np.all(np.isfinite(p)) or np.any(p < 0) or abs(p.sum() - 1.0) > PROB_TOL:
        raise InvalidProbability("probabilities must be non-negative and sum to 1")
    return p


def _check_density(sigma, n: int, idx: int) -> np.ndarray:
    s = as_matrix(sigma, name=f"sigma[{idx}]")
    if s.shape != (n, n):
        raise DimensionMismatch(f"sigma[{idx}] must be {n}x{n}, got {s.shape}")
    if hermitian_defect(s) > HERMITIAN_TOL:
        raise NotDensityMatrix(f"sigma[{idx}] is not Hermitian")
    if np.linalg.eigvalsh(0.5 * (s + dagger(s)))[0] < -PSD_TOL * max(fro(s), 1.0):
        raise NotDensityMatrix(f"sigma[{idx}] is not positive semidefinite")
    if abs(np.trace(s).real - 1.0) > TRACE_TOL:
        raise NotDensityMatrix(f"sigma[{idx}] does not have unit trace")
    return s


def cq_state(probs: Sequence[float], sigmas: Sequence[np.ndarray],
             basis_a: np.ndarray | None = None) -> BipartiteState:
    """Classical-quantum state ``sum_n p_n |e_n><e_n| (x) sigma_n``.

    ``basis_a`` holds the vectors ``e_n`` as columns (identity if omitted).
    """
    if len(sigmas) == 0:
        raise DimensionMismatch("need at least one sigma")
    m = len(sigmas)
    p = _check_probs(probs, (m,))
    n = as_matrix(sigmas[0], name="sigma[0]").shape[0]
    sig = [_check_density(s, n, k) for k, s in enumerate(sigmas)]
    u = np.eye(m, dtype=np.complex128) if basis_a is None else check_unitary(basis_a, m, name="basis_a")
    rho = np.zeros((m * n, m * n), dtype=np.complex128)
    for k in range(m):
        e = u[:, k]
        rho += p[k] * np.kron(np.outer(e, e.conj()), sig[k])
    return BipartiteState(m, n, rho, True)


def cc_state(joint, basis_a: np.ndarray | None = None,
             basis_b: np.ndarray | None = None) -> BipartiteState:
    """Classical-classical state ``sum_nm p_nm |e_n><e_n| (x) |f_m><f_m|``."""
    p = np.asarray(joint, dtype=float)
    if p.ndim != 2 or min(p.shape) < 1:
        raise DimensionMismatch(f"joint distribution must be a 2-D table, got shape {p.shape}")
    p = _check_probs(p, p.shape)
    m, n = p.shape
    u = np.eye(m, dtype=np.complex128) if basis_a is None else check_unitary(basis_a, m, name="basis_a")
    v = np.eye(n, dtype=np.complex128) if basis_b is None else check_unitary(basis_b, n, name="basis_b")
    # (U (x) V) diag(p) (U (x) V)^dag
    w = np.kron(u, v)
    rho = (w * p.reshape(-1)) @ dagger(w)
    return BipartiteState(m, n, rho, True)


def from_factor(factor: BlockFactor) -> BipartiteState:
    """Unnormalized state ``X^dag X`` assembled block by block from ``factor``."""
    return BipartiteState(factor.dim_a, factor.dim_b, gram_blocks(factor), False)


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_super_sppt(m: int, n: int, seed: int,
                      ranks: int | Sequence[int] | None = None) -> tuple[BipartiteState, BlockFactor]:
    """Random state whose factor satisfies the super-SPPT commutation condition.

    Row ``k`` shares one random eigenbasis ``V_k`` among all its couplings
    ``S_ki = V_k L_ki V_k^dag`` (diagonal complex ``L_ki``). ``ranks`` sets
    the rank of each pivot ``X_k`` (full when omitted). A deficient pivot
    has its range spanned by columns of ``V_k``, which keeps the condition
    intact when the state is re-factorized.
    """
    if m < 2 or n < 1:
        raise DimensionMismatch(f"need M >= 2 and N >= 1, got {m}x{n}")
    if ranks is None:
        rank_list = [n] * m
    elif isinstance(ranks, (int, np.integer)):
        rank_list = [int(ranks)] * m
    else:
        rank_list = [int(r) for r in ranks]
    if len(rank_list) != m or any(not 0 <= r <= n for r in rank_list):
        raise DimensionMismatch(f"ranks must be {m} integers in [0, {n}]")

    rng = np.random.default_rng(seed)
    xs = []
    couplings = {}
    for k in range(m):
        v = random_unitary(n, rng)
        for i in range(k + 1, m):
            lam = _complex_gaussian(rng, n)
            couplings[(k, i)] = (v * lam) @ dagger(v)
        r = rank_list[k]
        if r == n:
            x = _complex_gaussian(rng, (n, n))
        else:
            cols = np.sort(rng.permutation(n)[:r])
            x = v[:, cols] @ _complex_gaussian(rng, (r, n))
        xs.append(x)
    factor = BlockFactor(m, n, tuple(xs), couplings)
    return from_factor(factor), factor


def random_density(m: int, n: int, seed: int, rank: int | None = None) -> BipartiteState:
    """Normalized ``G^dag G / tr(G^dag G)`` for a complex Gaussian ``G`` with ``rank`` rows."""
    if m < 1 or n < 1:
        raise DimensionMismatch(f"dimensions must be positive, got {m}x{n}")
    d = m * n
    r = d if rank is None else rank
    if not 1 <= r <= d:
        raise DimensionMismatch(f"rank must lie in [1, {d}], got {r}")
    rng = np.random.default_rng(seed)
    g = _complex_gaussian(rng, (r, d))
    rho = dagger(g) @ g
    return BipartiteState(m, n, rho / np.trace(rho).real, True)


def product_state(sigma_a: np.ndarray, sigma_b: np.ndarray) -> BipartiteState:
    a, b = as_matrix(sigma_a), as_matrix(sigma_b)
    rho = np.kron(a, b)
    return BipartiteState(a.shape[0], b.shape[0], rho, abs(np.trace(rho).real - 1.0) <= TRACE_TOL)
