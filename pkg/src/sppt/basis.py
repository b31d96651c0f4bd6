"""Local unitaries and a randomized search for an SPPT-making A-basis.

The search samples Haar-random bases only. A failed search means "not found
in the sample" and says nothing about existence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .classification import Classification, classify
from .errors import InvalidInput, NumericalError, OutOfRange
from .linalg import DEFAULT_TOL, check_unitary, dagger, random_unitary
from .states import BipartiteState

HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)


def local_unitary_A(rho: BipartiteState, u: np.ndarray) -> BipartiteState:
    """``(U (x) I) rho (U^dag (x) I)``."""
    u = check_unitary(u, rho.dim_a)
    w = np.kron(u, np.eye(rho.dim_b))
    return rho.with_matrix(w @ rho.matrix @ dagger(w))


def local_unitary_B(rho: BipartiteState, u: np.ndarray) -> BipartiteState:
    """``(I (x) U) rho (I (x) U^dag)``."""
    u = check_unitary(u, rho.dim_b)
    w = np.kron(np.eye(rho.dim_a), u)
    return rho.with_matrix(w @ rho.matrix @ dagger(w))


@dataclass(frozen=True, eq=False)
class SearchResult:
    """Outcome of :func:`random_basis_search`.

    ``basis``/``classification``/``trial`` describe the first success and
    are ``None`` when nothing was found. ``best_*`` always describe the
    lowest-residual trial seen.
    """

    basis: np.ndarray | None
    classification: Classification | None
    trial: int | None
    best_basis: np.ndarray
    best_classification: Classification
    best_trial: int
    trials_run: int

    @property
    def found(self) -> bool:
        return self.basis is not None


def _target_residual(c: Classification, target: str) -> float:
    return c.sppt_residual if target == "sppt" else max(c.sppt_residual, c.ssppt_residual)


def _hit(c: Classification, target: str) -> bool:
    return c.sppt if target == "sppt" else c.super_sppt


def random_basis_search(rho: BipartiteState, trials: int, tol: float = DEFAULT_TOL,
                        seed: int = 0,
                        target: Literal["sppt", "super_sppt"] = "sppt") -> SearchResult:
    """Classify ``rho`` in up to ``trials`` random A-bases and stop at the first hit.

    Trial ``t`` (0-based) uses the ``t``-th unitary drawn from
    ``default_rng(seed)``, so results depend only on ``(seed, trials)``.
    Bases in which the factorization fails numerically are skipped.
    """
    if trials < 1:
        raise OutOfRange(f"trials must be >= 1, got {trials}")
    if target not in ("sppt", "super_sppt"):
        raise InvalidInput(f"unknown target {target!r}")
    rng = np.random.default_rng(seed)
    best: tuple[float, int, np.ndarray, Classification] | None = None
    last_error: Exception | None = None
    for t in range(trials):
        u = random_unitary(rho.dim_a, rng)
        try:
            c = classify(rho, u, tol)
        except NumericalError as exc:
            last_error = exc
            continue
        score = _target_residual(c, target)
        if best is None or score < best[0]:
            best = (score, t, u, c)
        if _hit(c, target):
            return SearchResult(u, c, t, u, c, t, t + 1)
    if best is None:
        raise last_error  # every trial failed numerically
    return SearchResult(None, None, None, best[2], best[3], best[1], trials)
