import numpy as np
import pytest

from sppt.factorization import BlockFactor
from sppt.linalg import random_unitary
from sppt.states import BipartiteState, from_factor


def basis_dependent_factor() -> BlockFactor:
    x1 = np.array([[2, 1], [1, -1]])
    s = np.array([[0, 1], [-1, 0]])
    return BlockFactor(2, 2, (x1, np.eye(2)), {(0, 1): s})


def random_hermitian(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return g + g.conj().T


def random_psd(n, rank, rng):
    g = rng.standard_normal((rank, n)) + 1j * rng.standard_normal((rank, n))
    return g.conj().T @ g


def random_probs(size, rng):
    return rng.dirichlet(np.ones(size))


def random_sigma(n, rng):
    p = random_psd(n, n, rng)
    return p / np.trace(p).real


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def basis_dependent():
    f = basis_dependent_factor()
    return from_factor(f), f


@pytest.fixture
def unitary(rng):
    return lambda n: random_unitary(n, rng)


def maximally_mixed(m, n) -> BipartiteState:
    return BipartiteState(m, n, np.eye(m * n) / (m * n))
