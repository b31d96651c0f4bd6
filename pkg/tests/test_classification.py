import numpy as np
import pytest

from sppt.basis import HADAMARD
from sppt.classification import Classification, classify, is_ppt, is_sppt, is_super_sppt, sppt_residuals
from sppt.errors import InternalError
from sppt.factorization import BlockFactor, block_cholesky, gauge
from sppt.linalg import random_unitary
from sppt.states import (
    BipartiteState,
    cc_state,
    from_factor,
    product_state,
    random_density,
    random_super_sppt,
    werner,
)

from conftest import random_sigma

WERNER_SWEEP = [0.5, 0.6, 0.7, 0.75, 0.8, 0.9, 1.0]


def test_is_ppt_werner():
    ok, lam = is_ppt(werner(0.4))
    assert not ok and lam == pytest.approx(-0.1, abs=1e-12)
    assert is_ppt(werner(0.75))[0]


def test_is_ppt_product_state(rng):
    rho = product_state(random_sigma(3, rng), random_sigma(2, rng))
    assert is_ppt(rho)[0]


def test_is_sppt_examples(basis_dependent):
    _, f = basis_dependent
    assert is_sppt(f)[0]
    assert not is_sppt(block_cholesky(werner(0.6)))[0]
    assert is_sppt(block_cholesky(werner(0.75)))[0]


def test_is_super_sppt_examples(basis_dependent):
    _, f = basis_dependent
    ok, res = is_super_sppt(f)
    assert ok and res <= 1e-15
    # S = [[0, 0], [1/sqrt2, 0]]: [S, S^dag] = diag(-1/2, 1/2), norm 1/sqrt2, ||S||^2 = 1/2 < 1
    ok, res = is_super_sppt(block_cholesky(werner(1.0)))
    assert not ok
    assert res == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    ok, res = is_super_sppt(random_super_sppt(3, 3, 4)[1])
    assert ok and res <= 1e-10


def test_super_sppt_residual_zero_without_triples():
    assert is_super_sppt(BlockFactor(1, 3, (np.eye(3),))) == (True, 0.0)


def test_sppt_residual_forms_agree(rng):
    x = [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(3)]
    s = {k: rng.standard_normal((3, 3)) for k in [(0, 1), (0, 2), (1, 2)]}
    comp, op = sppt_residuals(BlockFactor(3, 3, tuple(x), s))
    assert comp > 1e-3 and op > 1e-3
    assert op >= comp - 1e-12  # the operator form contains every block defect


def test_classify_werner_06():
    c = classify(werner(0.6))
    assert (c.ppt, c.sppt, c.super_sppt) == (True, False, False)
    np.testing.assert_array_equal(c.basis, np.eye(2))


def test_classify_basis_dependent_basis_dependence(basis_dependent):
    rho, _ = basis_dependent
    assert classify(rho).sppt
    c = classify(rho, HADAMARD)
    assert not c.sppt and c.ppt
    np.testing.assert_allclose(c.basis, HADAMARD)


@pytest.mark.parametrize("seed", range(5))
def test_cc_states_super_sppt_in_any_basis(seed):
    r = np.random.default_rng(seed)
    m, n = 3, 3
    rho = cc_state(r.dirichlet(np.ones(m * n)).reshape(m, n), random_unitary(m, r), random_unitary(n, r))
    for _ in range(5):
        assert classify(rho, random_unitary(m, r), tol=1e-8).super_sppt


@pytest.mark.parametrize("seed", range(20))
def test_implication_chain(seed):
    r = np.random.default_rng(seed)
    m, n = r.integers(2, 4, size=2)
    for rho in (random_density(m, n, seed), random_super_sppt(m, n, seed)[0]):
        c = classify(rho, random_unitary(m, r))
        assert not c.super_sppt or c.sppt
        assert not c.sppt or c.ppt


def test_chain_violation_is_internal_error():
    with pytest.raises(InternalError):
        Classification(False, -1.0, True, 0.0, True, 0.0, np.eye(2), 1e-9)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("normal", [True, False])
def test_two_by_n_full_rank_sppt_iff_normal(seed, normal):
    r = np.random.default_rng(seed)
    n = 3
    x1 = r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))
    x2 = r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))
    if normal:
        u = random_unitary(n, r)
        s = (u * (r.standard_normal(n) + 1j * r.standard_normal(n))) @ u.conj().T
    else:
        s = r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))
    f = block_cholesky(from_factor(BlockFactor(2, n, (x1, x2), {(0, 1): s})))
    s_fit = f.S[(0, 1)]
    is_normal = np.linalg.norm(s_fit @ s_fit.conj().T - s_fit.conj().T @ s_fit) <= 1e-9 * max(
        1, np.linalg.norm(s_fit) ** 2)
    assert is_sppt(f)[0] == is_normal == normal


@pytest.mark.parametrize("seed", range(10))
def test_gauge_invariance(seed):
    r = np.random.default_rng(seed)
    m, n = 3, 2
    if seed % 2:
        _, f = random_super_sppt(m, n, seed)
    else:
        f = BlockFactor(m, n, tuple(r.standard_normal((n, n)) for _ in range(m)),
                        {k: r.standard_normal((n, n)) for k in [(0, 1), (0, 2), (1, 2)]})
    g = gauge(f, [random_unitary(n, r) for _ in range(m)])
    for check in (is_sppt, is_super_sppt):
        (a, ra), (b, rb) = check(f), check(g)
        assert a == b
        assert abs(ra - rb) <= 1e-9


@pytest.mark.parametrize("c", [1e-3, 7.0, 250.0])
def test_scale_invariance(c, basis_dependent):
    rho, _ = basis_dependent
    for state in (rho, werner(0.6), random_super_sppt(3, 2, 1)[0]):
        a = classify(state)
        b = classify(BipartiteState(state.dim_a, state.dim_b, c * state.matrix, False))
        assert (a.ppt, a.sppt, a.super_sppt) == (b.ppt, b.sppt, b.super_sppt)
        assert b.sppt_residual == pytest.approx(a.sppt_residual, rel=1e-6, abs=1e-14)
        assert b.ssppt_residual == pytest.approx(a.ssppt_residual, rel=1e-6, abs=1e-14)


@pytest.mark.parametrize("p", WERNER_SWEEP)
def test_werner_sweep(p):
    assert classify(werner(p)).sppt == (p == 0.75)


@pytest.mark.parametrize("p", [0.6, 0.9])
def test_werner_not_sppt_in_random_bases(p):
    r = np.random.default_rng(17)
    rho = werner(p)
    for _ in range(50):
        assert not classify(rho, random_unitary(2, r)).sppt


def test_ppt_invariant_under_local_unitary_sppt_is_not(basis_dependent):
    rho, _ = basis_dependent
    verdicts = [classify(rho, basis) for basis in (np.eye(2), HADAMARD)]
    assert all(c.ppt for c in verdicts)
    assert verdicts[0].sppt != verdicts[1].sppt


def test_marginal_flag():
    # a normal coupling nudged off normality by eps gives an SPPT defect of order eps
    eps = 2e-9
    s = np.diag([1.0, -1.0]) + eps * np.array([[0, 1], [0, 0]])
    f = BlockFactor(2, 2, (np.eye(2), np.eye(2)), {(0, 1): s})
    c = classify(from_factor(f))
    assert 1e-10 < c.sppt_residual <= 1e-8
    assert "sppt" in c.marginal
    assert c.sppt == (c.sppt_residual <= 1e-9)
