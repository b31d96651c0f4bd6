import numpy as np
import pytest

from sppt.classification import is_ppt
from sppt.decomposition import (
    ProductTerm,
    SeparableDecomposition,
    joint_eigenbasis,
    separable_decomposition,
    verify_decomposition,
)
from sppt.errors import DimensionMismatch, NotCommutingFamily, NotSuperSPPT
from sppt.factorization import BlockFactor, block_cholesky
from sppt.linalg import random_unitary
from sppt.states import BipartiteState, random_super_sppt, werner

from conftest import maximally_mixed


def _match_up_to_permutation(got, expected, atol):
    remaining = list(expected)
    for g in got:
        idx = int(np.argmin([abs(g - e) for e in remaining]))
        assert abs(g - remaining[idx]) <= atol
        remaining.pop(idx)


def test_joint_eigenbasis_identity():
    js = joint_eigenbasis([np.eye(3)])
    np.testing.assert_allclose(js.vectors.conj().T @ js.vectors, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(js.eigenvalues, np.ones((1, 3)), atol=1e-14)


def test_joint_eigenbasis_diagonal_family():
    js = joint_eigenbasis([np.diag([1.0, 2.0]), np.diag([3.0, 3.0])])
    # projectors must be the computational ones
    for p in js.projectors:
        assert np.isclose(abs(p[0, 0]), 1) or np.isclose(abs(p[1, 1]), 1)
    _match_up_to_permutation(js.eigenvalues[0], [1, 2], 1e-12)
    np.testing.assert_allclose(js.eigenvalues[1], [3, 3], atol=1e-12)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("degenerate", [False, True])
def test_joint_eigenbasis_recovers_construction(seed, degenerate):
    r = np.random.default_rng(seed)
    n = 4
    v = random_unitary(n, r)
    lams = [r.standard_normal(n) + 1j * r.standard_normal(n) for _ in range(3)]
    if degenerate:
        lams[0][1] = lams[0][0]
        lams[1][1] = lams[1][0]
        lams[2][1] = lams[2][0]
        lams[0][3] = lams[0][2]
    family = [(v * lam) @ v.conj().T for lam in lams]
    js = joint_eigenbasis(family, seed=seed)
    # pair columns by the joint signature, then compare each member's spectrum
    for s_idx, lam in enumerate(lams):
        _match_up_to_permutation(js.eigenvalues[s_idx], lam, 1e-9)
    total = sum(js.projectors)
    np.testing.assert_allclose(total, np.eye(n), atol=1e-10)
    for a, pa in enumerate(js.projectors):
        assert np.trace(pa).real == pytest.approx(1, abs=1e-10)
        for b, pb in enumerate(js.projectors):
            np.testing.assert_allclose(pa @ pb, pa if a == b else 0, atol=1e-10)
    for s, lam_row in zip(family, js.eigenvalues):
        recon = sum(l * p for l, p in zip(lam_row, js.projectors))
        assert np.linalg.norm(s - recon) <= 1e-9 * max(1, np.linalg.norm(s))


@pytest.mark.parametrize("seed", range(5))
def test_joint_eigenbasis_recursive_refinement(monkeypatch, seed):
    # skip the plain random-mixing attempts so the recursive splitting does all the work
    import sppt.decomposition as dec
    monkeypatch.setattr(dec, "MAX_ATTEMPTS", 0)
    r = np.random.default_rng(seed)
    v = random_unitary(5, r)
    family = [(v * np.array([1.0, 1.0, 1.0, 2.0, 2.0])) @ v.conj().T,
              (v * np.array([0.5j, 0.5j, 1.0, 1.0, 3.0])) @ v.conj().T,
              (v * np.array([4.0, -1.0, 0.0, 0.0, 0.0])) @ v.conj().T]
    js = joint_eigenbasis(family, seed=seed)
    for s, lam_row in zip(family, js.eigenvalues):
        recon = sum(l * p for l, p in zip(lam_row, js.projectors))
        assert np.linalg.norm(s - recon) <= 1e-9 * max(1, np.linalg.norm(s))
    np.testing.assert_allclose(js.vectors.conj().T @ js.vectors, np.eye(5), atol=1e-12)


def test_joint_eigenbasis_rejects_non_commuting():
    with pytest.raises(NotCommutingFamily):
        joint_eigenbasis([np.array([[0, 1], [0, 0]])])
    with pytest.raises(NotCommutingFamily):
        joint_eigenbasis([np.diag([1.0, 2.0]), np.array([[0, 1.0], [1, 0]])])


def test_decompose_maximally_mixed():
    m, n = 2, 3
    rho = maximally_mixed(m, n)
    d = separable_decomposition(block_cholesky(rho))
    assert len(d.terms) == m * n
    for t in d.terms:
        assert t.weight == pytest.approx(1 / (m * n))
        assert np.isclose(np.max(np.abs(t.vec_a)), 1)
        assert np.isclose(np.max(np.abs(t.vec_b)), 1)
    assert verify_decomposition(d, rho, 1e-12).passed


def test_decompose_basis_dependent(basis_dependent):
    rho, f = basis_dependent
    d = separable_decomposition(f)
    first_row = [t for t in d.terms if t.row == 0]
    assert len(first_row) == 2
    # S has eigenvalues +-i, so psi = |1> + conj(lambda)|2> ~ |1> -+ i|2>
    seen = set()
    for t in first_row:
        a = t.vec_a / t.vec_a[0]
        assert abs(a[1] - 1j) < 1e-12 or abs(a[1] + 1j) < 1e-12
        seen.add(round(a[1].imag))
    assert seen == {-1, 1}
    report = verify_decomposition(d, rho, 1e-12)
    assert report.passed, report
    assert verify_decomposition(separable_decomposition(block_cholesky(rho)), rho, 1e-12).passed


@pytest.mark.parametrize("seed", range(10))
def test_decompose_random_3x3(seed):
    rho, f = random_super_sppt(3, 3, seed)
    assert verify_decomposition(separable_decomposition(f), rho, 1e-8).passed
    assert verify_decomposition(separable_decomposition(block_cholesky(rho)), rho, 1e-8).passed


@pytest.mark.parametrize("seed", range(12))
def test_decomposition_structure(seed):
    r = np.random.default_rng(seed)
    m, n = (int(v) for v in r.integers(2, 5, size=2))
    ranks = [int(v) for v in r.integers(1, n + 1, size=m)]
    rho, f = random_super_sppt(m, n, seed, ranks)
    d = separable_decomposition(f)
    scale = np.linalg.norm(rho.matrix)
    assert len(d.terms) <= m * n
    assert all(t.weight >= 0 for t in d.terms)
    for t in d.terms:
        assert np.all(t.vec_a[:t.row] == 0)
    # row sums reproduce rho_k = sum_{i,j>=k} |i><j| (x) X_k^dag S_ki^dag S_kj X_k
    for k in range(m):
        rho_k = np.zeros_like(rho.matrix)
        x = f.X[k]
        for i in range(k, m):
            for j in range(k, m):
                blk = x.conj().T @ f.coupling(k, i).conj().T @ f.coupling(k, j) @ x
                rho_k[i * n:(i + 1) * n, j * n:(j + 1) * n] = blk
        assert np.linalg.norm(d.row_sum(k) - rho_k) <= 1e-9 * scale
    assert np.linalg.norm(d.reconstruct() - rho.matrix) <= 1e-9 * scale
    assert is_ppt(rho)[0]


def test_decompose_rejects_non_super_sppt():
    with pytest.raises(NotSuperSPPT):
        separable_decomposition(block_cholesky(werner(0.6)))


def test_verify_werner_three_quarters():
    rho = werner(0.75)
    assert verify_decomposition(separable_decomposition(block_cholesky(rho)), rho).passed


def test_verify_detects_negative_weight():
    rho = maximally_mixed(2, 2)
    d = separable_decomposition(block_cholesky(rho))
    t0 = d.terms[0]
    bad = SeparableDecomposition(2, 2, (ProductTerm(-t0.weight, t0.vec_a, t0.vec_b, t0.row),) + d.terms[1:])
    report = verify_decomposition(bad, rho)
    assert not report.passed
    assert report.min_weight < 0
    assert any("negative weight" in msg for msg in report.messages)


def test_verify_dimension_mismatch():
    d = separable_decomposition(block_cholesky(maximally_mixed(2, 2)))
    with pytest.raises(DimensionMismatch):
        verify_decomposition(d, maximally_mixed(2, 3))


def test_zero_weight_terms_are_dropped():
    # rank-one pivots leave n - 1 exact-zero B-vectors per row
    rho, f = random_super_sppt(2, 3, 5, ranks=[1, 1])
    d = separable_decomposition(f)
    assert len(d.terms) == 2
    assert verify_decomposition(d, rho, 1e-10).passed


def test_decomposition_deterministic():
    _, f = random_super_sppt(3, 3, 2)
    a, b = separable_decomposition(f), separable_decomposition(f)
    for ta, tb in zip(a.terms, b.terms):
        assert ta.weight == tb.weight
        np.testing.assert_array_equal(ta.vec_a, tb.vec_a)
        np.testing.assert_array_equal(ta.vec_b, tb.vec_b)


def test_state_with_unnormalized_weights():
    rho = BipartiteState(2, 2, 3 * np.eye(4), normalized=False)
    d = separable_decomposition(block_cholesky(rho))
    assert sum(t.weight for t in d.terms) == pytest.approx(12)
