import numpy as np
import pytest

from bosent.fock_space import basis, extended_space
from bosent.partial_transpose import (ExtendedCapError, embed, extended_partial_transpose,
                                      extended_partial_transpose_second, realign_block,
                                      transpose_first_party)
from bosent.states import (DensityMatrix, block_diagonal_project, pure_state, pure_to_density,
                           random_density, random_separable)

from conftest import noon, shapes


def pt_by_definition(rho):
    """Extended partial transpose assembled entry by entry from the labelled sum."""
    fb = rho.basis
    sp = extended_space(fb)
    out = np.zeros((sp.dim, sp.dim), dtype=complex)
    dense = rho.to_dense()
    for i in range(fb.dim):
        k, s, sr = fb.labels_of_flat(i)
        for j in range(fb.dim):
            l, t, tr = fb.labels_of_flat(j)
            row = sp.left_index(l, t) * sp.D2 + sp.right_index(fb.N - k, sr)
            col = sp.left_index(k, s) * sp.D2 + sp.right_index(fb.N - l, tr)
            out[row, col] += dense[i, j]
    return out


def test_diagonal_state_offdiagonal_realignment_is_zero():
    fb = basis(3, 3, 1)
    rho = block_diagonal_project(random_density(fb, 3, seed=1))
    assert not np.any(realign_block(rho, 0, 2))


def test_noon_realignment():
    b = realign_block(noon(2), 2, 0)
    assert b.shape == (1, 1) and b[0, 0] == pytest.approx(0.5)


def test_product_minor_realignment():
    fb = basis(4, 4, 2)
    rng = np.random.default_rng(0)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    a = a @ a.conj().T
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = b @ b.conj().T
    minor = np.kron(a, b)
    rho = DensityMatrix(fb, {(2, 2): minor / np.trace(minor).real})
    r = realign_block(rho, 2, 2)
    np.testing.assert_allclose(r, np.kron(a.T, b) / np.trace(minor).real, atol=1e-14)
    assert np.linalg.eigvalsh(r)[0] >= -1e-12


def test_realign_hermitian_pairing():
    rho = random_density(basis(3, 4, 2), 6, seed=4)
    for k in range(4):
        for l in range(4):
            np.testing.assert_allclose(realign_block(rho, l, k), realign_block(rho, k, l).conj().T)


def test_fock_diagonal_extended_equals_embedding():
    fb = basis(2, 3, 1)
    dense = np.diag(np.linspace(1, 2, fb.dim))
    rho = DensityMatrix.from_dense(fb, dense / np.trace(dense))
    np.testing.assert_array_equal(extended_partial_transpose(rho).matrix, embed(rho).matrix)


def test_bell_like_spectrum():
    fb = basis(1, 2, 1)
    rho = pure_to_density(pure_state(fb, [1, 1], normalize=True))
    vals = np.linalg.eigvalsh(extended_partial_transpose(rho).matrix)
    np.testing.assert_allclose(vals, [-0.5, 0.5, 0.5, 0.5], atol=1e-15)


def test_matches_entrywise_definition():
    for N, M, m in [(1, 2, 1), (2, 3, 1), (3, 3, 2), (2, 4, 2), (2, 3, 0)]:
        fb = basis(N, M, m)
        rho = random_density(fb, min(3, fb.dim), seed=N + M + m)
        np.testing.assert_array_equal(extended_partial_transpose(rho).matrix, pt_by_definition(rho))


def test_trace_hermiticity_and_involution():
    for seed, (N, M, m) in enumerate(shapes(3, 4)[:50]):
        rho = random_density(basis(N, M, m), 2, seed=seed)
        op = extended_partial_transpose(rho)
        assert np.trace(op.matrix).real == pytest.approx(1, abs=1e-12)
        np.testing.assert_array_equal(op.matrix, op.matrix.conj().T)
        np.testing.assert_array_equal(transpose_first_party(op).matrix, embed(rho).matrix)


def test_separable_states_stay_positive():
    for seed in range(10):
        rho = random_separable(basis(3, 3, 1), 20, seed)
        assert np.linalg.eigvalsh(extended_partial_transpose(rho).matrix)[0] >= -1e-10
        rho = random_separable(basis(3, 4, 2), 20, seed)
        assert np.linalg.eigvalsh(extended_partial_transpose(rho).matrix)[0] >= -1e-10


def test_sector_restriction_reproduces_realignment():
    rho = random_density(basis(3, 4, 2), 5, seed=9)
    op = extended_partial_transpose(rho)
    N = 3
    for k in range(N + 1):
        for l in range(N + 1):
            sub = op.sector_block(l, N - k, k, N - l)
            np.testing.assert_array_equal(sub, realign_block(rho, k, l))
            np.testing.assert_allclose(np.linalg.svd(sub, compute_uv=False),
                                       np.linalg.svd(realign_block(rho, k, l), compute_uv=False))


def test_second_party_transpose_same_spectrum_modulus():
    rho = random_density(basis(3, 3, 1), 4, seed=2)
    a = np.abs(np.linalg.eigvalsh(extended_partial_transpose(rho).matrix)).sum()
    b = np.abs(np.linalg.eigvalsh(extended_partial_transpose_second(rho).matrix)).sum()
    assert a == pytest.approx(b, abs=1e-12)


def test_cap():
    rho = random_density(basis(4, 4, 2), 2, seed=0)
    with pytest.raises(ExtendedCapError, match="15\\*15"):
        extended_partial_transpose(rho, cap=100)
