import numpy as np
import pytest

from bosent.criteria import (Verdict, classify, decide_one_vs_rest, diagonal_minor_class_check,
                             is_ppt, schmidt_decompose)
from bosent.fock_space import basis, extended_space
from bosent.negativity import negativity_oracle
from bosent.states import (DensityMatrix, PolynomialSpec, PureState, StateError,
                           block_diagonal_project, embed_qutrit_block, from_fock_occupation,
                           from_local_polynomials, horodecki_qutrit_state, mix, pure_state,
                           pure_to_density, random_density, random_separable)

from conftest import noon

HORODECKI_A = 0.25


def cross_party_singular_values(psi):
    """SVD of the D1 x D2 coefficient matrix over both parties' full Fock spaces."""
    fb = psi.basis
    sp = extended_space(fb)
    c = np.zeros((sp.D1, sp.D2), dtype=complex)
    for i, amp in enumerate(psi.amplitudes):
        k, s, r = fb.labels_of_flat(i)
        c[sp.left_index(k, s), sp.right_index(fb.N - k, r)] = amp
    return np.linalg.svd(c, compute_uv=False)


def test_schmidt_fock_state():
    d = schmidt_decompose(from_fock_occupation(basis(2, 2, 1), [1, 1]))
    assert d.schmidt_rank == 1 and d.is_product


def test_schmidt_noon():
    fb = basis(2, 2, 1)
    psi = pure_state(fb, [1, 0, 1], normalize=True)
    d = schmidt_decompose(psi)
    assert d.schmidt_rank == 2
    np.testing.assert_allclose(d.singular_values[:3], cross_party_singular_values(psi), atol=1e-15)
    np.testing.assert_allclose(d.singular_values[:2], [2 ** -0.5] * 2)


def test_schmidt_matches_cross_party_matrix(rng):
    for N, M, m in [(3, 4, 2), (2, 3, 1), (4, 4, 3)]:
        fb = basis(N, M, m)
        v = rng.standard_normal(fb.dim) + 1j * rng.standard_normal(fb.dim)
        psi = PureState(fb, v / np.linalg.norm(v))
        sv = schmidt_decompose(psi).singular_values
        ref = cross_party_singular_values(psi)
        np.testing.assert_allclose(sv, ref[:len(sv)], atol=1e-12)
        assert np.sum(sv ** 2) == pytest.approx(1)


def test_schmidt_rejects_unnormalised():
    with pytest.raises(StateError):
        schmidt_decompose(PureState(basis(2, 2, 1), [1, 1, 0]))


def random_polynomial_state(fb, rng):
    k = int(rng.integers(0, fb.N + 1))
    from bosent.fock_space import party_occupations

    def poly(n, modes):
        occs = party_occupations(n, modes)
        picks = rng.choice(len(occs), size=min(len(occs), int(rng.integers(1, 4))), replace=False)
        return PolynomialSpec([(complex(*rng.standard_normal(2)), occs[i]) for i in picks])

    return from_local_polynomials(fb, poly(k, fb.m), poly(fb.N - k, fb.M - fb.m))


def test_polynomial_states_are_products(rng):
    for _ in range(50):
        fb = basis(int(rng.integers(1, 5)), 4, int(rng.integers(1, 4)))
        psi = random_polynomial_state(fb, rng)
        assert schmidt_decompose(psi).schmidt_rank == 1
        assert negativity_oracle(pure_to_density(psi)).total < 1e-10


def test_one_vs_rest_fock_diagonal():
    fb = basis(3, 3, 1)
    occs = list(fb.occupations())
    rho = mix(np.full(len(occs), 1 / len(occs)), [from_fock_occupation(fb, o) for o in occs])
    v = decide_one_vs_rest(rho)
    assert v.verdict is Verdict.SEPARABLE_CERTIFIED
    assert v.certificate.residual(rho) < 1e-12


def test_one_vs_rest_random_products():
    for seed in range(5):
        for fb in (basis(3, 3, 1), basis(3, 3, 2)):
            rho = random_separable(fb, 10, seed)
            v = decide_one_vs_rest(rho)
            assert v.verdict is Verdict.SEPARABLE_CERTIFIED
            assert v.certificate.residual(rho) < 1e-10
            assert all(t.weight > 0 for t in v.certificate.terms)


def test_one_vs_rest_cross_sector_entangled():
    fb = basis(3, 3, 1)
    amps = np.zeros(fb.dim)
    amps[fb.flat_index(*fb.index_of([1, 2, 0]))] = 1
    amps[fb.flat_index(*fb.index_of([0, 2, 1]))] = 1
    rho = pure_to_density(pure_state(fb, amps, normalize=True))
    assert negativity_oracle(rho).total > 0
    assert decide_one_vs_rest(rho).verdict is Verdict.ENTANGLED_NPT


def test_one_vs_rest_wrong_shape():
    with pytest.raises(StateError):
        decide_one_vs_rest(random_density(basis(2, 4, 2), 2, seed=0))


def test_is_ppt_examples():
    rho = block_diagonal_project(random_separable(basis(3, 4, 2), 8, seed=3))
    assert is_ppt(rho)[0]
    ok, diag = is_ppt(noon(2))
    assert not ok and diag.offending_blocks[0][:2] == (0, 2)
    bound = embed_qutrit_block(basis(4, 4, 2), horodecki_qutrit_state(HORODECKI_A))
    assert is_ppt(bound)[0]


def test_is_ppt_flags_npt_minor():
    fb = basis(4, 4, 2)
    phi = np.zeros(9)
    phi[[0, 4, 8]] = 3 ** -0.5
    rho = embed_qutrit_block(fb, np.outer(phi, phi))
    ok, diag = is_ppt(rho)
    assert not ok and diag.minor_min_eigenvalues[2] < -1e-3


def test_ppt_equivalence_small_sample():
    for seed in range(20):
        fb = basis(1 + seed % 4, 2 + seed % 3, 1)
        for rho in (random_density(fb, 2, seed), block_diagonal_project(random_density(fb, 2, seed))):
            assert is_ppt(rho)[0] == (negativity_oracle(rho).total < 1e-9)


def product_minor_state(fb, rng, degenerate=False):
    blocks = {}
    weights = rng.random(fb.N + 1)
    weights /= weights.sum()
    for k in fb.nonempty_sectors():
        s = fb.sector(k)
        mats = []
        for d in (s.d1, s.d2):
            if degenerate:
                mats.append(np.eye(d) / d)
            else:
                a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
                a = a @ a.conj().T
                mats.append(a / np.trace(a).real)
        blocks[(k, k)] = weights[k] * np.kron(*mats)
    blocks = {kl: b / sum(np.trace(v).real for v in blocks.values()) for kl, b in blocks.items()}
    return DensityMatrix(fb, blocks).validate()


def test_diagonal_minor_class_true_cases(rng):
    fb = basis(3, 4, 2)
    occs = list(fb.occupations())
    diag = mix(np.full(len(occs), 1 / len(occs)), [from_fock_occupation(fb, o) for o in occs])
    assert diagonal_minor_class_check(diag)[0]
    for degenerate in (False, True):
        rho = product_minor_state(fb, rng, degenerate)
        ok, adapted = diagonal_minor_class_check(rho)
        assert ok
        v = classify(rho)
        assert v.verdict is Verdict.SEPARABLE_CERTIFIED
        assert v.certificate.residual(rho) < 1e-10


def test_diagonal_minor_class_entangled_projector():
    fb = basis(2, 4, 2)  # sector k=1 is 2 x 2
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    rho = DensityMatrix(fb, {(1, 1): np.outer(bell, bell)}).validate()
    ok, adapted = diagonal_minor_class_check(rho)
    assert not ok and adapted.failed_sectors == (1,)


def test_degenerate_eigenspace_product_basis_search():
    fb = basis(2, 4, 2)
    plus, minus = np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)
    e0, e1 = np.array([1.0, 0]), np.array([0, 1.0])
    vecs = [np.kron(e0, e0), np.kron(e1, plus), np.kron(e1, minus), np.kron(e0, e1)]
    w = [0.4, 0.4, 0.15, 0.05]
    minor = sum(p * np.outer(v, v) for p, v in zip(w, vecs))
    rho = DensityMatrix(fb, {(1, 1): minor}).validate()
    ok, adapted = diagonal_minor_class_check(rho)
    assert ok
    v = classify(rho)
    assert v.verdict is Verdict.SEPARABLE_CERTIFIED and v.certificate.residual(rho) < 1e-10


def test_classify_two_mode_decisive():
    for N in range(1, 6):
        for seed in range(10):
            rho = random_density(basis(N, 2, 1), 1 + seed % (N + 1), seed)
            assert classify(rho).verdict is Verdict.ENTANGLED_NPT
            v = classify(block_diagonal_project(rho))
            assert v.verdict is Verdict.SEPARABLE_CERTIFIED


def test_classify_bound_entangled_fixture():
    rho = embed_qutrit_block(basis(4, 4, 2), horodecki_qutrit_state(HORODECKI_A))
    v = classify(rho)
    assert v.verdict is Verdict.PPT_UNDECIDED
    assert v.diagnostics["is_ppt"]
    assert v.diagnostics["realignment_entangled_minors"] == [2]
    assert v.diagnostics["minor_realignment_norms"]["2"] > 1


def test_classify_npt_minor():
    fb = basis(4, 4, 2)
    phi = np.zeros(9)
    phi[[0, 4, 8]] = 3 ** -0.5
    v = classify(embed_qutrit_block(fb, np.outer(phi, phi)))
    assert v.verdict is Verdict.ENTANGLED_NPT
    assert v.diagnostics["npt_minors"] == [2]


def test_classify_trivial_bipartition():
    for m in (0, 3):
        rho = random_density(basis(2, 3, m), 4, seed=m)
        v = classify(rho)
        assert v.verdict is Verdict.SEPARABLE_CERTIFIED and v.certificate.residual(rho) < 1e-10


def test_pure_rank_one_iff_zero_negativity(rng):
    for _ in range(30):
        fb = basis(int(rng.integers(1, 4)), 3, 1)
        if rng.random() < 0.5:
            psi = random_polynomial_state(fb, rng)
        else:
            v = rng.standard_normal(fb.dim) + 1j * rng.standard_normal(fb.dim)
            psi = PureState(fb, v / np.linalg.norm(v))
        rank_one = schmidt_decompose(psi).schmidt_rank == 1
        assert rank_one == (negativity_oracle(pure_to_density(psi)).total < 1e-10)


def test_verdict_json():
    js = classify(noon(2)).to_json()
    assert js["verdict"] == "EntangledNPT" and js["negativity"] == pytest.approx(0.5)
    js = classify(block_diagonal_project(noon(2))).to_json()
    assert js["verdict"] == "SeparableCertified" and len(js["certificate"]) == 2
