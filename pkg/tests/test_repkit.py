from fractions import Fraction

import numpy as np
import pytest

from qlevy.algebra import AlgebraCtx, QCoeff, relation_catalog
from qlevy.repkit import (MatRep, RepError, block_embed, conv_product, corner_defect, decompose,
                          direct_sum, eigen_one_symmetry, engineered_contraction, evaluation_witness,
                          is_contraction, key_lemma_limit, maximal_gaussian_subspace, read_binary, read_csv,
                          relation_residuals, subspace_distance, suq2_irrep, torus_char_rep, trivial_rep,
                          write_binary, write_csv)


def test_suq2_irrep_residuals_and_corner():
    rho = suq2_irrep(64)
    assert relation_residuals(rho).max_residual <= 1e-12
    # alpha alpha^* + q^2 gamma gamma^* - 1 at the last basis vector: alpha^* e_{M-1} = 0 is
    # missing the sqrt(1 - q^{2M}) e_M contribution, so the entry is q^{2(M-1)} q^2 - 1 = -(1 - q^{2M})
    assert abs(corner_defect(rho) - (-(1.0 - 0.25 ** 64))) <= 1e-12
    assert abs(corner_defect(suq2_irrep(3)) - (-(1.0 - 0.25 ** 3))) <= 1e-12


def test_block_and_conv_residuals():
    rho = suq2_irrep(64)
    b0, b1 = block_embed(rho, 3, 0), block_embed(rho, 3, 1)
    for pi in (b0, b1):
        assert relation_residuals(pi).max_residual <= 1e-12
    small = suq2_irrep(12)
    c = conv_product(block_embed(small, 3, 0), block_embed(small, 3, 1))
    assert relation_residuals(c).max_residual <= 1e-12


def test_conv_corner_is_identity_tensor_alpha_star():
    rho = suq2_irrep(8)
    pi = conv_product(block_embed(rho, 3, 0), block_embed(rho, 3, 1))
    a = rho.generator_matrix(0)
    expect33 = np.kron(np.eye(8), a.conj().T)
    expect11 = np.kron(a, np.eye(8))
    assert np.abs(pi.generator_matrix(8) - expect33).max() == 0
    assert np.abs(pi.generator_matrix(0) - expect11).max() == 0


def test_torus_and_trivial_are_exact():
    for pi in (torus_char_rep([0.3, -1.2]), trivial_rep(3, 2), torus_char_rep([0.1, 0.2], "Uq")):
        res = relation_residuals(pi)
        assert res.max_residual < 1e-14


def test_contractions_and_eigen_one_symmetry():
    rho = suq2_irrep(10)
    pi = direct_sum([trivial_rep(2), rho])
    assert is_contraction(pi)
    assert eigen_one_symmetry(pi) < 1e-10


def test_rep_error_on_shape():
    ctx = AlgebraCtx(2, "SUq")
    with pytest.raises(RepError):
        MatRep(ctx, {0: np.eye(2)}, np.zeros(3))
    with pytest.raises(RepError):
        block_embed(suq2_irrep(4), 3, 2)


@pytest.mark.parametrize("M", [4, 6])
def test_decompose_dims_match_construction(M):
    # trivial -> level 1; torus with theta_3 = 0, theta_2 != 0 -> level 2;
    # torus with theta_3 != 0 -> level 3; block(m=0) -> level 2 (dim M); conv of blocks -> level 3 (M*M)
    small = suq2_irrep(M)
    parts = [
        trivial_rep(3, 2),
        torus_char_rep([0.7, 0.0]),
        torus_char_rep([0.0, 1.1]),
        block_embed(suq2_irrep(M + 1), 3, 0),
        conv_product(block_embed(small, 3, 0), block_embed(small, 3, 1)),
    ]
    pi = direct_sum(parts)
    res = decompose(pi)
    assert res.dims() == {1: 2, 2: 1 + (M + 1), 3: 1 + M * M}
    for lv in res.levels:
        if lv.n > 1:
            assert lv.injectivity > 1e-8
    G = maximal_gaussian_subspace(pi)
    assert subspace_distance(G, res.level(1).basis) < 1e-10


def test_decompose_level_reps_live_on_their_subgroup():
    from qlevy.hopf import lives_on
    rho = suq2_irrep(5)
    pi = direct_sum([trivial_rep(3), block_embed(rho, 3, 0)])
    res = decompose(pi)
    assert lives_on(res.level(2).rep, 2).lives
    assert lives_on(res.level(1).rep, 1).lives


def test_decompose_rejects_uq():
    with pytest.raises(RepError):
        decompose(trivial_rep(2, 1, "Uq"))


def test_key_lemma_bound(rng):
    for kdim in (0, 3, 7):
        A = engineered_contraction(20, kdim, rng)
        assert np.linalg.norm(A, 2) <= 1 + 1e-12
        Y = rng.standard_normal((20, 4)) + 1j * rng.standard_normal((20, 4))
        V = (np.eye(20) - A) @ Y
        rep = key_lemma_limit(A, V, preimages=Y)
        assert rep.kernel_dim == kdim
        assert rep.bound_ok


def test_key_lemma_limit_projects_general_vectors(rng):
    A = engineered_contraction(12, 4, rng, inner_norm=0.5)
    v = rng.standard_normal(12)
    rep = key_lemma_limit(A, v)
    assert rep.errors[-1, 0] < 1e-3
    assert np.all(np.diff(rep.errors[:, 0]) <= 1e-12)


def test_key_lemma_rejects_non_contraction():
    with pytest.raises(ValueError):
        key_lemma_limit(2 * np.eye(3), np.ones(3))


def test_export_roundtrip(tmp_path, rng):
    A = rng.standard_normal((5, 7)) + 1j * rng.standard_normal((5, 7))
    assert np.array_equal(read_csv(write_csv(A, tmp_path / "a.csv")), A)
    assert np.array_equal(read_binary(write_binary(A, tmp_path / "a.bin")), A)
    S = suq2_irrep(6).letter_matrix(0)
    assert np.array_equal(read_binary(write_binary(S, tmp_path / "s.bin")), S.toarray())


def test_binary_layout(tmp_path):
    A = np.array([[1 + 2j, 3.0]])
    data = write_binary(A, tmp_path / "x.bin").read_bytes()
    assert data[:16] == (1).to_bytes(8, "little") + (2).to_bytes(8, "little")
    assert np.frombuffer(data[16:], "<f8").tolist() == [1.0, 2.0, 3.0, 0.0]


def test_evaluation_witness_separates(su2, su3):
    # u11 u22 - u22 u11 = (q - 1/q) u12 u21 ... nonzero, so some representation must see it
    a = su3.u(1, 1) * su3.u(2, 2) - su3.u(2, 2) * su3.u(1, 1)
    assert evaluation_witness(a) is not None
    for rel in relation_catalog(su2)[:20]:
        assert evaluation_witness(rel) is None
    assert evaluation_witness(su2.u(1, 2).scale(QCoeff.const(Fraction(1, 1000)))) is not None
