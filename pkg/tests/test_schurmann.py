import itertools
import math
import random

import numpy as np
import pytest

from qlevy.algebra import EQUAL, AlgebraCtx, equals_exact
from qlevy.gauss import GaussParams, gaussian_functional
from qlevy.hopf import ConvergenceError, K1Battery, lives_on, min_hermitian_eig, gram_matrix, projP
from qlevy.repkit import block_embed, conv_product, direct_sum, suq2_irrep, trivial_rep
from qlevy.schurmann import (CocycleError, ExactPsi, PLimitPsi, coboundary, coboundary_functional,
                             cocycle_from_eta_nn, cocycle_identity_defect, counterexample_n3, gns_build,
                             gns_isometry, h_pi_norm, hunt_decompose, oracle_norm, psi_exact,
                             psi_exact_functional, pullback_agreement, recursion_coefficients, split_K2,
                             triple_check)


def _conv3(M):
    rho = suq2_irrep(M)
    return conv_product(block_embed(rho, 3, 0), block_embed(rho, 3, 1))


def _coboundary_data(pi, i):
    f = np.zeros(pi.dim, dtype=complex)
    f[i] = 1.0
    N = pi.ctx.N
    A = pi.letter_matrix((N - 1) * N + (N - 1))
    return f, A @ f - f


def _sample_pairs(ctx, count, seed, degree=2):
    rng = random.Random(seed)
    letters = list(range(2 * ctx.N * ctx.N))
    out = []
    for _ in range(count):
        w1 = tuple(rng.choice(letters) for _ in range(rng.randint(1, degree)))
        w2 = tuple(rng.choice(letters) for _ in range(rng.randint(1, degree)))
        out.append((ctx.word(w1), ctx.word(w2)))
    return out


@pytest.mark.parametrize("pi_factory,i", [(lambda: suq2_irrep(10), 2), (lambda: _conv3(5), 6)])
def test_closed_form_recovers_coboundary(pi_factory, i):
    # a cocycle is determined by eta(u[N,N]); the coboundary of f is one with that value
    pi = pi_factory()
    f, eta_nn = _coboundary_data(pi, i)
    cf = cocycle_from_eta_nn(pi, eta_nn, "closed_form")
    cb = coboundary(pi, f)
    for c in range(2 * pi.ctx.N ** 2):
        assert np.linalg.norm(cf.letter_value(c) - cb.letter_value(c)) < 1e-10


def test_closed_form_vs_p_limit():
    pi = _conv3(5)
    _, eta_nn = _coboundary_data(pi, 6)
    cf = cocycle_from_eta_nn(pi, eta_nn, "closed_form")
    pl = cocycle_from_eta_nn(pi, eta_nn, "p_limit")
    worst = max(np.linalg.norm(cf.letter_value(c) - pl.letter_value(c)) for c in range(18))
    assert worst <= 1e-6


def test_cocycle_identity_on_sampled_pairs():
    # relations hold on the truncation only away from its boundary, so the data sits at
    # basis index (1, 1) of a 12 x 12 tensor, far from the cut
    pi = _conv3(12)
    _, eta_nn = _coboundary_data(pi, 13)
    pairs = _sample_pairs(pi.ctx, 200, seed=7)
    for method in ("closed_form", "p_limit"):
        eta = cocycle_from_eta_nn(pi, eta_nn, method)
        assert cocycle_identity_defect(eta, pairs) <= 1e-8


def test_p_limit_non_convergence_is_reported():
    pi = _conv3(4)
    _, eta_nn = _coboundary_data(pi, 5)
    with pytest.raises(ConvergenceError):
        cocycle_from_eta_nn(pi, eta_nn, "p_limit", schedule=[0.5, 0.75, 0.875])


def test_closed_form_needs_injectivity():
    pi = direct_sum([trivial_rep(2), suq2_irrep(4)])
    with pytest.raises(CocycleError):
        cocycle_from_eta_nn(pi, np.ones(pi.dim), "closed_form")


@pytest.mark.parametrize("N", [2, 3])
def test_split_K2_is_exact(N):
    ctx = AlgebraCtx(N, "SUq")
    rng = random.Random(N)
    for _ in range(25):
        w = tuple(rng.randrange(2 * N * N) for _ in range(rng.randint(1, 3)))
        x = projP(ctx.word(w))
        total = ctx.zero()
        for a, b in split_K2(x):
            total = total + a * b
        assert equals_exact(total, x) == EQUAL


def test_exact_psi_matches_coboundary_functional():
    pi = _conv3(4)
    f, _ = _coboundary_data(pi, 5)
    ex = psi_exact_functional(coboundary(pi, f))
    cb = coboundary_functional(pi, f)
    words = [w for d in (1, 2) for w in itertools.product(range(18), repeat=d)]
    assert max(abs(ex.word(w) - cb.word(w)) for w in words) < 1e-10


def test_psi_routes_agree_and_triple_holds(su2):
    pi = suq2_irrep(12)
    f, eta_nn = _coboundary_data(pi, 3)
    eta = cocycle_from_eta_nn(pi, eta_nn)
    ex = ExactPsi(eta)
    pl = PLimitPsi(pi, eta_nn)
    words = [w for d in (1, 2, 3) for w in itertools.product(range(8), repeat=d)]
    assert max(abs(ex.word(w) - pl.word(w)) for w in words) <= 1e-6
    bat = K1Battery(2).elements(su2)
    assert triple_check(pi, eta, ex.functional(), bat).passed
    for a in bat[:20]:
        assert abs(ex(projP(a)) - ex(a)) <= 1e-12
        assert abs(ex(a.adjoint()) - np.conj(ex(a))) <= 1e-12
    assert min_hermitian_eig(gram_matrix(ex.functional(), bat)) >= -1e-10
    assert abs(psi_exact(pi, eta, su2.one())) == 0


def test_h_pi_norm_oracle():
    # SU_q(2): (1 - alpha) e_0 = e_0 and (1 - alpha^*) e_0 = e_0 - sqrt(1 - q^2) e_1, so
    # the squared norm is 1 + 1 + 3/4
    pi = suq2_irrep(8)
    e0 = np.zeros(8)
    e0[0] = 1.0
    assert h_pi_norm(pi, e0) == pytest.approx(math.sqrt(2.75), abs=1e-14)


def test_hunt_decomposition_sum_and_living():
    rho6, rho4 = suq2_irrep(6), suq2_irrep(4)
    pi = direct_sum([trivial_rep(3), block_embed(rho6, 3, 0),
                     conv_product(block_embed(rho4, 3, 0), block_embed(rho4, 3, 1))])
    ctx = pi.ctx
    eta2 = np.zeros(pi.dim, dtype=complex)
    eta2[1:7] = (pi.generator_matrix(4) - np.eye(pi.dim))[1:7, 2]
    eta3 = (pi.generator_matrix(8) - np.eye(pi.dim))[:, 7]
    gauss = GaussParams(np.array([0.1, 0.2]), np.diag([1.0, 2.0]), [2, 3])
    h = hunt_decompose(pi, {2: eta2, 3: eta3}, gauss)
    assert {lv.n: lv.dim for lv in h.levels} == {2: 6, 3: 16}
    words = [w for d in (1, 2) for w in itertools.product([0, 4, 8, 9, 13, 17, 1, 3], repeat=d)]
    psi_g = gaussian_functional(ctx, gauss)
    for w in words[:40]:
        expect = psi_g.word(w) + sum(lv.psi.word(w) for lv in h.levels)
        assert abs(h.psi.word(w) - expect) < 1e-14
    lv2 = [lv for lv in h.levels if lv.n == 2][0]
    assert lv2.living_residual <= 1e-8
    assert lives_on(lv2.cocycle, 2).lives
    assert pullback_agreement(lv2, words) < 1e-12
    for lv in h.levels:
        assert max(abs(lv.psi_tilde.word(w) - lv.plimit.word(w)) for w in words if max(w) < 2 * lv.n ** 2) <= 1e-6


def test_gns_reproduces_cocycle_gram(su2):
    pi = suq2_irrep(8)
    f, _ = _coboundary_data(pi, 2)
    eta = coboundary(pi, f)
    psi = psi_exact_functional(eta)
    data = gns_build(psi, 3, generators=[0, 1, 2, 3])
    rep = gns_isometry(data, eta, 3)
    assert rep.gram_vs_eta <= 1e-8
    assert rep.reproduces_eta <= 1e-8
    assert rep.isometry_defect <= 1e-8
    assert rep.intertwining_defect <= 1e-8
    assert 0 < data.rank <= pi.dim


def test_counterexample_recursion_oracle():
    q = 0.5
    x = recursion_coefficients(10, q)
    direct = [math.prod(math.sqrt(1 - q ** (2 * j)) for j in range(1, k + 1)) for k in range(10)]
    assert np.allclose(x, direct, rtol=0, atol=1e-15)
    assert oracle_norm(0.0, 10, q) == pytest.approx(1.0)


def test_counterexample_divergence():
    rep = counterexample_n3(M=48)
    assert rep.monotone
    assert rep.verdict == "divergent"
    assert rep.control_verdict == "convergent"
    # the observed growth factor equals the oracle, up to solver rounding
    assert rep.ratios["observed"] >= rep.ratios["oracle"] * (1 - 1e-9)
    assert np.allclose(rep.norms, rep.oracle_norms, rtol=1e-9)
    assert rep.relation_residual < 1e-10
    # the infinite product converges to a positive limit, so terms do not decay
    assert rep.product_limit > 0.5


def test_counterexample_rejects_small_truncation():
    with pytest.raises(ValueError):
        counterexample_n3(M=8)
