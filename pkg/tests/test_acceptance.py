"""Acceptance suite: one test per criterion, each recording a single pass/fail line.

Tolerances are the stated ones; q = 1/2 throughout.
"""

import itertools
import random

import numpy as np

from qlevy.algebra import EQUAL, ONE, Q, AlgebraCtx, QCoeff, equals_exact, reduce, relation_catalog, twisted_determinant
from qlevy.algebra.determinants import inversions, permutation_sign_power
from qlevy.gauss import (GaussCocycle, GaussParams, gaussian_functional, is_hermitian_gaussian,
                         k_battery_offdiagonal, random_psd, recover_params)
from qlevy.hopf import (K1Battery, chart_labels, conv_exp_functional, gram_matrix, lives_on, min_hermitian_eig,
                        projP, s_morphism, semigroup_defect, triple_identity_defect)
from qlevy.repkit import (block_embed, conv_product, corner_defect, decompose, direct_sum, engineered_contraction,
                          key_lemma_limit, maximal_gaussian_subspace, relation_residuals, subspace_distance,
                          suq2_irrep, torus_char_rep)
from qlevy.schurmann import (ExactPsi, PLimitPsi, cocycle_from_eta_nn, cocycle_identity_defect, coboundary,
                             counterexample_n3, gns_build, gns_isometry, hunt_decompose, oracle_ratio,
                             psi_exact_functional)
from qlevy.uqn import (lift_rep, morphism_identities, parameter_count, projection_compatibility,
                       uq_from_suq, uq_hunt, uq_twist)


def _words(codes, degree):
    return [w for d in range(1, degree + 1) for w in itertools.product(codes, repeat=d)]


def _conv3(M):
    rho = suq2_irrep(M)
    return conv_product(block_embed(rho, 3, 0), block_embed(rho, 3, 1))


def _corner_column(pi, i):
    N = pi.ctx.N
    A = pi.generator_matrix((N - 1) * N + (N - 1))
    return A[:, i] - np.eye(pi.dim)[:, i]


# ---------------------------------------------------------------------------


def test_criterion_01_symbolic_soundness(acceptance):
    bad_rel = 0
    for N in (2, 3):
        ctx = AlgebraCtx(N, "SUq")
        bad_rel += sum(1 for r in relation_catalog(ctx) if not reduce(r).is_zero())
    su3 = AlgebraCtx(3, "SUq")
    bad_tw = sum(1 for tau in itertools.permutations((1, 2, 3))
                 if equals_exact(twisted_determinant(su3, tau), su3.scalar(permutation_sign_power(tau))) != EQUAL)
    bad_lemma = 0
    for N in (2, 3):
        ctx = AlgebraCtx(N, "SUq")
        for j, k in itertools.product(range(1, N + 1), repeat=2):
            if j != k:
                v = ctx.u(max(j, k), max(j, k)) - ctx.one()
                lhs = ctx.u(j, k).scale(ONE - Q)
                rhs = (v * ctx.u(j, k)).scale(Q) - ctx.u(j, k) * v
                bad_lemma += equals_exact(lhs, rhs) != EQUAL
        for j in range(1, N + 1):
            v = ctx.u(j, j) - ctx.one()
            rhs = -sum((ctx.u(j, p) * ctx.ustar(j, p) for p in range(1, N + 1) if p != j), ctx.zero()) \
                - v * v.adjoint()
            bad_lemma += equals_exact(v + v.adjoint(), rhs) != EQUAL
        diag = ctx.one()
        for j in range(1, N + 1):
            diag = diag * ctx.u(j, j)
        rest = ctx.zero()
        for sigma in itertools.permutations(range(N)):
            if list(sigma) != list(range(N)):
                term = ctx.one()
                for r in range(N):
                    term = term * ctx.u(r + 1, sigma[r] + 1)
                rest = rest + term.scale(QCoeff.qpow(inversions(sigma), (-1) ** inversions(sigma)))
        bad_lemma += equals_exact(ctx.one() - diag, rest) != EQUAL
    ok = bad_rel == 0 and bad_tw == 0 and bad_lemma == 0
    assert acceptance(1, "symbolic soundness", ok,
                      f"catalog failures {bad_rel}, twisted-determinant failures {bad_tw}, lemma failures {bad_lemma}")


def test_criterion_02_representation_fidelity(acceptance):
    rho = suq2_irrep(64)
    b0, b1 = block_embed(rho, 3, 0), block_embed(rho, 3, 1)
    conv = conv_product(b0, b1)
    res = {name: relation_residuals(p).max_residual for name, p in
           (("irrep", rho), ("block0", b0), ("block1", b1), ("conv", conv))}
    # at e_{M-1}: alpha alpha^* contributes 0 and q^2 gamma gamma^* contributes q^{2M}
    expected = -(1.0 - 0.5 ** 128)
    corner = abs(corner_defect(rho) - expected)
    ok = max(res.values()) <= 1e-12 and corner <= 1e-12
    assert acceptance(2, "representation fidelity", ok,
                      f"max interior residual {max(res.values()):.2e} (dim {conv.dim}), corner error {corner:.1e}")


def test_criterion_03_decomposition_recovery(acceptance):
    parts = [torus_char_rep([0.0, 0.0]), torus_char_rep([0.0, 0.9]), torus_char_rep([0.6, 0.0]),
             block_embed(suq2_irrep(6), 3, 0), _conv3(4)]
    # levels: trivial torus -> 1; theta_3 != 0 -> 3; theta_3 = 0, theta_2 != 0 -> 2; block -> 2; conv -> 3
    expected = {1: 1, 2: 1 + 6, 3: 1 + 16}
    pi = direct_sum(parts)
    res = decompose(pi)
    dist = subspace_distance(maximal_gaussian_subspace(pi), res.level(1).basis)
    ok = res.dims() == expected and dist <= 1e-10
    assert acceptance(3, "decomposition recovery", ok,
                      f"dims {res.dims()} expected {expected}, gaussian-subspace distance {dist:.1e}")


def test_criterion_04_key_lemma(acceptance):
    rng = np.random.default_rng(404)
    worst_ratio = 0.0
    all_ok = True
    for kdim in (1, 5, 10):
        A = engineered_contraction(20, kdim, rng)
        Y = rng.standard_normal((20, 6)) + 1j * rng.standard_normal((20, 6))
        V = (np.eye(20) - A) @ Y
        rep = key_lemma_limit(A, V, preimages=Y)
        all_ok &= bool(rep.bound_ok) and rep.kernel_dim == kdim and len(rep.p_values) == 16
        worst_ratio = max(worst_ratio, float((rep.errors / rep.bounds).max()))
    assert acceptance(4, "key lemma", all_ok, f"max error / bound {worst_ratio:.3f} over m = 1..16")


def test_criterion_05_cocycle_routes(acceptance):
    scen = [(suq2_irrep(16), 2), (_conv3(12), 13)]
    worst_route, worst_id, smins = 0.0, 0.0, []
    for pi, i in scen:
        eta_nn = _corner_column(pi, i)
        cf = cocycle_from_eta_nn(pi, eta_nn, "closed_form")
        pl = cocycle_from_eta_nn(pi, eta_nn, "p_limit")
        smins.append(cf.data["smin"])
        gens = range(2 * pi.ctx.N ** 2)
        worst_route = max(worst_route, max(np.linalg.norm(cf.letter_value(c) - pl.letter_value(c)) for c in gens))
        rng = random.Random(5)
        letters = list(gens)
        pairs = []
        for _ in range(200):
            w1 = tuple(rng.choice(letters) for _ in range(rng.randint(1, 2)))
            w2 = tuple(rng.choice(letters) for _ in range(rng.randint(1, 2)))
            pairs.append((pi.ctx.word(w1), pi.ctx.word(w2)))
        for eta in (cf, pl):
            worst_id = max(worst_id, cocycle_identity_defect(eta, pairs))
    ok = worst_route <= 1e-6 and worst_id <= 1e-8 and min(smins) >= 1e-6
    assert acceptance(5, "cocycle route agreement", ok,
                      f"closed form vs p-limit {worst_route:.1e}, identity defect {worst_id:.1e} on 200 pairs, "
                      f"min singular value {min(smins):.2e}")


def test_criterion_06_psi_routes(acceptance):
    details = []
    ok = True
    cases = [(suq2_irrep(12), 3, list(range(8))), (_conv3(8), 9, list(range(18)))]
    for pi, i, codes in cases:
        ctx = pi.ctx
        eta_nn = _corner_column(pi, i)
        eta = cocycle_from_eta_nn(pi, eta_nn)
        ex = ExactPsi(eta)
        pl = PLimitPsi(pi, eta_nn)
        words = _words(codes, 3)
        route = max(abs(ex.word(w) - pl.word(w)) for w in words)
        bat = K1Battery(2, count=100, seed=1).elements(ctx)
        psi = ex.functional()
        triple = triple_identity_defect(psi, eta, bat[:40])
        proj = max(abs(ex(projP(a)) - ex(a)) for a in bat)
        mineig = min_hermitian_eig(gram_matrix(psi, bat))
        ok &= route <= 1e-6 and triple <= 1e-8 and proj <= 1e-8 and mineig >= -1e-8 and len(bat) == 100
        details.append(f"N={ctx.N}: route {route:.1e} on {len(words)} words, triple {triple:.1e}, "
                       f"P-defect {proj:.1e}, Gram min-eig {mineig:.1e}")
    assert acceptance(6, "psi route agreement", ok, "; ".join(details))


def test_criterion_07_gaussian_classification(acceptance):
    rng = np.random.default_rng(707)
    worst = 0.0
    for N in (3, 4):
        ctx = AlgebraCtx(N, "SUq")
        labels = chart_labels(ctx)
        for k in range(50):
            r = rng.standard_normal(len(labels))
            R = random_psd(len(labels), rng, rank=1 + k % len(labels))
            back = recover_params(gaussian_functional(ctx, GaussParams(r, R, labels)), check_k3=(k == 0))
            worst = max(worst, float(np.abs(back.r - r).max()), float(np.abs(back.R - R).max()))
    su3 = AlgebraCtx(3, "SUq")
    psi = gaussian_functional(su3, GaussParams(rng.standard_normal(2), random_psd(2, rng), [2, 3]))
    off = max(abs(psi.word(w)) for w in k_battery_offdiagonal(su3, 3))
    witness = is_hermitian_gaussian(GaussCocycle(su3, np.array([[1.0], [1j]])))
    ok = worst <= 1e-12 and off <= 1e-14 and not witness.hermitian and witness.certificate
    assert acceptance(7, "gaussian classification", bool(ok),
                      f"roundtrip {worst:.1e} over 100 instances, off-diagonal max {off:.1e}, "
                      f"witness rejected: {not witness.hermitian}")


def test_criterion_08_counterexample(acceptance):
    lo, hi = 1.0 - 2.0 ** -6, 1.0 - 2.0 ** -12
    oracle = oracle_ratio(lo, hi, 48, 0.5)  # computed before any representation is built
    rep = counterexample_n3(M=48, p_pair=(lo, hi))
    observed = rep.ratios["observed"]
    ok = (rep.monotone and rep.verdict == "divergent" and observed >= oracle * (1 - 1e-9)
          and rep.control_verdict == "convergent")
    assert acceptance(8, "counterexample", ok,
                      f"growth factor {observed:.6f} vs oracle {oracle:.6f}, verdict {rep.verdict}, "
                      f"control {rep.control_verdict} (last step {rep.control_steps[-1]:.1e})")


def test_criterion_09_semigroup(acceptance):
    pi = suq2_irrep(12)
    ctx = pi.ctx
    h = hunt_decompose(pi, {2: _corner_column(pi, 1)}, GaussParams(np.array([0.3]), np.array([[0.5]]), [2]))
    psi = h.psi
    words = [()] + _words(range(8), 2)
    elts = [ctx.word(w) for w in words]
    norm, defect, mineig = 0.0, 0.0, float("inf")
    for t in (0.05, 0.1):
        phi = conv_exp_functional(psi, t)
        norm = max(norm, abs(phi(ctx.one()) - 1.0))
        defect = max(defect, semigroup_defect(psi, t, t, words))
        mineig = min(mineig, min_hermitian_eig(gram_matrix(phi, elts)))
    ok = norm <= 1e-10 and defect <= 1e-6 and mineig >= -1e-6
    assert acceptance(9, "semigroup", ok,
                      f"|phi_t(1) - 1| {norm:.1e}, defect {defect:.1e}, Gram min-eig {mineig:.1e} "
                      f"on {len(elts)} elements")


def test_criterion_10_subgroup_compatibility(acceptance):
    bad = 0
    counts = 0
    for N in (2, 3):
        ctx = AlgebraCtx(N, "SUq")
        elts = [ctx.word(w) for w in _words(range(2 * N * N), 3)]
        counts += len(elts)
        bad += projection_compatibility(s_morphism(N), elts)
    pi = direct_sum([block_embed(suq2_irrep(6), 3, 0), _conv3(4)])
    e2 = _corner_column(pi, 1) * 0
    e2[:6] = (pi.generator_matrix(4) - np.eye(pi.dim))[:6, 1]
    h = hunt_decompose(pi, {2: e2, 3: _corner_column(pi, 7)}, GaussParams.zero(pi.ctx))
    living = max(lv.living_residual for lv in h.levels if lv.n < 3)
    also = lives_on(h.levels[0].psi, 2).residual
    ok = bad == 0 and living <= 1e-8 and also <= 1e-8
    assert acceptance(10, "subgroup compatibility", ok,
                      f"P∘s_N mismatches {bad} of {counts}, living-on residual {max(living, also):.1e}")


def test_criterion_11_uq_pipeline(acceptance):
    pi = direct_sum([uq_from_suq(suq2_irrep(8)), uq_twist(suq2_irrep(4), 0.5), torus_char_rep([0.3, -0.5], "Uq")])
    lifted = lift_rep(pi)
    e2 = _corner_column(lifted, 0) * 0
    e2[:8] = (lifted.generator_matrix(4) - np.eye(pi.dim))[:8, 1]
    e3 = _corner_column(lifted, 9)
    gauss = GaussParams(np.array([0.1, -0.2]), np.array([[1.0, 0.4], [0.4, 0.8]]), [2, "D"])
    h = uq_hunt(pi, {2: e2, 3: e3}, gauss)
    push = max(r.residual for r in h.push_reports.values())
    count = gauss.n_parameters
    ids = morphism_identities(1, 2, degree=2)
    ids3 = morphism_identities(2, 3, degree=2)
    worst_id = max(list(ids.values()) + list(ids3.values()))
    ok = (count == parameter_count(2) == 2 + 3 and push <= 1e-8 and worst_id <= 1e-12
          and {lv.n: lv.dim for lv in h.suq.levels} == {2: 8, 3: 5})
    assert acceptance(11, "U_q pipeline", ok,
                      f"levels {({lv.n: lv.dim for lv in h.suq.levels})} via SU_q(3), push-back residual {push:.1e}, "
                      f"parameters {count}, morphism identity residual {worst_id:.1e}")


def test_criterion_12_gns(acceptance):
    pi = suq2_irrep(8)
    f = np.zeros(8, dtype=complex)
    f[2] = 1.0
    eta = coboundary(pi, f)
    psi = psi_exact_functional(eta)
    data = gns_build(psi, 3, generators=[0, 1, 2, 3])
    rep = gns_isometry(data, eta, 3)
    ok = rep.gram_vs_eta <= 1e-8 and rep.isometry_defect <= 1e-8 and rep.intertwining_defect <= 1e-8
    assert acceptance(12, "GNS cross-check", ok,
                      f"Gram vs <eta, eta> {rep.gram_vs_eta:.1e}, isometry defect {rep.isometry_defect:.1e}, "
                      f"intertwining defect {rep.intertwining_defect:.1e}, rank {data.rank}")
