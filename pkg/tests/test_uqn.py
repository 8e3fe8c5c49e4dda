import itertools
from fractions import Fraction

import numpy as np
import pytest

from qlevy.algebra import AlgebraCtx
from qlevy.gauss import GaussParams, gaussian_functional, recover_params
from qlevy.hopf import chart_labels, s_breve, s_morphism, t_morphism
from qlevy.repkit import direct_sum, relation_residuals, suq2_irrep, torus_char_rep, trivial_rep
from qlevy.uqn import (UqContext, UqError, counit_preserved, gc_witness, lift_functional, lift_params, lift_rep,
                       morphism_identities, parameter_count, projection_compatibility, push_check,
                       push_functional, push_params, section_table, uq_from_suq, uq_hunt, uq_twist)


def _words(ctx, degree, codes=None):
    codes = list(codes) if codes is not None else list(range(2 * ctx.N * ctx.N))
    return [w for d in range(1, degree + 1) for w in itertools.product(codes, repeat=d)]


@pytest.mark.parametrize("N", [1, 2])
def test_context_duality(N):
    U = UqContext(N)
    assert U.duality_ok()
    assert U.d_lift_ok()
    assert U.label_map()["D"] == N + 1


def test_parameter_count():
    # two drifts and a 2x2 real PSD matrix for U_q(2)
    assert parameter_count(2) == 2 + 3
    assert parameter_count(1) == 1 + 1
    assert parameter_count(3) == 3 + 6


def test_section_table_is_right_inverse_of_t():
    from qlevy.algebra import equals_exact
    from qlevy.hopf import morphism_apply
    t = t_morphism(2)
    uq = AlgebraCtx(2, "Uq")
    for c, d in section_table(2).items():
        assert equals_exact(morphism_apply(t, t.source.letter(d)), uq.letter(c)) is True


def test_uq_reps_satisfy_relations():
    rho = suq2_irrep(10)
    for pi in (uq_from_suq(rho), uq_twist(rho, 0.4)):
        assert relation_residuals(pi).max_residual < 1e-12
        assert relation_residuals(lift_rep(pi)).max_residual < 1e-12


def test_twist_determinant_is_consistent():
    # D = u11 u22 - q u12 u21 scales by e^{2i phase}, so Dinv must scale by e^{-2i phase}
    pi = uq_twist(suq2_irrep(6), 0.3)
    assert np.allclose(pi.generator_matrix(pi.ctx.dinv_code), np.exp(-0.6j) * np.eye(6))


def test_gaussian_lift_and_push_params():
    p = GaussParams(np.array([0.2, -0.5]), np.array([[1.0, 0.3], [0.3, 2.0]]), [2, "D"])
    lifted = lift_params(p, 2)
    assert lifted.labels == [2, 3]
    assert push_params(lifted, 2).labels == [2, "D"]
    uq = AlgebraCtx(2, "Uq")
    psi = gaussian_functional(uq, p)
    Psi = lift_functional(psi)
    direct = gaussian_functional(Psi.ctx, lifted)
    for w in _words(Psi.ctx, 2)[:120]:
        assert abs(Psi.word(w) - direct.word(w)) < 1e-13
    back = recover_params(psi)
    assert np.abs(back.r - p.r).max() < 1e-12
    assert np.abs(back.R - p.R).max() < 1e-12


def test_push_back_roundtrip():
    p = GaussParams(np.array([0.2, -0.5]), np.array([[1.0, 0.3], [0.3, 2.0]]), [2, "D"])
    uq = AlgebraCtx(2, "Uq")
    psi = gaussian_functional(uq, p)
    Psi = lift_functional(psi)
    assert push_check(Psi, 2).ok
    pushed = push_functional(Psi, 2)
    for w in _words(uq, 2, range(uq.n_letters)):
        assert abs(pushed.word(w) - psi.word(w)) < 1e-13


def test_uq_hunt_through_suq3():
    # lifted along t_2: rho∘t̆_2 has u33 = 1 and lands in level 2; the twisted copy and the
    # torus character have u33 = Dinv != 1 and land in level 3
    pi = direct_sum([uq_from_suq(suq2_irrep(8)), uq_twist(suq2_irrep(4), 0.5),
                     torus_char_rep([0.3, -0.5], "Uq")])
    uq = pi.ctx
    assert relation_residuals(pi).max_residual < 1e-12
    lifted = lift_rep(pi)
    e2 = (lifted.generator_matrix(4) - np.eye(pi.dim))[:, 1]
    e3 = (lifted.generator_matrix(8) - np.eye(pi.dim))[:, 9]
    gauss = GaussParams(np.array([0.1, 0.3]), np.array([[1.0, 0.2], [0.2, 0.5]]), [2, "D"])
    h = uq_hunt(pi, {2: e2, 3: e3}, gauss)
    assert {lv.n: lv.dim for lv in h.suq.levels} == {2: 8, 3: 5}
    assert all(r.ok for r in h.push_reports.values())
    assert h.gauss.n_parameters == parameter_count(2)
    words = _words(uq, 2, range(uq.n_letters))
    for w in words:
        expect = h.psi_gauss.word(w) + sum(f.word(w) for f in h.level_psi.values())
        assert abs(h.psi.word(w) - expect) < 1e-14
    # each pushed level composes back to the SU_q(3) level functional
    sec = section_table(2)
    for lv in h.suq.levels:
        for w in words[:60]:
            assert abs(h.level_psi[lv.n].word(w) - lv.psi.word(tuple(sec[c] for c in w))) < 1e-14
    d = h.as_dict()
    assert d["lifted_N"] == 3 and d["n_gauss_parameters"] == 5


def test_uq_hunt_rejects_wrong_gauss_size():
    with pytest.raises(UqError):
        uq_hunt(None, None, GaussParams(np.zeros(1), np.zeros((1, 1)), [2]), N=2)


@pytest.mark.parametrize("n,N", [(1, 2), (1, 3), (2, 3)])
def test_morphism_identities(n, N):
    res = morphism_identities(n, N, degree=2)
    assert res["breve_t_after_breve_s"] <= 1e-12
    assert res["t_after_s"] <= 1e-12


@pytest.mark.parametrize("N", [2, 3])
def test_projection_commutes_with_s(N):
    ctx = AlgebraCtx(N, "SUq")
    elts = [ctx.word(w) for w in _words(ctx, 3)]
    m = s_morphism(N)
    assert projection_compatibility(m, elts) == 0
    assert counit_preserved(m, elts[:200])


def test_projection_commutes_with_s_breve():
    uq = AlgebraCtx(3, "Uq")
    elts = [uq.word(w) for w in _words(uq, 2, range(uq.n_letters))]
    assert projection_compatibility(s_breve(3), elts) == 0


def test_gc_witness_uq2():
    rep = gc_witness(2)
    assert not rep.hermitian
    assert rep.max_imag == pytest.approx(1.0)
    with pytest.raises(UqError):
        gc_witness(1)


def test_trivial_uq_rep_lift_lives_on_smaller():
    from qlevy.hopf import lives_on
    pi = lift_rep(trivial_rep(2, 3, "Uq"))
    assert lives_on(pi, 1).lives
    assert chart_labels(AlgebraCtx(1, "Uq")) == ["D"]
    assert UqContext(2, Fraction(1, 3)).ctx.q0 == Fraction(1, 3)
