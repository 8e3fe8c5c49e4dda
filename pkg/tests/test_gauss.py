import numpy as np
import pytest

from qlevy.algebra import AlgebraCtx
from qlevy.gauss import (GaussCocycle, GaussError, GaussParams, gaussian_functional, gram_realization,
                         is_hermitian_gaussian, k3_battery, k_battery_offdiagonal, random_psd, recover_params)
from qlevy.hopf import K1Battery, chart_labels, eps_prime, eps_second, is_generating


@pytest.mark.parametrize("N", [3, 4])
def test_parameter_roundtrip(N, rng):
    ctx = AlgebraCtx(N, "SUq")
    labels = chart_labels(ctx)
    n = len(labels)
    check_k3 = True
    for i in range(50):
        r = rng.standard_normal(n)
        R = random_psd(n, rng, rank=1 + i % n)
        psi = gaussian_functional(ctx, GaussParams(r, R, labels))
        back = recover_params(psi, check_k3=check_k3)
        assert np.abs(back.r - r).max() <= 1e-12
        assert np.abs(back.R - R).max() <= 1e-12
        check_k3 = False  # the K_3 scan is N^6 products; once per N is enough


def test_parameter_count():
    ctx = AlgebraCtx(3, "SUq")
    assert GaussParams.zero(ctx).n_parameters == 2 + 3
    assert GaussParams.zero(AlgebraCtx(2, "Uq")).n_parameters == 2 + 3


def test_non_psd_rejected(su3):
    with pytest.raises(GaussError):
        gaussian_functional(su3, GaussParams(np.zeros(2), np.array([[1.0, 0.0], [0.0, -1.0]]), [2, 3]))
    with pytest.raises(GaussError):
        GaussParams(np.zeros(2), np.array([[1.0, 2.0], [0.0, 1.0]]), [2, 3]).validate()


def test_vanishes_on_offdiagonal_words(su3, rng):
    R = random_psd(2, rng)
    psi = gaussian_functional(su3, GaussParams(rng.standard_normal(2), R, [2, 3]))
    worst = max(abs(psi.word(w)) for w in k_battery_offdiagonal(su3, 3))
    assert worst <= 1e-14


def test_vanishes_on_k3(su2):
    psi = gaussian_functional(su2, GaussParams(np.array([0.5]), np.array([[2.0]]), [2]))
    assert max(abs(psi(x)) for x in k3_battery(su2)) < 1e-12


def test_gaussian_is_generating(su3, rng):
    psi = gaussian_functional(su3, GaussParams(rng.standard_normal(2), random_psd(2, rng), [2, 3]))
    assert is_generating(psi, K1Battery(2).elements(su3)).passed


def test_recover_rejects_non_gaussian(su2):
    from qlevy.repkit import suq2_irrep
    from qlevy.schurmann import coboundary, psi_exact_functional
    pi = suq2_irrep(6)
    f = np.zeros(pi.dim, dtype=complex)
    f[1] = 1.0
    psi = psi_exact_functional(coboundary(pi, f))
    with pytest.raises(GaussError):
        recover_params(psi)


def test_second_derivative_is_minus_product(su3):
    # eps''_jk(u_jj u_kk) = -m_j m_k with m = chart vector of the word
    a = su3.u(2, 2) * su3.u(3, 3)
    assert eps_second(su3, 2, 3)(a) == pytest.approx(-1.0)
    assert eps_prime(su3, 2)(a) == pytest.approx(1j)


def test_gram_realization_completes_triple(su3, rng):
    R = random_psd(2, rng)
    c = gram_realization(R, su3)
    assert np.abs(c.gram() - R).max() < 1e-12
    rep = is_hermitian_gaussian(c)
    assert rep.hermitian
    assert rep.triple_defect < 1e-10


def test_no_gc_witness_n3(su3):
    # eta_2 = e_1, eta_3 = i e_1: <eta_2, eta_3> = i is not real, so no completing functional exists
    c = GaussCocycle(su3, np.array([[1.0], [1j]]))
    rep = is_hermitian_gaussian(c)
    assert not rep.hermitian
    assert rep.max_imag == pytest.approx(1.0)
    assert "not hermitian" in rep.certificate
    assert rep.psi is None


def test_cocycle_vector_count_checked(su3):
    with pytest.raises(GaussError):
        GaussCocycle(su3, np.ones((3, 1)))
