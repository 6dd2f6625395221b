import dataclasses
import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhfrob.core import (
    AlgebraPresentation,
    PresentationError,
    QPElements,
    change_antipode,
    outer,
    qp_elements,
    rescale_alpha_beta,
    verify_algebra,
    verify_all,
    verify_antipode,
    verify_qp_identities,
    verify_quasi_bialgebra,
)
from qhfrob.exactlin import QQ, exact_equal
from qhfrob.workbench.builders import build_sweedler, z2_sign_cocycle
from qhfrob.workbench.twist import gauge_twist, random_twist


def _assoc_oracle(mult):
    """Plain triple loop over structure constants."""
    n = mult.shape[0]
    for i, j, k in itertools.product(range(n), repeat=3):
        left = [sum(mult[i, j, l] * mult[l, k, r] for l in range(n)) for r in range(n)]
        right = [sum(mult[j, k, l] * mult[i, l, r] for l in range(n)) for r in range(n)]
        if left != right:
            return False
    return True


def test_verify_algebra_group(c2):
    assert verify_algebra(c2.alg).passed


def test_verify_algebra_bad_unit(c2):
    bad = AlgebraPresentation(QQ, c2.alg.mult, QQ.array([0, 1]))
    rep = verify_algebra(bad)
    assert not rep.passed
    assert not rep["left unit"].passed
    assert rep["left unit"].witness is not None


def test_verify_algebra_sweedler_matches_oracle(sweedler):
    assert verify_algebra(sweedler.alg).passed == _assoc_oracle(sweedler.alg.mult) is True


def test_verify_algebra_detects_nonassociative():
    # basis 1, a, b with aa = b, ab = a and all other products of a, b zero:
    # (aa)b = bb = 0 but a(ab) = aa = b
    mult = QQ.zeros((3, 3, 3))
    for i in range(3):
        mult[0, i, i] = mult[i, 0, i] = QQ.one
    mult[1, 1, 2] = QQ.one
    mult[1, 2, 1] = QQ.one
    alg = AlgebraPresentation(QQ, mult, QQ.array([1, 0, 0]))
    assert _assoc_oracle(mult) is False
    rep = verify_algebra(alg)
    assert not rep["associativity"].passed
    assert rep["left unit"].passed


def test_quasi_bialgebra_hopf(c2, sweedler, s3):
    for h in (c2, sweedler, s3):
        rep = verify_quasi_bialgebra(h.qb)
        assert rep.passed, rep.summary()


def test_quasi_bialgebra_twisted(tz2):
    rep = verify_quasi_bialgebra(tz2.qb)
    assert rep.passed
    # nontrivial associator
    assert not exact_equal(tz2.qb.phi, tz2.alg.one(3))
    assert tz2.qb.phi[1, 1, 1] == -1


def test_quasi_bialgebra_bad_phi_inv(tz2):
    qb = dataclasses.replace(tz2.qb, phi_inv=tz2.alg.one(3))
    rep = verify_quasi_bialgebra(qb)
    assert not rep["phi * phi_inv = 1"].passed


def test_antipode_hopf(c2):
    assert verify_antipode(c2).passed


def test_antipode_twisted(tz2):
    assert exact_equal(tz2.S, QQ.identity(2))
    assert exact_equal(tz2.alpha, QQ.array([1, 1]))
    assert exact_equal(tz2.beta, QQ.array([1, -1]))
    assert verify_antipode(tz2).passed


def test_antipode_twisted_wrong_beta(tz2):
    bad = dataclasses.replace(tz2, beta=tz2.alg.unit)
    rep = verify_antipode(bad)
    assert not rep["phi-beta-alpha"].passed
    # direct evaluation of X1 β S(X2) α X3 gives e0 - e1
    assert exact_equal(rep["phi-beta-alpha"].lhs, QQ.array([1, -1]))


def test_rescale_alpha_beta(c2):
    assert rescale_alpha_beta(c2).alpha.tolist() == c2.alpha.tolist()
    h = dataclasses.replace(c2, alpha=2 * c2.alpha, beta=Fraction(1, 2) * c2.beta)
    r = rescale_alpha_beta(h)
    assert exact_equal(r.alpha, c2.alg.unit) and exact_equal(r.beta, c2.alg.unit)
    assert verify_antipode(r).passed
    with pytest.raises(PresentationError):
        rescale_alpha_beta(dataclasses.replace(c2, alpha=QQ.array([1, -1])))


def test_rescale_nontrivially_scaled(tz2):
    h = dataclasses.replace(tz2, alpha=3 * tz2.alpha, beta=Fraction(1, 3) * tz2.beta)
    assert verify_antipode(h).passed
    r = rescale_alpha_beta(h)
    assert r.eps(r.alpha) == 1 and r.eps(r.beta) == 1
    assert verify_antipode(r).passed


def test_qp_hopf_trivial(c2, s3):
    for h in (c2, s3):
        qp = qp_elements(h)
        one = outer(h.alg.unit, h.alg.unit)
        for x in (qp.q_R, qp.p_R, qp.q_L, qp.p_L):
            assert exact_equal(x, one)


def test_qp_hopf_with_changed_antipode(sweedler):
    # Hopf associator but α = u, β = u^{-1}: q_R = 1⊗S^{-1}(α), p_R = 1⊗β
    H = sweedler.alg
    u = H.element([1, 0, 1, 0])  # 1 + x
    h = change_antipode(sweedler, u)
    qp = qp_elements(h)
    assert exact_equal(qp.q_R, outer(H.unit, h.S_inv @ h.alpha))
    assert exact_equal(qp.p_R, outer(H.unit, h.beta))
    assert verify_qp_identities(h).passed


def test_qp_twisted_against_direct_loops(tz2):
    # Φ^{-1} = Σ ω(a,b,c)^{-1} e_a⊗e_b⊗e_c, S = id, α = 1, β = e0 - e1
    w = z2_sign_cocycle
    beta = [1, -1]
    p_R = QQ.zeros((2, 2))
    q_R = QQ.zeros((2, 2))
    for a, b, c in itertools.product(range(2), repeat=3):
        # p_R = x1 ⊗ x2 β S(x3): e_b β e_c survives only for b = c
        if b == c:
            p_R[a, b] += Fraction(1, w(a, b, c)) * beta[b]
        # q_R = X1 ⊗ S^{-1}(α X3) X2: e_c e_b survives only for b = c
        if b == c:
            q_R[a, b] += w(a, b, c)
    qp = qp_elements(tz2)
    assert exact_equal(qp.p_R, p_R)
    assert exact_equal(qp.q_R, q_R)
    assert verify_qp_identities(tz2, qp).passed


def test_qp_sweedler(sweedler):
    assert verify_qp_identities(sweedler).passed


def test_qp_swapped_detected(sweedler):
    h = gauge_twist(sweedler, *random_twist(sweedler, np.random.default_rng(11)))
    qp = qp_elements(h)
    assert verify_qp_identities(h, qp).passed
    swapped = QPElements(q_R=qp.p_R, p_R=qp.q_R, q_L=qp.q_L, p_L=qp.p_L)
    rep = verify_qp_identities(h, swapped)
    assert not rep["first"].passed


def test_verify_all_examples(all_examples):
    for name, h in all_examples.items():
        rep = verify_all(h)
        assert rep.passed, f"{name}\n{rep.summary()}"


def test_counit_legs_of_associator_checked(tz2):
    rep = verify_all(tz2)
    assert rep["quasi-bialgebra: counit on first leg of phi"].passed
    assert rep["quasi-bialgebra: counit on third leg of phi"].passed


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_harpoon_transport_of_dual_bases(coeffs):
    # Σ_i (f^i ↼ x) ⊗ a_i = Σ_i f^i ⊗ x a_i for the coordinate dual bases
    h = build_sweedler(verify=False)
    H = h.alg
    x = H.element(coeffs)
    I = QQ.identity(4)
    Lx = H.left_matrix(x)
    lhs = sum(outer(Lx.T @ I[i], I[i]) for i in range(4))
    rhs = sum(outer(I[i], H.mul(x, I[i])) for i in range(4))
    assert exact_equal(lhs, rhs)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=2, max_size=2))
def test_antipode_rescaling_covariance(coeffs):
    h = build_sweedler(verify=False)
    H = h.alg
    u = H.element([1, 0] + coeffs)  # 1 + nilpotent: always a unit
    h2 = change_antipode(h, u)
    assert verify_antipode(h2).passed
    assert verify_qp_identities(h2).passed


def test_antipode_covariance_twisted(tz2):
    H = tz2.alg
    u = H.element([2, -3])
    h2 = change_antipode(tz2, u)
    assert verify_antipode(h2).passed
