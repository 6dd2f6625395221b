"""Acceptance suite: one test per criterion, all equalities exact."""

import itertools
import subprocess
import sys
import time

import numpy as np
import pytest

from qhfrob.core import verify_all
from qhfrob.exactlin import QQ, exact_equal, rank
from qhfrob.extensions import extension_frobenius_hom, relative_nakayama, subalgebra_pair, verify_subalgebra
from qhfrob.frobenius import (
    frobenius_system,
    integral_certificate,
    integral_space,
    modular_augmentation,
    projection_matrix,
    verify_frobenius_system,
    verify_theta,
)
from qhfrob.structure import (
    counit_splitting,
    hn_fourth_power_check,
    hopf_radford_check,
    integral_qp_lemmas,
    is_unimodular,
    normalized_integral,
    pre_radford_check,
    separability_analysis,
    separability_elements,
    strong_separability_check,
    verify_cointegral,
)
from qhfrob.workbench.builders import build_sweedler, c2_algebra, s3_algebra, twisted_z2
from qhfrob.workbench.examples import shipped_paths
from qhfrob.workbench.fileformat import parse_presentation, serialize_presentation
from qhfrob.workbench.twist import twisted_variants


@pytest.mark.criterion(1, "axiom suite on Q[C2], Q[S3], Sweedler, twisted Q^Z2 in < 5 s")
def test_axiom_suite():
    start = time.perf_counter()
    built = [c2_algebra(QQ), s3_algebra(QQ), build_sweedler(QQ, verify=False), twisted_z2(QQ)]
    for h in built:
        rep = verify_all(h)
        assert rep.passed, f"{h.name}\n{rep.summary()}"
        laws = {c.law for c in rep.checks}
        for required in (
            "quasi-bialgebra: quasi-coassociativity",
            "quasi-bialgebra: 3-cocycle",
            "quasi-bialgebra: counit on first leg of phi",
            "quasi-bialgebra: counit on third leg of phi",
            "antipode: phi-beta-alpha",
            "antipode: phi_inv-alpha-beta",
            "qp: first",
            "qp: fourth",
        ):
            assert required in laws
    assert time.perf_counter() - start < 5.0


@pytest.mark.criterion(2, "one-dimensional integral spaces, P lands in integrals, certificate = 1")
def test_integrals(examples):
    for name, h in examples.items():
        assert integral_space(h, "left").dim == 1, name
        assert integral_space(h, "right").dim == 1, name
        H = h.alg
        P = projection_matrix(h)
        for a, j in itertools.product(range(h.dim), repeat=2):
            x = P[:, j]
            assert exact_equal(H.mul(H.basis(a), x), h.eps(H.basis(a)) * x), name
        assert integral_certificate(h, P) == 1, name


@pytest.mark.criterion(3, "Theta o Theta^-1 = id and nondegenerate Gram matrix")
def test_theta(examples):
    for name, h in examples.items():
        t = integral_space(h).generator
        rep = verify_theta(h, t)
        assert rep["Theta o Theta^-1 = id"].passed, name
        assert rep.passed, name
        fs = frobenius_system(h, t)
        G = np.einsum("ijk,k->ij", h.alg.mult, fs.phi)
        assert rank(G) == h.dim, name


@pytest.mark.criterion(4, "Frobenius systems, Nakayama, eps = mu o eta; Sweedler mu != eps, C2 mu = eps")
def test_frobenius_nakayama(examples):
    for name, h in examples.items():
        H = h.alg
        fs = frobenius_system(h)
        rep = verify_frobenius_system(H, fs)
        assert rep.passed, f"{name}\n{rep.summary()}"
        for a, x in itertools.product(range(h.dim), repeat=2):
            ea, ex = H.basis(a), H.basis(x)
            assert fs.phi @ H.mul(ea, ex) == fs.phi @ H.mul(ex, fs.eta @ ea), name
        mu = modular_augmentation(h)
        assert exact_equal(fs.eta.T @ mu, h.counit), name
    assert not exact_equal(modular_augmentation(examples["Sweedler"]), examples["Sweedler"].counit)
    assert exact_equal(modular_augmentation(examples["C2"]), examples["C2"].counit)


@pytest.mark.criterion(5, "pre-Radford identity on all examples and >= 10 gauge-twisted variants")
def test_pre_radford(examples):
    for name, h in examples.items():
        res = pre_radford_check(h)
        assert res.passed, f"{name}\n{res.report.summary()}"
    bases = [examples["Sweedler"], examples["twisted Z2"], examples["C2"]]
    variants = twisted_variants(bases, 12, seed=7)
    assert len(variants) >= 10
    nontrivial = 0
    for h, base in zip(variants, itertools.cycle(bases)):
        assert verify_all(h).passed
        nontrivial += not exact_equal(h.qb.phi, base.qb.phi)
        res = pre_radford_check(h)
        assert res.passed, f"{h.name}\n{res.report.summary()}"
    assert nontrivial >= 4
    # one twist of the 6-dimensional S3 as well
    s3 = examples["S3"]
    (h,) = twisted_variants([s3], 1, seed=0)
    assert not exact_equal(h.qb.phi, s3.qb.phi)
    assert pre_radford_check(h).passed


@pytest.mark.criterion(6, "fourth-power antipode formula; Hopf Radford formula on Sweedler agrees")
def test_hausser_nill(examples):
    for name, h in examples.items():
        res = hn_fourth_power_check(h)
        assert res.passed, f"{name}\n{res.report.summary()}"
    sw = examples["Sweedler"]
    rad = hopf_radford_check(sw)
    assert rad.passed, rad.report.summary()
    assert exact_equal(rad.lhs, QQ.identity(4))
    assert rad.report["agrees with Hausser-Nill prediction"].passed
    assert exact_equal(hn_fourth_power_check(sw).extras["S4_predicted"], rad.rhs)


@pytest.mark.criterion(7, "separability criterion in both directions")
def test_separability(examples, c2_f2):
    for name in ("twisted Z2", "S3"):
        h = examples[name]
        certs, _ = separability_elements(h)
        assert len(certs) == 4 and all(c.passed for c in certs), name
        s = counit_splitting(h)
        assert s is not None and h.eps(s) == 1, name
        H = h.alg
        for a in range(h.dim):
            assert exact_equal(H.mul(H.basis(a), s), h.eps(H.basis(a)) * s), name
        an = separability_analysis(h)
        assert an.separable and an.report.passed, name
        assert is_unimodular(h), name
    for h in (examples["Sweedler"], c2_f2):
        assert normalized_integral(h) is None
        assert normalized_integral(h, "right") is None
        certs, diag = separability_elements(h)
        assert certs == [] and diag
        assert counit_splitting(h) is None
        an = separability_analysis(h)
        assert not an.separable and an.report.passed


@pytest.mark.criterion(8, "strong separability of Q[S3]: u = 1, eta = id, lambda a trace")
def test_strong_separability(s3):
    H = s3.alg
    assert exact_equal(s3.S @ s3.S, QQ.identity(6))
    assert exact_equal(H.mul(s3.beta, s3.S @ s3.alpha), H.unit)
    res = strong_separability_check(s3)
    assert res.hypotheses and res.strongly_separable
    assert exact_equal(res.u, H.unit)
    for law in ("u = 1", "eta = id", "lambda(ab) = lambda(ba)", "dual bases tensor symmetric"):
        assert res.report[law].passed, law
    assert res.report.passed


@pytest.mark.criterion(9, "integral qp lemmas")
def test_integral_qp_lemmas(examples):
    for name, h in examples.items():
        rep = integral_qp_lemmas(h)
        assert len(rep.checks) == 4
        assert rep.passed, f"{name}\n{rep.summary()}"


@pytest.mark.criterion(10, "beta-Frobenius extensions Q[C3] in Q[S3] and group-likes in Sweedler")
def test_beta_frobenius(s3, sweedler):
    labels = list(s3.alg.labels)
    c3 = QQ.identity(6)[[labels.index(p) for p in ("012", "120", "201")]]
    for h, rows in ((s3, c3), (sweedler, QQ.identity(4)[[0, 1]])):
        pair = subalgebra_pair(h, rows)
        rep = verify_subalgebra(pair)
        assert rep.passed, rep.summary()
        rel = relative_nakayama(pair)
        assert rel.report.passed
        cert = extension_frobenius_hom(pair)
        assert cert.report["F lands in K"].passed
        assert cert.report["F(k a k') = beta_rel(k) F(a) k'"].passed
        assert cert.report["extension dual bases exist"].passed
        assert cert.passed, cert.report.summary()


@pytest.mark.criterion(11, "cointegral projection E and P-invariance of lambda")
def test_cointegral(examples):
    for name, h in examples.items():
        rep = verify_cointegral(h)
        for law in ("E(lambda o S) = lambda o S", "E o E = E", "lambda(P(x)) = lambda(x)"):
            assert rep[law].passed, f"{name}: {law}"


@pytest.mark.criterion(12, "bit-exact file round trip; report on all shipped files exits 0 in < 30 s")
def test_infrastructure():
    paths = shipped_paths()
    assert len(paths) >= 4
    for p in paths:
        text = p.read_text(encoding="utf-8")
        assert serialize_presentation(parse_presentation(text, str(p))) == text
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "qhfrob.workbench.cli", "report", *map(str, paths)],
        capture_output=True,
        text=True,
        timeout=120,
    )
    elapsed = time.perf_counter() - start
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "overall: PASS" in proc.stdout
    assert elapsed < 30.0
