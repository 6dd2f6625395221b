"""Report assembly for the command-line tool."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..core import CheckResult, PresentationError, QuasiHopfPresentation, VerificationReport, verify_all
from ..exactlin import Mod, SingularError, exact_equal
from ..extensions import extension_frobenius_hom, subalgebra_pair, verify_subalgebra
from ..frobenius import (
    derivative,
    frobenius_system,
    integral_certificate,
    integral_space,
    modular_augmentation,
    projection_matrix,
    verify_frobenius_system,
    verify_theta,
)
from ..structure import (
    hn_fourth_power_check,
    hopf_radford_check,
    integral_qp_lemmas,
    normalized_integral,
    pre_radford_check,
    separability_analysis,
    strong_separability_check,
    verify_cointegral,
)
from .fileformat import PresentationFile

__all__ = ["Section", "ReportDocument", "SECTIONS", "build_report", "to_jsonable", "format_element"]


def to_jsonable(x):
    """Exact values as strings; arrays as nested lists."""
    if isinstance(x, (Fraction, Mod)):
        return str(x)
    if isinstance(x, np.ndarray):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return x


def format_element(v: np.ndarray, labels=None) -> str:
    """Human-readable linear combination of basis labels."""
    labels = labels or [f"e{i}" for i in range(len(v))]
    terms = []
    for c, lab in zip(v, labels):
        if c == 0:
            continue
        if c == 1:
            terms.append(lab)
        elif c == -1 and not isinstance(c, Mod):
            terms.append(f"-{lab}")
        else:
            terms.append(f"{c}*{lab}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


@dataclass
class Section:
    title: str
    checks: list = field(default_factory=list)
    objects: dict = field(default_factory=dict)
    findings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def take(self, rep: VerificationReport, prefix: str = ""):
        for c in rep.checks:
            c = c if not prefix else type(c)(prefix + c.law, c.passed, c.witness, c.lhs, c.rhs, c.note)
            self.checks.append(c)

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [
                {
                    "law": c.law,
                    "passed": c.passed,
                    **({"witness": to_jsonable(c.witness)} if c.witness is not None and not c.passed else {}),
                    **({"lhs": to_jsonable(c.lhs), "rhs": to_jsonable(c.rhs)} if not c.passed and c.lhs is not None else {}),
                    **({"note": c.note} if c.note else {}),
                }
                for c in self.checks
            ],
            "findings": to_jsonable(self.findings),
            "objects": to_jsonable(self.objects),
        }


@dataclass
class ReportDocument:
    subject: str
    source: str
    field_tag: str
    sections: list[Section] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.sections)

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "source": self.source,
            "field": self.field_tag,
            "passed": self.passed,
            "sections": [s.to_json() for s in self.sections],
        }

    def render(self, verbose: bool = False) -> str:
        lines = [f"== {self.subject} [{self.field_tag}] ({self.source}): {'PASS' if self.passed else 'FAIL'}"]
        for s in self.sections:
            n_ok = sum(c.passed for c in s.checks)
            lines.append(f"  [{'PASS' if s.passed else 'FAIL'}] {s.title} ({n_ok}/{len(s.checks)} checks)")
            for c in s.checks:
                if verbose or not c.passed:
                    lines.append(f"      {c}")
            for k, v in s.findings.items():
                lines.append(f"      {k}: {v}")
        return "\n".join(lines)


class _Context:
    """Lazily computed objects shared between sections."""

    def __init__(self, h: QuasiHopfPresentation):
        self.h = h
        self._cache = {}

    def get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def P(self):
        return self.get("P", lambda: projection_matrix(self.h))

    @property
    def t(self):
        return self.get("t", lambda: integral_space(self.h, "left").generator)

    @property
    def fs(self):
        return self.get("fs", lambda: frobenius_system(self.h, self.t, self.P))

    @property
    def mu(self):
        return self.get("mu", lambda: modular_augmentation(self.h, self.t))

    def el(self, v):
        return format_element(v, self.h.alg.labels)


def _section_check(ctx: _Context) -> Section:
    s = Section("axioms")
    s.take(verify_all(ctx.h))
    return s


def _section_integrals(ctx: _Context) -> Section:
    h = ctx.h
    s = Section("integrals")
    L = integral_space(h, "left")
    R = integral_space(h, "right")
    s.checks.append(_bool("dim left integrals = 1", L.dim == 1, f"dim = {L.dim}"))
    s.checks.append(_bool("dim right integrals = 1", R.dim == 1, f"dim = {R.dim}"))
    s.objects.update(left_integrals=L.basis, right_integrals=R.basis)
    if L.dim != 1:
        return s
    P = ctx.P
    s.checks.append(_bool("P maps into left integrals", all(L.contains(P[:, j]) for j in range(h.dim))))
    cert = integral_certificate(h, P)
    s.checks.append(_bool("nonzero-integral certificate = epsilon(beta)", cert == h.eps(h.beta), f"value {cert}"))
    t_norm = normalized_integral(h, "left")
    s.objects.update(P=P, certificate=cert, mu=ctx.mu, normalized_left=t_norm)
    s.findings.update(
        left_integral=ctx.el(ctx.t),
        generator_choice="first nonzero coordinate 1",
        epsilon_t=str(h.eps(ctx.t)),
        normalized=t_norm is not None,
        mu=[str(c) for c in ctx.mu],
    )
    return s


def _section_frobenius(ctx: _Context) -> Section:
    h = ctx.h
    H = h.alg
    s = Section("frobenius")
    fs = ctx.fs
    s.take(verify_theta(h, ctx.t, ctx.P), "theta: ")
    s.take(verify_frobenius_system(H, fs))
    s.checks.append(_bool("epsilon = mu o eta", exact_equal(fs.eta.T @ ctx.mu, h.counit)))
    same = derivative(H, fs, fs.phi)
    s.take(same.report, "derivative (psi = lambda): ")
    s.checks.append(_bool("derivative of lambda to itself is 1", exact_equal(same.d, H.unit)))
    s.take(verify_cointegral(h, fs, ctx.P))
    s.objects.update(integral=ctx.t, **{"lambda": fs.phi}, dual_x=fs.x, dual_y=fs.y, eta=fs.eta, mu=ctx.mu)
    s.findings.update(
        **{"lambda": [str(c) for c in fs.phi]},
        eta_is_identity=exact_equal(fs.eta, h.field.identity(h.dim)),
        unimodular=exact_equal(ctx.mu, h.counit),
    )
    return s


def _section_radford(ctx: _Context) -> Section:
    h = ctx.h
    s = Section("radford")
    pr = pre_radford_check(h, ctx.fs)
    s.take(pr.report, "pre-Radford: ")
    hn = hn_fourth_power_check(h, ctx.fs)
    s.take(hn.report, "Hausser-Nill: ")
    s.objects.update(d=pr.d_or_u, u=hn.d_or_u, mu=hn.extras["mu"], S_mu=hn.extras["S_mu"])
    s.findings.update(d=ctx.el(pr.d_or_u), u=ctx.el(hn.d_or_u))
    if h.is_hopf:
        hr = hopf_radford_check(h)
        s.take(hr.report, "Hopf Radford: ")
        s.objects.update(b=hr.extras["b"], m=hr.extras["m"])
        s.findings.update(b=ctx.el(hr.extras["b"]), m=[str(c) for c in hr.extras["m"]])
    return s


def _section_separability(ctx: _Context) -> Section:
    h = ctx.h
    s = Section("separability")
    sa = separability_analysis(h)
    s.take(sa.report)
    for c in sa.certificates:
        s.take(c.report, f"{c.variant}: ")
    ss = strong_separability_check(h)
    s.take(ss.report)
    s.take(integral_qp_lemmas(h, ctx.t))
    s.findings.update(
        separable=sa.separable,
        unimodular=sa.unimodular,
        strongly_separable=ss.strongly_separable,
        u=ctx.el(ss.u),
    )
    if sa.diagnostic:
        s.findings["diagnostic"] = sa.diagnostic
    s.objects.update(
        certificates={c.variant: {"passed": c.passed, "element": c.element} for c in sa.certificates},
        splitting=sa.splitting,
        normalized_left=sa.normalized_left,
        normalized_right=sa.normalized_right,
        u=ss.u,
    )
    return s


def _section_extension(ctx: _Context, doc: PresentationFile) -> Section:
    h = ctx.h
    spec = doc.subalgebra
    s = Section("extension")
    pair = subalgebra_pair(h, spec.basis, spec.phi, spec.alpha, spec.beta, name=spec.name)
    s.take(verify_subalgebra(pair), "subalgebra: ")
    s.findings["subalgebra"] = spec.name or f"dim {pair.m}"
    if not s.passed:
        return s
    cert = extension_frobenius_hom(pair)
    s.take(cert.report)
    s.objects.update(
        F=cert.F,
        beta_rel=cert.beta_rel,
        Lambda=cert.Lambda,
        right_K_basis=cert.right_basis,
        dual_bases=cert.dual_bases_ext,
    )
    s.findings.update(
        beta_rel_is_identity=exact_equal(cert.beta_rel, pair.sub.field.identity(pair.m)),
        free_rank=None if cert.right_basis is None else len(cert.right_basis),
        Lambda_choice="first nonzero coordinate 1; rescaling Lambda rescales F by a unit of k",
    )
    return s


def _bool(law: str, ok: bool, note: str = ""):
    return CheckResult(law, bool(ok), note=note)


SECTIONS = ("check", "integrals", "frobenius", "radford", "separability", "extension")


def build_report(doc: PresentationFile, sections=SECTIONS) -> ReportDocument:
    """Run the requested sections; computation errors become failed checks."""
    h = doc.presentation
    rep = ReportDocument(h.name, doc.source, h.field.tag)
    ctx = _Context(h)
    runners = {
        "check": _section_check,
        "integrals": _section_integrals,
        "frobenius": _section_frobenius,
        "radford": _section_radford,
        "separability": _section_separability,
    }
    for name in sections:
        if name == "extension":
            if doc.subalgebra is None:
                continue
            fn = lambda c: _section_extension(c, doc)  # noqa: E731
        else:
            fn = runners[name]
        try:
            sec = fn(ctx)
        except (PresentationError, SingularError) as exc:
            sec = Section(name)
            sec.checks.append(_bool(f"{name} computation", False, str(exc)))
        rep.sections.append(sec)
    return rep
