"""Separability, unimodularity and fourth-power antipode formulas."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    PresentationError,
    QuasiHopfPresentation,
    VerificationReport,
    apply_leg,
    outer,
)
from .exactlin import exact_equal, inverse, kernel_basis, rank, solve_linear
from .frobenius import (
    FrobeniusSystem,
    _proportion,
    antipode_transform,
    derivative,
    frobenius_system,
    integral_space,
    modular_augmentation,
    nakayama,
    projection_matrix,
    underline_coproduct,
)

__all__ = [
    "SeparabilityCertificate",
    "SeparabilityAnalysis",
    "StrongSeparability",
    "RadfordReport",
    "Comodulus",
    "normalized_integral",
    "separability_elements",
    "counit_splitting",
    "integral_from_separability",
    "separability_analysis",
    "is_unimodular",
    "strong_separability_check",
    "integral_qp_lemmas",
    "pre_radford_check",
    "comodulus",
    "hn_fourth_power_check",
    "cointegral_matrix",
    "cointegral_projection_E",
    "verify_cointegral",
    "hopf_radford_check",
]


def normalized_integral(h: QuasiHopfPresentation, side: str = "left") -> np.ndarray | None:
    """t / ε(t) when ε(t) is a unit of the field, else None."""
    t = integral_space(h, side).generator
    e = h.eps(t)
    if not h.field.is_unit(e):
        return None
    return t / e


# ---------------------------------------------------------------- separability


@dataclass(frozen=True, eq=False)
class SeparabilityCertificate:
    element: np.ndarray
    variant: str
    normalized_integral: np.ndarray
    report: VerificationReport

    @property
    def passed(self) -> bool:
        return self.report.passed


def check_separability_element(h: QuasiHopfPresentation, e: np.ndarray, name: str = "e") -> VerificationReport:
    """e¹e² = 1 and a e¹⊗e² = e¹⊗e² a on every basis a."""
    H = h.alg
    rep = VerificationReport(f"separability element {name}")
    rep.scan("e1 e2 = 1", [()], lambda _: (H.contract(e, [None, None], [(0, 1)]), H.unit))
    rep.scan(
        "Casimir: a e1 (x) e2 = e1 (x) e2 a",
        range(H.dim),
        lambda i: (H.tmul(outer(H.basis(i), H.unit), e), H.tmul(e, outer(H.unit, H.basis(i)))),
    )
    return rep


def separability_elements(h: QuasiHopfPresentation) -> tuple[list[SeparabilityCertificate], str]:
    """The four candidates built from normalized integrals, each verified.

    Returns the certificates together with a diagnostic string (empty when
    normalized integrals exist).
    """
    t = normalized_integral(h, "left")
    r = normalized_integral(h, "right")
    if t is None and r is None:
        return [], "no normalized left or right integral"
    H = h.alg
    qp = h.qp
    Ra = H.left_matrix(h.alpha)
    Rb = H.right_matrix(h.beta)
    certs = []
    if r is not None:
        for name, p in (("e1", qp.p_L), ("e2", qp.p_R)):
            T = H.tmul(h.cop(r), p)
            e = apply_leg(apply_leg(T, h.S, 0), Ra, 1)
            certs.append(SeparabilityCertificate(e, name, r, check_separability_element(h, e, name)))
    if t is not None:
        for name, q in (("e3", qp.q_L), ("e4", qp.q_R)):
            T = H.tmul(q, h.cop(t))
            e = apply_leg(apply_leg(T, Rb, 0), h.S, 1)
            certs.append(SeparabilityCertificate(e, name, t, check_separability_element(h, e, name)))
    diag = "" if (t is not None and r is not None) else "only one normalized integral"
    return certs, diag


def counit_splitting(h: QuasiHopfPresentation, side: str = "left") -> np.ndarray | None:
    """Solve for an H-linear splitting k -> H of the counit.

    Its value at 1 is an element t with at = ε(a)t (resp. ta = ε(a)t) and
    ε(t) = 1; returns None when the sequence does not split.
    """
    H = h.alg
    n = H.dim
    I = h.field.identity(n)
    rows = []
    for a in range(n):
        e = H.basis(a)
        M = H.left_matrix(e) if side == "left" else H.right_matrix(e)
        rows.append(M - h.eps(e) * I)
    rows.append(h.counit.reshape(1, n))
    A = np.concatenate(rows, axis=0)
    b = h.field.zeros(A.shape[0])
    b[-1] = h.field.one
    return solve_linear(A, b)


def integral_from_separability(h: QuasiHopfPresentation, e: np.ndarray) -> np.ndarray:
    """e¹ε(e²), a normalized left integral whenever e is a separability element."""
    return np.tensordot(e, h.counit, axes=([1], [0]))


@dataclass(frozen=True, eq=False)
class SeparabilityAnalysis:
    normalized_left: np.ndarray | None
    normalized_right: np.ndarray | None
    certificates: list[SeparabilityCertificate]
    splitting: np.ndarray | None
    unimodular: bool
    diagnostic: str
    report: VerificationReport

    @property
    def separable(self) -> bool:
        return any(c.passed for c in self.certificates)


def separability_analysis(h: QuasiHopfPresentation) -> SeparabilityAnalysis:
    """Both directions of the integral criterion for separability.

    (<=) builds the four candidate elements from normalized integrals;
    (=>) recovers a normalized integral from the splitting of the counit
    sequence and from each passing separability element.
    """
    H = h.alg
    t = normalized_integral(h, "left")
    r = normalized_integral(h, "right")
    certs, diag = separability_elements(h)
    split = counit_splitting(h, "left")
    uni = is_unimodular(h)
    rep = VerificationReport("separability")
    has_int = t is not None
    rep.add("normalized integral <=> splitting", has_int == (split is not None))
    rep.add("normalized integral <=> certificate", has_int == any(c.passed for c in certs))
    if has_int:
        rep.add("all four certificates pass", len(certs) == 4 and all(c.passed for c in certs))
        rep.add("separable => unimodular", uni)
        rep.add("splitting is a normalized left integral", _is_normalized_left(h, split))
    for c in certs:
        if c.passed:
            s = integral_from_separability(h, c.element)
            rep.add(f"{c.variant} => normalized left integral", _is_normalized_left(h, s))
    return SeparabilityAnalysis(t, r, certs, split, uni, diag, rep)


def _is_normalized_left(h: QuasiHopfPresentation, t: np.ndarray | None) -> bool:
    if t is None:
        return False
    H = h.alg
    return h.eps(t) == 1 and all(
        exact_equal(H.mul(H.basis(i), t), h.eps(H.basis(i)) * t) for i in range(H.dim)
    )


def is_unimodular(h: QuasiHopfPresentation) -> bool:
    """Left and right integral spaces coincide."""
    L = integral_space(h, "left")
    R = integral_space(h, "right")
    return L.dim == R.dim and all(R.contains(v) for v in L.basis)


@dataclass(frozen=True, eq=False)
class StrongSeparability:
    u: np.ndarray
    strongly_separable: bool
    hypotheses: bool
    report: VerificationReport


def strong_separability_check(h: QuasiHopfPresentation, fs: FrobeniusSystem | None = None) -> StrongSeparability:
    """u = Σ y_i x_i and the trace conclusions when the hypotheses hold.

    The conclusions u = 1, η = id and λ a trace are asserted for the system
    built from the normalized (Haar) integral; pass ``fs=None`` to use it.
    """
    H = h.alg
    n = H.dim
    if fs is None:
        t = normalized_integral(h, "left")
        fs = frobenius_system(h, t if t is not None else None)
    u = sum((H.mul(fs.y[i], fs.x[i]) for i in range(len(fs.x))), H.zero())
    strong = H.is_invertible(u)
    S2_id = exact_equal(h.S @ h.S, h.field.identity(n))
    bsa = exact_equal(H.mul(h.beta, h.S @ h.alpha), H.unit)
    hyp = S2_id and bsa
    rep = VerificationReport("strong separability")
    haar = fs.integral is not None and h.eps(fs.integral) == 1
    separable = normalized_integral(h, "left") is not None
    if hyp and separable and haar:
        rep.scan("u = 1", [()], lambda _: (u, H.unit))
        rep.scan("eta = id", [()], lambda _: (fs.eta, h.field.identity(n)))
        phi = fs.phi
        rep.scan(
            "lambda(ab) = lambda(ba)",
            ((i, j) for i in range(n) for j in range(n)),
            lambda w: (phi @ H.mul(H.basis(w[0]), H.basis(w[1])), phi @ H.mul(H.basis(w[1]), H.basis(w[0]))),
        )
        rep.scan("dual bases tensor symmetric", [()], lambda _: (fs.tensor, fs.tensor.T))
    if strong:
        # the Nakayama automorphism is then a ↦ u^{-1} a u
        rep.scan("eta = Ad_{u^-1}", [()], lambda _: (fs.eta, H.ad(H.inv(u))))
    return StrongSeparability(u, strong, hyp, rep)


def integral_qp_lemmas(
    h: QuasiHopfPresentation, t: np.ndarray | None = None, r: np.ndarray | None = None
) -> VerificationReport:
    H = h.alg
    if t is None:
        t = integral_space(h, "left").generator
    if r is None:
        r = integral_space(h, "right").generator
    qp = h.qp
    dt = h.cop(t)
    dr = h.cop(r)
    qt = H.tmul(qp.q_R, dt)
    rp = H.tmul(dr, qp.p_R)
    rep = VerificationReport("integral qp lemmas")
    rep.scan(
        "q1 t1 (x) S^-1(beta) q2 t2 = Delta(t)",
        [()],
        lambda _: (apply_leg(qt, H.left_matrix(h.S_inv @ h.beta), 1), dt),
    )
    rep.scan(
        "r1 p1 (x) r2 p2 alpha = Delta(r)",
        [()],
        lambda _: (apply_leg(rp, H.right_matrix(h.alpha), 1), dr),
    )
    rep.scan(
        "beta q1 t1 (x) S(q2 t2) = t1 (x) S(t2)",
        [()],
        lambda _: (apply_leg(apply_leg(qt, H.left_matrix(h.beta), 0), h.S, 1), apply_leg(dt, h.S, 1)),
    )
    rep.scan(
        "r1 p1 S^-1(alpha) (x) r2 p2 = Delta(r)",
        [()],
        lambda _: (apply_leg(rp, H.right_matrix(h.S_inv @ h.alpha), 0), dr),
    )
    return rep


# ---------------------------------------------------------------- Radford-type formulas


@dataclass(frozen=True, eq=False)
class RadfordReport:
    d_or_u: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    holds: bool
    report: VerificationReport = field(default_factory=lambda: VerificationReport("radford"))
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.holds and self.report.passed


def pre_radford_check(h: QuasiHopfPresentation, fs: FrobeniusSystem | None = None) -> RadfordReport:
    """S∘η∘S^{-1}∘η = Ad_{d^{-1}}, d the derivative from φ to φ∘S^{-1}."""
    H = h.alg
    fs = frobenius_system(h) if fs is None else fs
    new = antipode_transform(H, fs, h.S, h.S_inv)
    res = derivative(H, fs, new.phi)
    rep = VerificationReport("pre-Radford")
    rep.extend(res.report, "derivative: ")
    rep.scan(
        "transformed Nakayama = S eta^-1 S^-1",
        [()],
        lambda _: (nakayama(H, new), h.S @ inverse(fs.eta) @ h.S_inv),
    )
    lhs = h.S @ fs.eta @ h.S_inv @ fs.eta
    rhs = H.left_matrix(res.d_inv) @ H.right_matrix(res.d)
    holds = exact_equal(lhs, rhs)
    rep.add("S eta S^-1 eta = Ad_{d^-1}", holds, lhs=lhs, rhs=rhs)
    return RadfordReport(res.d, lhs, rhs, holds, rep)


@dataclass(frozen=True, eq=False)
class Comodulus:
    u: np.ndarray
    u_inv: np.ndarray
    psi_system: FrobeniusSystem
    report: VerificationReport


def comodulus(h: QuasiHopfPresentation, fs: FrobeniusSystem | None = None) -> Comodulus:
    """u = Σ λ(x̃_i) ỹ_i over the dual bases of ψ = λ∘S."""
    H = h.alg
    fs = frobenius_system(h) if fs is None else fs
    fs_psi = antipode_transform(H, fs, h.S_inv, h.S)
    res = derivative(H, fs_psi, fs.phi)
    return Comodulus(res.d, res.d_inv, fs_psi, res.report)


def hn_fourth_power_check(h: QuasiHopfPresentation, fs: FrobeniusSystem | None = None) -> RadfordReport:
    """S²∘S_μ² = Ad_{u^{-1}} with S_μ(a) = S(a)↼μ."""
    H = h.alg
    fs = frobenius_system(h) if fs is None else fs
    mu = modular_augmentation(h, fs.integral)
    cm = comodulus(h, fs)
    S, Si = h.S, h.S_inv
    hit_mu = h.right_hit(mu)
    S_mu = hit_mu @ S
    rho = S @ S_mu
    rep = VerificationReport("Hausser-Nill")
    rep.extend(cm.report, "comodulus: ")
    rep.scan("psi = lambda o S", [()], lambda _: (cm.psi_system.phi, S.T @ fs.phi))
    rep.scan("Nakayama of psi = S o S_mu", [()], lambda _: (nakayama(H, cm.psi_system), rho))
    rep.scan("eta^-1 = S^2 o (- <- mu)", [()], lambda _: (inverse(fs.eta), S @ S @ hit_mu))
    rep.scan("epsilon = mu o eta", [()], lambda _: (fs.eta.T @ mu, h.counit))
    if fs.integral is not None:
        # t_(2) ⊗ S^{-1}(t_(1)), underlined coproduct, is a dual-bases tensor for ψ
        T = apply_leg(underline_coproduct(h, fs.integral).T.copy(), Si, 1)
        psi = cm.psi_system.phi
        rep.scan(
            "t2 (x) S^-1(t1): sum psi(a x_i) y_i = a",
            range(H.dim),
            lambda a: (T.T @ (H.left_matrix(H.basis(a)).T @ psi), H.basis(a)),
        )
        rep.scan(
            "t2 (x) S^-1(t1): sum x_i psi(y_i a) = a",
            range(H.dim),
            lambda a: (T @ (H.right_matrix(H.basis(a)).T @ psi), H.basis(a)),
        )
    lhs = S @ S @ S_mu @ S_mu
    rhs = H.left_matrix(cm.u_inv) @ H.right_matrix(cm.u)
    holds = exact_equal(lhs, rhs)
    rep.add("S^2 S_mu^2 = Ad_{u^-1}", holds, lhs=lhs, rhs=rhs)
    # S² predicted by the formula
    S2_pred = rhs @ inverse(S_mu @ S_mu)
    return RadfordReport(cm.u, lhs, rhs, holds, rep, {"mu": mu, "S_mu": S_mu, "S4_predicted": S2_pred @ S2_pred})


# ---------------------------------------------------------------- cointegrals


def cointegral_matrix(h: QuasiHopfPresentation, P: np.ndarray | None = None) -> np.ndarray:
    """Matrix of E on functionals: ⟨E(f)|x⟩ = ⟨f|S^{-1} P S(x)⟩."""
    P = projection_matrix(h) if P is None else P
    return (h.S_inv @ P @ h.S).T


def cointegral_projection_E(h: QuasiHopfPresentation, f: np.ndarray, P: np.ndarray | None = None) -> np.ndarray:
    return cointegral_matrix(h, P) @ f


def verify_cointegral(h: QuasiHopfPresentation, fs: FrobeniusSystem | None = None, P=None) -> VerificationReport:
    P = projection_matrix(h) if P is None else P
    fs = frobenius_system(h, None, P) if fs is None else fs
    E = cointegral_matrix(h, P)
    psi = h.S.T @ fs.phi
    rep = VerificationReport("cointegral")
    rep.scan("E(lambda o S) = lambda o S", [()], lambda _: (E @ psi, psi))
    rep.scan("E o E = E", [()], lambda _: (E @ E, E))
    rep.scan(
        "lambda(P(x)) = lambda(x)",
        range(h.dim),
        lambda j: (fs.phi @ P[:, j], fs.phi[j]),
    )
    rep.add("rank E = 1", rank(E) == 1)
    return rep


# ---------------------------------------------------------------- Hopf case


def hopf_radford_check(h: QuasiHopfPresentation) -> RadfordReport:
    """S⁴(x) = b (m^{-1} ⇀ x ↼ m) b^{-1} for a Hopf algebra.

    t is a right integral, f the right integral of H* (f(x_(1)) x_(2) =
    f(x) 1) with f(t) = 1, m the character with a t = m(a) t and b the
    group-like element with γ f = γ(b) f.
    """
    if not h.is_hopf:
        raise PresentationError("Radford's formula needs a Hopf algebra (trivial associator, alpha = beta = 1)")
    H = h.alg
    n = H.dim
    F = h.field
    t = integral_space(h, "right").generator
    D = h.qb.delta  # D[j, u, v]: coefficient of e_u ⊗ e_v in Δ(e_j)
    # rows (j, v): Σ_u D[j,u,v] f_u - f_j unit_v = 0
    A = F.zeros((n * n, n))
    for j in range(n):
        for v in range(n):
            row = A[j * n + v]
            for u in range(n):
                row[u] = row[u] + D[j, u, v]
            row[j] = row[j] - H.unit[v]
    ker = kernel_basis(A)
    if len(ker) != 1:
        raise PresentationError(f"space of right integrals in H* has dimension {len(ker)}")
    f = ker[0]
    if f @ t == 0:
        raise PresentationError("f(t) = 0")
    f = f / (f @ t)
    m = []
    for i in range(n):
        c = _proportion(H.mul(H.basis(i), t), t)
        if c is None:
            raise PresentationError("a t is not a multiple of t")
        m.append(c)
    m = np.array(m, dtype=object)
    m_inv = h.S.T @ m
    # (f^j f)(e_i) = Σ_v D[i, j, v] f_v = b_j f(e_i)
    b = []
    for j in range(n):
        c = _proportion(np.einsum("iv,v->i", D[:, j, :], f), f)
        if c is None:
            raise PresentationError("f^j f is not a multiple of f")
        b.append(c)
    b = np.array(b, dtype=object)
    b_inv = H.inv(b)
    rep = VerificationReport("Hopf Radford")
    rep.scan("Delta(b) = b (x) b", [()], lambda _: (h.cop(b), outer(b, b)))
    rep.scan("m * (m o S) = epsilon", [()], lambda _: (_conv(h, m, m_inv), h.counit))
    S4 = h.S @ h.S @ h.S @ h.S
    rhs = H.left_matrix(b) @ H.right_matrix(b_inv) @ h.left_hit(m_inv) @ h.right_hit(m)
    holds = exact_equal(S4, rhs)
    rep.add("S^4 = b (m^-1 -> x <- m) b^-1", holds, lhs=S4, rhs=rhs)
    hn = hn_fourth_power_check(h)
    rep.scan("agrees with Hausser-Nill prediction", [()], lambda _: (hn.extras["S4_predicted"], rhs))
    return RadfordReport(b, S4, rhs, holds, rep, {"t": t, "f": f, "m": m, "b": b})


def _conv(h: QuasiHopfPresentation, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Convolution (f g)(x) = f(x_(1)) g(x_(2)) as a functional."""
    return np.einsum("iuv,u,v->i", h.qb.delta, f, g)
