"""Integrals, the projection onto left integrals, the Θ isomorphism and
Frobenius coordinate systems.

Harpoon conventions on functionals: ``(f ↼ a)(x) = f(a x)`` and
``(a ⇀ f)(x) = f(x a)``.  The projective bases are the standard basis
``a_i = e_i`` and the coordinate functionals ``f^i``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AlgebraPresentation,
    PresentationError,
    QuasiHopfPresentation,
    VerificationReport,
    apply_leg,
)
from .exactlin import SingularError, exact_equal, inverse, kernel_basis, rank

__all__ = [
    "IntegralSpace",
    "FrobeniusSystem",
    "DerivativeResult",
    "integral_space",
    "projection_matrix",
    "projection_P",
    "integral_certificate",
    "underline_coproduct",
    "theta",
    "theta_inv",
    "verify_theta",
    "frobenius_system",
    "system_from_functional",
    "nakayama",
    "verify_frobenius_system",
    "modular_augmentation",
    "derivative",
    "antipode_transform",
    "hit_left",
    "hit_right",
]


def hit_left(alg: AlgebraPresentation, f: np.ndarray, a: np.ndarray) -> np.ndarray:
    """``f ↼ a``: x -> f(a x)."""
    return alg.left_matrix(a).T @ f


def hit_right(alg: AlgebraPresentation, a: np.ndarray, f: np.ndarray) -> np.ndarray:
    """``a ⇀ f``: x -> f(x a)."""
    return alg.right_matrix(a).T @ f


def _first_nonzero(v: np.ndarray) -> int:
    for i, c in enumerate(v):
        if c != 0:
            return i
    raise ValueError("zero vector")


def _proportion(v: np.ndarray, t: np.ndarray):
    """The scalar c with v = c t, or None."""
    k = _first_nonzero(t)
    c = v[k] / t[k]
    return c if exact_equal(v, c * t) else None


# ---------------------------------------------------------------- integrals


@dataclass(frozen=True, eq=False)
class IntegralSpace:
    side: str
    basis: list[np.ndarray]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def consistent(self) -> bool:
        return self.dim == 1

    @property
    def generator(self) -> np.ndarray:
        if self.dim != 1:
            raise PresentationError(
                f"{self.side} integral space has dimension {self.dim}; "
                "a quasi-Hopf algebra over a field has exactly one"
            )
        return self.basis[0]

    def contains(self, x: np.ndarray) -> bool:
        if not self.basis:
            return all(c == 0 for c in x)
        M = np.stack(self.basis, axis=1)
        return rank(M) == rank(np.concatenate([M, x.reshape(-1, 1)], axis=1))


def integral_space(h: QuasiHopfPresentation, side: str = "left") -> IntegralSpace:
    """Kernel of ``{a t - ε(a) t}`` (left) or ``{t a - ε(a) t}`` (right)."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    H = h.alg
    n = H.dim
    I = h.field.identity(n)
    blocks = []
    for a in range(n):
        e = H.basis(a)
        M = H.left_matrix(e) if side == "left" else H.right_matrix(e)
        blocks.append(M - h.eps(e) * I)
    basis = []
    for v in kernel_basis(np.concatenate(blocks, axis=0)):
        basis.append(v / v[_first_nonzero(v)])
    return IntegralSpace(side, basis)


def projection_matrix(h: QuasiHopfPresentation) -> np.ndarray:
    """Matrix of P(x) = Σ_i f^i(β S²(q²_R a_i(2)) x) q¹_R a_i(1)."""
    H = h.alg
    n = H.dim
    q_R = h.qp.q_R
    # T[i] = q_R Δ(e_i)
    T = np.stack([H.tmul(q_R, h.cop(H.basis(i))) for i in range(n)])
    LbS2 = H.left_matrix(h.beta) @ h.S @ h.S
    cols = []
    for j in range(n):
        M = H.right_matrix(H.basis(j)) @ LbS2  # y -> β S²(y) e_j
        cols.append(np.einsum("iuv,iv->u", T, M))
    return np.stack(cols, axis=1)


def projection_P(h: QuasiHopfPresentation, x: np.ndarray) -> np.ndarray:
    return projection_matrix(h) @ x


def integral_certificate(h: QuasiHopfPresentation, P: np.ndarray | None = None):
    """Σ_j f^j(S(P(a_j) β)); equals ε(β), hence 1 for normalized α, β."""
    H = h.alg
    P = projection_matrix(h) if P is None else P
    total = h.field.zero
    for j in range(H.dim):
        total = total + (h.S @ H.mul(P[:, j], h.beta))[j]
    return total


def underline_coproduct(h: QuasiHopfPresentation, x: np.ndarray) -> np.ndarray:
    """q¹_R x_(1) p¹_R ⊗ q²_R x_(2) p²_R."""
    qp = h.qp
    return h.alg.tmul(qp.q_R, h.cop(x), qp.p_R)


def theta(h: QuasiHopfPresentation, t: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Θ(t ⊗ f) = f(S(t_(2))) t_(1) with the underlined coproduct."""
    return underline_coproduct(h, t) @ (h.S.T @ f)


def theta_inv(h: QuasiHopfPresentation, x: np.ndarray, t: np.ndarray, P: np.ndarray | None = None):
    """Θ^{-1}(x) = Σ_i P(a_i x) ⊗ f^i, written as ``t ⊗ g``; returns ``g``."""
    H = h.alg
    P = projection_matrix(h) if P is None else P
    g = []
    for i in range(H.dim):
        c = _proportion(P @ H.mul(H.basis(i), x), t)
        if c is None:
            raise PresentationError("P(a_i x) is not a multiple of the chosen integral")
        g.append(c)
    return np.array(g, dtype=object)


def verify_theta(h: QuasiHopfPresentation, t: np.ndarray, P: np.ndarray | None = None) -> VerificationReport:
    H = h.alg
    n = H.dim
    P = projection_matrix(h) if P is None else P
    rep = VerificationReport("theta")
    rep.scan("Theta o Theta^-1 = id", range(n), lambda i: (theta(h, t, theta_inv(h, H.basis(i), t, P)), H.basis(i)))
    f = h.field.identity(n)
    rep.scan("Theta^-1 o Theta = id", range(n), lambda j: (theta_inv(h, theta(h, t, f[j]), t, P), f[j]))
    return rep


# ---------------------------------------------------------------- Frobenius systems


@dataclass(frozen=True, eq=False)
class FrobeniusSystem:
    """Functional ``phi`` with dual bases: Σ φ(a x_i) y_i = a = Σ x_i φ(y_i a).

    ``x`` and ``y`` hold the basis elements as rows.
    """

    phi: np.ndarray
    x: np.ndarray
    y: np.ndarray
    eta: np.ndarray
    integral: np.ndarray | None = None

    @property
    def tensor(self) -> np.ndarray:
        """The dual-bases tensor Σ x_i ⊗ y_i."""
        return np.einsum("ia,ib->ab", self.x, self.y)

    @property
    def eta_inv(self) -> np.ndarray:
        return inverse(self.eta)


def nakayama(alg: AlgebraPresentation, fs: FrobeniusSystem) -> np.ndarray:
    """η(a) = Σ_i x_i φ(a y_i)."""
    n = alg.dim
    cols = []
    for j in range(n):
        e = alg.basis(j)
        weights = np.array([fs.phi @ alg.mul(e, fs.y[i]) for i in range(len(fs.y))], dtype=object)
        cols.append(weights @ fs.x)
    eta = np.stack(cols, axis=1)
    if rank(eta) != n:
        raise PresentationError("Nakayama map is singular")
    return eta


def gram(alg: AlgebraPresentation, phi: np.ndarray) -> np.ndarray:
    """G[i, j] = φ(e_i e_j)."""
    return np.einsum("ijk,k->ij", alg.mult, phi)


def system_from_functional(alg: AlgebraPresentation, phi: np.ndarray) -> FrobeniusSystem:
    """Dual bases for a nondegenerate φ with ``y_i = e_i``."""
    G = gram(alg, phi)
    try:
        Gi = inverse(G)
    except SingularError:
        raise PresentationError("functional is degenerate (singular Gram matrix)") from None
    # Σ_i x_i φ(e_i a) = a  <=>  X G = I with x_i the columns of X
    x = Gi.T.copy()
    y = alg.field.identity(alg.dim)
    fs = FrobeniusSystem(phi, x, y, alg.field.identity(alg.dim))
    return FrobeniusSystem(phi, x, y, nakayama(alg, fs))


def frobenius_system(h: QuasiHopfPresentation, t: np.ndarray | None = None, P: np.ndarray | None = None):
    """(λ, b_i, a_i, η) with λ = Θ^{-1}(1) and b_i = Θ(t ⊗ f^i)."""
    H = h.alg
    n = H.dim
    if t is None:
        t = integral_space(h, "left").generator
    P = projection_matrix(h) if P is None else P
    lam = theta_inv(h, H.unit, t, P)
    if lam @ t == 0:
        raise PresentationError("lambda(t) = 0: the integral does not pair with lambda")
    f = h.field.identity(n)
    b = np.stack([theta(h, t, f[i]) for i in range(n)])
    fs = FrobeniusSystem(lam, b, f.copy(), f.copy(), t)
    return FrobeniusSystem(lam, b, f.copy(), nakayama(H, fs), t)


def verify_frobenius_system(alg: AlgebraPresentation, fs: FrobeniusSystem) -> VerificationReport:
    n = alg.dim
    e = alg.basis
    phi = fs.phi
    rep = VerificationReport("Frobenius system")
    rep.scan(
        "Frobenius1: sum phi(a x_i) y_i = a",
        range(n),
        lambda j: (sum((phi @ alg.mul(e(j), fs.x[i])) * fs.y[i] for i in range(n)), e(j)),
    )
    rep.scan(
        "Frobenius2: sum x_i phi(y_i a) = a",
        range(n),
        lambda j: (sum(fs.x[i] * (phi @ alg.mul(fs.y[i], e(j))) for i in range(n)), e(j)),
    )
    rep.add("nondegenerate (Gram full rank)", rank(gram(alg, phi)) == n)
    rep.add("eta invertible", rank(fs.eta) == n)
    rep.scan(
        "phi(a x) = phi(x eta(a))",
        ((i, j) for i in range(n) for j in range(n)),
        lambda w: (phi @ alg.mul(e(w[0]), e(w[1])), phi @ alg.mul(e(w[1]), fs.eta @ e(w[0]))),
    )
    return rep


def modular_augmentation(h: QuasiHopfPresentation, t: np.ndarray | None = None) -> np.ndarray:
    """μ with t a = μ(a) t for the left integral t."""
    H = h.alg
    if t is None:
        t = integral_space(h, "left").generator
    mu = []
    for i in range(H.dim):
        c = _proportion(H.mul(t, H.basis(i)), t)
        if c is None:
            raise PresentationError(f"t e_{i} is not a multiple of t")
        mu.append(c)
    return np.array(mu, dtype=object)


# ---------------------------------------------------------------- derivative


@dataclass(frozen=True, eq=False)
class DerivativeResult:
    d: np.ndarray
    d_inv: np.ndarray
    system: FrobeniusSystem
    report: VerificationReport


def derivative(alg: AlgebraPresentation, fs: FrobeniusSystem, psi: np.ndarray) -> DerivativeResult:
    """d = Σ ψ(x_i) y_i, the element with ψ = φ ↼ d.

    ``system`` is a Frobenius system for ψ computed independently from the
    Gram matrix of ψ; the report certifies the transport identities.
    """
    n = alg.dim
    if rank(gram(alg, psi)) != n:
        raise PresentationError("psi is not a Frobenius homomorphism (degenerate)")
    d = np.array([psi @ fs.x[i] for i in range(n)], dtype=object) @ fs.y
    try:
        d_inv = alg.inv(d)
    except SingularError:
        raise PresentationError("derivative is singular: psi is not a Frobenius homomorphism") from None
    new = system_from_functional(alg, psi)
    rep = VerificationReport("derivative")
    rep.scan("psi = phi <- d", [()], lambda _: (hit_left(alg, fs.phi, d), psi))
    rep.scan(
        "sum u_j (x) d v_j = sum x_i (x) y_i",
        [()],
        lambda _: (apply_leg(new.tensor, alg.left_matrix(d), 1), fs.tensor),
    )
    rep.scan(
        "eta^-1 o rho = Ad_d",
        [()],
        lambda _: (inverse(fs.eta) @ new.eta, alg.ad(d)),
    )
    return DerivativeResult(d, d_inv, new, rep)


def antipode_transform(
    alg: AlgebraPresentation, fs: FrobeniusSystem, S: np.ndarray, S_inv: np.ndarray | None = None
) -> FrobeniusSystem:
    """(φ, x_i, y_i, η) -> (φ∘S^{-1}, S(y_i), S(x_i), S∘η^{-1}∘S^{-1})."""
    if S_inv is None:
        try:
            S_inv = inverse(S)
        except SingularError:
            raise PresentationError("anti-automorphism is singular") from None
    phi = S_inv.T @ fs.phi
    x = (S @ fs.y.T).T
    y = (S @ fs.x.T).T
    eta = S @ inverse(fs.eta) @ S_inv
    return FrobeniusSystem(phi, x, y, eta)
