"""Quasi-Hopf subalgebras and the β-Frobenius extension they form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AlgebraPresentation,
    PresentationError,
    QuasiBialgebraPresentation,
    QuasiHopfPresentation,
    VerificationReport,
    verify_all,
)
from .exactlin import exact_equal, inverse, rank, solve_linear
from .frobenius import frobenius_system, integral_space, modular_augmentation, underline_coproduct

__all__ = [
    "SubalgebraPair",
    "BetaFrobeniusCertificate",
    "subalgebra_pair",
    "verify_subalgebra",
    "nakayama_rho",
    "relative_nakayama",
    "extension_frobenius_hom",
    "right_module_basis",
]


@dataclass(frozen=True, eq=False)
class SubalgebraPair:
    """K ⊆ H given by ``sub_basis`` (rows, in H coordinates).

    ``sub`` is K as a presentation in its own coordinates, or None when the
    span is not closed under the structure maps (``reason`` says why).
    """

    ambient: QuasiHopfPresentation
    sub_basis: np.ndarray
    sub: QuasiHopfPresentation | None
    reason: str = ""

    @property
    def B(self) -> np.ndarray:
        """Embedding K -> H as an n×m matrix."""
        return self.sub_basis.T

    @property
    def m(self) -> int:
        return self.sub_basis.shape[0]

    @property
    def phi_K(self) -> np.ndarray | None:
        return None if self.sub is None else self.sub.qb.phi

    def coords(self, v: np.ndarray) -> np.ndarray | None:
        """K-coordinates of v, or None when v is not in K."""
        return solve_linear(self.B, v)

    def embed(self, c: np.ndarray) -> np.ndarray:
        return self.B @ c


def _coords_matrix(B: np.ndarray, V: np.ndarray) -> np.ndarray | None:
    """Columns of V in terms of the columns of B, or None."""
    out = []
    for j in range(V.shape[1]):
        c = solve_linear(B, V[:, j])
        if c is None:
            return None
        out.append(c)
    return np.stack(out, axis=1) if out else np.empty((B.shape[1], 0), dtype=object)


def _left_inverse(B: np.ndarray, field) -> np.ndarray:
    m = B.shape[1]
    I = field.identity(m)
    rows = [solve_linear(B.T, I[i]) for i in range(m)]
    return np.stack(rows)


def _tensor_coords(B: np.ndarray, Linv: np.ndarray, T: np.ndarray) -> np.ndarray | None:
    """Coordinates of a tensor over H in K^{⊗r}, or None if it escapes."""
    C = T
    for leg in range(T.ndim):
        C = np.moveaxis(np.tensordot(Linv, C, axes=([1], [leg])), 0, leg)
    back = C
    for leg in range(T.ndim):
        back = np.moveaxis(np.tensordot(B, back, axes=([1], [leg])), 0, leg)
    return C if exact_equal(back, T) else None


def subalgebra_pair(
    h: QuasiHopfPresentation,
    basis,
    phi_K: np.ndarray | None = None,
    alpha_K: np.ndarray | None = None,
    beta_K: np.ndarray | None = None,
    name: str = "",
) -> SubalgebraPair:
    """Restrict the structure of H to the span of ``basis``.

    K's associator and α, β default to the restrictions of those of H.
    """
    F = h.field
    rows = F.array(basis)
    if rows.ndim != 2 or rows.shape[1] != h.dim:
        raise PresentationError("subalgebra basis has the wrong shape")
    B = rows.T
    m = rows.shape[0]
    if rank(B) != m:
        return SubalgebraPair(h, rows, None, "basis is linearly dependent")
    H = h.alg
    Linv = _left_inverse(B, F)
    unit = solve_linear(B, H.unit)
    if unit is None:
        return SubalgebraPair(h, rows, None, "1 is not in K")
    mult = F.zeros((m, m, m))
    for i in range(m):
        for j in range(m):
            c = solve_linear(B, H.mul(rows[i], rows[j]))
            if c is None:
                return SubalgebraPair(h, rows, None, f"K not closed under multiplication at ({i},{j})")
            mult[i, j] = c
    delta = F.zeros((m, m, m))
    for i in range(m):
        c = _tensor_coords(B, Linv, h.cop(rows[i]))
        if c is None:
            return SubalgebraPair(h, rows, None, f"Delta(k_{i}) is not in K (x) K")
        delta[i] = c
    S = _coords_matrix(B, h.S @ B)
    if S is None:
        return SubalgebraPair(h, rows, None, "S(K) is not contained in K")
    counit = B.T @ h.counit
    if phi_K is None:
        phi_K = _tensor_coords(B, Linv, h.qb.phi)
        phi_inv = _tensor_coords(B, Linv, h.qb.phi_inv)
        if phi_K is None or phi_inv is None:
            return SubalgebraPair(h, rows, None, "associator of H is not in K^3; supply K's own")
    else:
        phi_inv = None
    if alpha_K is None:
        alpha_K = solve_linear(B, h.alpha)
    if beta_K is None:
        beta_K = solve_linear(B, h.beta)
    if alpha_K is None or beta_K is None:
        return SubalgebraPair(h, rows, None, "alpha or beta of H is not in K; supply K's own")
    alg = AlgebraPresentation(F, mult, unit)
    if phi_inv is None:
        phi_inv = _tensor_inverse3(alg, phi_K)
    qb = QuasiBialgebraPresentation(alg, delta, counit, phi_K, phi_inv)
    sub = QuasiHopfPresentation(qb, S, alpha_K, beta_K, name=name or f"K in {h.name}")
    return SubalgebraPair(h, rows, sub)


def _tensor_inverse3(alg: AlgebraPresentation, phi: np.ndarray) -> np.ndarray:
    """Inverse of an element of K⊗K⊗K by solving right multiplication."""
    m = alg.dim
    F = alg.field
    N = m**3
    cols = []
    I = F.identity(N)
    for c in range(N):
        cols.append(alg.tmul(phi, I[c].reshape(m, m, m)).reshape(N))
    Rphi = np.stack(cols, axis=1)
    one = alg.tmul(np.multiply.outer(np.multiply.outer(alg.unit, alg.unit), alg.unit)).reshape(N)
    x = solve_linear(Rphi, one)
    if x is None:
        raise PresentationError("associator of K is not invertible")
    return x.reshape(m, m, m)


def verify_subalgebra(pair: SubalgebraPair) -> VerificationReport:
    h = pair.ambient
    H = h.alg
    rows = pair.sub_basis
    B = pair.B
    m = pair.m
    rep = VerificationReport("subalgebra")
    rep.add("basis linearly independent", rank(B) == m)
    rep.add("1 in K", pair.coords(H.unit) is not None)
    rep.scan(
        "closed under multiplication",
        ((i, j) for i in range(m) for j in range(m)),
        lambda w: (pair.coords(H.mul(rows[w[0]], rows[w[1]])) is not None, True),
    )
    Linv = _left_inverse(B, h.field) if rank(B) == m else None
    rep.scan(
        "Delta-stable",
        range(m),
        lambda i: (Linv is not None and _tensor_coords(B, Linv, h.cop(rows[i])) is not None, True),
    )
    rep.scan("S-stable", range(m), lambda i: (pair.coords(h.S @ rows[i]) is not None, True))
    if pair.sub is None:
        rep.add("K presentation", False, note=pair.reason)
        return rep
    K = pair.sub
    rep.scan(
        "embedding is multiplicative",
        ((i, j) for i in range(m) for j in range(m)),
        lambda w: (B @ K.alg.mul(K.alg.basis(w[0]), K.alg.basis(w[1])), H.mul(rows[w[0]], rows[w[1]])),
    )
    rep.scan(
        "embedding intertwines Delta",
        range(m),
        lambda i: (B @ K.cop(K.alg.basis(i)) @ B.T, h.cop(rows[i])),
    )
    rep.scan("embedding intertwines S", [()], lambda _: (B @ K.S, h.S @ B))
    rep.scan("embedding intertwines epsilon", [()], lambda _: (K.counit, B.T @ h.counit))
    rep.extend(verify_all(K), "K: ")
    return rep


def nakayama_rho(h: QuasiHopfPresentation, mu: np.ndarray | None = None) -> np.ndarray:
    """ρ(a) = S(S(a) ↼ μ), the Nakayama automorphism of λ∘S."""
    if mu is None:
        mu = modular_augmentation(h)
    return h.S @ h.right_hit(mu) @ h.S


@dataclass(frozen=True, eq=False)
class RelativeNakayama:
    beta_rel: np.ndarray
    rho_H_on_K: np.ndarray
    rho_K: np.ndarray
    report: VerificationReport


def relative_nakayama(
    pair: SubalgebraPair, rho_H: np.ndarray | None = None, rho_K: np.ndarray | None = None
) -> RelativeNakayama:
    """β_rel = ρ_K^{-1} ∘ ρ_H restricted to K, in K-coordinates."""
    if pair.sub is None:
        raise PresentationError(f"not a quasi-Hopf subalgebra: {pair.reason}")
    h, K = pair.ambient, pair.sub
    rho_H = nakayama_rho(h) if rho_H is None else rho_H
    rho_K = nakayama_rho(K) if rho_K is None else rho_K
    R = _coords_matrix(pair.B, rho_H @ pair.B)
    if R is None:
        for i in range(pair.m):
            if pair.coords(rho_H @ pair.sub_basis[i]) is None:
                raise PresentationError(f"rho_H does not stabilize K (witness k_{i})")
    beta = inverse(rho_K) @ R
    A = K.alg
    m = A.dim
    rep = VerificationReport("relative Nakayama")
    rep.add("rho_H stabilizes K", True)
    rep.scan("beta_rel(1) = 1", [()], lambda _: (beta @ A.unit, A.unit))
    rep.scan(
        "beta_rel multiplicative",
        ((i, j) for i in range(m) for j in range(m)),
        lambda w: (beta @ A.mul(A.basis(w[0]), A.basis(w[1])), A.mul(beta @ A.basis(w[0]), beta @ A.basis(w[1]))),
    )
    rep.add("beta_rel bijective", rank(beta) == m)
    return RelativeNakayama(beta, R, rho_K, rep)


@dataclass(frozen=True, eq=False)
class BetaFrobeniusCertificate:
    """F: H -> K (K-coordinates, m×n), β_rel on K and extension dual bases."""

    F: np.ndarray
    beta_rel: np.ndarray
    dual_bases_ext: tuple[np.ndarray, np.ndarray] | None
    Lambda: np.ndarray
    right_basis: list[np.ndarray] | None
    report: VerificationReport

    @property
    def passed(self) -> bool:
        return self.report.passed


def right_module_basis(pair: SubalgebraPair) -> list[np.ndarray] | None:
    """Greedy basis of H as a free right K-module, or None."""
    H = pair.ambient.alg
    n, m = H.dim, pair.m
    gens: list[np.ndarray] = []
    span = np.empty((n, 0), dtype=object)
    for i in range(n):
        block = np.stack([H.mul(H.basis(i), k) for k in pair.sub_basis], axis=1)
        cand = np.concatenate([span, block], axis=1)
        if rank(cand) == span.shape[1] + m:
            gens.append(H.basis(i))
            span = cand
        if span.shape[1] == n:
            return gens
    return None


def extension_frobenius_hom(
    pair: SubalgebraPair,
    psi: np.ndarray | None = None,
    Lambda: np.ndarray | None = None,
) -> BetaFrobeniusCertificate:
    """F(a) = ψ(a Λ_(2)) S^{-1}(Λ_(1)) with the underlined coproduct of H.

    ψ defaults to λ∘S for H and Λ to the normalized left integral of K,
    given in K-coordinates.
    """
    if pair.sub is None:
        raise PresentationError(f"not a quasi-Hopf subalgebra: {pair.reason}")
    h, K = pair.ambient, pair.sub
    H = h.alg
    n, m = H.dim, pair.m
    if psi is None:
        psi = h.S.T @ frobenius_system(h).phi
    if Lambda is None:
        Lambda = integral_space(K, "left").generator
    rel = relative_nakayama(pair)
    U = underline_coproduct(h, pair.embed(Lambda))
    cols = []
    for j in range(n):
        w = H.left_matrix(H.basis(j)).T @ psi  # v -> ψ(e_j e_v)
        cols.append(h.S_inv @ (U @ w))
    FH = np.stack(cols, axis=1)
    rep = VerificationReport("beta-Frobenius extension")
    rep.extend(rel.report, "relative Nakayama: ")
    FK = _coords_matrix(pair.B, FH)
    rep.add("F lands in K", FK is not None)
    if FK is None:
        return BetaFrobeniusCertificate(FH, rel.beta_rel, None, Lambda, None, rep)
    rows = pair.sub_basis
    beta_H = pair.B @ rel.beta_rel  # β_rel(k_i) in H, columns

    def F(a):
        return FH @ a

    rep.scan(
        "F(k a k') = beta_rel(k) F(a) k'",
        ((i, a, j) for i in range(m) for a in range(n) for j in range(m)),
        lambda w: (
            F(H.mul(rows[w[0]], H.basis(w[1]), rows[w[2]])),
            H.mul(beta_H[:, w[0]], F(H.basis(w[1])), rows[w[2]]),
        ),
    )
    rep.scan(
        "F right K-linear",
        ((a, j) for a in range(n) for j in range(m)),
        lambda w: (F(H.mul(H.basis(w[0]), rows[w[1]])), H.mul(F(H.basis(w[0])), rows[w[1]])),
    )
    # a = Σ_j x_j F(e_j a): linear in the unknowns x_j
    F_ = h.field
    N = n * n
    A = F_.zeros((N, N))
    rhs = F_.zeros(N)
    for a in range(n):
        for j in range(n):
            A[a * n:(a + 1) * n, j * n:(j + 1) * n] = H.right_matrix(F(H.mul(H.basis(j), H.basis(a))))
        rhs[a * n:(a + 1) * n] = H.basis(a)
    sol = solve_linear(A, rhs)
    dual = None
    if sol is not None:
        dual = (sol.reshape(n, n), F_.identity(n))
    rep.add("extension dual bases exist", dual is not None)
    if dual is not None:
        xs, ys = dual
        rep.scan(
            "a = sum x_j F(y_j a)",
            range(n),
            lambda a: (sum((H.mul(xs[j], F(H.mul(ys[j], H.basis(a)))) for j in range(n)), H.zero()), H.basis(a)),
        )
    gens = right_module_basis(pair)
    rep.add("H free as a right K-module", gens is not None)
    return BetaFrobeniusCertificate(FK, rel.beta_rel, dual, Lambda, gens, rep)
