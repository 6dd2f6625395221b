"""Algebra, quasi-bialgebra and quasi-Hopf presentations by structure constants.

Conventions used throughout the package:

* ``mult[i, j, k]`` is the coefficient of ``e_k`` in ``e_i e_j``.
* ``delta[i]`` is the ``n x n`` coefficient array of ``Δ(e_i)``.
* A linear map is a matrix acting on coefficient columns, so ``S[:, j]`` is
  ``S(e_j)``.
* Tensors in ``H^{⊗k}`` are ``k``-dimensional arrays; leg ``0`` is the
  leftmost tensor factor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Iterable

import numpy as np

from .exactlin import (
    FieldSpec,
    SingularError,
    exact_equal,
    inverse,
    rank,
    solve_linear,
    tensor_contract,
)

__all__ = [
    "AlgebraPresentation",
    "QuasiBialgebraPresentation",
    "QuasiHopfPresentation",
    "QPElements",
    "CheckResult",
    "VerificationReport",
    "PresentationError",
    "verify_algebra",
    "verify_quasi_bialgebra",
    "verify_antipode",
    "verify_all",
    "rescale_alpha_beta",
    "qp_elements",
    "verify_qp_identities",
    "change_antipode",
]


class PresentationError(ValueError):
    """Raised when presentation data is inconsistent with a requested operation."""


# ---------------------------------------------------------------- reports


@dataclass
class CheckResult:
    law: str
    passed: bool
    witness: tuple | None = None
    lhs: object = None
    rhs: object = None
    note: str = ""

    def __str__(self):
        s = f"[{'PASS' if self.passed else 'FAIL'}] {self.law}"
        if self.note:
            s += f" ({self.note})"
        if not self.passed and self.witness is not None:
            s += f" at {self.witness}"
        return s


@dataclass
class VerificationReport:
    subject: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, law: str) -> CheckResult:
        for c in self.checks:
            if c.law == law:
                return c
        raise KeyError(law)

    def __contains__(self, law: str) -> bool:
        return any(c.law == law for c in self.checks)

    def add(self, law: str, passed: bool, witness=None, lhs=None, rhs=None, note=""):
        self.checks.append(CheckResult(law, bool(passed), witness, lhs, rhs, note))
        return self.checks[-1]

    def scan(self, law: str, witnesses: Iterable, fn: Callable, note: str = ""):
        """Record ``law`` as passing iff ``lhs == rhs`` for every witness.

        ``fn(w)`` returns ``(lhs, rhs)``; the first mismatch is kept.
        """
        for w in witnesses:
            lhs, rhs = fn(w)
            if not exact_equal(lhs, rhs):
                w = w if isinstance(w, tuple) else (w,)
                return self.add(law, False, w, lhs, rhs, note)
        return self.add(law, True, note=note)

    def extend(self, other: "VerificationReport", prefix: str = ""):
        for c in other.checks:
            self.checks.append(replace(c, law=prefix + c.law))
        return self

    def summary(self) -> str:
        head = f"{self.subject}: {'PASS' if self.passed else 'FAIL'}"
        return "\n".join([head] + ["  " + str(c) for c in self.checks])


# ---------------------------------------------------------------- algebra


@dataclass(frozen=True, eq=False)
class AlgebraPresentation:
    field: FieldSpec
    mult: np.ndarray
    unit: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        n = self.unit.shape[0]
        if self.mult.shape != (n, n, n):
            raise PresentationError(f"mult has shape {self.mult.shape}, expected {(n, n, n)}")

    @property
    def dim(self) -> int:
        return self.unit.shape[0]

    def basis(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = self.field.one
        return v

    def element(self, coeffs) -> np.ndarray:
        return self.field.array(coeffs)

    def zero(self, k: int = 1) -> np.ndarray:
        return self.field.zeros((self.dim,) * k)

    def one(self, k: int = 1) -> np.ndarray:
        return outer(*([self.unit] * k))

    def mul(self, *xs: np.ndarray) -> np.ndarray:
        out = xs[0]
        for x in xs[1:]:
            out = np.einsum("i,j,ijk->k", out, x, self.mult)
        return out

    def tmul(self, *ts: np.ndarray) -> np.ndarray:
        """Componentwise product in ``H^{⊗k}``."""
        out = ts[0]
        for t in ts[1:]:
            out = self._tmul2(out, t)
        return out

    def _tmul2(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        k = a.ndim
        if b.ndim != k:
            raise PresentationError("tensor ranks differ")
        if k == 1:
            return self.mul(a, b)
        nz_a = _nonzeros(a)
        nz_b = _nonzeros(b)
        # sparse work ~ nnz(a) nnz(b) fill^k, dense work ~ n^(2k+1)
        fill = max(1.0, self._fill)
        if len(nz_a) * len(nz_b) * fill**k < self.dim ** (2 * k + 1):
            return self._tmul_sparse(nz_a, nz_b, k)
        # a ⊗ b, then multiply each leg pair (a_l, b_l) with mult
        out = np.multiply.outer(a, b)
        for leg in range(k):
            # current layout: [done legs (leg of them)] + a legs + b legs
            ai = leg
            bi = leg + (k - leg)  # first remaining b leg
            out = np.tensordot(out, self.mult, axes=([ai, bi], [0, 1]))
            out = np.moveaxis(out, -1, leg)
        return out

    @cached_property
    def _products(self) -> list[list[list[tuple[int, object]]]]:
        n = self.dim
        return [
            [[(k, self.mult[i, j, k]) for k in range(n) if self.mult[i, j, k] != 0] for j in range(n)]
            for i in range(n)
        ]

    @cached_property
    def _fill(self) -> float:
        """Average number of basis vectors in a product e_i e_j."""
        return sum(len(c) for row in self._products for c in row) / self.dim**2

    def _tmul_sparse(self, nz_a, nz_b, k):
        table = self._products
        acc: dict[tuple, object] = {}
        for ia, ca in nz_a:
            for ib, cb in nz_b:
                c = ca * cb
                for combo in itertools.product(*[table[ia[l]][ib[l]] for l in range(k)]):
                    coeff = c
                    for _, w in combo:
                        coeff = coeff * w
                    key = tuple(x for x, _ in combo)
                    acc[key] = acc[key] + coeff if key in acc else coeff
        out = self.zero(k)
        for key, v in acc.items():
            out[key] = v
        return out

    def left_matrix(self, a: np.ndarray) -> np.ndarray:
        """Matrix of ``x -> a x``."""
        return np.einsum("i,ijk->kj", a, self.mult)

    def right_matrix(self, a: np.ndarray) -> np.ndarray:
        """Matrix of ``x -> x a``."""
        return np.einsum("j,ijk->ki", a, self.mult)

    def is_invertible(self, a: np.ndarray) -> bool:
        return rank(self.left_matrix(a)) == self.dim

    def inv(self, a: np.ndarray) -> np.ndarray:
        x = solve_linear(self.left_matrix(a), self.unit)
        if x is None:
            raise SingularError("element is not invertible")
        if not exact_equal(self.mul(x, a), self.unit):
            raise SingularError("element has only a one-sided inverse")
        return x

    def ad(self, u: np.ndarray) -> np.ndarray:
        """Matrix of ``x -> u x u^{-1}``."""
        return self.left_matrix(u) @ self.right_matrix(self.inv(u))

    def contract(self, t, legs, plan=None):
        return tensor_contract(t, legs, plan, self.mult)

    def is_central(self, a: np.ndarray) -> bool:
        return exact_equal(self.left_matrix(a), self.right_matrix(a))


def _nonzeros(t: np.ndarray) -> list[tuple[tuple[int, ...], object]]:
    return [(tuple(int(i) for i in idx), t[tuple(idx)]) for idx in zip(*np.nonzero(t))]


def outer(*ts: np.ndarray) -> np.ndarray:
    out = ts[0]
    for t in ts[1:]:
        out = np.multiply.outer(out, t)
    return out


def apply_leg(t: np.ndarray, M: np.ndarray, leg: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(M, t, axes=([1], [leg])), 0, leg)


def eval_leg(t: np.ndarray, f: np.ndarray, leg: int) -> np.ndarray:
    return np.tensordot(t, f, axes=([leg], [0]))


def verify_algebra(a: AlgebraPresentation) -> VerificationReport:
    rep = VerificationReport("algebra")
    n = a.dim
    e = a.basis
    m = a.mult
    left = np.einsum("ijl,lkr->ijkr", m, m)  # (e_i e_j) e_k
    right = np.einsum("jkl,ilr->ijkr", m, m)  # e_i (e_j e_k)
    rep.scan(
        "associativity",
        ((i, j, k) for i in range(n) for j in range(n) for k in range(n)),
        lambda w: (left[w], right[w]),
    )
    rep.scan("left unit", range(n), lambda i: (a.mul(a.unit, e(i)), e(i)))
    rep.scan("right unit", range(n), lambda i: (a.mul(e(i), a.unit), e(i)))
    return rep


# ---------------------------------------------------------------- quasi-bialgebra


@dataclass(frozen=True, eq=False)
class QuasiBialgebraPresentation:
    algebra: AlgebraPresentation
    delta: np.ndarray
    counit: np.ndarray
    phi: np.ndarray
    phi_inv: np.ndarray

    def __post_init__(self):
        n = self.algebra.dim
        for name, arr, shape in (
            ("delta", self.delta, (n, n, n)),
            ("counit", self.counit, (n,)),
            ("phi", self.phi, (n, n, n)),
            ("phi_inv", self.phi_inv, (n, n, n)),
        ):
            if arr.shape != shape:
                raise PresentationError(f"{name} has shape {arr.shape}, expected {shape}")

    def cop(self, a: np.ndarray) -> np.ndarray:
        """Δ(a) as an n x n tensor."""
        return np.tensordot(a, self.delta, axes=([0], [0]))

    def cop_leg(self, t: np.ndarray, leg: int) -> np.ndarray:
        """Apply Δ to one leg; the two new legs sit at ``leg, leg+1``."""
        out = np.tensordot(t, self.delta, axes=([leg], [0]))
        return np.moveaxis(out, [-2, -1], [leg, leg + 1])

    def eps(self, a: np.ndarray):
        return np.dot(self.counit, a)


def verify_quasi_bialgebra(qb: QuasiBialgebraPresentation) -> VerificationReport:
    H = qb.algebra
    n = H.dim
    e = H.basis
    rep = VerificationReport("quasi-bialgebra")
    rep.scan(
        "coproduct multiplicative",
        ((i, j) for i in range(n) for j in range(n)),
        lambda w: (qb.cop(H.mul(e(w[0]), e(w[1]))), H.tmul(qb.cop(e(w[0])), qb.cop(e(w[1])))),
    )
    rep.scan("coproduct unital", [()], lambda _: (qb.cop(H.unit), H.one(2)))
    rep.scan(
        "counit multiplicative",
        ((i, j) for i in range(n) for j in range(n)),
        lambda w: (qb.eps(H.mul(e(w[0]), e(w[1]))), qb.eps(e(w[0])) * qb.eps(e(w[1]))),
    )
    rep.scan("counit unital", [()], lambda _: (qb.eps(H.unit), H.field.one))
    rep.scan("left counit law", range(n), lambda i: (eval_leg(qb.cop(e(i)), qb.counit, 0), e(i)))
    rep.scan("right counit law", range(n), lambda i: (eval_leg(qb.cop(e(i)), qb.counit, 1), e(i)))

    def quasi_coassoc(i):
        d = qb.cop(e(i))
        lhs = qb.cop_leg(d, 1)
        rhs = H.tmul(qb.phi, qb.cop_leg(d, 0), qb.phi_inv)
        return lhs, rhs

    rep.scan("quasi-coassociativity", range(n), quasi_coassoc)

    one = H.unit
    phi = qb.phi
    rep.scan("phi * phi_inv = 1", [()], lambda _: (H.tmul(phi, qb.phi_inv), H.one(3)))
    rep.scan("phi_inv * phi = 1", [()], lambda _: (H.tmul(qb.phi_inv, phi), H.one(3)))

    def cocycle(_):
        lhs = H.tmul(outer(one, phi), qb.cop_leg(phi, 1), outer(phi, one))
        rhs = H.tmul(qb.cop_leg(phi, 2), qb.cop_leg(phi, 0))
        return lhs, rhs

    rep.scan("3-cocycle", [()], cocycle)
    rep.scan("normalization (id,eps,id)", [()], lambda _: (eval_leg(phi, qb.counit, 1), H.one(2)))
    rep.scan("counit on first leg of phi", [()], lambda _: (eval_leg(phi, qb.counit, 0), H.one(2)))
    rep.scan("counit on third leg of phi", [()], lambda _: (eval_leg(phi, qb.counit, 2), H.one(2)))
    return rep


# ---------------------------------------------------------------- quasi-Hopf


@dataclass(frozen=True, eq=False)
class QuasiHopfPresentation:
    qb: QuasiBialgebraPresentation
    antipode: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    name: str = ""

    @property
    def alg(self) -> AlgebraPresentation:
        return self.qb.algebra

    @property
    def field(self) -> FieldSpec:
        return self.alg.field

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def S(self) -> np.ndarray:
        return self.antipode

    @cached_property
    def S_inv(self) -> np.ndarray:
        try:
            return inverse(self.antipode)
        except SingularError:
            raise PresentationError("antipode is not bijective") from None

    def cop(self, a):
        return self.qb.cop(a)

    def eps(self, a):
        return self.qb.eps(a)

    @property
    def counit(self):
        return self.qb.counit

    @property
    def is_hopf(self) -> bool:
        """Trivial associator and α = β = 1."""
        H = self.alg
        return (
            exact_equal(self.qb.phi, H.one(3))
            and exact_equal(self.alpha, H.unit)
            and exact_equal(self.beta, H.unit)
        )

    @cached_property
    def qp(self) -> "QPElements":
        return qp_elements(self)

    def right_hit(self, f: np.ndarray) -> np.ndarray:
        """Matrix of ``a -> a ↼ f = f(a_(1)) a_(2)``."""
        return np.einsum("i,jik->kj", f, self.qb.delta)

    def left_hit(self, f: np.ndarray) -> np.ndarray:
        """Matrix of ``a -> f ⇀ a = a_(1) f(a_(2))``."""
        return np.einsum("k,jik->ij", f, self.qb.delta)


def verify_antipode(h: QuasiHopfPresentation) -> VerificationReport:
    H = h.alg
    n = H.dim
    e = H.basis
    S = h.S
    al, be = h.alpha, h.beta
    rep = VerificationReport("antipode")
    rep.add("antipode bijective", rank(S) == n)
    rep.scan("S(1) = 1", [()], lambda _: (S @ H.unit, H.unit))
    rep.scan(
        "S anti-multiplicative",
        ((i, j) for i in range(n) for j in range(n)),
        lambda w: (S @ H.mul(e(w[0]), e(w[1])), H.mul(S @ e(w[1]), S @ e(w[0]))),
    )
    Ra, Rb = H.right_matrix(al), H.right_matrix(be)
    rep.scan(
        "alpha axiom",
        range(n),
        lambda i: (H.contract(h.cop(e(i)), [Ra @ S, None], [(0, 1)]), h.eps(e(i)) * al),
    )
    rep.scan(
        "beta axiom",
        range(n),
        lambda i: (H.contract(h.cop(e(i)), [Rb, S], [(0, 1)]), h.eps(e(i)) * be),
    )
    rep.scan(
        "phi-beta-alpha",
        [()],
        lambda _: (H.contract(h.qb.phi, [Rb, Ra @ S, None], [(0, 1, 2)]), H.unit),
    )
    rep.scan(
        "phi_inv-alpha-beta",
        [()],
        lambda _: (H.contract(h.qb.phi_inv, [Ra @ S, Rb, S], [(0, 1, 2)]), H.unit),
    )
    rep.scan("eps o S = eps", [()], lambda _: (h.counit @ S, h.counit))
    rep.scan("eps(alpha) eps(beta) = 1", [()], lambda _: (h.eps(al) * h.eps(be), h.field.one))
    return rep


def rescale_alpha_beta(h: QuasiHopfPresentation) -> QuasiHopfPresentation:
    """Rescale so that ε(α) = ε(β) = 1 (needs ε(α)ε(β) = 1)."""
    ea, eb = h.eps(h.alpha), h.eps(h.beta)
    if ea * eb != 1:
        raise PresentationError(f"eps(alpha) eps(beta) = {ea * eb}, expected 1")
    return replace(h, alpha=eb * h.alpha, beta=ea * h.beta)


def change_antipode(h: QuasiHopfPresentation, u: np.ndarray) -> QuasiHopfPresentation:
    """The antipode ``u S(-) u^{-1}`` with ``α -> uα`` and ``β -> βu^{-1}``."""
    H = h.alg
    ui = H.inv(u)
    return replace(
        h,
        antipode=H.ad(u) @ h.S,
        alpha=H.mul(u, h.alpha),
        beta=H.mul(h.beta, ui),
    )


# ---------------------------------------------------------------- q/p elements


@dataclass(frozen=True, eq=False)
class QPElements:
    q_R: np.ndarray
    p_R: np.ndarray
    q_L: np.ndarray
    p_L: np.ndarray


def qp_elements(h: QuasiHopfPresentation) -> QPElements:
    H = h.alg
    S, Si = h.S, h.S_inv
    La = H.left_matrix(h.alpha)
    Ra, Rb = H.right_matrix(h.alpha), H.right_matrix(h.beta)
    Phi, Phi_inv = h.qb.phi, h.qb.phi_inv
    # q_R = X1 ⊗ S^-1(α X3) X2
    q_R = H.contract(Phi, [None, None, Si @ La], [(0,), (2, 1)])
    # q_L = S(x1) α x2 ⊗ x3
    q_L = H.contract(Phi_inv, [Ra @ S, None, None], [(0, 1), (2,)])
    # p_R = x1 ⊗ x2 β S(x3)
    p_R = H.contract(Phi_inv, [None, Rb, S], [(0,), (1, 2)])
    # p_L = X2 S^-1(X1 β) ⊗ X3
    p_L = H.contract(Phi, [Si @ Rb, None, None], [(1, 0), (2,)])
    return QPElements(q_R=q_R, p_R=p_R, q_L=q_L, p_L=p_L)


def verify_qp_identities(h: QuasiHopfPresentation, qp: QPElements | None = None) -> VerificationReport:
    qp = qp or h.qp
    H = h.alg
    n = H.dim
    e = H.basis
    S, Si = h.S, h.S_inv
    rep = VerificationReport("qp identities")

    def d_left(a):  # (Δ⊗id)Δ(a): legs a11, a12, a2
        return h.qb.cop_leg(h.cop(a), 0)

    def d_right(a):  # (id⊗Δ)Δ(a): legs a1, a21, a22
        return h.qb.cop_leg(h.cop(a), 1)

    rep.scan(
        "q_R facilitation",
        range(n),
        lambda i: (
            H.contract((qp.q_R, d_left(e(i))), [None, None, None, None, Si], [(0, 2), (4, 1, 3)]),
            apply_leg(qp.q_R, H.left_matrix(e(i)), 0),
        ),
    )
    rep.scan(
        "p_R facilitation",
        range(n),
        lambda i: (
            H.contract((d_left(e(i)), qp.p_R), [None, None, S, None, None], [(0, 3), (1, 4, 2)]),
            apply_leg(qp.p_R, H.right_matrix(e(i)), 0),
        ),
    )
    rep.scan(
        "q_L facilitation",
        range(n),
        lambda i: (
            H.contract((d_right(e(i)), qp.q_L), [S, None, None, None, None], [(0, 3, 1), (4, 2)]),
            apply_leg(qp.q_L, H.left_matrix(e(i)), 1),
        ),
    )
    rep.scan(
        "p_L facilitation",
        range(n),
        lambda i: (
            H.contract((d_right(e(i)), qp.p_L), [Si, None, None, None, None], [(1, 3, 0), (2, 4)]),
            apply_leg(qp.p_L, H.right_matrix(e(i)), 1),
        ),
    )
    one2 = H.one(2)
    cop_leg = h.qb.cop_leg
    rep.scan(
        "first",
        [()],
        lambda _: (
            H.contract((cop_leg(qp.q_R, 0), qp.p_R), [None, None, S, None, None], [(0, 3), (1, 4, 2)]),
            one2,
        ),
    )
    rep.scan(
        "second",
        [()],
        lambda _: (
            H.contract((cop_leg(qp.p_R, 0), qp.q_R), [None, None, Si, None, None], [(3, 0), (2, 4, 1)]),
            one2,
        ),
    )
    rep.scan(
        "third",
        [()],
        lambda _: (
            H.contract((cop_leg(qp.q_L, 1), qp.p_L), [Si, None, None, None, None], [(1, 3, 0), (2, 4)]),
            one2,
        ),
    )
    rep.scan(
        "fourth",
        [()],
        lambda _: (
            H.contract((cop_leg(qp.p_L, 1), qp.q_L), [S, None, None, None, None], [(0, 3, 1), (4, 2)]),
            one2,
        ),
    )
    return rep


def verify_all(h: QuasiHopfPresentation) -> VerificationReport:
    """The full chain: algebra, quasi-bialgebra, antipode, q/p identities."""
    rep = VerificationReport(h.name or "presentation")
    rep.extend(verify_algebra(h.alg), "algebra: ")
    rep.extend(verify_quasi_bialgebra(h.qb), "quasi-bialgebra: ")
    anti = verify_antipode(h)
    rep.extend(anti, "antipode: ")
    if anti["antipode bijective"].passed:
        rep.extend(verify_qp_identities(h), "qp: ")
    else:
        rep.add("qp: skipped", False, note="antipode not bijective")
    return rep
