"""Gauge transformations Δ ↝ FΔF^{-1} of quasi-Hopf presentations."""

from __future__ import annotations

import numpy as np

from ..core import (
    PresentationError,
    QuasiBialgebraPresentation,
    QuasiHopfPresentation,
    verify_all,
)
from ..exactlin import kernel_basis, solve_linear

__all__ = ["tensor2_inverse", "gauge_twist", "random_twist", "twisted_variants"]


def tensor2_inverse(h: QuasiHopfPresentation, F: np.ndarray) -> np.ndarray | None:
    """Inverse of F in H⊗H, or None when F is not a unit."""
    H = h.alg
    n = H.dim
    N = n * n
    I = h.field.identity(N)
    Rf = np.stack([H.tmul(F, I[c].reshape(n, n)).reshape(N) for c in range(N)], axis=1)
    one = np.multiply.outer(H.unit, H.unit)
    x = solve_linear(Rf, one.reshape(N))
    if x is None:
        return None
    G = x.reshape(n, n)
    # right inverse in a finite-dimensional algebra is two-sided; confirm anyway
    if not (H.tmul(G, F) == one).all():
        return None
    return G


def gauge_twist(
    h: QuasiHopfPresentation,
    F: np.ndarray,
    F_inv: np.ndarray | None = None,
    verify: bool = True,
    name: str = "",
) -> QuasiHopfPresentation:
    """Twist by a counit-normalized unit F = F¹⊗F² of H⊗H.

    Δ_F = FΔF^{-1}, Φ_F = (1⊗F)(id⊗Δ)(F) Φ (Δ⊗id)(F^{-1})(F^{-1}⊗1),
    α_F = S(F̄¹)αF̄², β_F = F¹βS(F²); S is unchanged.
    """
    H = h.alg
    n = H.dim
    F = h.field.array(F)
    if F_inv is None:
        F_inv = tensor2_inverse(h, F)
        if F_inv is None:
            raise PresentationError("twist F is not invertible in H (x) H")
    eps = h.counit
    if not ((eps @ F) == H.unit).all() or not ((F @ eps) == H.unit).all():
        raise PresentationError("twist F is not counit-normalized")
    one = H.unit
    delta = np.stack([H.tmul(F, h.cop(H.basis(i)), F_inv) for i in range(n)])
    phi = H.tmul(
        np.multiply.outer(one, F),
        h.qb.cop_leg(F, 1),
        h.qb.phi,
        h.qb.cop_leg(F_inv, 0),
        np.multiply.outer(F_inv, one),
    )
    phi_inv = H.tmul(
        np.multiply.outer(F, one),
        h.qb.cop_leg(F, 0),
        h.qb.phi_inv,
        h.qb.cop_leg(F_inv, 1),
        np.multiply.outer(one, F_inv),
    )
    alpha = H.contract(F_inv, [H.right_matrix(h.alpha) @ h.S, None], [(0, 1)])
    beta = H.contract(F, [H.right_matrix(h.beta), h.S], [(0, 1)])
    qb = QuasiBialgebraPresentation(H, delta, h.counit.copy(), phi, phi_inv)
    out = QuasiHopfPresentation(qb, h.S.copy(), alpha, beta, name=name or f"{h.name} twisted")
    if verify:
        rep = verify_all(out)
        if not rep.passed:
            raise PresentationError(f"twisted presentation fails verification\n{rep.summary()}")
    return out


def random_twist(h: QuasiHopfPresentation, rng: np.random.Generator, terms: int = 2, den: int = 2):
    """A random counit-normalized unit 1⊗1 + Σ c v⊗w, v, w ∈ ker ε.

    Returns (F, F^{-1}).
    """
    H = h.alg
    F_ = h.field
    aug = kernel_basis(h.counit.reshape(1, -1))
    if not aug:
        one = np.multiply.outer(H.unit, H.unit)
        return one, one.copy()
    for _ in range(100):
        F = np.multiply.outer(H.unit, H.unit)
        for _ in range(terms):
            v = aug[int(rng.integers(len(aug)))]
            w = aug[int(rng.integers(len(aug)))]
            c = F_.random(rng, -2, 2, den)
            F = F + c * np.multiply.outer(v, w)
        G = tensor2_inverse(h, F)
        if G is not None:
            return F, G
    raise PresentationError("could not draw an invertible twist")


def twisted_variants(bases, count: int, seed: int = 0, verify: bool = True) -> list[QuasiHopfPresentation]:
    """``count`` twists of the presentations in ``bases``, round-robin."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        h = bases[k % len(bases)]
        F, G = random_twist(h, rng)
        out.append(gauge_twist(h, F, G, verify=verify, name=f"{h.name} twist #{k}"))
    return out
