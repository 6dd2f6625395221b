"""Constructors for the stock example presentations."""

from __future__ import annotations

import itertools
from typing import Callable, Sequence

import numpy as np

from ..core import (
    AlgebraPresentation,
    PresentationError,
    QuasiBialgebraPresentation,
    QuasiHopfPresentation,
    verify_all,
)
from ..exactlin import QQ, FieldSpec

GroupTable = Sequence[Sequence[int]]


def cyclic_group(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def symmetric_group(k: int) -> tuple[list[list[int]], list[tuple[int, ...]]]:
    """Cayley table of S_k on permutations in lexicographic order.

    Row ``i``, column ``j`` holds the index of ``perm_i ∘ perm_j``.
    """
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[x]] for x in range(k))] for q in perms] for p in perms]
    return table, perms


def _check_group(table: GroupTable) -> tuple[int, list[int]]:
    n = len(table)
    if any(len(row) != n for row in table):
        raise PresentationError("group table is not square")
    if any(not 0 <= v < n for row in table for v in row):
        raise PresentationError("group table entry out of range")
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise PresentationError(f"group table not associative at {(a, b, c)}")
    ids = [e for e in range(n) if all(table[e][g] == g == table[g][e] for g in range(n))]
    if not ids:
        raise PresentationError("group table has no identity")
    e = ids[0]
    inv = []
    for g in range(n):
        hs = [h for h in range(n) if table[g][h] == e and table[h][g] == e]
        if not hs:
            raise PresentationError(f"element {g} has no inverse")
        inv.append(hs[0])
    return e, inv


def _certified(h: QuasiHopfPresentation) -> QuasiHopfPresentation:
    rep = verify_all(h)
    if not rep.passed:
        raise PresentationError(f"{h.name}: built presentation fails verification\n{rep.summary()}")
    return h


def build_group_algebra(
    table: GroupTable,
    field: FieldSpec = QQ,
    name: str = "",
    labels: Sequence[str] | None = None,
    verify: bool = True,
) -> QuasiHopfPresentation:
    """k[G] with Δ(g) = g⊗g, ε(g) = 1, S(g) = g^{-1}."""
    e, inv = _check_group(table)
    n = len(table)
    F = field
    mult = F.zeros((n, n, n))
    delta = F.zeros((n, n, n))
    S = F.zeros((n, n))
    for a in range(n):
        for b in range(n):
            mult[a, b, table[a][b]] = F.one
        delta[a, a, a] = F.one
        S[inv[a], a] = F.one
    unit = F.zeros(n)
    unit[e] = F.one
    alg = AlgebraPresentation(F, mult, unit, tuple(labels) if labels else None)
    one3 = np.multiply.outer(np.multiply.outer(unit, unit), unit)
    qb = QuasiBialgebraPresentation(alg, delta, F.array([1] * n), one3, one3.copy())
    h = QuasiHopfPresentation(qb, S, unit.copy(), unit.copy(), name=name or f"k[G], |G|={n}")
    return _certified(h) if verify else h


def build_dual_group_algebra_twisted(
    table: GroupTable,
    omega: Callable[[int, int, int], object] | None = None,
    field: FieldSpec = QQ,
    name: str = "",
    verify: bool = True,
) -> QuasiHopfPresentation:
    """k^G with associator Σ ω(a,b,c) e_a⊗e_b⊗e_c; G abelian, ω a normalized 3-cocycle."""
    e, inv = _check_group(table)
    n = len(table)
    if any(table[a][b] != table[b][a] for a in range(n) for b in range(n)):
        raise PresentationError("group must be abelian")
    F = field
    w = {abc: F(omega(*abc) if omega else 1) for abc in itertools.product(range(n), repeat=3)}
    for abc, v in w.items():
        if v == 0:
            raise PresentationError(f"omega{abc} is not a unit")
    for g, h_, k, l in itertools.product(range(n), repeat=4):
        lhs = w[h_, k, l] * w[g, table[h_][k], l] * w[g, h_, k]
        rhs = w[g, h_, table[k][l]] * w[table[g][h_], k, l]
        if lhs != rhs:
            raise PresentationError(f"omega fails the cocycle identity at {(g, h_, k, l)}")
    for g, k in itertools.product(range(n), repeat=2):
        if w[g, e, k] != 1:
            raise PresentationError(f"omega not normalized: omega({g},e,{k}) != 1")
    mult = F.zeros((n, n, n))
    delta = F.zeros((n, n, n))
    S = F.zeros((n, n))
    phi = F.zeros((n, n, n))
    phi_inv = F.zeros((n, n, n))
    for g in range(n):
        mult[g, g, g] = F.one
        S[inv[g], g] = F.one
        for h_ in range(n):
            delta[table[g][h_], g, h_] = F.one
    for (a, b, c), v in w.items():
        phi[a, b, c] = v
        phi_inv[a, b, c] = 1 / v
    counit = F.zeros(n)
    counit[e] = F.one
    unit = F.array([1] * n)
    beta = F.array([1 / w[g, inv[g], g] for g in range(n)])
    alg = AlgebraPresentation(F, mult, unit)
    qb = QuasiBialgebraPresentation(alg, delta, counit, phi, phi_inv)
    h = QuasiHopfPresentation(qb, S, unit.copy(), beta, name=name or f"twisted k^G, |G|={n}")
    return _certified(h) if verify else h


def z2_sign_cocycle(a: int, b: int, c: int) -> int:
    """ω(a,b,c) = (-1)^{abc} on Z/2."""
    return -1 if a * b * c == 1 else 1


def build_sweedler(field: FieldSpec = QQ, verify: bool = True) -> QuasiHopfPresentation:
    """Sweedler's 4-dim Hopf algebra on the basis 1, g, x, gx."""
    if field.characteristic == 2:
        raise PresentationError("Sweedler's algebra needs characteristic != 2")
    F = field
    # words as (g-power, x-power, sign); x g = -g x
    words = [(0, 0), (1, 0), (0, 1), (1, 1)]
    index = {w: i for i, w in enumerate(words)}
    mult = F.zeros((4, 4, 4))
    for i, (g1, x1) in enumerate(words):
        for j, (g2, x2) in enumerate(words):
            if x1 + x2 > 1:
                continue
            sign = -1 if (x1 and g2) else 1
            mult[i, j, index[((g1 + g2) % 2, x1 + x2)]] = F(sign)
    unit = F.array([1, 0, 0, 0])
    delta = F.zeros((4, 4, 4))
    delta[0, 0, 0] = F.one
    delta[1, 1, 1] = F.one
    # Δ(x) = x⊗1 + g⊗x
    delta[2, 2, 0] = F.one
    delta[2, 1, 2] = F.one
    # Δ(gx) = gx⊗g + 1⊗gx
    delta[3, 3, 1] = F.one
    delta[3, 0, 3] = F.one
    counit = F.array([1, 1, 0, 0])
    S = F.zeros((4, 4))
    S[0, 0] = F.one
    S[1, 1] = F.one
    S[3, 2] = F(-1)  # S(x) = -gx
    S[2, 3] = F.one  # S(gx) = S(x)S(g) = -gx g = x
    alg = AlgebraPresentation(F, mult, unit, ("1", "g", "x", "gx"))
    one3 = np.multiply.outer(np.multiply.outer(unit, unit), unit)
    qb = QuasiBialgebraPresentation(alg, delta, counit, one3, one3.copy())
    h = QuasiHopfPresentation(qb, S, unit.copy(), unit.copy(), name="Sweedler H4")
    return _certified(h) if verify else h


def c2_algebra(field: FieldSpec = QQ) -> QuasiHopfPresentation:
    return build_group_algebra(cyclic_group(2), field, name=f"{field.tag}[C2]", labels=("1", "g"))


def s3_algebra(field: FieldSpec = QQ) -> QuasiHopfPresentation:
    table, perms = symmetric_group(3)
    labels = ["".join(map(str, p)) for p in perms]
    return build_group_algebra(table, field, name=f"{field.tag}[S3]", labels=labels)


def twisted_z2(field: FieldSpec = QQ) -> QuasiHopfPresentation:
    return build_dual_group_algebra_twisted(
        cyclic_group(2), z2_sign_cocycle, field, name=f"twisted {field.tag}^Z2"
    )
