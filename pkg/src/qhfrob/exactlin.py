"""Exact scalars and dense linear/multilinear algebra over Q and F_p.

Every vector, matrix and tensor in the package is a numpy array of dtype
``object`` whose entries are either :class:`fractions.Fraction` (rationals) or
:class:`Mod` (residues modulo a prime).  Nothing here ever rounds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "Mod",
    "FieldSpec",
    "QQ",
    "GF",
    "DimensionError",
    "SingularError",
    "rref",
    "rank",
    "solve_linear",
    "kernel_basis",
    "inverse",
    "is_zero",
    "exact_equal",
    "tensor_contract",
    "naive_contract",
]


class DimensionError(ValueError):
    pass


class SingularError(ArithmeticError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@total_ordering
class Mod:
    """Residue class ``value mod p``; immutable."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "value", int(value) % p)

    def __setattr__(self, name, value):
        raise AttributeError("Mod is immutable")

    def _coerce(self, other) -> "Mod | None":
        if isinstance(other, Mod):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other
        if isinstance(other, (int, np.integer)):
            return Mod(int(other), self.p)
        if isinstance(other, Fraction):
            return Mod(other.numerator, self.p) / Mod(other.denominator, self.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Mod(self.value + o.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Mod(self.value - o.value, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Mod(o.value - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Mod(self.value * o.value, self.p)

    __rmul__ = __mul__

    def inverse(self) -> "Mod":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return Mod(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Mod(pow(self.value, k, self.p), self.p)

    def __neg__(self):
        return Mod(-self.value, self.p)

    def __pos__(self):
        return self

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        if o is None:
            return NotImplemented
        return self.value == o.value

    def __lt__(self, other):
        # only for deterministic sorting; not a field order
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.value < o.value

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return f"Mod({self.value}, {self.p})"

    def __str__(self):
        return f"p{self.value}"


@dataclass(frozen=True)
class FieldSpec:
    """The ground field: rationals when ``p`` is None, else F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def tag(self) -> str:
        return "Q" if self.p is None else f"Fp:{self.p}"

    @classmethod
    def from_tag(cls, tag: str) -> "FieldSpec":
        tag = tag.strip()
        if tag == "Q":
            return cls(None)
        if tag.startswith("Fp:"):
            try:
                p = int(tag[3:])
            except ValueError:
                raise ValueError(f"bad field tag {tag!r}") from None
            return cls(p)
        raise ValueError(f"bad field tag {tag!r}; expected 'Q' or 'Fp:<p>'")

    def __call__(self, x):
        """Coerce an int, Fraction, Mod or string into this field."""
        if isinstance(x, str):
            return self.parse(x)
        if self.p is None:
            if isinstance(x, Mod):
                raise TypeError("cannot lift a residue to Q")
            return Fraction(x)
        if isinstance(x, Mod):
            if x.p != self.p:
                raise ValueError(f"residue mod {x.p} in F_{self.p}")
            return x
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
        return Mod(x.numerator, self.p) / Mod(x.denominator, self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse(self, s: str):
        s = s.strip()
        if s.startswith("p"):
            if self.p is None:
                raise ValueError(f"residue {s!r} in a rational presentation")
            return Mod(int(s[1:]), self.p)
        return self(Fraction(s))

    def format(self, x) -> str:
        x = self(x)
        if isinstance(x, Mod):
            return f"p{x.value}"
        return str(x)

    def is_unit(self, x) -> bool:
        return self(x) != 0

    def array(self, data) -> np.ndarray:
        arr = np.array(data, dtype=object)
        flat = arr.reshape(-1)
        for i, v in enumerate(flat):
            flat[i] = self(v)
        return flat.reshape(arr.shape)

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(self.zero)
        return out

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def random(self, rng, lo: int = -3, hi: int = 3, den: int = 1):
        num = int(rng.integers(lo, hi + 1))
        d = int(rng.integers(1, den + 1))
        if self.p is not None:
            return self(num) if d % self.p == 0 else self(Fraction(num, d))
        return Fraction(num, d)


QQ = FieldSpec(None)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


def is_zero(arr) -> bool:
    return all(v == 0 for v in np.asarray(arr, dtype=object).reshape(-1))


def exact_equal(a, b) -> bool:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    if a.shape != b.shape:
        return False
    return all(x == y for x, y in zip(a.reshape(-1), b.reshape(-1)))


def _as_matrix(A) -> np.ndarray:
    A = np.array(A, dtype=object)
    if A.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {A.shape}")
    return A


def rref(A) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with leftmost-nonzero pivoting in row order."""
    R = _as_matrix(A).copy()
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if R[i, c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = R[r] / R[r, c]
        for i in range(m):
            if i != r and R[i, c] != 0:
                R[i] = R[i] - R[i, c] * R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A) -> int:
    A = _as_matrix(A)
    if A.size == 0:
        return 0
    return len(rref(A)[1])


def solve_linear(A, b) -> np.ndarray | None:
    """One solution of ``A x = b`` (free variables set to 0), or None."""
    A = _as_matrix(A)
    b = np.array(b, dtype=object)
    m, n = A.shape
    if b.shape != (m,):
        raise DimensionError(f"A is {m}x{n} but b has shape {b.shape}")
    if m == 0:
        zero = b.flat[0] * 0 if b.size else Fraction(0)
        return np.array([zero] * n, dtype=object)
    aug = np.concatenate([A, b.reshape(m, 1)], axis=1)
    R, pivots = rref(aug)
    if pivots and pivots[-1] == n:
        return None
    zero = R[0, 0] * 0
    x = np.array([zero] * n, dtype=object)
    for row, c in enumerate(pivots):
        x[c] = R[row, n]
    return x


def kernel_basis(A) -> list[np.ndarray]:
    """Echelon-normalized basis of ``{x : A x = 0}``."""
    A = _as_matrix(A)
    m, n = A.shape
    R, pivots = rref(A)
    if m == 0:
        R = A
    zero = (A.flat[0] * 0) if A.size else Fraction(0)
    one = zero + 1
    basis = []
    for f in (c for c in range(n) if c not in pivots):
        v = np.array([zero] * n, dtype=object)
        v[f] = one
        for row, c in enumerate(pivots):
            v[c] = -R[row, f]
        basis.append(v)
    return basis


def inverse(A) -> np.ndarray:
    A = _as_matrix(A)
    n, n2 = A.shape
    if n != n2:
        raise DimensionError(f"cannot invert a {n}x{n2} matrix")
    zero = A.flat[0] * 0
    eye = np.array([[zero + (i == j) for j in range(n)] for i in range(n)], dtype=object)
    R, pivots = rref(np.concatenate([A, eye], axis=1))
    if pivots[:n] != list(range(n)):
        raise SingularError("matrix is singular")
    return R[:, n:]


def tensor_contract(
    t,
    legs: Sequence,
    mult_plan: Sequence[Sequence[int]] | None = None,
    mult: np.ndarray | None = None,
):
    """Apply per-leg functionals/maps to ``t``, then multiply legs in H.

    ``t`` is a tensor, or a tuple of tensors standing for their outer
    product (never materialized).  ``legs[i]`` is None (identity), a 1-d
    covector (the leg is evaluated and disappears) or a 2-d matrix acting on
    coefficient vectors.  ``mult_plan`` groups the surviving legs (numbered in
    their new order); each group is multiplied left to right using the
    structure constants ``mult`` with ``e_i e_j = sum_k mult[i, j, k] e_k``.
    A group of length 1 is passed through.  Returns an element (rank 1),
    tensor, or a bare scalar.
    """
    factors = tuple(np.asarray(f, dtype=object) for f in (t if isinstance(t, tuple) else (t,)))
    shape = tuple(s for f in factors for s in f.shape)
    if len(legs) != len(shape):
        raise DimensionError(f"{len(legs)} legs for a rank-{len(shape)} tensor")
    legs = [None if leg is None else np.asarray(leg, dtype=object) for leg in legs]
    surviving = 0
    for leg, s in zip(legs, shape):
        if leg is None:
            surviving += 1
        elif leg.ndim == 1:
            if leg.shape[0] != s:
                raise DimensionError("functional length does not match leg")
        elif leg.ndim == 2:
            if leg.shape[1] != s:
                raise DimensionError("map shape does not match leg")
            surviving += 1
        else:
            raise DimensionError("legs must be covectors or matrices")
    if mult_plan is not None:
        if mult is None:
            raise DimensionError("a multiplication plan needs structure constants")
        covered = sorted(i for g in mult_plan for i in g)
        if covered != list(range(surviving)):
            raise DimensionError(f"plan {mult_plan} does not partition {surviving} legs")
    if len(factors) == 1 and len(shape) <= 2:
        return _contract_dense(factors[0], legs, mult_plan, mult)
    return _contract_sparse(factors, legs, mult_plan, mult)


def _contract_dense(t, legs, mult_plan, mult):
    out = t
    axis = 0
    for leg in legs:
        if leg is None:
            axis += 1
        elif leg.ndim == 1:
            out = np.tensordot(out, leg, axes=([axis], [0]))
        else:
            out = np.moveaxis(np.tensordot(leg, out, axes=([1], [axis])), 0, axis)
            axis += 1
    if mult_plan is None:
        return out[()] if out.ndim == 0 else out
    # bring legs into plan order then fold each group
    order = [i for g in mult_plan for i in g]
    out = np.transpose(out, order)
    pos = 0
    for g in mult_plan:
        for _ in range(len(g) - 1):
            # contract legs pos, pos+1 with mult -> new leg at pos
            out = np.tensordot(out, mult, axes=([pos, pos + 1], [0, 1]))
            out = np.moveaxis(out, -1, pos)
        pos += 1
    return out


def _nz(t: np.ndarray) -> list[tuple[tuple[int, ...], object]]:
    return [(tuple(int(i) for i in idx), t[tuple(idx)]) for idx in zip(*np.nonzero(t))]


def _contract_sparse(factors, legs, mult_plan, mult):
    """Nonzero-driven evaluation; agrees with the dense path."""
    zero = next((f.flat[0] * 0 for f in factors if f.size), Fraction(0))
    # per source leg: image of basis index i as sparse [(row, coeff)]
    images: list = []
    out_dims: list[int] = []
    for leg, f_dim in zip(legs, (s for f in factors for s in f.shape)):
        if leg is None:
            images.append(None)
            out_dims.append(f_dim)
        elif leg.ndim == 1:
            images.append(leg)
        else:
            cols = [[(r, leg[r, i]) for r in range(leg.shape[0]) if leg[r, i] != 0] for i in range(leg.shape[1])]
            images.append(cols)
            out_dims.append(leg.shape[0])
    keep = [k for k, leg in enumerate(legs) if leg is None or leg.ndim == 2]
    evals = [k for k, leg in enumerate(legs) if leg is not None and leg.ndim == 1]
    groups = [tuple(g) for g in mult_plan] if mult_plan is not None else [(j,) for j in range(len(keep))]
    if mult_plan is not None:
        n = mult.shape[0]
        table = [
            [[(k, mult[i, j, k]) for k in range(n) if mult[i, j, k] != 0] for j in range(n)]
            for i in range(n)
        ]
        result_dims = [n] * len(groups)
    else:
        result_dims = out_dims

    def image(k: int, i: int):
        im = images[k]
        return [(i, None)] if im is None else im[i]

    memo: dict = {}

    def word(g: tuple[int, ...], src: tuple[int, ...]):
        key = (g, src)
        if key in memo:
            return memo[key]
        if len(g) == 1:
            res = image(keep[g[0]], src[0])
        else:
            acc: dict[int, object] = {}
            for i, ci in word(g[:-1], src[:-1]):
                for j, cj in image(keep[g[-1]], src[-1]):
                    base = ci if cj is None else (cj if ci is None else ci * cj)
                    for k, w in table[i][j]:
                        v = w if base is None else base * w
                        acc[k] = acc[k] + v if k in acc else v
            res = [(k, v) for k, v in acc.items() if v != 0]
        memo[key] = res
        return res

    acc: dict[tuple[int, ...], object] = {}
    for parts in itertools.product(*[_nz(f) for f in factors]):
        idx = tuple(i for p, _ in parts for i in p)
        c = parts[0][1]
        for _, v in parts[1:]:
            c = c * v
        for k in evals:
            c = c * images[k][idx[k]]
        if c == 0:
            continue
        pieces = [word(g, tuple(idx[keep[j]] for j in g)) for g in groups]
        for combo in itertools.product(*pieces):
            coeff = c
            for _, w in combo:
                if w is not None:
                    coeff = coeff * w
            key = tuple(k for k, _ in combo)
            acc[key] = acc[key] + coeff if key in acc else coeff
    if not groups:
        return sum(acc.values(), zero)
    out = np.empty(tuple(result_dims), dtype=object)
    out.fill(zero)
    for key, v in acc.items():
        out[key] = v
    return out


def naive_contract(t, legs, mult_plan=None, mult=None):
    """Index-by-index reference for :func:`tensor_contract` (test oracle)."""
    t = np.asarray(t, dtype=object)
    zero = t.flat[0] * 0
    n_out_axes: list[int] = []
    for k, leg in enumerate(legs):
        if leg is None:
            n_out_axes.append(t.shape[k])
        elif np.asarray(leg).ndim == 2:
            n_out_axes.append(np.asarray(leg).shape[0])
    mid = np.empty(tuple(n_out_axes), dtype=object)
    mid.fill(zero)
    for idx in itertools.product(*[range(s) for s in t.shape]):
        c = t[idx]
        if c == 0:
            continue
        targets: list[list[tuple[int, object]]] = []
        for k, leg in enumerate(legs):
            if leg is None:
                targets.append([(idx[k], 1)])
            else:
                leg = np.asarray(leg, dtype=object)
                if leg.ndim == 1:
                    c = c * leg[idx[k]]
                else:
                    targets.append([(r, leg[r, idx[k]]) for r in range(leg.shape[0])])
        for combo in itertools.product(*targets):
            coeff = c
            for _, w in combo:
                coeff = coeff * w
            key = tuple(i for i, _ in combo)
            mid[key] = mid[key] + coeff
    if mult_plan is None:
        return mid[()] if mid.ndim == 0 else mid
    n = mult.shape[0]
    res = np.empty((n,) * len(mult_plan), dtype=object)
    res.fill(zero)
    for idx in itertools.product(*[range(s) for s in mid.shape]):
        c = mid[idx]
        if c == 0:
            continue
        vecs = []
        for g in mult_plan:
            v = np.array([zero] * n, dtype=object)
            v[idx[g[0]]] = zero + 1
            for leg_i in g[1:]:
                w = np.array([zero] * n, dtype=object)
                for i in range(n):
                    if v[i] == 0:
                        continue
                    for k in range(n):
                        w[k] = w[k] + v[i] * mult[i, idx[leg_i], k]
                v = w
            vecs.append(v)
        for out_idx in itertools.product(range(n), repeat=len(mult_plan)):
            coeff = c
            for v, i in zip(vecs, out_idx):
                coeff = coeff * v[i]
            if coeff != 0:
                res[out_idx] = res[out_idx] + coeff
    return res


def scalar_list(field: FieldSpec, values: Iterable) -> np.ndarray:
    return np.array([field(v) for v in values], dtype=object)


def mat_apply(M: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.dot(M, v)


def compose(*maps: np.ndarray) -> np.ndarray:
    """``compose(A, B, C)`` is the matrix of A∘B∘C."""
    out = maps[0]
    for M in maps[1:]:
        out = np.dot(out, M)
    return out


def map_matrix(fn: Callable[[int], np.ndarray], n: int) -> np.ndarray:
    """Matrix whose j-th column is ``fn(j)``."""
    return np.stack([np.asarray(fn(j), dtype=object) for j in range(n)], axis=1)
