"""The algebra B[s] degree by degree, its A-indecomposables, and the pairing with R_s."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from ..fp import FpSubspace, vec_clean
from .dickson import degree_q, degree_R
from .poly import Mono, PolyExt, beta, power_op
from .uv import Generator, UVElement, generator_poly, uv_expand


@dataclass(frozen=True)
class BSElement:
    """A product of B[s] generators together with its polynomial."""

    word: tuple[Generator, ...]
    poly: PolyExt

    @property
    def label(self) -> str:
        if not self.word:
            return "1"
        parts = []
        for kind, idx in self.word:
            if kind == "q":
                parts.append(f"q{idx}")
            else:
                parts.append("R" + ",".join(map(str, idx)))
        return "*".join(parts)

    def uv(self) -> UVElement:
        return uv_expand(self.poly.p, self.poly.s, self.word)


def _gen_degree(p: int, s: int, g: Generator) -> int:
    kind, idx = g
    return degree_q(p, s, idx) if kind == "q" else degree_R(p, s, idx)


def _spanning_words(p: int, s: int, t: int) -> list[tuple[Generator, ...]]:
    """Products q^a * R_{S1} * R_{S2} of degree t with at most s exterior factors."""
    singles = [("R", (i,)) for i in range(s)]
    pairs = [("R", (i, j)) for i in range(s) for j in range(i + 1, s)]
    out = []
    exterior = []
    for a in range(len(singles) + 1):
        for S1 in combinations(singles, a):
            for b in range(len(pairs) + 1):
                if a + 2 * b > s:
                    break
                for S2 in combinations(pairs, b):
                    exterior.append(S1 + S2)
    qdeg = [degree_q(p, s, i) for i in range(s)]

    def q_parts(rem: int, i: int):
        if i == s:
            if rem == 0:
                yield ()
            return
        d = qdeg[i]
        for a in range(rem // d + 1):
            for rest in q_parts(rem - a * d, i + 1):
                yield (a,) + rest

    for ext in exterior:
        rem = t - sum(_gen_degree(p, s, g) for g in ext)
        if rem < 0 or rem % 2:
            continue
        for exps in q_parts(rem, 0):
            qs = tuple(("q", i) for i in range(s) for _ in range(exps[i]))
            out.append(qs + ext)
    return out


@lru_cache(maxsize=None)
def _product_poly(p: int, s: int, word: tuple[Generator, ...]) -> PolyExt:
    if not word:
        return PolyExt.one(p, s)
    return _product_poly(p, s, word[:-1]) * generator_poly(p, s, word[-1])


class MonomialIndex:
    """Column numbering for PolyExt monomials."""

    def __init__(self):
        self.cols: dict[Mono, int] = {}

    def vec(self, f: PolyExt, grow: bool = True) -> dict[int, int] | None:
        out = {}
        for m, c in f.terms.items():
            k = self.cols.get(m)
            if k is None:
                if not grow:
                    return None
                k = self.cols[m] = len(self.cols)
            out[k] = c
        return out


@dataclass
class BSDegree:
    """B[s]_t: a basis of generator products and a coordinate solver."""

    p: int
    s: int
    t: int
    basis: list[BSElement]
    _index: MonomialIndex
    _solver: FpSubspace
    _offset: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, f: PolyExt) -> list[int] | None:
        """Coordinates of f against ``basis``, or None if f is not in B[s]_t."""
        if not f:
            return [0] * self.dim
        v = self._index.vec(f, grow=False)
        if v is None:
            return None
        r = self._solver.reduce(v)
        if any(k < self._offset for k in r):
            return None
        coords = [0] * self.dim
        for k, c in r.items():
            coords[k - self._offset] = (-c) % self.p
        return coords


_OFFSET = 1 << 40


@lru_cache(maxsize=None)
def bs_degree(p: int, s: int, t: int) -> BSDegree:
    index = MonomialIndex()
    span = FpSubspace(_OFFSET * 2, p)
    basis: list[BSElement] = []
    solver = FpSubspace(_OFFSET * 2, p)
    for word in _spanning_words(p, s, t):
        f = _product_poly(p, s, word)
        if not f:
            continue
        v = index.vec(f)
        if span.add(v):
            row = dict(v)
            row[_OFFSET + len(basis)] = 1
            solver.add(row)
            basis.append(BSElement(word, f))
    return BSDegree(p, s, t, basis, index, solver, _OFFSET)


def bs_basis(p: int, s: int, t: int) -> list[BSElement]:
    return list(bs_degree(p, s, t).basis)


def steenrod_ops_into(p: int, t: int, generators_only: bool = False) -> list[tuple[tuple, int]]:
    """(operation, source degree) pairs whose image lands in degree t."""
    ops = [(("b",), t - 1)]
    k = 1
    while t - 2 * k * (p - 1) >= 0:
        if not generators_only or _is_power_of(k, p):
            ops.append((("P", k), t - 2 * k * (p - 1)))
        k += 1
    return [(op, src) for op, src in ops if src >= 0]


def _is_power_of(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def apply_op(op: tuple, f: PolyExt) -> PolyExt:
    return beta(f) if op[0] == "b" else power_op(op[1], f)


@dataclass
class IndecomposableReport:
    t: int
    ambient_dim: int
    abar_dim: int
    abar_vectors: list[list[int]] | None = None

    @property
    def quotient_dim(self) -> int:
        return self.ambient_dim - self.abar_dim


def abar_in_bs(p: int, s: int, t: int, generators_only: bool = False) -> IndecomposableReport:
    """Ā·B[s] in degree t, in B[s]_t coordinates."""
    target = bs_degree(p, s, t)
    sub = FpSubspace(max(target.dim, 1), p)
    for op, src in steenrod_ops_into(p, t, generators_only):
        for b in bs_degree(p, s, src).basis:
            img = apply_op(op, b.poly)
            if not img:
                continue
            coords = target.coordinates(img)
            if coords is None:
                raise ArithmeticError(f"{op} applied to {b.label} leaves B[{s}]")
            sub.add({k: c for k, c in enumerate(coords) if c})
    return IndecomposableReport(t, target.dim, sub.dim, [_dense(v, target.dim) for v in sub.basis])


def _dense(v: dict[int, int], n: int) -> list[int]:
    out = [0] * n
    for k, c in v.items():
        out[k] = c
    return out


def _all_monomials(s: int, t: int) -> list[Mono]:
    out = []
    for mask in range(1 << s):
        r = t - bin(mask).count("1")
        if r < 0 or r % 2:
            continue
        for e in _exponent_vectors(r // 2, s):
            out.append((mask, e))
    return out


def _exponent_vectors(total: int, n: int):
    if n == 1:
        yield (total,)
        return
    for a in range(total + 1):
        for rest in _exponent_vectors(total - a, n - 1):
            yield (a,) + rest


def abar_in_ps(p: int, s: int, t: int, generators_only: bool = True) -> FpSubspace:
    """Ā·P_s in degree t as a subspace of monomial coordinates (keyed by ``_all_monomials``)."""
    cols = {m: k for k, m in enumerate(_all_monomials(s, t))}
    sub = FpSubspace(max(len(cols), 1), p)
    for op, src in steenrod_ops_into(p, t, generators_only):
        for m in _all_monomials(s, src):
            img = apply_op(op, PolyExt(p, s, {m: 1}))
            if img:
                sub.add({cols[k]: c for k, c in img.terms.items()})
    return sub


def in_abar_ps(f: PolyExt, generators_only: bool = True) -> bool:
    t = f.degree()
    cols = {m: k for k, m in enumerate(_all_monomials(f.s, t))}
    sub = abar_in_ps(f.p, f.s, t, generators_only)
    return not sub.reduce(vec_clean({cols[m]: c for m, c in f.terms.items()}, f.p))


def abar_and_indecomposables(p: int, s: int, t: int, ambient: str = "B", generators_only: bool = False):
    """(Ā-part as a subspace, dimension of the indecomposable quotient) in degree t."""
    if ambient == "B":
        rep = abar_in_bs(p, s, t, generators_only)
        return rep, rep.quotient_dim
    if ambient == "P":
        sub = abar_in_ps(p, s, t, generators_only)
        return sub, len(_all_monomials(s, t)) - sub.dim
    raise ValueError("ambient must be 'B' or 'P'")


def bs_words_uv(elements: Sequence[BSElement]) -> list[UVElement]:
    return [b.uv() for b in elements]
