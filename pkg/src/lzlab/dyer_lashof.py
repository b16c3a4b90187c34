"""The Dyer-Lashof algebra R as Lambda modulo negative excess, and its right
Steenrod action computed through the pairing with B[s].

R monomials reuse the Lambda word encoding: code 2i+eps stands for
β^eps Q^i (the image of the generator with upper index i).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .fp import FpSubspace, left_kernel, solve_square
from .invariants.bs import BSDegree, apply_op, bs_degree
from .invariants.uv import kappa_functional
from .lambda_algebra import Terms, Word, add_into, excess, lambda_algebra, parse_terms


def format_dl_word(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(("bQ" if g & 1 else "Q") + str(g >> 1) for g in w)


_DL_RE = re.compile(r"^(bQ|Q)(\d+)$")


def parse_dl_word(text: str) -> Word:
    text = text.strip()
    if text in ("", "1"):
        return ()
    out = []
    for tok in text.split():
        m = _DL_RE.match(tok)
        if not m:
            raise ValueError(f"bad Dyer-Lashof generator {tok!r}")
        i = int(m.group(2))
        e = 1 if m.group(1) == "bQ" else 0
        if i < e:
            raise ValueError(f"{tok} does not exist")
        out.append(2 * i + e)
    return tuple(out)


def format_dl(terms: Mapping[Word, int], p: int) -> str:
    if not terms:
        return "0"
    parts = []
    for w in sorted(terms, key=lambda w: (len(w), w)):
        c = terms[w] % p
        sign, mag = ("-", p - c) if c > p // 2 else ("+", c)
        body = format_dl_word(w)
        parts.append((sign, body if mag == 1 else f"{mag}*{body}"))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


class DLElement:
    """F_p-combination of admissible monomials of nonnegative excess."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Mapping[Word, int] | None = None):
        self.p = p
        self.terms: dict[Word, int] = {}
        for w, c in (terms or {}).items():
            c %= p
            if c:
                self.terms[tuple(w)] = c

    @classmethod
    def parse(cls, text: str, p: int) -> "DLElement":
        return project_to_R(parse_terms(text, p, parse_dl_word), p)

    def __eq__(self, other) -> bool:
        return isinstance(other, DLElement) and self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "DLElement") -> "DLElement":
        out = dict(self.terms)
        add_into(out, other.terms, 1, self.p)
        return DLElement(self.p, out)

    def __neg__(self) -> "DLElement":
        return DLElement(self.p, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "DLElement") -> "DLElement":
        return self + (-other)

    def scale(self, c: int) -> "DLElement":
        return DLElement(self.p, {w: a * c for w, a in self.terms.items()})

    def monomial_strings(self) -> list[str]:
        return [format_dl_word(w) for w in sorted(self.terms)]

    def __str__(self) -> str:
        return format_dl(self.terms, self.p) if self.terms else "0"

    def __repr__(self) -> str:
        return f"DLElement(p={self.p}, {str(self)!r})"


def project_to_R(terms: Mapping[Word, int], p: int) -> DLElement:
    """Straighten, then drop admissible monomials of negative excess."""
    out = {w: c for w, c in lambda_algebra(p).straighten(terms).items() if excess(w, p) >= 0}
    return DLElement(p, out)


def r_basis(s: int, t: int, p: int = 3) -> list[Word]:
    return [w for w in lambda_algebra(p).admissible_basis(s, t) if excess(w, p) >= 0]


def theta(e: DLElement) -> DLElement:
    """All-β monomials scale their indices by p; anything with a bare Q dies."""
    p = e.p
    out: Terms = {}
    for w, c in e.terms.items():
        if all(g & 1 for g in w):
            add_into(out, {tuple(2 * p * (g >> 1) + 1 for g in w): 1}, c, p)
    return DLElement(p, out)


# ---------------------------------------------------------------------------
# duality with B[s]


class SingularPairing(ArithmeticError):
    """The pairing between B[s]_t and R_s^t is not invertible."""


@dataclass
class Duality:
    p: int
    s: int
    t: int
    bs: BSDegree
    words: list[Word]
    K: list[list[int]]          # K[j][w] = <b_j, word_w>
    K_inv: list[list[int]] | None

    @property
    def invertible(self) -> bool:
        return self.K_inv is not None

    def pair(self, e: DLElement) -> list[int]:
        """The vector (<b_j, e>)_j."""
        where = {w: k for k, w in enumerate(self.words)}
        out = [0] * self.bs.dim
        for w, c in e.terms.items():
            k = where[w]
            for j in range(self.bs.dim):
                out[j] = (out[j] + self.K[j][k] * c) % self.p
        return out

    def from_pairings(self, values: list[int]) -> DLElement:
        """The unique e with <b_j, e> = values[j]."""
        if self.K_inv is None:
            raise SingularPairing(f"pairing matrix singular in (s,t)=({self.s},{self.t})")
        n = len(self.words)
        coeffs = [0] * n
        # K e = values  =>  e = K^{-1} values
        for k in range(n):
            coeffs[k] = sum(self.K_inv[k][j] * values[j] for j in range(n)) % self.p
        return DLElement(self.p, {self.words[k]: c for k, c in enumerate(coeffs) if c})


@lru_cache(maxsize=None)
def duality(s: int, t: int, p: int = 3) -> Duality:
    words = r_basis(s, t, p)
    bs = bs_degree(p, s, t)
    K = []
    for b in bs.basis:
        f = kappa_functional(b.uv())
        K.append([f.get(w, 0) for w in words])
    K_inv = None
    if len(words) == bs.dim:
        try:
            K_inv = solve_square(K, p) if words else []
        except ValueError:
            K_inv = None
    return Duality(p, s, t, bs, words, K, K_inv)


def op_degree(op: tuple, p: int) -> int:
    return 1 if op[0] == "b" else 2 * op[1] * (p - 1)


def parse_op(text: str) -> tuple:
    text = text.strip()
    if text in ("b", "beta"):
        return ("b",)
    m = re.fullmatch(r"P\^?(\d+)", text)
    if not m:
        raise ValueError(f"bad Steenrod operation {text!r}")
    return ("P", int(m.group(1)))


def right_action(op: tuple, e: DLElement, s: int, t: int) -> DLElement:
    """e·op defined by <e·op, b> = <e, op(b)> for b in B[s] of degree t - |op|."""
    p = e.p
    lower = t - op_degree(op, p)
    if lower < 0 or not e:
        return DLElement(p)
    top = duality(s, t, p)
    bottom = duality(s, lower, p)
    if not bottom.words:
        return DLElement(p)
    e_vals = top.pair(e)
    values = []
    for b in bottom.bs.basis:
        img = apply_op(op, b.poly)
        coords = top.bs.coordinates(img)
        if coords is None:
            raise ArithmeticError(f"{op} of {b.label} is not in B[{s}]")
        values.append(sum(c * v for c, v in zip(coords, e_vals)) % p)
    return bottom.from_pairings(values)


def nishida_bq_single(i: int, k: int, p: int = 3) -> DLElement:
    """(βQ^i)·P^k = (-1)^k binom((p-1)(i-k)-1, k) βQ^{i-k}, kept only when i-k >= 1."""
    from .fp import binom_mod

    if i - k < 1:
        return DLElement(p)
    c = binom_mod((p - 1) * (i - k) - 1, k, p)
    if k % 2:
        c = -c
    return DLElement(p, {(2 * (i - k) + 1,): c})


def ann_basis(s: int, t: int, p: int = 3, generators_only: bool = False) -> list[DLElement]:
    """Elements of R_s^t killed by every positive Steenrod operation.

    Computed as the annihilator, under the pairing, of Ā·B[s] in degree t.
    """
    from .invariants.bs import abar_in_bs

    dual = duality(s, t, p)
    if not dual.words:
        return []
    if not dual.invertible:
        raise SingularPairing(f"pairing matrix singular in (s,t)=({s},{t})")
    rep = abar_in_bs(p, s, t, generators_only)
    # constraint for each v in Ā·B: sum_j v_j <b_j, e> = 0, i.e. (v^T K) e = 0
    n = len(dual.words)
    rows = []
    for v in rep.abar_vectors:
        rows.append({k: sum(v[j] * dual.K[j][k] for j in range(len(v))) % p for k in range(n)})
    # kernel of the constraint matrix: e with row·e = 0 for all rows
    cols = [dict() for _ in range(n)]
    for r, row in enumerate(rows):
        for k, c in row.items():
            if c:
                cols[k][r] = c
    kernel = left_kernel(cols, p) if rows else [{k: 1} for k in range(n)]
    basis = FpSubspace.span(kernel, n, p).basis
    return [DLElement(p, {dual.words[k]: c for k, c in v.items()}) for v in basis]


def ann_dim(s: int, t: int, p: int = 3) -> int:
    return len(ann_basis(s, t, p))
