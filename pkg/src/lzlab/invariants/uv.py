"""u/v coordinates: E(u_1..u_s) ⊗ F_p[v_1^{±1}..v_s^{±1}].

u_i = M_{i;i-1}/L_{i-1} has degree 1 and v_i = V_i/q_{i-1,0} has degree 2.
A UV monomial is ``(umask, vexp)`` with the u's read in ascending order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from ..lambda_algebra import Word
from .dickson import IdentityReport, L, V, dickson_q, mui_M, mui_R
from .poly import PolyExt, mask_sign, ordered_sign, popcount

UVMono = tuple[int, tuple[int, ...]]


class UVElement:
    __slots__ = ("p", "s", "terms")

    def __init__(self, p: int, s: int, terms: Mapping[UVMono, int] | None = None):
        self.p, self.s = p, s
        self.terms: dict[UVMono, int] = {}
        for (m, e), c in (terms or {}).items():
            c %= p
            if c:
                self.terms[(m, tuple(e))] = c

    @classmethod
    def one(cls, p: int, s: int) -> "UVElement":
        return cls(p, s, {(0, (0,) * s): 1})

    @classmethod
    def monomial(cls, p: int, s: int, umask: int, vexp: Sequence[int], c: int = 1) -> "UVElement":
        return cls(p, s, {(umask, tuple(vexp)): c})

    def __add__(self, other: "UVElement") -> "UVElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return UVElement(self.p, self.s, out)

    def __neg__(self) -> "UVElement":
        return self.scale(-1)

    def __sub__(self, other: "UVElement") -> "UVElement":
        return self + (-other)

    def scale(self, c: int) -> "UVElement":
        return UVElement(self.p, self.s, {k: a * c for k, a in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        p = self.p
        out: dict[UVMono, int] = {}
        for (m1, e1), c1 in self.terms.items():
            for (m2, e2), c2 in other.terms.items():
                sg = mask_sign(m1, m2)
                if sg:
                    key = (m1 | m2, tuple(a + b for a, b in zip(e1, e2)))
                    out[key] = (out.get(key, 0) + sg * c1 * c2) % p
        return UVElement(p, self.s, out)

    def __pow__(self, n: int) -> "UVElement":
        out = UVElement.one(self.p, self.s)
        for _ in range(n):
            out = out * self
        return out

    def frobenius(self) -> "UVElement":
        if any(m for m, _ in self.terms):
            raise ValueError("Frobenius shortcut needs elements free of u")
        return UVElement(self.p, self.s, {(0, tuple(self.p * a for a in e)): c for (_, e), c in self.terms.items()})

    def embed(self, s: int) -> "UVElement":
        pad = (0,) * (s - self.s)
        return UVElement(self.p, s, {(m, e + pad): c for (m, e), c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, UVElement) and (self.p, self.s) == (other.p, other.s) and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, self.s, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        return format_uv(self)

    def __repr__(self) -> str:
        return f"UVElement(p={self.p}, s={self.s}, {format_uv(self)!r})"


def format_uv_mono(m: UVMono) -> str:
    mask, e = m
    parts = []
    for k, a in enumerate(e):
        if mask >> k & 1:
            parts.append(f"u{k + 1}")
        if a:
            parts.append(f"v{k + 1}" if a == 1 else f"v{k + 1}^{a}")
    return "*".join(parts) if parts else "1"


def format_uv(f: UVElement) -> str:
    if not f.terms:
        return "0"
    p = f.p
    pieces = []
    for m in sorted(f.terms, key=lambda m: (m[1], m[0])):
        c = f.terms[m]
        sign, mag = ("-", p - c) if c > p // 2 else ("+", c)
        body = format_uv_mono(m)
        if mag != 1:
            body = f"{mag}*{body}" if body != "1" else str(mag)
        pieces.append((sign, body))
    text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


_UV_FACTOR = re.compile(r"^([uv])(\d+)(?:\^(-?\d+))?$")


def parse_uv(text: str, p: int, s: int) -> UVElement:
    """Parse ``"u1*v1^-1*u2*v2^3 + 2*v1"``; u factors in any order."""
    text = text.strip()
    if text in ("", "0"):
        return UVElement(p, s)
    pieces = re.split(r"\s+([+-])\s+", text)
    chunks = [(-1, pieces[0][1:].strip())] if pieces[0].startswith("-") else [(1, pieces[0].lstrip("+").strip())]
    for k in range(1, len(pieces), 2):
        chunks.append((1 if pieces[k] == "+" else -1, pieces[k + 1].strip()))
    total = UVElement(p, s)
    for sign, chunk in chunks:
        coeff, us, e = sign, [], [0] * s
        for factor in chunk.split("*"):
            factor = factor.strip()
            if re.fullmatch(r"-?\d+", factor):
                coeff *= int(factor)
                continue
            m = _UV_FACTOR.match(factor)
            if not m:
                raise ValueError(f"bad factor {factor!r}")
            k = int(m.group(2))
            if not 1 <= k <= s:
                raise ValueError(f"variable index {k} outside 1..{s}")
            power = int(m.group(3)) if m.group(3) else 1
            if m.group(1) == "u":
                if power != 1:
                    raise ValueError("u variables are exterior")
                us.append(k)
            else:
                e[k - 1] += power
        mask = sum(1 << (k - 1) for k in us)
        total = total + UVElement(p, s, {(mask, tuple(e)): coeff * ordered_sign(us)})
    return total


# ---------------------------------------------------------------------------
# expansions of the generators


def _v(p: int, s: int, k: int, power: int = 1) -> UVElement:
    e = [0] * s
    e[k - 1] = power
    return UVElement.monomial(p, s, 0, e)


@lru_cache(maxsize=None)
def uv_V(p: int, i: int) -> UVElement:
    """V_i = v_1^{p^{i-2}(p-1)} ... v_{i-1}^{p-1} v_i, in coordinates of rank i."""
    e = [(p - 1) * p ** (i - k - 1) for k in range(1, i)] + [1]
    return UVElement.monomial(p, i, 0, e)


@lru_cache(maxsize=None)
def uv_q(p: int, s: int, i: int) -> UVElement:
    """q_{s,i} through q_{s,i} = q_{s-1,i-1}^p + q_{s-1,i} V_s^{p-1}."""
    if i < 0:
        return UVElement(p, s)
    if i == s:
        return UVElement.one(p, s)
    if s == 0:
        raise ValueError("q_{0,i} only exists for i = 0")
    lo = uv_q(p, s - 1, i - 1).frobenius().embed(s) if i >= 1 else UVElement(p, s)
    hi = uv_q(p, s - 1, i).embed(s) * (uv_V(p, s) ** (p - 1))
    return lo + hi


@lru_cache(maxsize=None)
def uv_R(p: int, s: int, I: tuple[int, ...]) -> UVElement:
    """R_{s;i} via the top closed form and R_{k;j} = R_{k-1;j} V_k^{p-1} + q_{k-1,j} R_{k;k-1};
    R_{s;i,j} = -R_{s;i} R_{s;j} / q_{s,0}."""
    if len(I) == 1:
        (i,) = I
        top = _v(p, s, s, p - 2) * UVElement.monomial(p, s, 1 << (s - 1), [0] * s) * uv_q(p, s - 1, 0).embed(s) ** (p - 1)
        if i == s - 1:
            return top
        return uv_R(p, s - 1, (i,)).embed(s) * uv_V(p, s) ** (p - 1) + uv_q(p, s - 1, i).embed(s) * top
    if len(I) == 2:
        i, j = I
        prod = uv_R(p, s, (i,)) * uv_R(p, s, (j,))
        return divide_by_uv_monomial(prod, uv_q(p, s, 0)).scale(-1)
    raise ValueError("only R_{s;i} and R_{s;i,j} are generators")


def divide_by_uv_monomial(a: UVElement, b: UVElement) -> UVElement:
    if len(b.terms) != 1:
        raise ArithmeticError(f"division by {b} is not monomial")
    (bm, be), bc = next(iter(b.terms.items()))
    if bm:
        raise ArithmeticError("divisor carries u factors")
    inv = pow(bc, -1, a.p)
    return UVElement(a.p, a.s, {(m, tuple(x - y for x, y in zip(e, be))): c * inv for (m, e), c in a.terms.items()})


# generator names used for expansions and provenance: ("q", i), ("R", (i,)), ("R", (i, j))
Generator = tuple[str, object]


def generator_poly(p: int, s: int, g: Generator) -> PolyExt:
    kind, idx = g
    if kind == "q":
        return dickson_q(p, s, idx)
    return mui_R(p, s, tuple(idx))


def generator_uv(p: int, s: int, g: Generator) -> UVElement:
    kind, idx = g
    if kind == "q":
        return uv_q(p, s, idx)
    return uv_R(p, s, tuple(idx))


def uv_expand(p: int, s: int, word: Sequence[Generator]) -> UVElement:
    """Expansion of an ordered product of B[s] generators."""
    out = UVElement.one(p, s)
    for g in word:
        out = out * generator_uv(p, s, g)
    return out


# ---------------------------------------------------------------------------
# verification by clearing denominators

# the localized ring is handled through "atoms": polynomials we are allowed to divide by
_ATOMS = ("L", "q0", "V")


def _atom_poly(p: int, s: int, kind: str, i: int) -> PolyExt:
    if kind == "L":
        return L(p, i).embed(s) if i >= 1 else PolyExt.one(p, s)
    if kind == "q0":
        return dickson_q(p, i, 0).embed(s) if i >= 1 else PolyExt.one(p, s)
    return V(p, i).embed(s)


def uv_to_fraction(f: UVElement) -> tuple[PolyExt, dict[tuple[str, int], int]]:
    """Write f as N / D with D a product of atoms L_{i-1}, q_{i-1,0}, V_i; returns (N, D-exponents)."""
    p, s = f.p, f.s
    # denominators per monomial: u_i -> 1/L_{i-1};  v_i^e -> V_i^e / q_{i-1,0}^e
    den: dict[tuple[str, int], int] = {}
    for m, e in f.terms:
        for k in range(1, s + 1):
            if m >> (k - 1) & 1:
                den[("L", k - 1)] = max(den.get(("L", k - 1), 0), 1)
            a = e[k - 1]
            if a > 0:
                den[("q0", k - 1)] = max(den.get(("q0", k - 1), 0), a)
            elif a < 0:
                den[("V", k)] = max(den.get(("V", k), 0), -a)
    total = PolyExt.zero(p, s)
    u_num = {k: mui_M(p, k, (k - 1,)).embed(s) for k in range(1, s + 1)}
    for (m, e), c in f.terms.items():
        num = PolyExt(p, s, {(0, (0,) * s): c})
        left = dict(den)
        us = [k for k in range(1, s + 1) if m >> (k - 1) & 1]
        for k in us:
            num = num * u_num[k]
            left[("L", k - 1)] -= 1
        for k in range(1, s + 1):
            a = e[k - 1]
            if a > 0:
                num = num * _atom_poly(p, s, "V", k) ** a
                left[("q0", k - 1)] -= a
            elif a < 0:
                num = num * _atom_poly(p, s, "q0", k - 1) ** (-a)
                left[("V", k)] -= -a
        for (kind, i), n in left.items():
            if n:
                num = num * _atom_poly(p, s, kind, i) ** n
        total = total + num
    return total, den


def uv_verify(f: UVElement, target: PolyExt) -> tuple[bool, PolyExt]:
    """Check f == target in the localized ring; returns (ok, cleared difference)."""
    num, den = uv_to_fraction(f)
    rhs = target
    for (kind, i), n in den.items():
        if n:
            rhs = rhs * _atom_poly(f.p, f.s, kind, i) ** n
    diff = num - rhs
    return not diff, diff


def uv_generator_report(p: int, s_max: int = 3) -> IdentityReport:
    """Every generator expansion against its polynomial, plus the V_i closed form."""
    rep = IdentityReport(f"uv p={p}")
    for s in range(1, s_max + 1):
        ok, diff = uv_verify(uv_V(p, s), V(p, s))
        rep.record(f"V_{s}", ok, "" if ok else str(diff))
        for g in generators(p, s):
            ok, diff = uv_verify(generator_uv(p, s, g), generator_poly(p, s, g))
            rep.record(f"{g} in rank {s}", ok, "" if ok else f"difference {diff}")
    return rep


def generators(p: int, s: int) -> list[Generator]:
    out: list[Generator] = [("q", i) for i in range(s)]
    out += [("R", (i,)) for i in range(s)]
    if p > 2:
        out += [("R", (i, j)) for i in range(s) for j in range(i + 1, s)]
    return out


# ---------------------------------------------------------------------------
# pairing and the differential


@dataclass(frozen=True)
class Profile:
    eps: tuple[int, ...]
    i: tuple[int, ...]

    def word(self) -> Word:
        return tuple(2 * i + e for e, i in zip(self.eps, self.i))


def parametrize(m: UVMono, p: int) -> Profile | None:
    """(eps_k, i_k) with vexp_k = (p-1) i_k - eps_k and i_k >= 0, if possible."""
    mask, e = m
    eps, idx = [], []
    for k, a in enumerate(e):
        ek = mask >> k & 1
        num = a + ek
        if num < 0 or num % (p - 1):
            return None
        eps.append(ek)
        idx.append(num // (p - 1))
    return Profile(tuple(eps), tuple(idx))


def uv_monomial_of_word(w: Word, p: int) -> UVMono:
    mask = sum(1 << k for k, g in enumerate(w) if g & 1)
    return mask, tuple((p - 1) * (g >> 1) - (g & 1) for g in w)


def kappa_pair(g: UVElement, w: Word) -> int:
    """<g, lambda_w>: the coefficient of w's profile in g times (-1)^{sum i}."""
    p = g.p
    if len(w) != g.s:
        raise ValueError("length mismatch")
    for m in g.terms:
        if parametrize(m, p) is None:
            raise ValueError(f"monomial {format_uv_mono(m)} admits no (eps, i) parametrization")
    c = g.terms.get(uv_monomial_of_word(w, p), 0)
    if sum(x >> 1 for x in w) % 2:
        c = -c
    return c % p


def kappa_functional(g: UVElement) -> dict[Word, int]:
    """g as a functional on words (admissible or not): word -> value."""
    p = g.p
    out = {}
    for m, c in g.terms.items():
        prof = parametrize(m, p)
        if prof is None:
            raise ValueError(f"monomial {format_uv_mono(m)} admits no (eps, i) parametrization")
        w = prof.word()
        out[w] = (-c if sum(prof.i) % 2 else c) % p
    return out


def gamma_differential(g: UVElement) -> UVElement:
    """Monomials ending in u_s v_s^{-1} go to (-1)^{eps_1+..+eps_{s-1}} times their prefix."""
    p, s = g.p, g.s
    out: dict[UVMono, int] = {}
    top = 1 << (s - 1)
    for (m, e), c in g.terms.items():
        if m & top and e[-1] == -1:
            prefix = m & ~top
            sign = -1 if popcount(prefix) % 2 else 1
            key = (prefix, e[:-1])
            out[key] = (out.get(key, 0) + sign * c) % p
    return UVElement(p, s - 1, out)


def eq41_literal(prof: Profile, p: int) -> bool:
    """2i_1 - eps_1 > sum_{k>=1} 2 i_k (p-1) - sum_{k>=2} eps_k."""
    lhs = 2 * prof.i[0] - prof.eps[0]
    rhs = sum(2 * i * (p - 1) for i in prof.i) - sum(prof.eps[1:])
    return lhs > rhs


def excess_of_profile(prof: Profile, p: int) -> int:
    e = 2 * prof.i[0] - prof.eps[0]
    for eps, i in zip(prof.eps[1:], prof.i[1:]):
        e -= 2 * (p - 1) * i - eps
    return e
