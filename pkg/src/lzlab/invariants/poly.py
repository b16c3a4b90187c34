"""E(x_1..x_s) ⊗ F_p[y_1..y_s] with its Steenrod action.

A monomial is ``(mask, exps)``: bit k-1 of ``mask`` is x_k, ``exps`` is the
y exponent vector.  The x factors are always read in ascending order; any
other order is normalized with the permutation sign.  Negative y exponents
are allowed so the same type serves the localized identity checks.
"""
from __future__ import annotations

import re
from itertools import permutations
from math import factorial
from typing import Iterable, Mapping, Sequence

from ..fp import binom_mod

Mono = tuple[int, tuple[int, ...]]


def mask_sign(a: int, b: int) -> int:
    """Sign of x^a * x^b once rewritten ascending; 0 when they share a factor."""
    if a & b:
        return 0
    swaps = 0
    bb = b
    while bb:
        low = bb & -bb
        # factors of a sitting above this factor of b must pass it
        swaps += bin(a & ~((low << 1) - 1)).count("1")
        bb ^= low
    return -1 if swaps & 1 else 1


def ordered_sign(indices: Sequence[int]) -> int:
    """Sign of the permutation sorting distinct indices; 0 on a repeat."""
    if len(set(indices)) != len(indices):
        return 0
    inv = sum(1 for a in range(len(indices)) for b in range(a + 1, len(indices)) if indices[a] > indices[b])
    return -1 if inv & 1 else 1


def popcount(m: int) -> int:
    return bin(m).count("1")


class PolyExt:
    """Element of E(x_1..x_s) ⊗ F_p[y_1..y_s]; immutable by convention."""

    __slots__ = ("p", "s", "terms")

    def __init__(self, p: int, s: int, terms: Mapping[Mono, int] | None = None):
        self.p = p
        self.s = s
        clean: dict[Mono, int] = {}
        for (m, e), c in (terms or {}).items():
            c %= p
            if c:
                if len(e) != s:
                    raise ValueError(f"exponent vector {e} has wrong length for s={s}")
                clean[(m, tuple(e))] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------------

    @classmethod
    def one(cls, p: int, s: int) -> "PolyExt":
        return cls(p, s, {(0, (0,) * s): 1})

    @classmethod
    def zero(cls, p: int, s: int) -> "PolyExt":
        return cls(p, s, {})

    @classmethod
    def x(cls, p: int, s: int, k: int) -> "PolyExt":
        return cls(p, s, {(1 << (k - 1), (0,) * s): 1})

    @classmethod
    def y(cls, p: int, s: int, k: int, power: int = 1) -> "PolyExt":
        e = [0] * s
        e[k - 1] = power
        return cls(p, s, {(0, tuple(e)): 1})

    @classmethod
    def _raw(cls, p: int, s: int, terms: dict[Mono, int]) -> "PolyExt":
        out = cls.__new__(cls)
        out.p, out.s, out.terms = p, s, terms
        return out

    # -- arithmetic ----------------------------------------------------------------

    def _check(self, other: "PolyExt") -> None:
        if self.p != other.p or self.s != other.s:
            raise ValueError("incompatible PolyExt operands")

    def __add__(self, other: "PolyExt") -> "PolyExt":
        self._check(other)
        out = dict(self.terms)
        p = self.p
        for k, c in other.terms.items():
            v = (out.get(k, 0) + c) % p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return PolyExt._raw(p, self.s, out)

    def __neg__(self) -> "PolyExt":
        return PolyExt._raw(self.p, self.s, {k: self.p - c for k, c in self.terms.items()})

    def __sub__(self, other: "PolyExt") -> "PolyExt":
        return self + (-other)

    def scale(self, c: int) -> "PolyExt":
        c %= self.p
        if not c:
            return PolyExt.zero(self.p, self.s)
        return PolyExt._raw(self.p, self.s, {k: a * c % self.p for k, a in self.terms.items()})

    def __rmul__(self, c: int) -> "PolyExt":
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        p = self.p
        out: dict[Mono, int] = {}
        for (m1, e1), c1 in self.terms.items():
            for (m2, e2), c2 in other.terms.items():
                sg = mask_sign(m1, m2)
                if not sg:
                    continue
                key = (m1 | m2, tuple(a + b for a, b in zip(e1, e2)))
                v = (out.get(key, 0) + sg * c1 * c2) % p
                if v:
                    out[key] = v
                else:
                    del out[key]
        return PolyExt._raw(p, self.s, out)

    def __pow__(self, n: int) -> "PolyExt":
        if n < 0:
            raise ValueError("negative power")
        result = PolyExt.one(self.p, self.s)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self) -> "PolyExt":
        """The p-th power, valid on elements without x factors."""
        if any(m for m, _ in self.terms):
            return self ** self.p
        return PolyExt._raw(self.p, self.s, {(0, tuple(self.p * a for a in e)): c for (_, e), c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyExt) and (self.p, self.s) == (other.p, other.s) and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, self.s, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- grading -------------------------------------------------------------------

    @staticmethod
    def mono_degree(m: Mono) -> int:
        return popcount(m[0]) + 2 * sum(m[1])

    def degrees(self) -> set[int]:
        return {self.mono_degree(m) for m in self.terms}

    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) != 1:
            raise ValueError(f"not homogeneous: degrees {sorted(degs)}")
        return next(iter(degs))

    def x_count(self) -> int:
        return max((popcount(m) for m, _ in self.terms), default=0)

    def embed(self, s: int) -> "PolyExt":
        """Same element viewed in P_s for s >= self.s."""
        pad = (0,) * (s - self.s)
        return PolyExt._raw(self.p, s, {(m, e + pad): c for (m, e), c in self.terms.items()})

    # -- text --------------------------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"PolyExt(p={self.p}, s={self.s}, {format_poly(self)!r})"


def format_mono(m: Mono) -> str:
    mask, e = m
    parts = [f"x{k + 1}" for k in range(len(e)) if mask >> k & 1]
    for k, a in enumerate(e):
        if a:
            parts.append(f"y{k + 1}" if a == 1 else f"y{k + 1}^{a}")
    return "*".join(parts) if parts else "1"


def format_poly(f: PolyExt) -> str:
    if not f.terms:
        return "0"
    p = f.p
    out = []
    for m in sorted(f.terms, key=lambda m: (PolyExt.mono_degree(m), m[0], m[1])):
        c = f.terms[m]
        sign, mag = ("-", p - c) if c > p // 2 else ("+", c)
        body = format_mono(m)
        if mag != 1:
            body = f"{mag}*{body}" if body != "1" else str(mag)
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


_FACTOR = re.compile(r"^([xy])(\d+)(?:\^(-?\d+))?$")


def parse_poly(text: str, p: int, s: int) -> PolyExt:
    """Parse ``"x1*x3*y1^4 - 2*y2"``; x factors may come in any order."""
    text = text.strip()
    if text in ("", "0"):
        return PolyExt.zero(p, s)
    pieces = re.split(r"\s+([+-])\s+", text)
    if pieces[0].startswith("-"):
        chunks = [(-1, pieces[0][1:].strip())]
    else:
        chunks = [(1, pieces[0].lstrip("+").strip())]
    for k in range(1, len(pieces), 2):
        chunks.append((1 if pieces[k] == "+" else -1, pieces[k + 1].strip()))
    total = PolyExt.zero(p, s)
    for sign, chunk in chunks:
        coeff = sign
        xs: list[int] = []
        e = [0] * s
        for factor in chunk.split("*"):
            factor = factor.strip()
            if re.fullmatch(r"-?\d+", factor):
                coeff *= int(factor)
                continue
            m = _FACTOR.match(factor)
            if not m:
                raise ValueError(f"bad factor {factor!r}")
            k = int(m.group(2))
            if not 1 <= k <= s:
                raise ValueError(f"variable index {k} outside 1..{s}")
            power = int(m.group(3)) if m.group(3) else 1
            if m.group(1) == "x":
                if power != 1:
                    raise ValueError("x variables are exterior")
                xs.append(k)
            else:
                e[k - 1] += power
        sg = ordered_sign(xs)
        mask = sum(1 << (k - 1) for k in xs)
        total = total + PolyExt(p, s, {(mask, tuple(e)): coeff * sg})
    return total


# ---------------------------------------------------------------------------
# Steenrod action


def beta(f: PolyExt) -> PolyExt:
    """Bockstein: the derivation with x_i -> y_i."""
    p, s = f.p, f.s
    out: dict[Mono, int] = {}
    for (m, e), c in f.terms.items():
        pos = 0
        for k in range(s):
            if m >> k & 1:
                e2 = list(e)
                e2[k] += 1
                key = (m & ~(1 << k), tuple(e2))
                v = (out.get(key, 0) + (-c if pos & 1 else c)) % p
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
                pos += 1
    return PolyExt._raw(p, s, out)


def _compositions(k: int, parts: int, caps: Sequence[int]) -> Iterable[tuple[int, ...]]:
    if parts == 0:
        if k == 0:
            yield ()
        return
    for a in range(min(k, caps[0]) + 1):
        for rest in _compositions(k - a, parts - 1, caps[1:]):
            yield (a,) + rest


def power_op(k: int, f: PolyExt) -> PolyExt:
    """P^k via the total operation y -> y + y^p with x fixed (Cartan formula)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return f
    p, s = f.p, f.s
    out: dict[Mono, int] = {}
    for (m, e), c in f.terms.items():
        # negative exponents expand as power series; cap by k there
        caps = [a if a >= 0 else k for a in e]
        for ks in _compositions(k, s, caps):
            coeff = c
            for a, b in zip(e, ks):
                coeff = coeff * binom_mod(a, b, p) % p
                if not coeff:
                    break
            if not coeff:
                continue
            key = (m, tuple(a + (p - 1) * b for a, b in zip(e, ks)))
            v = (out.get(key, 0) + coeff) % p
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return PolyExt._raw(p, s, out)


def steenrod_apply(op: str | tuple[str, int], f: PolyExt) -> PolyExt:
    """Apply ``"b"`` (Bockstein) or ``("P", k)``."""
    if op in ("b", "beta"):
        return beta(f)
    name, k = op
    if name != "P":
        raise ValueError(f"unknown operation {op!r}")
    return power_op(k, f)


# ---------------------------------------------------------------------------
# determinants and division


def bracket(p: int, s: int, rows: Sequence[int], k: int = 0) -> PolyExt:
    """[k; r_{k+1}, ..., r_s]: determinant with k rows of x's then rows y^{p^r}.

    Divided by k!, which needs k < p.
    """
    if len(rows) + k != s:
        raise ValueError("need exactly s rows")
    if k >= p:
        raise ValueError("k! is not invertible mod p")
    out: dict[Mono, int] = {}
    for perm in permutations(range(s)):
        sg = ordered_sign(perm)
        xs = perm[:k]
        sg *= ordered_sign(xs)
        mask = sum(1 << v for v in xs)
        e = [0] * s
        for r, v in zip(rows, perm[k:]):
            e[v] += p ** r
        key = (mask, tuple(e))
        out[key] = (out.get(key, 0) + sg) % p
    f = PolyExt(p, s, out)
    return f.scale(pow(factorial(k), -1, p)) if k > 1 else f


def _lead(f: PolyExt) -> Mono:
    return max(f.terms, key=lambda m: (m[1], m[0]))


def divide_exact(a: PolyExt, b: PolyExt) -> PolyExt:
    """Quotient a/b for b free of x factors; raises if the division leaves a remainder."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if any(m for m, _ in b.terms):
        raise ValueError("divisor must not contain x factors")
    p, s = a.p, a.s
    lead_m = _lead(b)
    lead_c_inv = pow(b.terms[lead_m], -1, p)
    lead_e = lead_m[1]
    rem = dict(a.terms)
    quot: dict[Mono, int] = {}
    b_items = list(b.terms.items())
    while rem:
        # the lex-largest exponent among remaining terms, any mask
        m = max(rem, key=lambda m: (m[1], m[0]))
        e = tuple(x - y for x, y in zip(m[1], lead_e))
        if any(x < 0 for x in e):
            raise ArithmeticError("polynomial division is not exact")
        c = rem[m] * lead_c_inv % p
        qk = (m[0], e)
        quot[qk] = (quot.get(qk, 0) + c) % p
        for (_, be), bc in b_items:
            key = (m[0], tuple(x + y for x, y in zip(e, be)))
            v = (rem.get(key, 0) - c * bc) % p
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    return PolyExt(p, s, quot)


def divide_by_monomial(a: PolyExt, b: PolyExt) -> PolyExt:
    if len(b.terms) != 1:
        raise ArithmeticError("divisor is not a monomial")
    (bm, be), bc = next(iter(b.terms.items()))
    if bm:
        raise ValueError("divisor must not contain x factors")
    inv = pow(bc, -1, a.p)
    return PolyExt(a.p, a.s, {(m, tuple(x - y for x, y in zip(e, be))): c * inv for (m, e), c in a.terms.items()})


# ---------------------------------------------------------------------------
# linear substitutions


def substitute(f: PolyExt, matrix: Sequence[Sequence[int]]) -> PolyExt:
    """Apply the linear map sending x_j -> sum_i a_ij x_i and y_j likewise.

    Only for nonnegative exponents.
    """
    p, s = f.p, f.s
    xs = [PolyExt(p, s, {(1 << i, (0,) * s): matrix[i][j] for i in range(s)}) for j in range(s)]
    ys = [PolyExt(p, s, {(0, tuple(1 if a == i else 0 for a in range(s))): matrix[i][j] for i in range(s)})
          for j in range(s)]
    y_powers: list[dict[int, PolyExt]] = [{0: PolyExt.one(p, s)} for _ in range(s)]

    def ypow(j: int, n: int) -> PolyExt:
        cache = y_powers[j]
        if n not in cache:
            cache[n] = ys[j] ** n
        return cache[n]

    total = PolyExt.zero(p, s)
    for (m, e), c in f.terms.items():
        if any(a < 0 for a in e):
            raise ValueError("substitute needs nonnegative exponents")
        term = PolyExt(p, s, {(0, (0,) * s): c})
        for j in range(s):
            if m >> j & 1:
                term = term * xs[j]
        for j in range(s):
            if e[j]:
                term = term * ypow(j, e[j])
        total = total + term
    return total
