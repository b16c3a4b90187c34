"""Dickson invariants q_{s,i}, Mui invariants M_{s;I}, R_{s;I} and their identities."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .poly import PolyExt, bracket, divide_exact, substitute


@lru_cache(maxsize=None)
def L(p: int, s: int, i: int | None = None) -> PolyExt:
    """L_{s,i} = [0..^i..s]; L_s = L_{s,s}; L_0 = 1."""
    if s == 0:
        return PolyExt.one(p, 0)
    if i is None:
        i = s
    rows = [r for r in range(s + 1) if r != i]
    return bracket(p, s, rows)


@lru_cache(maxsize=None)
def dickson_q(p: int, s: int, i: int) -> PolyExt:
    """q_{s,i} = L_{s,i} / L_s by exact division; 0 for i < 0."""
    if i < 0:
        return PolyExt.zero(p, s)
    if i > s:
        raise ValueError("need i <= s")
    if i == s:
        return PolyExt.one(p, s)
    return divide_exact(L(p, s, i), L(p, s))


@lru_cache(maxsize=None)
def V(p: int, s: int) -> PolyExt:
    """V_s = L_s / L_{s-1}, the product of the linear forms ending in y_s."""
    if s == 1:
        return PolyExt.y(p, 1, 1)
    return divide_exact(L(p, s), L(p, s - 1).embed(s))


def V_product(p: int, s: int) -> PolyExt:
    """V_s as the product over c in F_p^{s-1} of (c_1 y_1 + ... + c_{s-1} y_{s-1} + y_s)."""
    from itertools import product as cartesian

    out = PolyExt.one(p, s)
    for cs in cartesian(range(p), repeat=s - 1):
        terms = {}
        for k, c in enumerate(cs):
            if c:
                e = [0] * s
                e[k] = 1
                terms[(0, tuple(e))] = c
        e = [0] * s
        e[s - 1] = 1
        terms[(0, tuple(e))] = 1
        out = out * PolyExt(p, s, terms)
    return out


def _check_index_set(s: int, I: Sequence[int], p: int) -> tuple[int, ...]:
    I = tuple(I)
    if list(I) != sorted(set(I)) or any(not 0 <= i < s for i in I):
        raise ValueError(f"index set {I} must be strictly increasing in 0..{s - 1}")
    if len(I) >= p:
        raise ValueError("index set too large: k! is not invertible")
    return I


@lru_cache(maxsize=None)
def mui_M(p: int, s: int, I: tuple[int, ...]) -> PolyExt:
    I = _check_index_set(s, I, p)
    rows = [r for r in range(s) if r not in I]
    return bracket(p, s, rows, k=len(I))


@lru_cache(maxsize=None)
def mui_R(p: int, s: int, I: tuple[int, ...]) -> PolyExt:
    """R_{s;I} = M_{s;I} L_s^{p-2}."""
    return mui_M(p, s, tuple(I)) * (L(p, s) ** (p - 2))


def degree_q(p: int, s: int, i: int) -> int:
    return 2 * (p ** s - p ** i)


def degree_R(p: int, s: int, I: Sequence[int]) -> int:
    return len(I) + 2 * (p - 1) * sum(p ** k for k in range(s)) - 2 * sum(p ** i for i in I)


# ---------------------------------------------------------------------------
# reports


@dataclass
class IdentityReport:
    name: str
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def record(self, label: str, ok: bool, detail: str = "") -> None:
        self.checks.append((label, ok, detail))

    def check_equal(self, label: str, lhs: PolyExt, rhs: PolyExt) -> bool:
        diff = lhs - rhs
        ok = not diff
        self.record(label, ok, "" if ok else f"difference {diff}")
        return ok

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self) -> list[tuple[str, str]]:
        return [(label, detail) for label, ok, detail in self.checks if not ok]


def verify_mui_relations(p: int, s: int) -> IdentityReport:
    """Product relations among R_{s;i}, the q recurrence, V_s, and degree formulas."""
    rep = IdentityReport(f"dickson p={p} s={s}")
    q0 = dickson_q(p, s, 0)
    for i in range(s):
        Ri = mui_R(p, s, (i,))
        rep.check_equal(f"R_{{{s};{i}}}^2 = 0", Ri * Ri, PolyExt.zero(p, s))
    for k in range(2, min(s, p - 1) + 1):
        for I in combinations(range(s), k):
            lhs = PolyExt.one(p, s)
            for i in I:
                lhs = lhs * mui_R(p, s, (i,))
            sign = -1 if (k * (k - 1) // 2) % 2 else 1
            rhs = mui_R(p, s, I) * (q0 ** (k - 1))
            rep.check_equal(f"prod R_{{{s};{I}}} = sign R q^{k - 1}", lhs, rhs.scale(sign))
    # recurrence and V
    if s >= 2:
        Vs = V(p, s)
        rep.check_equal(f"V_{s} = L_{s}/L_{s - 1} as a product of linear forms", Vs, V_product(p, s))
        for i in range(s):
            prev_lo = dickson_q(p, s - 1, i - 1).embed(s).frobenius() if i >= 1 else PolyExt.zero(p, s)
            prev = dickson_q(p, s - 1, i).embed(s) if i <= s - 1 else PolyExt.zero(p, s)
            rep.check_equal(f"q_{{{s},{i}}} recurrence", dickson_q(p, s, i), prev_lo + prev * Vs ** (p - 1))
    rep.check_equal(f"q_{{{s},0}} = L_{s}^(p-1)", q0, L(p, s) ** (p - 1))
    for i in range(s + 1):
        q = dickson_q(p, s, i)
        rep.record(f"deg q_{{{s},{i}}}", q.degrees() == {degree_q(p, s, i)}, str(sorted(q.degrees())))
    for k in range(1, min(s, p - 1) + 1):
        for I in combinations(range(s), k):
            R = mui_R(p, s, I)
            rep.record(f"deg R_{{{s};{I}}}", R.degrees() == {degree_R(p, s, I)}, str(sorted(R.degrees())))
    # invariance of every generator
    gens = [(f"q_{{{s},{i}}}", dickson_q(p, s, i)) for i in range(s)]
    gens += [(f"R_{{{s};{I}}}", mui_R(p, s, I)) for k in (1, 2) if k < p for I in combinations(range(s), k)]
    for label, g in gens:
        ok, bad = gl_invariance_check(g, s)
        rep.record(f"{label} is GL_{s}-invariant", ok, bad)
    return rep


# ---------------------------------------------------------------------------
# GL_s action


def gl_generators(p: int, s: int) -> list[tuple[str, list[list[int]]]]:
    """A generating set of GL_s(F_p): swap, cycle, one transvection, one scaling."""
    ident = [[int(i == j) for j in range(s)] for i in range(s)]
    gens = []
    primitive = next(c for c in range(2, p) if all(pow(c, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)))
    scale = [row[:] for row in ident]
    scale[0][0] = primitive
    gens.append(("scale y1", scale))
    if s >= 2:
        swap = [row[:] for row in ident]
        swap[0][0] = swap[1][1] = 0
        swap[0][1] = swap[1][0] = 1
        gens.append(("swap y1,y2", swap))
        cycle = [[int(i == (j + 1) % s) for j in range(s)] for i in range(s)]
        gens.append(("cycle", cycle))
        trans = [row[:] for row in ident]
        trans[0][1] = 1  # y_2 -> y_2 + y_1
        gens.append(("y2 -> y2 + y1", trans))
    return gens


def _prime_factors(n: int) -> list[int]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def gl_invariance_check(f: PolyExt, s: int | None = None) -> tuple[bool, str]:
    """(fixed by every generator, names of the generators that move f)."""
    s = f.s if s is None else s
    moved = [name for name, mat in gl_generators(f.p, s) if substitute(f, mat) != f]
    return not moved, ", ".join(moved)
