"""The opposite Lambda algebra at an odd prime.

A generator is stored as an int code ``2*i + eps``: eps=1 is the lambda
family (upper index i >= 1, written l<i-1>), eps=0 the mu family (upper
index i >= 0, written m<i-1>).  A monomial is a tuple of codes and an
element is a dict monomial -> residue.  The second grading t is the stem,
the sum of the generator degrees 2i(p-1) - eps; the differential lowers it
by one and raises the length by one.
"""
from __future__ import annotations

import random
import re
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping

from .fp import binom_mod, prime_context

Word = tuple[int, ...]
Terms = dict[Word, int]


# ---------------------------------------------------------------------------
# generators


def code(eps: int, i: int) -> int:
    if eps not in (0, 1):
        raise ValueError("eps must be 0 or 1")
    if i < eps:
        raise ValueError(f"upper index {i} too small for eps={eps}")
    return 2 * i + eps


def lam(n: int) -> int:
    """Code of lambda_n."""
    return code(1, n + 1)


def mu(n: int) -> int:
    """Code of mu_n."""
    return code(0, n + 1)


def eps_of(g: int) -> int:
    return g & 1


def upper(g: int) -> int:
    return g >> 1


def gen_degree(g: int, p: int) -> int:
    return 2 * (g >> 1) * (p - 1) - (g & 1)


@dataclass(frozen=True)
class LambdaGenerator:
    eps: int
    i: int

    def __post_init__(self):
        code(self.eps, self.i)

    @property
    def code(self) -> int:
        return 2 * self.i + self.eps

    def degree(self, p: int) -> int:
        return 2 * self.i * (p - 1) - self.eps

    def __str__(self) -> str:
        return format_generator(self.code)


def format_generator(g: int) -> str:
    return ("l" if g & 1 else "m") + str((g >> 1) - 1)


def format_word(w: Word) -> str:
    return " ".join(format_generator(g) for g in w) if w else "1"


_GEN_RE = re.compile(r"^([lm])(-?\d+)$")


def parse_word(text: str) -> Word:
    """Parse ``"l5 l0"`` or ``"m-1 m-1"``; ``"1"`` or ``""`` is the empty word."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    out = []
    for tok in text.split():
        m = _GEN_RE.match(tok)
        if not m:
            raise ValueError(f"bad Lambda generator {tok!r}")
        n = int(m.group(2))
        out.append(lam(n) if m.group(1) == "l" else mu(n))
    return tuple(out)


# ---------------------------------------------------------------------------
# monomial invariants


def bidegree(w: Word, p: int) -> tuple[int, int]:
    return len(w), sum(gen_degree(g, p) for g in w)


def is_admissible(w: Word, p: int) -> bool:
    for a, b in zip(w, w[1:]):
        if p * (b >> 1) - (b & 1) < (a >> 1):
            return False
    return True


def excess(w: Word, p: int, literal_last_eps: bool = False) -> int:
    """Excess 2i_1 - eps_1 - sum_{k>=2} (2(p-1)i_k - eps_k).

    With ``literal_last_eps`` the correction term uses eps_s for every k,
    a variant kept only for comparison.
    """
    if not w:
        return 0
    e = 2 * (w[0] >> 1) - (w[0] & 1)
    for g in w[1:]:
        e -= 2 * (p - 1) * (g >> 1)
        e += (w[-1] & 1) if literal_last_eps else (g & 1)
    return e


def order_key(w: Word) -> tuple:
    """Termination order: every Adem rewrite strictly increases this key."""
    return tuple((g >> 1, 1 - (g & 1)) for g in reversed(w))


# ---------------------------------------------------------------------------
# element helpers on raw dicts


def add_into(acc: Terms, terms: Mapping[Word, int], c: int, p: int) -> None:
    if c % p == 0:
        return
    for w, a in terms.items():
        x = (acc.get(w, 0) + c * a) % p
        if x:
            acc[w] = x
        else:
            acc.pop(w, None)


def format_terms(terms: Mapping[Word, int], p: int) -> str:
    if not terms:
        return "0"
    parts = []
    for w in sorted(terms, key=lambda w: (len(w), w)):
        c = terms[w] % p
        # print residues above p/2 as negatives
        if c > p // 2:
            sign, mag = "-", p - c
        else:
            sign, mag = "+", c
        body = format_word(w)
        parts.append((sign, body if mag == 1 else f"{mag}*{body}"))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def parse_terms(text: str, p: int, word_parser: Callable[[str], Word] = parse_word) -> Terms:
    """Parse ``"2*l1 l0 - l0 l1 + m-1"``; a bare term has coefficient 1."""
    text = text.strip()
    if text in ("", "0"):
        return {}
    # split on + or - that separate terms, i.e. surrounded by spaces or leading
    tokens = re.split(r"\s+([+-])\s+", " " + text if text[0] not in "+-" else text)
    out: Terms = {}
    chunks = []
    first = tokens[0].strip()
    sign = 1
    if first.startswith("-"):
        sign, first = -1, first[1:].strip()
    elif first.startswith("+"):
        first = first[1:].strip()
    chunks.append((sign, first))
    for k in range(1, len(tokens), 2):
        chunks.append((1 if tokens[k] == "+" else -1, tokens[k + 1].strip()))
    for sign, chunk in chunks:
        if "*" in chunk and re.match(r"^\d+\s*\*", chunk):
            c_text, body = chunk.split("*", 1)
            c = int(c_text)
        else:
            c, body = 1, chunk
        w = word_parser(body)
        add_into(out, {w: 1}, sign * c, p)
    return out


# ---------------------------------------------------------------------------
# Adem relations


def adem_family(g1: int, g2: int, p: int) -> tuple[int, int, int]:
    """(family, m, n) of the relation whose leading term is the pair g1 g2."""
    e1, i1, e2, i2 = g1 & 1, g1 >> 1, g2 & 1, g2 >> 1
    if p * i2 - e2 >= i1:
        raise ValueError(f"pair {format_word((g1, g2))} is admissible")
    if e1 == 1 and e2 == 1:
        return 1, i2, i1 - p * i2
    if e1 == 0 and e2 == 1:
        return 2, i2, i1 - p * i2
    if e1 == 1 and e2 == 0:
        return 3, i2, i1 - p * i2 - 1
    return 4, i2, i1 - p * i2 - 1


def adem_pair_terms(g1: int, g2: int, p: int) -> Terms:
    """Rewrite of an inadmissible pair as a combination of later words."""
    family, m, n = adem_family(g1, g2, p)
    out: Terms = {}
    L = lambda a: 2 * a + 1  # noqa: E731  (lambda with upper index a)
    M = lambda a: 2 * a  # noqa: E731
    if family == 1:
        for i in range(n):
            add_into(out, {(L(i + p * m), L(n - i + m)): 1}, -binom_mod(n, i, p), p)
    elif family == 2:
        for i in range(n + 1):
            c = binom_mod(n, i, p)
            add_into(out, {(L(i + p * m), M(n - i + m)): 1}, c, p)
            if i < n:
                add_into(out, {(M(i + p * m), L(n - i + m)): 1}, -c, p)
    elif family == 3:
        for i in range(n):
            add_into(out, {(L(i + p * m + 1), M(n - i + m)): 1}, -binom_mod(n, i, p), p)
    else:
        for i in range(n):
            add_into(out, {(M(i + p * m + 1), M(n - i + m)): 1}, -binom_mod(n, i, p), p)
    return out


def check_dispatch_coverage(p: int, bound: int = 50) -> None:
    """Every inadmissible pair with indices <= bound has a degree-preserving,
    order-increasing rewrite."""
    for i1 in range(bound + 1):
        for e1 in (0, 1):
            if i1 < e1:
                continue
            for i2 in range(bound + 1):
                for e2 in (0, 1):
                    if i2 < e2 or p * i2 - e2 >= i1:
                        continue
                    pair = (2 * i1 + e1, 2 * i2 + e2)
                    deg = bidegree(pair, p)
                    key = order_key(pair)
                    for w in adem_pair_terms(*pair, p):
                        if bidegree(w, p) != deg or order_key(w) <= key:
                            raise AssertionError(f"bad rewrite for {format_word(pair)}: {format_word(w)}")


# ---------------------------------------------------------------------------
# the algebra


class LambdaAlgebra:
    """Straightening, products and the differential at a fixed prime.

    Holds the pair-rewrite memo (persistable through ``lzlab.cache``) and a
    memo of left multiplications by a generator onto admissible words.
    """

    def __init__(self, p: int, check_coverage: bool = True):
        self.p = prime_context(p).p
        self._pair_memo: dict[tuple[int, int], Terms] = {}
        self._pair_lock = threading.RLock()
        self._left_memo: dict[tuple[int, Word], Terms] = {}
        self._d_memo: dict[Word, Terms] = {}
        self.pair_listeners: list[Callable[[int, int, Terms], None]] = []
        if check_coverage:
            check_dispatch_coverage(self.p)

    # -- pair memo -----------------------------------------------------------

    def adem_pair(self, g1: int, g2: int) -> Terms:
        key = (g1, g2)
        hit = self._pair_memo.get(key)
        if hit is not None:
            return hit
        with self._pair_lock:
            hit = self._pair_memo.get(key)
            if hit is None:
                hit = adem_pair_terms(g1, g2, self.p)
                self._pair_memo[key] = hit
                for listener in self.pair_listeners:
                    listener(g1, g2, hit)
        return hit

    def preload_pairs(self, records: Iterable[tuple[int, int, Terms]]) -> None:
        with self._pair_lock:
            for g1, g2, terms in records:
                self._pair_memo.setdefault((g1, g2), dict(terms))

    def pair_items(self) -> list[tuple[tuple[int, int], Terms]]:
        return list(self._pair_memo.items())

    # -- straightening ---------------------------------------------------------

    def left_mult(self, g: int, w: Word) -> Terms:
        """Normal form of the word g*w, for w admissible."""
        if not w:
            return {(g,): 1}
        h = w[0]
        p = self.p
        if p * (h >> 1) - (h & 1) >= (g >> 1):
            return {(g,) + w: 1}
        key = (g, w)
        hit = self._left_memo.get(key)
        if hit is not None:
            return hit
        rest = w[1:]
        out: Terms = {}
        for (a, b), c in self.adem_pair(g, h).items():
            for w2, c2 in self.left_mult(b, rest).items():
                add_into(out, self.left_mult(a, w2), c * c2, p)
        self._left_memo[key] = out
        return out

    def straighten_word(self, w: Word) -> Terms:
        if is_admissible(w, self.p):
            return {w: 1}
        acc: Terms = {w[-1:]: 1}
        for g in reversed(w[:-1]):
            nxt: Terms = {}
            for v, c in acc.items():
                add_into(nxt, self.left_mult(g, v), c, self.p)
            acc = nxt
        return acc

    def straighten(self, terms: Mapping[Word, int]) -> Terms:
        out: Terms = {}
        for w, c in terms.items():
            add_into(out, self.straighten_word(w), c, self.p)
        return out

    def multiply(self, a: Mapping[Word, int], b: Mapping[Word, int]) -> Terms:
        p = self.p
        b_norm = self.straighten(b)
        out: Terms = {}
        for u, cu in a.items():
            acc = b_norm
            for g in reversed(u):
                nxt: Terms = {}
                for v, c in acc.items():
                    add_into(nxt, self.left_mult(g, v), c, p)
                acc = nxt
            add_into(out, acc, cu, p)
        return out

    # -- differential ---------------------------------------------------------

    def d_generator(self, g: int) -> Terms:
        """Unstraightened d of a generator, low-index terms dropped."""
        p = self.p
        n = g >> 1
        out: Terms = {}
        if g & 1:
            for i in range(1, n):
                add_into(out, {(2 * i + 1, 2 * (n - i) + 1): 1}, binom_mod(n, i, p), p)
        else:
            for i in range(0, n + 1):
                c = binom_mod(n, i, p)
                if i >= 1:
                    add_into(out, {(2 * i + 1, 2 * (n - i)): 1}, c, p)
                if n - i >= 1:
                    add_into(out, {(2 * i, 2 * (n - i) + 1): 1}, -c, p)
        return out

    def d_word(self, w: Word) -> Terms:
        """Straightened differential of an admissible word."""
        hit = self._d_memo.get(w)
        if hit is not None:
            return hit
        p = self.p
        out: Terms = {}
        if len(w) == 1:
            out = self.straighten(self.d_generator(w[0]))
        elif w:
            # d(g v) = d(g) v + (-1)^deg(g) g d(v)
            g, rest = w[0], w[1:]
            for u, c in self.d_generator(g).items():
                add_into(out, self.multiply({u: 1}, {rest: 1}), c, p)
            sign = -1 if gen_degree(g, p) % 2 else 1
            for v, c in self.d_word(rest).items():
                add_into(out, self.left_mult(g, v), sign * c, p)
        self._d_memo[w] = out
        return out

    def differential(self, terms: Mapping[Word, int]) -> Terms:
        out: Terms = {}
        for w, c in self.straighten(terms).items():
            add_into(out, self.d_word(w), c, self.p)
        return out

    def d_leibniz_raw(self, w: Word) -> Terms:
        """Unstraightened Leibniz expansion of d on an arbitrary word."""
        p = self.p
        out: Terms = {}
        deg = 0
        for k, g in enumerate(w):
            sign = -1 if deg % 2 else 1
            for u, c in self.d_generator(g).items():
                add_into(out, {w[:k] + u + w[k + 1:]: 1}, sign * c, p)
            deg += gen_degree(g, p)
        return out

    # -- bases ------------------------------------------------------------------

    def admissible_basis(self, s: int, t: int) -> list[Word]:
        return list(_admissible(self.p, s, t, 0))

    def frobenius_chain(self, terms: Mapping[Word, int]) -> Terms:
        out: Terms = {}
        for w, c in self.straighten(terms).items():
            if all(g & 1 for g in w):
                add_into(out, {tuple(2 * self.p * (g >> 1) + 1 for g in w): 1}, c, self.p)
        return out


@lru_cache(maxsize=None)
def _admissible(p: int, s: int, t: int, i_prev: int) -> tuple[Word, ...]:
    """Admissible words of length s and stem t whose first letter g satisfies
    p*i(g) - eps(g) >= i_prev."""
    if s == 0:
        return ((),) if t == 0 else ()
    out = []
    q = 2 * (p - 1)
    for i in range(0, t // q + 2):
        for e in (1, 0):
            if i < e or p * i - e < i_prev:
                continue
            deg = q * i - e
            if deg > t:
                continue
            g = 2 * i + e
            for rest in _admissible(p, s - 1, t - deg, i):
                out.append((g,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def lambda_algebra(p: int) -> LambdaAlgebra:
    return LambdaAlgebra(p)


# ---------------------------------------------------------------------------
# independent rewriting engine used as a confluence oracle


def straighten_stepwise(terms: Mapping[Word, int], p: int, strategy: str = "leftmost",
                        max_steps: int = 10_000_000) -> Terms:
    """Rewrite one inadmissible adjacent pair at a time until none remain.

    ``strategy`` picks the leftmost or rightmost offending pair in each word.
    No memoization beyond the raw relation table, so it shares no state with
    :class:`LambdaAlgebra`.
    """
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(strategy)
    work: Terms = {w: c % p for w, c in terms.items() if c % p}
    done: Terms = {}
    steps = 0
    while work:
        w, c = work.popitem()
        positions = [k for k in range(len(w) - 1) if p * (w[k + 1] >> 1) - (w[k + 1] & 1) < (w[k] >> 1)]
        if not positions:
            add_into(done, {w: 1}, c, p)
            continue
        k = positions[0] if strategy == "leftmost" else positions[-1]
        for (a, b), c2 in adem_pair_terms(w[k], w[k + 1], p).items():
            add_into(work, {w[:k] + (a, b) + w[k + 2:]: 1}, c * c2, p)
        steps += 1
        if steps > max_steps:
            raise RuntimeError("rewriting did not terminate within the step budget")
    return done


def random_word(rng: random.Random, p: int, s: int, t_max: int) -> Word:
    """Uniform-ish random word of length s (not necessarily admissible) with stem <= t_max."""
    q = 2 * (p - 1)
    while True:
        w = []
        budget = t_max
        for _ in range(s):
            i = rng.randint(0, max(0, budget // q))
            e = rng.randint(0, 1) if i >= 1 else 0
            w.append(2 * i + e)
            budget -= q * i - e
        if budget >= 0:
            return tuple(w)


# ---------------------------------------------------------------------------
# user-facing element type


class LambdaElement:
    """Immutable F_p-combination of Lambda words."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Mapping[Word, int] | None = None):
        self.p = p
        clean = {}
        for w, c in (terms or {}).items():
            c %= p
            if c:
                clean[tuple(w)] = c
        self.terms: dict[Word, int] = clean

    @classmethod
    def parse(cls, text: str, p: int) -> "LambdaElement":
        return cls(p, parse_terms(text, p))

    @classmethod
    def word(cls, p: int, w: Word, c: int = 1) -> "LambdaElement":
        return cls(p, {tuple(w): c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, LambdaElement) and self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __add__(self, other: "LambdaElement") -> "LambdaElement":
        out = dict(self.terms)
        add_into(out, other.terms, 1, self.p)
        return LambdaElement(self.p, out)

    def __sub__(self, other: "LambdaElement") -> "LambdaElement":
        out = dict(self.terms)
        add_into(out, other.terms, -1, self.p)
        return LambdaElement(self.p, out)

    def __neg__(self) -> "LambdaElement":
        return LambdaElement(self.p, {w: -c for w, c in self.terms.items()})

    def __rmul__(self, c: int) -> "LambdaElement":
        return LambdaElement(self.p, {w: c * a for w, a in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        return LambdaElement(self.p, lambda_algebra(self.p).multiply(self.terms, other.terms))

    def straighten(self) -> "LambdaElement":
        return LambdaElement(self.p, lambda_algebra(self.p).straighten(self.terms))

    def d(self) -> "LambdaElement":
        return LambdaElement(self.p, lambda_algebra(self.p).differential(self.terms))

    def bidegrees(self) -> set[tuple[int, int]]:
        return {bidegree(w, self.p) for w in self.terms}

    def __iter__(self) -> Iterator[tuple[Word, int]]:
        return iter(self.terms.items())

    def __repr__(self) -> str:
        return f"LambdaElement(p={self.p}, {format_terms(self.terms, self.p)!r})"

    def __str__(self) -> str:
        return format_terms(self.terms, self.p)
