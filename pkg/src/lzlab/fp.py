"""Exact arithmetic mod an odd prime and sparse linear algebra over F_p.

Sparse vectors are plain ``dict[int, int]`` mapping a column index to a
nonzero residue in ``range(1, p)``.  Nothing in here uses floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

SparseVec = dict[int, int]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class PrimeContext:
    """The coefficient field F_p together with a table of inverses."""

    p: int
    inv_table: tuple[int, ...] = field(repr=False, default=())

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if not self.inv_table:
            inv = [0] * self.p
            for a in range(1, self.p):
                inv[a] = pow(a, -1, self.p)
            object.__setattr__(self, "inv_table", tuple(inv))

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return self.inv_table[a]

    def sign(self, exponent: int) -> int:
        """(-1)^exponent as a residue."""
        return 1 if exponent % 2 == 0 else self.p - 1


@lru_cache(maxsize=None)
def prime_context(p: int) -> PrimeContext:
    return PrimeContext(p)


def _lucas(a: int, b: int, p: int) -> int:
    result = 1
    while a or b:
        ad, bd = a % p, b % p
        if bd > ad:
            return 0
        num = den = 1
        for k in range(bd):
            num = num * (ad - k) % p
            den = den * (k + 1) % p
        result = result * num * pow(den, -1, p) % p
        a //= p
        b //= p
    return result


@lru_cache(maxsize=1 << 16)
def binom_mod(a: int, b: int, p: int) -> int:
    """Generalized binomial coefficient binom(a, b) reduced mod p.

    Zero for ``b < 0``.  Negative tops use binom(a, b) = (-1)^b binom(b-a-1, b),
    which is the coefficient identity for (1+x)^a as a power series.
    """
    if b < 0:
        return 0
    if a < 0:
        value = _lucas(b - a - 1, b, p)
        return value if b % 2 == 0 else (-value) % p
    if b > a:
        return 0
    return _lucas(a, b, p)


# ---------------------------------------------------------------------------
# sparse vectors


def vec_add(acc: SparseVec, v: Mapping[int, int], c: int, p: int) -> None:
    """In place ``acc += c * v``."""
    if c % p == 0:
        return
    for k, a in v.items():
        x = (acc.get(k, 0) + c * a) % p
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)


def vec_clean(v: Mapping[int, int], p: int) -> SparseVec:
    out = {}
    for k, a in v.items():
        a %= p
        if a:
            out[k] = a
    return out


class FpSparseMatrix:
    """Row-major sparse matrix over F_p."""

    def __init__(self, rows: Iterable[Mapping[int, int]], n_cols: int, p: int):
        self.p = p
        self.n_cols = n_cols
        self.rows: tuple[SparseVec, ...] = tuple(vec_clean(r, p) for r in rows)
        for r in self.rows:
            if r and (min(r) < 0 or max(r) >= n_cols):
                raise ValueError("column index out of range")
        self._rref: FpSubspace | None = None

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], p: int, n_cols: int | None = None):
        if n_cols is None:
            n_cols = len(dense[0]) if dense else 0
        rows = [{j: a for j, a in enumerate(row) if a % p} for row in dense]
        return cls(rows, n_cols, p)

    def to_dense(self) -> list[list[int]]:
        out = []
        for r in self.rows:
            row = [0] * self.n_cols
            for j, a in r.items():
                row[j] = a
            out.append(row)
        return out

    def transpose(self) -> "FpSparseMatrix":
        cols: list[SparseVec] = [dict() for _ in range(self.n_cols)]
        for i, r in enumerate(self.rows):
            for j, a in r.items():
                cols[j][i] = a
        return FpSparseMatrix(cols, len(self.rows), self.p)

    def apply(self, v: Mapping[int, int]) -> SparseVec:
        """The product M v for a column vector v."""
        out: SparseVec = {}
        for i, r in enumerate(self.rows):
            s = 0
            for j, a in r.items():
                b = v.get(j)
                if b:
                    s += a * b
            s %= self.p
            if s:
                out[i] = s
        return out

    def rref(self) -> "FpSubspace":
        if self._rref is None:
            self._rref = FpSubspace.span(self.rows, self.n_cols, self.p)
        return self._rref

    def rank(self) -> int:
        return self.rref().dim


class FpSubspace:
    """Subspace of F_p^n held as a reduced row echelon basis.

    Every basis row is monic at its pivot and vanishes at every other pivot,
    so reduction of a vector is a single pass over the pivots it touches.
    """

    def __init__(self, n_cols: int, p: int):
        self.n_cols = n_cols
        self.p = p
        self._rows: dict[int, SparseVec] = {}
        # column -> set of pivots whose row has a nonzero entry there
        self._col_index: dict[int, set[int]] = {}

    @classmethod
    def span(cls, vectors: Iterable[Mapping[int, int]], n_cols: int, p: int) -> "FpSubspace":
        sub = cls(n_cols, p)
        for v in vectors:
            sub.add(v)
        return sub

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    @property
    def basis(self) -> list[SparseVec]:
        return [dict(self._rows[c]) for c in self.pivots]

    def reduce(self, v: Mapping[int, int]) -> SparseVec:
        """Remainder of v after eliminating every pivot column."""
        p = self.p
        out = vec_clean(v, p)
        for c in [c for c in out if c in self._rows]:
            a = out.get(c)
            if a:
                vec_add(out, self._rows[c], p - a, p)
        return out

    def add(self, v: Mapping[int, int]) -> bool:
        """Insert v; return True when it enlarged the space."""
        r = self.reduce(v)
        if not r:
            return False
        p = self.p
        c = min(r)
        inv = pow(r[c], -1, p)
        if inv != 1:
            r = {k: a * inv % p for k, a in r.items()}
        # clear the new pivot column from the existing rows
        for q in list(self._col_index.get(c, ())):
            row = self._rows[q]
            a = row.get(c)
            if not a:
                continue
            for k in row:
                self._col_index[k].discard(q)
            vec_add(row, r, p - a, p)
            for k in row:
                self._col_index.setdefault(k, set()).add(q)
        self._rows[c] = r
        for k in r:
            self._col_index.setdefault(k, set()).add(c)
        return True

    def __contains__(self, v: Mapping[int, int]) -> bool:
        return not self.reduce(v)

    def coordinates(self, v: Mapping[int, int]) -> list[int] | None:
        """Coordinates of v against ``basis`` (pivot order), or None."""
        v = vec_clean(v, self.p)
        if self.reduce(v):
            return None
        return [v.get(c, 0) for c in self.pivots]


def kernel_and_rank(m: FpSparseMatrix) -> tuple[int, FpSubspace]:
    """Rank of m and its right kernel {x : m x = 0} as a subspace."""
    sub = m.rref()
    p = m.p
    pivots = set(sub.pivots)
    kernel_vectors = []
    rows = sub._rows
    for f in range(m.n_cols):
        if f in pivots:
            continue
        x = {f: 1}
        for c in sub._col_index.get(f, ()):
            a = rows[c].get(f)
            if a:
                x[c] = (p - a) % p
        kernel_vectors.append(x)
    return sub.dim, FpSubspace.span(kernel_vectors, m.n_cols, p)


def left_kernel(vectors: Sequence[Mapping[int, int]], p: int) -> list[SparseVec]:
    """Basis of {c : sum_i c_i vectors[i] = 0}, indexed by position in vectors."""
    cols: dict[int, SparseVec] = {}
    for i, v in enumerate(vectors):
        for k, a in v.items():
            a %= p
            if a:
                cols.setdefault(k, {})[i] = a
    rows = [cols[k] for k in sorted(cols)]
    m = FpSparseMatrix(rows, len(vectors), p)
    _, ker = kernel_and_rank(m)
    return ker.basis


def membership(v: Mapping[int, int], s: FpSubspace, n_cols: int | None = None) -> list[int] | None:
    if n_cols is not None and n_cols != s.n_cols:
        raise ValueError(f"dimension mismatch: {n_cols} vs {s.n_cols}")
    if v and max(v) >= s.n_cols:
        raise ValueError("vector has a column outside the ambient space")
    return s.coordinates(v)


def solve_square(matrix: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Inverse of a small dense square matrix over F_p; ValueError if singular."""
    n = len(matrix)
    aug = [[a % p for a in row] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(matrix)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c], -1, p)
        aug[c] = [a * inv % p for a in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [(a - f * b) % p for a, b in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]
