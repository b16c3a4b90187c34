"""Homology of the Lambda algebra in a fixed bidegree, and the named classes
of Ext in homological degrees 1 to 3.

Bidegrees are (s, t) with t the stem; the differential maps (s, t) to
(s+1, t-1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .fp import FpSubspace, left_kernel, vec_clean
from .lambda_algebra import (
    LambdaElement,
    Terms,
    Word,
    add_into,
    bidegree,
    format_terms,
    lam,
    lambda_algebra,
    mu,
)


class NotACycle(ValueError):
    """Raised by classify when the input has a nonzero boundary."""


@dataclass(frozen=True)
class ExtBasis:
    p: int
    s: int
    t: int
    dimension: int
    cycle_representatives: tuple[LambdaElement, ...]
    boundary_rank: int
    chain_basis: tuple[Word, ...] = field(repr=False)
    cycle_dim: int = 0
    _boundaries: FpSubspace | None = field(default=None, repr=False, compare=False)
    _reps: FpSubspace | None = field(default=None, repr=False, compare=False)

    def index(self) -> dict[Word, int]:
        return {w: k for k, w in enumerate(self.chain_basis)}

    def to_vector(self, e: LambdaElement | Terms) -> dict[int, int]:
        terms = e.terms if isinstance(e, LambdaElement) else e
        idx = self.index()
        out = {}
        for w, c in lambda_algebra(self.p).straighten(terms).items():
            if w not in idx:
                raise ValueError(f"{w} is not in bidegree ({self.s}, {self.t})")
            out[idx[w]] = c
        return vec_clean(out, self.p)

    def classify(self, e: LambdaElement | Terms) -> list[int]:
        """Coordinates of the homology class of a cycle against the representatives."""
        terms = e.terms if isinstance(e, LambdaElement) else e
        A = lambda_algebra(self.p)
        boundary = A.differential(terms)
        if boundary:
            raise NotACycle(f"d({format_terms(terms, self.p)}) = {format_terms(boundary, self.p)}")
        v = self._boundaries.reduce(self.to_vector(terms))
        coords = self._reps.coordinates(v)
        if coords is None:
            raise AssertionError("cycle outside the span of cycles: homology basis is inconsistent")
        return coords


def _matrix_rows(vectors: list[Terms]) -> tuple[list[dict[int, int]], dict[Word, int]]:
    idx: dict[Word, int] = {}
    rows = []
    for v in vectors:
        rows.append({idx.setdefault(w, len(idx)): c for w, c in v.items()})
    return rows, idx


@lru_cache(maxsize=4096)
def ext_basis(s: int, t: int, p: int = 3) -> ExtBasis:
    """Ext^{s,s+t} computed as cycles modulo boundaries in the admissible basis."""
    if s < 0 or t < 0:
        raise ValueError("s and t must be nonnegative")
    A = lambda_algebra(p)
    basis = A.admissible_basis(s, t)
    n = len(basis)
    where = {w: k for k, w in enumerate(basis)}

    # cycles: left kernel of the list of d(w)
    images = [A.d_word(w) for w in basis]
    rows, _ = _matrix_rows(images)
    cycles = left_kernel(rows, p) if n else []
    if n and not any(images):
        cycles = [{k: 1} for k in range(n)]

    # boundaries: d of the degree (s-1, t+1) basis, expressed in our basis
    boundaries = FpSubspace(n, p)
    if s >= 1:
        for w in A.admissible_basis(s - 1, t + 1):
            boundaries.add({where[u]: c for u, c in A.d_word(w).items()})

    reps = FpSubspace(n, p)
    for z in cycles:
        reps.add(boundaries.reduce(z))
    representatives = tuple(
        LambdaElement(p, {basis[k]: c for k, c in v.items()}) for v in reps.basis
    )
    return ExtBasis(
        p=p, s=s, t=t,
        dimension=reps.dim,
        cycle_representatives=representatives,
        boundary_rank=boundaries.dim,
        chain_basis=tuple(basis),
        cycle_dim=len(cycles),
        _boundaries=boundaries,
        _reps=reps,
    )


def classify(e: LambdaElement) -> list[int]:
    degrees = e.bidegrees()
    if not degrees:
        return []
    if len(degrees) > 1:
        raise ValueError(f"element is not homogeneous: {sorted(degrees)}")
    (s, t), = degrees
    return ext_basis(s, t, e.p).classify(e)


# ---------------------------------------------------------------------------
# named classes


@dataclass(frozen=True)
class NamedClass:
    name: str
    params: tuple[int, ...]
    representative: LambdaElement
    bidegree: tuple[int, int]

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}[{','.join(map(str, self.params))}]"


def _word_elem(p: int, *gens: int) -> LambdaElement:
    return LambdaElement(p, {tuple(gens): 1})


def _frob(e: LambdaElement, times: int) -> LambdaElement:
    A = lambda_algebra(e.p)
    terms = e.terms
    for _ in range(times):
        terms = A.frobenius_chain(terms)
    return LambdaElement(e.p, terms)


def _weighted_sum(p: int, parts) -> LambdaElement:
    """Sum over j=1..p-1 of (-1)^{j+1}/j times parts(j)."""
    out: Terms = {}
    A = lambda_algebra(p)
    for j in range(1, p):
        c = (1 if j % 2 else -1) * pow(j, -1, p)
        for coeff, word in parts(j):
            add_into(out, A.straighten({word: 1}), c * coeff, p)
    return LambdaElement(p, out)


def l_class(p: int, i: int = 0) -> LambdaElement:
    """The cycle L_i; L_0 = sum_j (-1)^{j+1}/j lambda_{p-j-1} lambda_{j-1}."""
    base = _weighted_sum(p, lambda j: [(1, (lam(p - j - 1), lam(j - 1)))])
    return _frob(base, i)


def m1_class(p: int) -> LambdaElement:
    return _weighted_sum(p, lambda j: [
        (1, (lam(j * p - 1), lam(p * p - j * p - 1), lam(2 * p - 1))),
        (-2, (lam(p * p - 1), lam(j - 1), lam(2 * p - j - 1))),
        (-2, (lam(p * p - 1), lam(p + j - 1), lam(p - j - 1))),
    ])


def n1_class(p: int) -> LambdaElement:
    return _weighted_sum(p, lambda j: [
        (2, (lam(j * p - 1), lam(2 * p * p - j * p - 1), lam(p - 1))),
        (2, (lam(p * p + j * p - 1), lam(p * p - j * p - 1), lam(p - 1))),
        (-1, (lam(2 * p * p - 1), lam(j - 1), lam(p - j - 1))),
    ])


def _h(p: int, i: int) -> int:
    return lam(p ** i - 1)


def _powers_upto(p: int, stem_cap: int) -> range:
    """Exponents i with the stem of h_i within the cap."""
    i = 0
    while 2 * (p - 1) * p ** i - 1 <= stem_cap:
        i += 1
    return range(i)


def class_catalog(t_max: int, p: int = 3) -> list[NamedClass]:
    """Named classes of Ext^1, Ext^2, Ext^3 with stem <= t_max."""
    out: list[NamedClass] = []
    I = _powers_upto(p, t_max)
    A = lambda_algebra(p)
    a0 = mu(-1)

    def emit(name, params, elem: LambdaElement):
        degs = elem.bidegrees()
        if len(degs) != 1:
            raise AssertionError(f"{name}{params} is zero or not homogeneous")
        bideg = next(iter(degs))
        if bideg[1] <= t_max:
            out.append(NamedClass(name, tuple(params), elem, bideg))

    def word(*gens):
        return _word_elem(p, *gens)

    def prod(x: LambdaElement, *gens) -> LambdaElement:
        return LambdaElement(p, A.multiply(x.terms, {tuple(gens): 1}))

    def lprod(gens, x: LambdaElement) -> LambdaElement:
        return LambdaElement(p, A.multiply({tuple(gens): 1}, x.terms))

    # Ext^1
    emit("alpha_0", (), word(a0))
    for i in I:
        emit("h", (i,), word(_h(p, i)))

    # Ext^2
    for j in I:
        for i in range(0, j + 1):
            emit("h_h", (i, j), word(_h(p, i), _h(p, j)))
    for i in I:
        if i >= 1:
            emit("alpha_0_h", (i,), word(a0, _h(p, i)))
    emit("alpha_0^2", (), word(a0, a0))
    for i in I:
        emit("h_21", (i,), _frob(word(lam(2 * p - 1), lam(0)), i))
        emit("h_12", (i,), _frob(word(lam(p - 1), lam(1)), i))
    emit("rho", (), word(lam(1), a0))
    for i in I:
        emit("lambda_tilde", (i,), l_class(p, i))

    # Ext^3
    for k in I:
        for j in range(0, k + 1):
            for i in range(0, j + 1):
                emit("h_h_h", (i, j, k), word(_h(p, i), _h(p, j), _h(p, k)))
    for j in I:
        for i in range(0, j + 1):
            emit("alpha_0_h_h", (i, j), word(a0, _h(p, i), _h(p, j)))
    for i in I:
        emit("alpha_0^2_h", (i,), word(a0, a0, _h(p, i)))
    emit("alpha_0^3", (), word(a0, a0, a0))
    for i in I:
        L = l_class(p, i)
        for j in I:
            if j != i + 2:
                emit("lambda_tilde_h", (i, j), prod(L, _h(p, j)))
        emit("alpha_0_lambda_tilde", (i,), lprod((a0,), L))
    for i in I:
        for j in I:
            if j not in (i + 2, i, i - 1):
                emit("h_12_h", (i, j), word(lam(p ** (i + 1) - 1), lam(2 * p ** i - 1), _h(p, j)))
        if i >= 1:
            emit("h_12_alpha_0", (i,), word(lam(p ** (i + 1) - 1), lam(2 * p ** i - 1), a0))
    for i in I:
        for j in I:
            if j not in (i + 2, i + 1, i - 1, i):
                emit("h_21_h", (i, j), word(lam(2 * p ** (i + 1) - 1), lam(p ** i - 1), _h(p, j)))
        if i >= 1:
            emit("h_21_alpha_0", (i,), word(lam(2 * p ** (i + 1) - 1), lam(p ** i - 1), a0))
    emit("rho_alpha_0", (), word(lam(1), a0, a0))
    for i in I:
        if p != 3:
            emit("h_321", (i,), _frob(word(lam(3 * p * p - 1), lam(2 * p - 1), lam(0)), i))
            emit("h_131", (i,), _frob(word(lam(p * p - 1), lam(3 * p - 1), lam(0)), i))
            emit("h_123", (i,), _frob(word(lam(p * p - 1), lam(2 * p - 1), lam(2)), i))
        else:
            emit("h_221", (i,), _frob(word(lam(2 * p ** 3 - 1), lam(2 * p - 1), lam(0)), i))
        emit("h_212", (i,), _frob(word(lam(2 * p * p - 1), lam(p - 1), lam(1)), i))
    if p != 3:
        emit("h'_321", (), word(lam(3 * p - 1), lam(1), a0))
        emit("h'_131", (), word(lam(p - 1), lam(2), a0))
        emit("varrho_3", (), word(lam(2), a0, a0))
    else:
        emit("h'_221", (), word(lam(2 * p * p - 1), lam(1), a0))
        emit("varrho'_3", (), word(lam(5), a0, a0))
    M1, N1 = m1_class(p), n1_class(p)
    for i in range(1, len(I) + 1):
        emit("f", (i,), _frob(M1, i - 1))
        emit("g", (i,), _frob(N1, i - 1))
    return out


def catalog_cycle_report(t_max: int, p: int = 3) -> list[tuple[NamedClass, bool]]:
    A = lambda_algebra(p)
    return [(c, not A.differential(c.representative.terms)) for c in class_catalog(t_max, p)]


def ext_dims(s: int, t_max: int, p: int = 3) -> dict[int, int]:
    return {t: ext_basis(s, t, p).dimension for t in range(t_max + 1)}


def stem_of_word(w: Word, p: int) -> int:
    return bidegree(w, p)[1]
