"""Chain-level Lannes-Zarati maps, the induced map on Ext, and theorem checks."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .dyer_lashof import DLElement, ann_basis, format_dl_word, project_to_R, theta
from .ext import class_catalog, ext_basis
from .fp import FpSubspace
from .invariants.bs import BSElement, bs_degree, in_abar_ps
from .invariants.uv import UVElement
from .lambda_algebra import LambdaElement, Terms, bidegree, lambda_algebra


def phi_sign(s: int, t: int) -> int:
    """(-1)^{s(s-1)/2 + (s+1) t}."""
    return -1 if (s * (s - 1) // 2 + (s + 1) * t) % 2 else 1


def phi_chain(s: int, e: LambdaElement | Terms, p: int | None = None) -> DLElement:
    """Signed projection of a length-s Lambda element onto R_s."""
    terms = e.terms if isinstance(e, LambdaElement) else e
    p = e.p if isinstance(e, LambdaElement) else p
    signed: Terms = {}
    for w, c in terms.items():
        if len(w) != s:
            raise ValueError(f"word of length {len(w)} in a length-{s} element")
        t = bidegree(w, p)[1]
        signed[w] = c * phi_sign(s, t)
    return project_to_R(signed, p)


def phi_dual_include(s: int, b: BSElement) -> UVElement:
    """The u/v expansion of b with the sign attached to its degree."""
    return b.uv().scale(phi_sign(s, b.poly.degree()))


@dataclass
class PhiTableRow:
    p: int
    s: int
    t: int
    ext_dim: int
    ann_dim: int
    phi_rank: int
    image_basis: list[DLElement]
    outside_ann: list[str] = field(default_factory=list)

    @property
    def falsified(self) -> bool:
        return bool(self.outside_ann)

    def as_json(self) -> dict:
        return {
            "s": self.s,
            "t": self.t,
            "ext_dim": self.ext_dim,
            "ann_dim": self.ann_dim,
            "phi_rank": self.phi_rank,
            "image": image_strings(self),
        }


def phi_ext_matrix(s: int, t: int, p: int = 3) -> PhiTableRow:
    eb = ext_basis(s, t, p)
    ann = ann_basis(s, t, p)
    ann_words = sorted({w for a in ann for w in a.terms})
    col = {w: k for k, w in enumerate(ann_words)}
    ann_space = FpSubspace.span([{col[w]: c for w, c in a.terms.items()} for a in ann], max(len(col), 1), p)
    images = FpSubspace(10 ** 9, p)
    image_elems: list[DLElement] = []
    outside = []
    word_ids: dict = {}
    for rep in eb.cycle_representatives:
        img = phi_chain(s, rep)
        if not img:
            continue
        if any(w not in col for w in img.terms) or ann_space.reduce({col[w]: c for w, c in img.terms.items()}):
            outside.append(f"phi({rep}) = {img} is not in Ann(R_{s}) at t={t}")
        vec = {word_ids.setdefault(w, len(word_ids)): c for w, c in img.terms.items()}
        if images.add(vec):
            image_elems.append(img)
    return PhiTableRow(p, s, t, eb.dimension, len(ann), images.dim, image_elems, outside)


@dataclass
class TheoremVerdicts:
    p: int
    t_max: dict[int, int]
    rows: list[PhiTableRow]
    verdicts: dict[str, bool]
    details: dict[str, object]


def phi_table(s: int, t_max: int, p: int = 3) -> list[PhiTableRow]:
    return [phi_ext_matrix(s, t, p) for t in range(t_max + 1)]


def expected_phi2_support(p: int, t_max: int) -> set[int]:
    out = {0}
    i = 0
    while 2 * (p - 1) * p ** (i + 1) - 2 <= t_max:
        out.add(2 * (p - 1) * p ** (i + 1) - 2)
        i += 1
    return out


def verify_theorems(p: int = 3, t_max: int = 120, t_max_s3: int | None = None) -> TheoremVerdicts:
    """Rows for s = 1, 2, 3 and verdicts for the three rank statements."""
    t3 = min(t_max, 100) if t_max_s3 is None else t_max_s3
    rows1 = phi_table(1, t_max, p)
    rows2 = phi_table(2, t_max, p)
    rows3 = phi_table(3, t3, p)
    support2 = {r.t for r in rows2 if r.phi_rank}
    support3 = {r.t for r in rows3 if r.phi_rank}
    non_epi = sorted(r.t for r in rows2 if r.ann_dim > r.phi_rank)
    alpha3 = rows3[0].image_basis if rows3 else []
    q000 = (0, 0, 0)
    verdicts = {
        "phi_1 bijective in every stem": all(r.ext_dim == r.ann_dim == r.phi_rank for r in rows1),
        "phi_2 support is {0} and 2(p-1)p^(i+1)-2": support2 == expected_phi2_support(p, t_max),
        "phi_3 vanishes for t > 0": support3 <= {0},
        "phi_3 at t = 0 hits Q0 Q0 Q0": any(set(x.terms) == {q000} for x in alpha3),
        "phi_2 is not onto": bool(non_epi),
        "images lie in Ann(R_s)": not any(r.falsified for r in rows1 + rows2 + rows3),
    }
    details = {
        "phi_2 support": sorted(support2),
        "phi_3 support": sorted(support3),
        "phi_2 missed stems": non_epi,
    }
    return TheoremVerdicts(p, {1: t_max, 2: t_max, 3: t3}, rows1 + rows2 + rows3, verdicts, details)


# ---------------------------------------------------------------------------
# power operations


@dataclass
class PowerReport:
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def sample_cycles(p: int, count: int, rng: random.Random, t_max: int = 60,
                  s_values: Iterable[int] = (1, 2)) -> list[LambdaElement]:
    """Catalog cycles plus random combinations of homology representatives."""
    lengths = set(s_values)
    out = [c.representative for c in class_catalog(t_max, p) if c.bidegree[0] in lengths]
    pool = []
    for s in s_values:
        for t in range(t_max + 1):
            eb = ext_basis(s, t, p)
            if eb.dimension:
                pool.append(eb)
    while len(out) < count and pool:
        eb = rng.choice(pool)
        acc: Terms = {}
        for rep in eb.cycle_representatives:
            c = rng.randrange(p)
            for w, a in rep.terms.items():
                acc[w] = (acc.get(w, 0) + c * a) % p
        # add a random boundary so the sample is not just a stored representative
        src = lambda_algebra(p).admissible_basis(eb.s - 1, eb.t + 1)
        if src:
            w = rng.choice(src)
            c = rng.randrange(p)
            for u, a in lambda_algebra(p).d_word(w).items():
                acc[u] = (acc.get(u, 0) + c * a) % p
        elem = LambdaElement(p, acc)
        if elem:
            out.append(elem)
    return out[:count]


def verify_power_commutation(samples: int = 50, p: int = 3, seed: int = 0, t_max: int = 40) -> PowerReport:
    """phi(P^0 x) against theta(phi x) on sampled cycles; exact equality is asserted."""
    rng = random.Random(seed)
    A = lambda_algebra(p)
    rep = PowerReport()
    for x in sample_cycles(p, samples, rng, t_max):
        s = len(next(iter(x.terms)))
        if A.differential(x.terms):
            rep.failures.append(f"sample {x} is not a cycle")
            continue
        lhs = phi_chain(s, A.frobenius_chain(x.terms), p)
        rhs = theta(phi_chain(s, x))
        rep.checked += 1
        if lhs != rhs:
            rep.failures.append(f"x = {x}: phi(P0 x) = {lhs}, theta(phi x) = {rhs}")
    return rep


# ---------------------------------------------------------------------------
# the conjecture explorer


@dataclass
class ConjectureRow:
    s: int
    t: int
    element: str
    in_abar: bool


def conjecture_explorer(s: int, t_max: int, p: int = 3) -> list[ConjectureRow]:
    """For each B[s]_t basis element, whether it lies in Ā·P_s (a report, never an assertion)."""
    rows = []
    for t in range(1, t_max + 1):
        for b in bs_degree(p, s, t).basis:
            rows.append(ConjectureRow(s, t, b.label, in_abar_ps(b.poly)))
    return rows


def image_strings(row: PhiTableRow) -> list[str]:
    return [format_dl_word(w) for x in row.image_basis for w in sorted(x.terms)]
