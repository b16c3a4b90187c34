from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from lzlab.fp import binom_mod
from lzlab.invariants.bs import abar_and_indecomposables, bs_degree, in_abar_ps
from lzlab.invariants.dickson import (L, V, V_product, degree_q, degree_R, dickson_q, gl_generators,
                                      gl_invariance_check, mui_M, mui_R, verify_mui_relations)
from lzlab.invariants.poly import (PolyExt, beta, bracket, divide_exact, format_poly, parse_poly,
                                   power_op, substitute)
from lzlab.invariants.uv import (format_uv, generators, kappa_functional, parse_uv, uv_expand,
                                 uv_generator_report, uv_verify)


def random_poly(rng: random.Random, p: int, s: int, terms: int = 3, max_exp: int = 4) -> PolyExt:
    out = {}
    for _ in range(terms):
        mask = rng.randrange(1 << s)
        e = tuple(rng.randrange(max_exp) for _ in range(s))
        out[(mask, e)] = rng.randrange(1, p)
    return PolyExt(p, s, out)


def test_exterior_signs():
    x1, x2 = PolyExt.x(3, 2, 1), PolyExt.x(3, 2, 2)
    assert x1 * x2 == -(x2 * x1)
    assert not x1 * x1


def test_polynomial_grammar_round_trip():
    f = parse_poly("x1*x2*y1^4 - 2*y2 + x2*y1", 5, 2)
    assert parse_poly(format_poly(f), 5, 2) == f
    assert parse_poly("x2*x1", 3, 2) == -parse_poly("x1*x2", 3, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 40), st.integers(0, 12), st.sampled_from([3, 5]))
def test_power_on_a_power_of_y(n, k, p):
    y = PolyExt.y(p, 1, 1)
    expected = (y ** (n + k * (p - 1))).scale(binom_mod(n, k, p))
    assert power_op(k, y ** n) == expected


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([3, 5]), st.integers(0, 6))
def test_cartan_formula(seed, p, k):
    rng = random.Random(seed)
    f, g = random_poly(rng, p, 2), random_poly(rng, p, 2)
    rhs = PolyExt.zero(p, 2)
    for i in range(k + 1):
        rhs = rhs + power_op(i, f) * power_op(k - i, g)
    assert power_op(k, f * g) == rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([3, 5]))
def test_steenrod_relations(seed, p):
    rng = random.Random(seed)
    f = random_poly(rng, p, 2)
    assert not beta(beta(f))
    # P^1 P^1 = 2 P^2 at every odd prime
    assert power_op(1, power_op(1, f)) == power_op(2, f).scale(2)


def test_dickson_small_cases():
    p = 3
    assert dickson_q(p, 1, 0) == PolyExt.y(p, 1, 1, p - 1)
    assert L(p, 1) == PolyExt.y(p, 1, 1)
    assert mui_M(p, 1, (0,)) == PolyExt.x(p, 1, 1)
    assert mui_R(p, 1, (0,)) == PolyExt.x(p, 1, 1) * PolyExt.y(p, 1, 1, p - 2)


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("s", [1, 2, 3])
def test_dickson_mui_identities(p, s):
    rep = verify_mui_relations(p, s)
    assert rep.ok, rep.failures()


def test_V_is_the_product_of_affine_forms():
    for p in (3, 5):
        assert V(p, 2) == V_product(p, 2)


def test_generators_of_gl_are_invertible_and_act():
    p, s = 3, 2
    for _, mat in gl_generators(p, s):
        det = (mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]) % p
        assert det
    y1 = PolyExt.y(p, 2, 1)
    ok, moved = gl_invariance_check(y1, 2)
    assert not ok and moved


def test_brute_force_gl2_invariance_of_dickson():
    p, s = 3, 2
    for a, b, c, d in product(range(p), repeat=4):
        if (a * d - b * c) % p == 0:
            continue
        mat = [[a, b], [c, d]]
        for i in range(s):
            assert substitute(dickson_q(p, s, i), mat) == dickson_q(p, s, i)


def test_degree_formulas():
    assert degree_q(3, 2, 0) == 16 and degree_q(3, 2, 1) == 12
    assert degree_R(3, 2, (0,)) == 15 and degree_R(3, 2, (1,)) == 11
    assert degree_R(3, 2, (0, 1)) == 10


def test_bracket_is_alternating():
    p = 5
    assert bracket(p, 2, [0, 1]) == -bracket(p, 2, [1, 0])


def test_divide_exact_rejects_non_divisors():
    y1, y2 = PolyExt.y(3, 2, 1), PolyExt.y(3, 2, 2)
    assert divide_exact(y1 * y2 * y2, y2) == y1 * y2
    with pytest.raises(ArithmeticError):
        divide_exact(y1 + y2, y2)


@pytest.mark.parametrize("p", [3, 5])
def test_uv_expansions_clear_to_the_polynomials(p):
    rep = uv_generator_report(p, 3)
    assert rep.ok, rep.failures()


def test_uv_verify_detects_a_wrong_expansion():
    p, s = 3, 2
    g = generators(p, s)[0]
    bogus = uv_expand(p, s, (g,)) + parse_uv("v1^2*v2^2", p, s)
    ok, diff = uv_verify(bogus, dickson_q(p, s, 0) if g == ("q", 0) else bs_degree(p, s, 0).basis[0].poly)
    assert not ok and diff


def test_uv_grammar_round_trip():
    f = parse_uv("u1*v1^-1*u2*v2^3 + 2*v1", 3, 2)
    assert parse_uv(format_uv(f), 3, 2) == f


def test_kappa_of_R10():
    f = kappa_functional(uv_expand(3, 1, (("R", (0,)),)))
    # u1 v1 is the profile (eps, i) = (1, 1), i.e. the word l0, with sign (-1)^1
    assert f == {(3,): 2}


@pytest.mark.parametrize("t, expected", [(3, False), (8, True)])
def test_conjecture_examples_in_rank_one(t, expected):
    (b,) = [b for b in bs_degree(3, 1, t).basis]
    assert in_abar_ps(b.poly) is expected


def test_indecomposables_in_both_ambients():
    _, q_b = abar_and_indecomposables(3, 1, 3, "B")
    _, q_p = abar_and_indecomposables(3, 1, 3, "P")
    assert q_b == 1 and q_p >= 1
    with pytest.raises(ValueError):
        abar_and_indecomposables(3, 1, 3, "Q")
