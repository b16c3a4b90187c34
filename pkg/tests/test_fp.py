from __future__ import annotations

import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from lzlab.fp import (FpSparseMatrix, FpSubspace, binom_mod, is_prime, kernel_and_rank, left_kernel,
                      membership, prime_context, solve_square)

PRIMES = st.sampled_from([3, 5, 7])


def brute_rank(rows: list[list[int]], p: int) -> int:
    """log_p of the size of the row space, by enumerating every combination."""
    n = len(rows[0]) if rows else 0
    span = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        span.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % p for j in range(n)))
    size, rank = len(span), 0
    while size > 1:
        size //= p
        rank += 1
    return rank


small_matrix = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_prime_context_inverses():
    for p in (3, 5, 7, 11):
        ctx = prime_context(p)
        assert all(a * ctx.inv(a) % p == 1 for a in range(1, p))
    assert not is_prime(9) and is_prime(13)
    with pytest.raises(ValueError):
        prime_context(4)


@given(st.integers(0, 400), st.integers(0, 400), PRIMES)
def test_binom_mod_matches_exact_binomial(a, b, p):
    assert binom_mod(a, b, p) == comb(a, b) % p


@given(st.integers(1, 300), st.integers(1, 300), PRIMES)
def test_binom_mod_pascal_rule(a, b, p):
    assert binom_mod(a, b, p) == (binom_mod(a - 1, b, p) + binom_mod(a - 1, b - 1, p)) % p


@given(st.integers(-50, -1), st.integers(0, 30), PRIMES)
def test_binom_mod_negative_upper_index(a, b, p):
    # C(a, b) = (-1)^b C(b - a - 1, b) for a < 0
    assert binom_mod(a, b, p) == ((-1) ** b * comb(b - a - 1, b)) % p


@settings(max_examples=150, deadline=None)
@given(small_matrix, st.sampled_from([3, 5]))
def test_rank_matches_enumeration(dense, p):
    dense = [[x % p for x in row] for row in dense]
    m = FpSparseMatrix.from_dense(dense, p)
    assert m.rank() == brute_rank(dense, p)


@settings(max_examples=100, deadline=None)
@given(small_matrix, st.sampled_from([3, 5]))
def test_kernel_is_annihilated_and_has_complementary_dimension(dense, p):
    m = FpSparseMatrix.from_dense([[x % p for x in row] for row in dense], p)
    rank, ker = kernel_and_rank(m)
    assert ker.dim == m.n_cols - rank
    for v in ker.basis:
        assert not m.apply(v)


@settings(max_examples=100, deadline=None)
@given(small_matrix, st.sampled_from([3, 5]))
def test_left_kernel_gives_dependencies(dense, p):
    vecs = [{j: x % p for j, x in enumerate(row) if x % p} for row in dense]
    deps = left_kernel(vecs, p)
    assert len(deps) == len(vecs) - brute_rank([[x % p for x in r] for r in dense], p)
    for d in deps:
        total: dict[int, int] = {}
        for i, c in d.items():
            for j, x in vecs[i].items():
                total[j] = (total.get(j, 0) + c * x) % p
        assert not any(total.values())


def test_subspace_membership_and_coordinates():
    p = 5
    basis = [{0: 1, 2: 3}, {1: 2, 2: 1}]
    sub = FpSubspace.span(basis, 3, p)
    v = {0: 2, 1: 4, 2: (6 + 2) % p}
    assert v in sub
    coords = membership(v, sub)
    rebuilt: dict[int, int] = {}
    for c, row in zip(coords, sub.basis):
        for j, x in row.items():
            rebuilt[j] = (rebuilt.get(j, 0) + c * x) % p
    assert {j: x for j, x in rebuilt.items() if x} == v
    assert {2: 1} not in sub
    with pytest.raises(ValueError):
        membership({0: 1}, sub, n_cols=4)


def test_solve_square_inverts_and_rejects_singular():
    p = 7
    m = [[1, 2, 0], [0, 1, 4], [5, 0, 1]]
    inv = solve_square(m, p)
    prod = [[sum(m[i][k] * inv[k][j] for k in range(3)) % p for j in range(3)] for i in range(3)]
    assert prod == [[int(i == j) for j in range(3)] for i in range(3)]
    with pytest.raises(ValueError):
        solve_square([[1, 2], [2, 4]], p)
