from __future__ import annotations

import random

import pytest

from lzlab.dyer_lashof import DLElement, theta
from lzlab.invariants.bs import bs_degree
from lzlab.invariants.uv import UVElement
from lzlab.lambda_algebra import LambdaElement, lambda_algebra
from lzlab.lz import (conjecture_explorer, expected_phi2_support, phi_chain, phi_dual_include,
                      phi_ext_matrix, phi_sign, phi_table, sample_cycles, verify_power_commutation)


def el(text: str) -> LambdaElement:
    return LambdaElement.parse(text, 3)


def dl(text: str) -> DLElement:
    return DLElement.parse(text, 3)


def test_phi_chain_examples():
    assert phi_chain(2, el("m-1 m-1")) == -dl("Q0 Q0")
    assert not phi_chain(2, el("l0 l2"))
    assert phi_chain(1, el("l2")) == dl("bQ3")


def test_phi_chain_rejects_mixed_lengths():
    with pytest.raises(ValueError):
        phi_chain(2, el("l0 l0 + l1"))


def test_sign_rule():
    assert phi_sign(2, 16) == -1
    assert phi_sign(1, 3) == 1
    assert all(phi_sign(3, t) == -1 for t in range(50))


def test_dual_inclusion_signs():
    q20 = next(b for b in bs_degree(3, 2, 16).basis if b.word == (("q", 0),))
    assert phi_dual_include(2, q20) == q20.uv().scale(-1)
    (r10,) = bs_degree(3, 1, 3).basis
    assert phi_dual_include(1, r10) == UVElement.monomial(3, 1, 1, (1,))


@pytest.mark.parametrize("s, t, rank", [(1, 3, 1), (2, 10, 1), (3, 10, 0), (2, 48, 0)])
def test_phi_ext_matrix_examples(s, t, rank):
    row = phi_ext_matrix(s, t, 3)
    assert row.phi_rank == rank
    assert 0 <= row.phi_rank <= min(row.ext_dim, row.ann_dim)
    assert not row.falsified


def test_expected_support_formula():
    assert expected_phi2_support(3, 120) == {0, 10, 34, 106}
    assert expected_phi2_support(5, 160) == {0, 38}


def test_phi_two_low_stems():
    rows = phi_table(2, 40, 3)
    assert {r.t for r in rows if r.phi_rank} == {0, 10, 34}


def test_power_commutation_examples():
    A = lambda_algebra(3)
    x = el("l1 l0 + l0 l1")
    lhs = phi_chain(2, A.frobenius_chain(x.terms), 3)
    rhs = theta(phi_chain(2, x))
    assert lhs == rhs and lhs
    y = el("l5 l0")
    assert not phi_chain(2, A.frobenius_chain(y.terms), 3) and not theta(phi_chain(2, y))
    z = el("m-1 m-1")
    assert not A.frobenius_chain(z.terms) and not theta(phi_chain(2, z))


def test_power_commutation_on_samples():
    rep = verify_power_commutation(30, 3, seed=1)
    assert rep.checked == 30 and rep.ok, rep.failures


def test_sampled_cycles_are_cycles():
    A = lambda_algebra(3)
    for x in sample_cycles(3, 20, random.Random(2), 40):
        assert not A.differential(x.terms)


def test_conjecture_explorer_reports_without_asserting():
    rows = {(r.t, r.element): r.in_abar for r in conjecture_explorer(1, 12, 3)}
    assert rows[(3, "R0")] is False
    assert rows[(8, "q0*q0")] is True
