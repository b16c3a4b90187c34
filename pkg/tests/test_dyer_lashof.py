from __future__ import annotations

import pytest

from lzlab.dyer_lashof import (DLElement, ann_basis, ann_dim, duality, format_dl_word, nishida_bq_single,
                               parse_dl_word, parse_op, project_to_R, r_basis, right_action, theta)
from lzlab.lambda_algebra import lam


def dl(text: str, p: int = 3) -> DLElement:
    return DLElement.parse(text, p)


def test_grammar_round_trip():
    for text in ("bQ6 bQ1", "Q0", "Q2 Q1", "1"):
        assert format_dl_word(parse_dl_word(text)) == text
    with pytest.raises(ValueError):
        parse_dl_word("bQ0")
    assert parse_op("P^3") == ("P", 3) and parse_op("P1") == ("P", 1) and parse_op("b") == ("b",)
    with pytest.raises(ValueError):
        parse_op("Sq2")


def test_negative_excess_is_killed():
    assert not project_to_R({(lam(5), lam(0)): 1}, 3)
    assert dl("bQ2 bQ1") and not dl("Q1 Q1")


def test_r_basis_has_nonnegative_excess_only():
    words = r_basis(2, 12, 3)
    assert [format_dl_word(w) for w in words] == ["Q2 Q1"]


def test_theta_scales_beta_words_and_kills_the_rest():
    assert theta(dl("bQ2 bQ1")) == dl("bQ6 bQ3")
    assert not theta(dl("Q0 Q0"))
    assert not theta(dl("bQ2 Q1"))


def test_right_action_closed_form_example():
    assert right_action(("P", 1), dl("bQ2"), 1, 7) == -dl("bQ1")


@pytest.mark.parametrize("i", range(1, 31))
def test_right_action_on_rank_one_matches_closed_form(i):
    e = DLElement(3, {(2 * i + 1,): 1})
    for k in range(1, 31):
        assert right_action(("P", k), e, 1, 4 * i - 1) == nishida_bq_single(i, k, 3), (i, k)


def test_right_action_respects_steenrod_relations():
    # e (P^1 P^1) = 2 e P^2 and e b b = 0, on every basis element of R_2 below stem 60
    for t in range(8, 61):
        for w in r_basis(2, t, 3):
            e = DLElement(3, {w: 1})
            twice = right_action(("P", 1), right_action(("P", 1), e, 2, t), 2, t - 4)
            assert twice == right_action(("P", 2), e, 2, t).scale(2), (w, t)
            assert not right_action(("b",), right_action(("b",), e, 2, t), 2, t - 1)


def test_pairing_is_invertible_in_low_stems():
    for s, t_max in ((1, 60), (2, 60), (3, 40)):
        for t in range(t_max + 1):
            d = duality(s, t, 3)
            assert len(d.words) == d.bs.dim and d.invertible, (s, t)


def test_ann_of_rank_one():
    assert {t for t in range(121) if ann_dim(1, t, 3)} == {0, 3, 11, 35, 107}


def test_ann_elements_are_killed_by_every_operation():
    for t in (10, 12, 34, 48):
        for e in ann_basis(2, t, 3):
            assert not right_action(("b",), e, 2, t)
            k = 1
            while 4 * k <= t:
                assert not right_action(("P", k), e, 2, t), (t, k)
                k += 1


def test_ann_of_rank_two_contains_the_low_stems():
    assert ann_basis(2, 0, 3) == [dl("Q0 Q0")]
    assert [str(x) for x in ann_basis(2, 10, 3)] == ["bQ2 bQ1"]
    assert ann_dim(2, 48, 3) == 1 and ann_dim(2, 7, 3) == 0
