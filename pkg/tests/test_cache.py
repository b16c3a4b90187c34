from __future__ import annotations

import json
import logging

from lzlab.cache import CACHE_VERSION, FILE_NAME, PairCache, cache_io, decode_record, encode_record
from lzlab.lambda_algebra import LambdaAlgebra, lam, parse_word


def test_record_round_trip():
    line = encode_record(3, lam(5), lam(0), {parse_word("l2 l3"): 2})
    assert decode_record(line) == (3, lam(5), lam(0), {parse_word("l2 l3"): 2})


def test_cache_records_and_reloads_identically(tmp_path):
    fresh = LambdaAlgebra(3)
    with cache_io(tmp_path, 3, fresh):
        expected = fresh.straighten({parse_word("l9 l1 l0"): 1})
    assert (tmp_path / FILE_NAME).exists()
    warm = LambdaAlgebra(3)
    cache = cache_io(tmp_path, 3, warm)
    assert cache.loaded > 0
    assert warm.straighten({parse_word("l9 l1 l0"): 1}) == expected
    assert cache.flush() == 0
    cache.close()


def test_corrupt_records_are_skipped(tmp_path, caplog):
    good = encode_record(3, lam(2), lam(0), {})
    tampered = json.loads(encode_record(3, lam(5), lam(0), {parse_word("l2 l3"): 2}))
    tampered["terms"] = [["l2 l3", 1]]
    (tmp_path / FILE_NAME).write_text("\n".join([good, "{not json", json.dumps(tampered)]) + "\n")
    with caplog.at_level(logging.WARNING, logger="lzlab.cache"):
        cache = PairCache(tmp_path, 3)
        records = cache.read()
    assert len(records) == 1 and cache.skipped == 2
    assert sum("corrupt" in r.message for r in caplog.records) == 2
    algebra = LambdaAlgebra(3)
    cache.attach(algebra)
    assert algebra.straighten({parse_word("l5 l0"): 1}) == {parse_word("l2 l3"): 2}
    cache.close()


def test_other_versions_are_ignored(tmp_path, caplog):
    rec = json.loads(encode_record(3, lam(5), lam(0), {parse_word("l2 l3"): 1}))
    rec["v"] = CACHE_VERSION + 1
    (tmp_path / FILE_NAME).write_text(json.dumps(rec) + "\n")
    with caplog.at_level(logging.WARNING, logger="lzlab.cache"):
        records = PairCache(tmp_path, 3).read()
    assert records == []
    assert any("version" in r.message for r in caplog.records)


def test_records_for_another_prime_are_not_used(tmp_path):
    with cache_io(tmp_path, 3, LambdaAlgebra(3)) as c3:
        c3._algebra.straighten({parse_word("l5 l0"): 1})
    assert PairCache(tmp_path, 5).read() == []
    assert PairCache(tmp_path, 3).read()
