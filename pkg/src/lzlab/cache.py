"""Persistent, append-only store for the Adem pair-rewrite memo.

One JSON object per line:
    {"v": 1, "p": 3, "e1": 1, "i1": 5, "e2": 1, "i2": 1, "terms": [["l2 l3", 2]], "sum": "..."}
Records carry their own version and checksum. Bad lines and other versions
are skipped with a warning, so a damaged cache costs time, never correctness.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
from pathlib import Path

from .lambda_algebra import LambdaAlgebra, Terms, format_word, lambda_algebra, parse_word

log = logging.getLogger(__name__)

CACHE_VERSION = 1
FILE_NAME = "adem_pairs.jsonl"
ENV_VAR = "LZLAB_CACHE"


def default_cache_dir() -> Path | None:
    value = os.environ.get(ENV_VAR)
    return Path(value) if value else None


def _checksum(p: int, g1: int, g2: int, terms: list) -> str:
    body = json.dumps([CACHE_VERSION, p, g1, g2, terms], separators=(",", ":"))
    return hashlib.sha256(body.encode()).hexdigest()[:16]


def encode_record(p: int, g1: int, g2: int, terms: Terms) -> str:
    items = sorted([format_word(w), c % p] for w, c in terms.items())
    rec = {
        "v": CACHE_VERSION, "p": p,
        "e1": g1 & 1, "i1": g1 >> 1, "e2": g2 & 1, "i2": g2 >> 1,
        "terms": items, "sum": _checksum(p, g1, g2, items),
    }
    return json.dumps(rec, separators=(",", ":"))


def decode_record(line: str) -> tuple[int, int, int, Terms]:
    """(p, g1, g2, terms); raises ValueError on anything malformed."""
    try:
        rec = json.loads(line)
        p = int(rec["p"])
        g1 = 2 * int(rec["i1"]) + int(rec["e1"])
        g2 = 2 * int(rec["i2"]) + int(rec["e2"])
        items = rec["terms"]
        if rec["sum"] != _checksum(p, g1, g2, items):
            raise ValueError("checksum mismatch")
        terms = {parse_word(w): int(c) % p for w, c in items}
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValueError(str(exc)) from exc
    if any(len(w) != 2 for w in terms):
        raise ValueError("pair rewrite must produce length-2 words")
    return p, g1, g2, terms


class PairCache:
    """Loads records for one prime into the straightener and appends new ones."""

    def __init__(self, directory: str | os.PathLike, p: int):
        self.dir = Path(directory)
        self.p = p
        self.path = self.dir / FILE_NAME
        self.loaded = 0
        self.skipped = 0
        self._pending: list[str] = []
        self._lock = threading.Lock()
        self._known: set[tuple[int, int]] = set()
        self._algebra: LambdaAlgebra | None = None

    def read(self) -> list[tuple[int, int, Terms]]:
        out = []
        if not self.path.exists():
            return out
        version_warned = False
        with self.path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    version = json.loads(line).get("v")
                except (json.JSONDecodeError, AttributeError):
                    version = None
                if version is not None and version != CACHE_VERSION:
                    if not version_warned:
                        log.warning("%s: ignoring records of cache version %s (expected %s)",
                                    self.path, version, CACHE_VERSION)
                        version_warned = True
                    self.skipped += 1
                    continue
                try:
                    p, g1, g2, terms = decode_record(line)
                except ValueError as exc:
                    log.warning("%s:%d: skipping corrupt record (%s)", self.path, lineno, exc)
                    self.skipped += 1
                    continue
                if p == self.p:
                    out.append((g1, g2, terms))
        return out

    def attach(self, algebra: LambdaAlgebra | None = None) -> "PairCache":
        """Preload the memo and start recording new pair rewrites."""
        algebra = algebra or lambda_algebra(self.p)
        records = self.read()
        algebra.preload_pairs(records)
        self.loaded = len(records)
        self._known = {(g1, g2) for g1, g2, _ in records}
        for (g1, g2), terms in algebra.pair_items():
            if (g1, g2) not in self._known:
                self._record(g1, g2, terms)
        algebra.pair_listeners.append(self._record)
        self._algebra = algebra
        return self

    def _record(self, g1: int, g2: int, terms: Terms) -> None:
        with self._lock:
            if (g1, g2) in self._known:
                return
            self._known.add((g1, g2))
            self._pending.append(encode_record(self.p, g1, g2, terms))

    def flush(self) -> int:
        with self._lock:
            lines, self._pending = self._pending, []
        if lines:
            self.dir.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write("\n".join(lines) + "\n")
        return len(lines)

    def close(self) -> None:
        self.flush()
        if self._algebra is not None and self._record in self._algebra.pair_listeners:
            self._algebra.pair_listeners.remove(self._record)
        self._algebra = None

    def __enter__(self) -> "PairCache":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def cache_io(directory: str | os.PathLike, p: int, algebra: LambdaAlgebra | None = None) -> PairCache:
    return PairCache(directory, p).attach(algebra)
