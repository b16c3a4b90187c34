"""Command-line front end: Ext, Ann and phi tables, verification suites, conjecture reports."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .cache import cache_io, default_cache_dir
from .fp import is_prime

SCHEMA = "lzlab/1"
EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED, EXIT_INTERNAL = 0, 1, 2, 3

# (command, s) -> largest t allowed without --force
_CAPS = {"ext": {3: 120}, "ann": {3: 60}, "phi": {3: 60}, "conjecture": {3: 60}}
_LOW_CAP = 200


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    p: int = 3
    s_values: tuple[int, ...] = (1,)
    t_max: int = 20
    fmt: str = "json"
    cache_dir: Path | None = None
    jobs: int = 1
    seed: int = 0
    suite: str = "all"
    force: bool = False
    timing: bool = False

    def echo(self) -> dict:
        out = {"command": self.command, "p": self.p}
        if self.command == "verify":
            out.update(suite=self.suite, seed=self.seed)
        else:
            out.update(s=list(self.s_values), t_max=self.t_max)
        return out


def parse_s(text: str) -> tuple[int, ...]:
    """'2', '1-3' or '1,3'."""
    try:
        if "-" in text:
            lo, hi = (int(x) for x in text.split("-", 1))
            vals = range(lo, hi + 1)
        else:
            vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --s value {text!r}")
    vals = tuple(sorted(set(vals)))
    if not vals or vals[0] < 0:
        raise UsageError("--s must be nonnegative")
    return vals


def cap_for(command: str, s: int) -> int | None:
    if s >= 4:
        return None
    return _CAPS.get(command, {}).get(s, _LOW_CAP)


def check_caps(cfg: RunConfig) -> None:
    if cfg.force or cfg.command == "verify":
        return
    for s in cfg.s_values:
        cap = cap_for(cfg.command, s)
        if cap is None:
            raise UsageError(f"s={s} is outside the supported range; pass --force to try anyway")
        if cfg.t_max > cap:
            raise UsageError(f"{cfg.command} with s={s} is capped at t <= {cap}; pass --force to exceed it")
    if cfg.command in ("ann", "phi") and 0 in cfg.s_values:
        raise UsageError(f"{cfg.command} needs s >= 1")
    if cfg.command == "conjecture" and (0 in cfg.s_values or max(cfg.s_values) > 3):
        raise UsageError("conjecture needs 1 <= s <= 3")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int, default=3)
    common.add_argument("--s", default="1")
    common.add_argument("--t-max", type=int, default=20)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--force", action="store_true")
    common.add_argument("--timing", action="store_true", help="add wall-clock seconds to the document")
    parser = _Parser(prog="lzlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("ext", parents=[common], help="Ext^{s,s+t} dimensions and cycle representatives")
    sub.add_parser("ann", parents=[common], help="Ann(R_s) in each stem")
    sub.add_parser("phi", parents=[common], help="rank of the Lannes-Zarati map per stem")
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    from .suites import SUITES

    v.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    sub.add_parser("conjecture", parents=[common], help="membership of B[s] elements in A-bar P_s")
    return parser


def config_from_args(argv: list[str] | None) -> RunConfig:
    args = build_parser().parse_args(argv)
    if not (args.p > 2 and is_prime(args.p)):
        raise UsageError(f"--p must be an odd prime, got {args.p}")
    if args.t_max < 0:
        raise UsageError("--t-max must be nonnegative")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    cache_dir = Path(args.cache_dir) if args.cache_dir else default_cache_dir()
    cfg = RunConfig(args.command, args.p, parse_s(args.s), args.t_max, args.format, cache_dir,
                    args.jobs, args.seed, getattr(args, "suite", "all"), args.force, args.timing)
    check_caps(cfg)
    return cfg


# ---------------------------------------------------------------------------
# per-stem rows


def stem_row(command: str, p: int, s: int, t: int) -> dict:
    if command == "ext":
        from .ext import ext_basis

        eb = ext_basis(s, t, p)
        return {"s": s, "t": t, "ext_dim": eb.dimension,
                "representatives": [str(r) for r in eb.cycle_representatives]}
    if command == "ann":
        from .dyer_lashof import ann_basis

        basis = ann_basis(s, t, p)
        return {"s": s, "t": t, "ann_dim": len(basis), "basis": [str(b) for b in basis]}
    if command == "phi":
        from .lz import phi_ext_matrix

        row = phi_ext_matrix(s, t, p)
        out = row.as_json()
        if row.outside_ann:
            out["falsification"] = row.outside_ann
        return out
    raise ValueError(command)


def _stem_row_star(args: tuple) -> dict:
    return stem_row(*args)


def stem_rows(cfg: RunConfig) -> list[dict]:
    tasks = [(cfg.command, cfg.p, s, t) for s in cfg.s_values for t in range(cfg.t_max + 1)]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_stem_row_star, tasks, chunksize=max(1, len(tasks) // (4 * cfg.jobs))))
    else:
        rows = [stem_row(*task) for task in tasks]
    return sorted(rows, key=lambda r: (r["s"], r["t"]))


def conjecture_rows(cfg: RunConfig) -> list[dict]:
    from .lz import conjecture_explorer

    rows = []
    for s in cfg.s_values:
        for r in conjecture_explorer(s, cfg.t_max, cfg.p):
            rows.append({"s": r.s, "t": r.t, "element": r.element, "in_abar": r.in_abar})
    return sorted(rows, key=lambda r: (r["s"], r["t"]))


def verify_rows(cfg: RunConfig) -> tuple[list[dict], bool]:
    from .suites import run_suite

    rows, ok = [], True
    for res in run_suite(cfg.suite, cfg.seed):
        ok &= res.ok
        for c in res.checks:
            rows.append({"suite": res.name, "check": c.label, "ok": c.ok,
                         "asserted": c.asserted, "detail": c.detail})
    return rows, ok


# ---------------------------------------------------------------------------
# documents


def run(cfg: RunConfig) -> tuple[dict, int]:
    start = time.perf_counter()
    cache = cache_io(cfg.cache_dir, cfg.p) if cfg.cache_dir else None
    try:
        if cfg.command == "verify":
            rows, ok = verify_rows(cfg)
            status = EXIT_OK if ok else EXIT_FALSIFIED
        elif cfg.command == "conjecture":
            rows, status = conjecture_rows(cfg), EXIT_OK
        else:
            rows = stem_rows(cfg)
            status = EXIT_FALSIFIED if any("falsification" in r for r in rows) else EXIT_OK
    finally:
        if cache is not None:
            cache.close()
    doc = {"schema": SCHEMA, "p": cfg.p, "config": cfg.echo(), "rows": rows}
    if cfg.timing:
        doc["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    return doc, status


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"
    rows = doc["rows"]
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            for r in rows:
                writer.writerow({k: "; ".join(v) if isinstance(v, list) else v for k, v in r.items()})
        return buf.getvalue()
    lines = [f"# {doc['schema']} {json.dumps(doc['config'])}"]
    for r in rows:
        lines.append("  ".join(f"{k}={'; '.join(v) if isinstance(v, list) else v}" for k, v in r.items()))
    if "timing" in doc:
        lines.append(f"# {doc['timing']['seconds']} s")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="lzlab: %(levelname)s: %(message)s")
    try:
        cfg = config_from_args(argv)
    except UsageError as exc:
        print(f"lzlab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        doc, status = run(cfg)
    except Exception as exc:  # noqa: BLE001
        print(f"lzlab: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(render(doc, cfg.fmt))
    if status == EXIT_FALSIFIED:
        bad = [r for r in doc["rows"] if "falsification" in r or (r.get("asserted") and not r.get("ok"))]
        for r in bad:
            print(f"lzlab: failed: {json.dumps(r)}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
