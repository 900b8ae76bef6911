"""Command-line front end: ``symdisc {classify,reduce,grid,sample,bench}``.

Global options may precede or follow the subcommand. Precedence for every
setting is command-line flag, then environment variable, then default:

    --seed            SYMDISC_SEED            42
    --jobs            SYMDISC_JOBS            1
    --format          SYMDISC_FORMAT          json
    --boundary-band   SYMDISC_BOUNDARY_BAND   1e-9
    --matrix-tol      SYMDISC_MATRIX_TOL      1e-10
    --root-residual   SYMDISC_ROOT_RESIDUAL   1e-12
    --p-band          SYMDISC_P_BAND          1e-9
    --consensus-band  SYMDISC_CONSENSUS_BAND  1e-6

Exit status: 0 on success, 1 when ``classify`` found an anomaly, 2 on input
errors.
"""
from __future__ import annotations

import argparse
import csv
import os
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Mapping

from .consensus import ConsensusReport, classify_consensus
from .errors import InputError, SymdiscError
from .grid import GridSpec, Selector, parse_axis, pgm_bytes, rasterize, write_grid_csv
from .io import PointRecord, dump_line, guess_format, iter_points, write_points
from .numerics import as_complex
from .polydisc import (
    SymPoint,
    ToleranceConfig,
    beta_reduce,
    classify_oracle,
    in_gamma_recursive,
    in_gn_schur,
    reduction_residual,
)
from .sampling import KINDS, sample_points

_TOL_OPTIONS = {
    "boundary_band": ("--boundary-band", "SYMDISC_BOUNDARY_BAND"),
    "matrix_tol": ("--matrix-tol", "SYMDISC_MATRIX_TOL"),
    "root_residual": ("--root-residual", "SYMDISC_ROOT_RESIDUAL"),
    "p_unimodular_band": ("--p-band", "SYMDISC_P_BAND"),
    "consensus_band": ("--consensus-band", "SYMDISC_CONSENSUS_BAND"),
}


@dataclass(frozen=True)
class RunConfig:
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    seed: int = 42
    jobs: int = 1
    output_format: str = "json"

    @classmethod
    def resolve(cls, args: argparse.Namespace, env: Mapping[str, str]) -> "RunConfig":
        def pick(attr, var, conv, default):
            value = getattr(args, attr, None)
            if value is not None:
                return value
            if var in env:
                try:
                    return conv(env[var])
                except ValueError as exc:
                    raise InputError(f"{var}: {exc}") from exc
            return default

        defaults = ToleranceConfig()
        tol = ToleranceConfig(**{
            name: pick(name, var, float, getattr(defaults, name))
            for name, (_, var) in _TOL_OPTIONS.items()
        })
        seed = pick("seed", "SYMDISC_SEED", int, 42)
        jobs = pick("jobs", "SYMDISC_JOBS", int, 1)
        fmt = pick("format", "SYMDISC_FORMAT", str, "json")
        if jobs < 1:
            raise InputError("--jobs must be >= 1")
        if not 0 <= seed < 2**64:
            raise InputError("--seed must be a 64-bit unsigned integer")
        if fmt not in ("json", "csv"):
            raise InputError("--format must be json or csv")
        return cls(tol, seed, jobs, fmt)


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    default = argparse.SUPPRESS if suppress else None
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--seed", type=int, default=default, help="RNG seed (default 42)")
    g.add_argument("--jobs", type=int, default=default, help="worker processes (default 1)")
    g.add_argument("--format", choices=("json", "csv"), default=default, help="output format")
    for name, (flag, _) in _TOL_OPTIONS.items():
        g.add_argument(flag, dest=name, type=float, default=default)
    return g


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symdisc",
        parents=[_global_options(suppress=False)],
        description="Membership tests for the symmetrized polydisc.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    g = _global_options(suppress=True)

    p = sub.add_parser("classify", parents=[g], help="consensus classification of a point file")
    p.add_argument("input", help="point file (.jsonl or .csv), '-' for stdin")
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("reduce", parents=[g], help="beta-reduction chains of a point file")
    p.add_argument("input")
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("grid", parents=[g], help="rasterize a 2-D slice of Gamma_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", required=True, help="SELECTOR:MIN:MAX:STEPS, e.g. s1.re:-3:3:601")
    p.add_argument("--y", required=True, help="SELECTOR:MIN:MAX:STEPS")
    p.add_argument("--fix", action="append", default=[], metavar="COORD=VALUE",
                   help="fixed coordinate, e.g. p=0.5+0.1j (repeatable; unset ones are 0)")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--pgm", help="also write a P5 graymap to this path")

    p = sub.add_parser("sample", parents=[g], help="generate a seeded point corpus")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("bench", parents=[g], help="time the membership methods")
    p.add_argument("--n-range", required=True, help="e.g. 2-8 or 2,3,5")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("-o", "--output", default="-")
    return parser


@contextmanager
def _open_out(path: str, binary: bool = False):
    if path == "-":
        yield sys.stdout.buffer if binary else sys.stdout
    else:
        with open(path, "wb" if binary else "w", newline=None if binary else "") as fh:
            yield fh


@contextmanager
def _open_in(path: str):
    if path == "-":
        yield sys.stdin
    else:
        with open(path, newline="") as fh:
            yield fh


def _read_records(path: str) -> list[PointRecord]:
    with _open_in(path) as fh:
        return list(iter_points(fh, guess_format(path)))


def _ordered_map(fn, items, jobs: int):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items, chunksize=max(1, len(items) // (8 * jobs))))
    return [fn(x) for x in items]


def report_to_dict(rec: PointRecord, rep: ConsensusReport) -> dict:
    verdicts = {}
    for name, v in rep.verdicts.items():
        verdicts[name] = None if v is None else {
            "region": v.region.label,
            "margin": v.margin,
            "certificate": v.certificate,
        }
    return {
        "id": rec.id,
        "n": rec.n,
        "region": rep.region.label if rep.region is not None else None,
        "code": int(rep.region) if rep.region is not None else None,
        "unanimous": rep.unanimous,
        "disagreement": rep.disagreement,
        "anomaly": rep.anomaly,
        "max_modulus": rep.max_modulus,
        "verdicts": verdicts,
        "errors": rep.errors,
    }


def _classify_task(args):
    rec, tol = args
    return report_to_dict(rec, classify_consensus(rec.point, tol))


_CLASSIFY_CSV = ["id", "n", "region", "code", "unanimous", "anomaly", "max_modulus",
                 "oracle", "gamma_recursive", "gn_recursive", "gn_schur"]


def cmd_classify(args, cfg: RunConfig) -> int:
    records = _read_records(args.input)
    rows = _ordered_map(_classify_task, [(r, cfg.tolerances) for r in records], cfg.jobs)
    with _open_out(args.output) as out:
        if cfg.output_format == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(_CLASSIFY_CSV)
            for d in rows:
                per = [d["verdicts"][m]["region"] if d["verdicts"].get(m) else
                       ("error" if m in d["errors"] else "n/a") for m in _CLASSIFY_CSV[7:]]
                w.writerow([d["id"], d["n"], d["region"], d["code"], d["unanimous"], d["anomaly"],
                            "" if d["max_modulus"] is None else repr(d["max_modulus"])] + per)
        else:
            for d in rows:
                out.write(dump_line(d) + "\n")
    return 1 if any(d["anomaly"] for d in rows) else 0


def reduce_chain(pt: SymPoint, tol: ToleranceConfig) -> dict:
    """Beta chain from dimension n down to 1, with per-step reconstruction residuals."""
    steps = [{"dim": pt.n, "coords": list(pt.coords), "residual": 0.0}]
    cur = pt
    stop = None
    while cur.n > 1:
        a = abs(cur.p)
        if a >= 1 - tol.p_unimodular_band:
            reason = "unimodular p" if a <= 1 + tol.p_unimodular_band else "|p| > 1"
            stop = {"dim": cur.n, "step": len(steps), "reason": reason, "abs_p": a}
            break
        beta = beta_reduce(cur, tol)
        steps.append({"dim": beta.n, "coords": list(beta.coords), "residual": reduction_residual(cur, beta)})
        cur = beta
    return {"chain": steps, "stopped": stop}


def cmd_reduce(args, cfg: RunConfig) -> int:
    records = _read_records(args.input)
    with _open_out(args.output) as out:
        if cfg.output_format == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["id", "step", "dim", "residual", "stopped", "coords"])
        for rec in records:
            res = reduce_chain(rec.point, cfg.tolerances)
            if cfg.output_format == "csv":
                for k, st in enumerate(res["chain"]):
                    w.writerow([rec.id, k, st["dim"], repr(st["residual"]), "",
                                dump_line(st["coords"])])
                if res["stopped"]:
                    s = res["stopped"]
                    w.writerow([rec.id, s["step"], s["dim"], "", s["reason"], ""])
            else:
                out.write(dump_line({"id": rec.id, "n": rec.n, **res}) + "\n")
    return 0


def _parse_fix(items: list[str], n: int) -> tuple[complex, ...]:
    base = [0j] * n
    for item in items:
        if "=" not in item:
            raise InputError(f"bad --fix {item!r}; expected COORD=VALUE")
        name, value = item.split("=", 1)
        sel = Selector.parse(name.strip() + ".re", n)
        try:
            base[sel.index] = as_complex(complex(value.strip().replace(" ", "")), name)
        except ValueError as exc:
            raise InputError(f"bad --fix value {value!r}") from exc
    return tuple(base)


def cmd_grid(args, cfg: RunConfig) -> int:
    spec = GridSpec(args.n, parse_axis(args.x, args.n), parse_axis(args.y, args.n),
                    _parse_fix(args.fix, args.n))
    codes = rasterize(spec, cfg.tolerances, cfg.jobs)
    with _open_out(args.output) as out:
        write_grid_csv(codes, out)
    if args.pgm:
        with open(args.pgm, "wb") as fh:
            fh.write(pgm_bytes(codes))
    return 0


def cmd_sample(args, cfg: RunConfig) -> int:
    records = sample_points(args.kind, args.n, args.count, cfg.seed)
    with _open_out(args.output) as out:
        write_points(records, out, cfg.output_format)
    return 0


def parse_n_range(text: str) -> list[int]:
    text = text.strip()
    try:
        if "-" in text:
            lo, hi = (int(t) for t in text.split("-", 1))
            ns = list(range(lo, hi + 1))
        else:
            ns = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"bad n-range {text!r}") from exc
    if not ns:
        raise InputError(f"empty n-range {text!r}")
    if any(not 1 <= n <= 16 for n in ns):
        raise InputError("n values must lie in 1..16")
    return ns


BENCH_METHODS = {
    "recursive": in_gamma_recursive,
    "schur": in_gn_schur,
    "oracle": classify_oracle,
}


def cmd_bench(args, cfg: RunConfig) -> int:
    ns = parse_n_range(args.n_range)
    if args.count < 1:
        raise InputError("count must be >= 1")
    rows = []
    for n in ns:
        points = [r.point for r in sample_points("interior", n, args.count, cfg.seed)]
        for name, fn in BENCH_METHODS.items():
            times = []
            for pt in points:
                t0 = time.perf_counter()
                try:
                    fn(pt, cfg.tolerances)
                except SymdiscError:
                    pass
                times.append(time.perf_counter() - t0)
            rows.append({"n": n, "method": name, "count": len(times),
                         "median_s": statistics.median(times)})
    with _open_out(args.output) as out:
        if cfg.output_format == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["n", "method", "count", "median_s"])
            for r in rows:
                w.writerow([r["n"], r["method"], r["count"], repr(r["median_s"])])
        else:
            for r in rows:
                out.write(dump_line(r) + "\n")
    return 0


COMMANDS = {
    "classify": cmd_classify,
    "reduce": cmd_reduce,
    "grid": cmd_grid,
    "sample": cmd_sample,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None, env: Mapping[str, str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.resolve(args, os.environ if env is None else env)
        return COMMANDS[args.command](args, cfg)
    except InputError as exc:
        print(f"symdisc {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
