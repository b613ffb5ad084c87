"""``shiftcpd`` command line: ``analyze``, ``cutoff`` and ``verify``.

Exit codes: 0 success, 1 a criterion or consistency check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Sequence

from . import acceptance
from .classify import DEFAULT_DEPTH, DEFAULT_KMAX, DEFAULT_ORDERS, grid, is_km_pd
from .families import (
    ShiftSpec,
    SpecParseError,
    agler_weights_squared,
    alternating_contractivity_index,
    contractivity_index,
    cutoff_alternating,
    cutoff_c,
    cutoff_p,
)
from .oracles import BracketError, bisect_cutoff, determinant_ratio_cutoff
from .report import cutoff_table, dumps, grid_doc, plain, render_grid
from .scalars import DomainError, HorizonError, Tolerance, format_scalar
from .sequences import RealSequence, is_n_alternating
from .transforms import parse_pipeline

BISECT_STEPS = 40


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    shift: str | None = None
    pipeline: str | None = None
    kmax: int = DEFAULT_KMAX
    depth: int = DEFAULT_DEPTH
    orders: int = DEFAULT_ORDERS
    tolerance_digits: int = 9
    format: str = "text"
    jobs: int = 1
    seed: int = 0
    j: int | None = None
    k: int | None = None
    m: int | None = None
    grid: bool = False
    alternating: bool = False

    @property
    def tolerance(self) -> Tolerance:
        return Tolerance.from_digits(self.tolerance_digits)

    @property
    def log_digits(self) -> int | None:
        # doubles resolve about 15 digits; beyond a 12-digit band switch the
        # logarithms to mpmath with headroom
        return self.tolerance_digits + 10 if self.tolerance_digits > 12 else None

    def spec_text(self) -> str:
        if self.shift and self.pipeline:
            return f"{self.shift}|{self.pipeline}"
        if self.shift or self.pipeline:
            return self.shift or self.pipeline
        raise UsageError("analyze needs --shift or --pipeline")

    def report_config(self) -> dict:
        # only fields that affect the result; --jobs and --format do not
        return {
            "depth": self.depth,
            "kmax": self.kmax,
            "orders": self.orders,
            "tolerance_digits": self.tolerance_digits,
        }


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for key, value in data.items():
        name = key.replace("-", "_")
        if name not in known:
            raise UsageError(f"unknown config key {key!r}")
        out[name] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file mirroring the flags; flags override it")
    common.add_argument("--format", choices=("json", "text"))
    common.add_argument("--kmax", type=int)
    common.add_argument("--depth", type=int)
    common.add_argument("--orders", type=int)
    common.add_argument("--tolerance-digits", type=int, dest="tolerance_digits")
    common.add_argument("--jobs", type=int)
    common.add_argument("--seed", type=int)

    parser = argparse.ArgumentParser(prog="shiftcpd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="classification grid and MID battery for one shift")
    a.add_argument("--shift", help="e.g. agler:2, agler-perturbed:2:x=3/2, explicit:[1/2,2/3]")
    a.add_argument("--pipeline", help="transform steps, e.g. 'aluthge|schur-power:2|restrict:1'")

    c = sub.add_parser("cutoff", parents=[common], help="closed-form cutoffs with their oracles")
    c.add_argument("--j", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--m", type=int)
    c.add_argument("--grid", action="store_true", default=None)
    c.add_argument("--alternating", action="store_true", default=None)

    sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = load_config(args.config) if args.config else {}
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    try:
        cfg = RunConfig(**values)
    except TypeError as exc:
        raise UsageError(str(exc)) from None
    if cfg.format not in ("json", "text"):
        raise UsageError(f"unknown format {cfg.format!r}")
    for name in ("kmax", "depth", "orders", "jobs"):
        if not isinstance(getattr(cfg, name), int) or getattr(cfg, name) < (0 if name == "depth" else 1):
            raise UsageError(f"--{name} must be a positive integer")
    if cfg.tolerance_digits < 1:
        raise UsageError("--tolerance-digits must be at least 1")
    return cfg


def cmd_analyze(cfg: RunConfig) -> tuple[str, int]:
    spec = parse_pipeline(cfg.spec_text())
    report = grid(
        spec,
        cfg.kmax,
        depth=cfg.depth,
        orders=cfg.orders,
        tol=cfg.tolerance,
        jobs=cfg.jobs,
        digits=cfg.log_digits,
    )
    code = 0 if report.coherent else 1
    if cfg.format == "json":
        return dumps(grid_doc(report, cfg.report_config())), code
    return render_grid(report), code


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError("cutoff needs " + ", ".join(f"--{n}" for n in missing))


def cutoff_study(j: int, k: int, m: int, steps: int = BISECT_STEPS) -> dict:
    """Closed form, determinant ratio, bisection bracket and the contractivity index, cross-checked."""
    closed = cutoff_p(j, k, m).value
    ratio = determinant_ratio_cutoff(j, k, m)
    bracket = bisect_cutoff(lambda x: _perturbed_pd(j, k, m, x), 1, j + 1, steps)
    n = contractivity_index(j, k, m)
    c = cutoff_c(j, n).value
    return {
        "j": j,
        "k": k,
        "m": m,
        "closed_form": closed,
        "determinant_ratio": ratio,
        "bisection": {"lo": bracket.lo, "hi": bracket.hi, "steps": steps},
        "contractivity_index": n,
        "c": c,
        "agree": closed == ratio == c and closed in bracket,
    }


def _perturbed_pd(j, k, m, x):
    return is_km_pd(ShiftSpec.perturbed(j, x), k, m)


def alternating_study(j: int, m: int, depth: int, steps: int = BISECT_STEPS) -> dict:
    cut = cutoff_alternating(j, m).value
    n = alternating_contractivity_index(j, m)

    def predicate(x):
        base = agler_weights_squared(j)
        w = RealSequence(lambda i: Fraction(x, j) if i == 0 else base.term(i), name="α²")
        return is_n_alternating(w, m, depth)

    bracket = bisect_cutoff(predicate, 1, j + 1, steps)
    c = cutoff_c(j, n).value
    return {
        "j": j,
        "m": m,
        "alternating_cutoff": cut,
        "bisection": {"lo": bracket.lo, "hi": bracket.hi, "steps": steps},
        "contractivity_index": n,
        "c": c,
        "agree": cut == c and cut in bracket,
    }


def _text_study(doc: dict) -> str:
    lines = []
    for key, value in doc.items():
        if key == "bisection":
            value = f"[{format_scalar(value['lo'])}, {format_scalar(value['hi'])}) after {value['steps']} steps"
        elif isinstance(value, Fraction):
            value = format_scalar(value)
        lines.append(f"{key:<20}{value}")
    return "\n".join(lines) + "\n"


def _json_ready(doc):
    return plain(doc)


def cmd_cutoff(cfg: RunConfig) -> tuple[str, int]:
    _require(cfg, "j")
    j = cfg.j
    if cfg.alternating:
        _require(cfg, "m")
        doc = alternating_study(j, cfg.m, cfg.depth)
    elif cfg.grid:
        rows = []
        for k in range(1, cfg.kmax + 1):
            for m in range(k + 1):
                value = cutoff_p(j, k, m).value
                rows.append({
                    "k": k,
                    "m": m,
                    "cutoff": value,
                    "contractivity_index": contractivity_index(j, k, m),
                    "agree": value == determinant_ratio_cutoff(j, k, m),
                })
        ok = all(r["agree"] for r in rows)
        if cfg.format == "json":
            return dumps(_json_ready({"j": j, "kmax": cfg.kmax, "table": rows, "agree": ok})), 0 if ok else 1
        text = f"(k,2m)-PD cutoffs p({j},k,m)\n" + cutoff_table(j, cfg.kmax) + "\n"
        if not ok:
            text += "warning: determinant-ratio oracle disagrees with the closed form\n"
        return text, 0 if ok else 1
    else:
        _require(cfg, "k", "m")
        doc = cutoff_study(j, cfg.k, cfg.m)
    code = 0 if doc["agree"] else 1
    if cfg.format == "json":
        return dumps(_json_ready(doc)), code
    return _text_study(doc), code


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    results = acceptance.run_all(acceptance.Context(seed=cfg.seed, tol=cfg.tolerance))
    ok = all(r.passed for r in results)
    if cfg.format == "json":
        doc = {
            "seed": cfg.seed,
            "passed": ok,
            "criteria": [{"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail} for r in results],
        }
        return dumps(doc), 0 if ok else 1
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n", 0 if ok else 1


COMMANDS = {"analyze": cmd_analyze, "cutoff": cmd_cutoff, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        out, code = COMMANDS[args.command](cfg)
    except SpecParseError as exc:
        print(f"shiftcpd: {exc}", file=sys.stderr)
        return 2
    except BracketError as exc:
        print(f"shiftcpd: bisection oracle: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError, DomainError, HorizonError) as exc:
        print(f"shiftcpd: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
