"""Command line entry point: ncg compute | verify | presets."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .connection import HypothesisViolated
from .scenarios import PRESETS, SchemaError, UnknownPreset, format_table, load_scenario, run_scenario, verify

INPUT_ERRORS = (SchemaError, UnknownPreset, OSError, HypothesisViolated)


def _render(report, fmt):
    return format_table(report) if fmt == "table" else report.to_json()


def _compute_one(path: str, fmt: str):
    """Worker for batch mode; returns (path, text, error)."""
    try:
        report = run_scenario(load_scenario(path))
    except INPUT_ERRORS as exc:
        return path, None, str(exc)
    return path, _render(report, fmt), None


def cmd_compute(args) -> int:
    if args.batch:
        src = Path(args.batch)
        if not src.is_dir():
            print(f"error: {src} is not a directory", file=sys.stderr)
            return 2
        files = sorted(str(p) for p in src.glob("*.json") if not p.name.endswith(".report.json"))
        out_dir = Path(args.out) if args.out else src
        out_dir.mkdir(parents=True, exist_ok=True)
        suffix = ".report.txt" if args.format == "table" else ".report.json"
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_compute_one, files, [args.format] * len(files)))
        else:
            results = [_compute_one(f, args.format) for f in files]
        code = 0
        for path, text, err in results:
            if err is not None:
                print(f"error: {path}: {err}", file=sys.stderr)
                code = 2
                continue
            target = out_dir / (Path(path).stem + suffix)
            target.write_text(text, encoding="utf-8")
            print(target)
        return code

    if not args.scenario:
        print("error: --scenario or --batch is required", file=sys.stderr)
        return 2
    try:
        report = run_scenario(load_scenario(args.scenario))
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = _render(report, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
        return verify(scenario)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def cmd_presets(args) -> int:
    if args.json:
        print(json.dumps({k: {kk: vv for kk, vv in v.items()} for k, v in PRESETS.items()},
                         sort_keys=True, indent=2))
        return 0
    for name in sorted(PRESETS):
        print(f"{name:18s} {PRESETS[name]['description']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncg", description="Levi-Civita connections and curvature "
                                     "for conformal metrics on noncommutative calculi")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute a curvature report")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--scenario", help="scenario JSON file")
    src.add_argument("--batch", help="directory of scenario JSON files")
    p.add_argument("--out", help="output file (or directory in batch mode)")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.add_argument("--table", dest="format", action="store_const", const="table",
                   help="shorthand for --format table")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers in batch mode")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="exit 0 iff every residual is within tolerance")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("presets", help="list built-in presets")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
