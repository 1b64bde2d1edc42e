"""Command-line interface.

Subcommands: scan, estimate, scenario, spectrum, spread-audit, moments,
enumerate. Configuration is JSON (see README for the schemas); exit code 0
on success, 2 on configuration errors, 3 when an exact computation is
requested beyond its enumeration ceiling.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import GroundSet, ProbVector, SubsetFamily
from .enumeration import (
    chung_lu_obstruction_moments,
    condition_report,
    count_graphs_exact,
    gnd_isolated_moments,
    mckay_count,
    moment_diagnostics,
)
from .errors import ConfigError, InfeasibleSizeError
from .experiment import ExperimentConfig, mc_estimate, rows_to_csv, rows_to_json, threshold_scan
from .models import DegreeSequence, erdos_gallai_graphical
from .rational import to_fraction
from .scenarios import scenario_run
from .spectrum import critical_alpha
from .spread import (
    COVER_EXACT_CEILING,
    COVER_FRACTIONAL_CEILING,
    SpreadMeasure,
    cover_value_exact,
    fractional_cover_value,
    verify_q_spread,
)


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_scan(args) -> int:
    config = ExperimentConfig.from_json(_load_config(args.config), args.seed, args.trials)
    rows, summary = threshold_scan(config)
    if args.format == "csv":
        _emit(rows_to_csv(rows, no_timing=args.no_timing), args.out)
    else:
        _emit(rows_to_json(rows, summary), args.out)
    return 0


def _cmd_estimate(args) -> int:
    data = _load_config(args.config)
    data.setdefault("grid", [None])
    config = ExperimentConfig.from_json(data, args.seed, args.trials)
    row = mc_estimate(config, config.grid[0], 0)
    if args.format == "csv":
        _emit(rows_to_csv([row], no_timing=args.no_timing), args.out)
    else:
        _emit(rows_to_json([row]), args.out)
    return 0


def _cmd_scenario(args) -> int:
    ladder = None
    if args.ladder:
        try:
            ladder = tuple(int(x) for x in args.ladder.split(","))
        except ValueError as exc:
            raise ConfigError(f"bad ladder {args.ladder!r}") from exc
    summary = scenario_run(
        args.name, args.out or f"scenario_out/{args.name}", args.seed, args.trials, ladder
    )
    sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True, default=str) + "\n")
    return 0


def _cmd_spectrum(args) -> int:
    from .experiment import build_model

    model = build_model(_load_config(args.config), None, None)
    if model.block_structure is None:
        raise ConfigError("spectrum needs a block-structured model (sbm, chung_lu, gnd)")
    _emit(
        json.dumps(critical_alpha(model.block_structure).to_json(), indent=2, sort_keys=True),
        args.out,
    )
    return 0


def _cmd_spread_audit(args) -> int:
    data = _load_config(args.config)
    try:
        ground = GroundSet.from_json(data["ground"])
        family = SubsetFamily(ground, [frozenset(s) for s in data["family"]])
        measure = SpreadMeasure(
            [frozenset(s) for s in data["measure"]["support"]],
            data["measure"]["weights"],
        )
        qval = data["q"]
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad spread-audit config: {exc}") from exc
    if isinstance(qval, dict):
        q = ProbVector(ground, {k: to_fraction(v) for k, v in qval.items()})
    else:
        q = ProbVector.uniform(ground, to_fraction(qval))
    verdict = verify_q_spread(measure, q, family)
    result: dict = {"verify": verdict.to_json(), "ground_size": len(ground)}
    if data.get("values", True):
        if len(ground) > COVER_FRACTIONAL_CEILING:
            raise InfeasibleSizeError(
                f"cover values need |X| <= {COVER_FRACTIONAL_CEILING}; "
                "set \"values\": false to only verify the certificate"
            )
        frac = fractional_cover_value(family, q)
        result["fractional_value"] = frac.to_json()
        if len(ground) <= COVER_EXACT_CEILING:
            exact = cover_value_exact(family, q)
            result["cover_value"] = exact.to_json()
            result["weak_duality_ok"] = bool(exact.value >= frac.value)
        if verdict.ok:
            result["implies_half_ok"] = bool(frac.value >= to_fraction("1/2"))
    _emit(json.dumps(result, indent=2, sort_keys=True), args.out)
    return 0


def _cmd_moments(args) -> int:
    data = _load_config(args.config)
    try:
        seq = DegreeSequence(data["degrees"])
        case = data.get("case", "D1")
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad moments config: {exc}") from exc
    result: dict = {"case": case, "n": seq.n}
    if case == "gnd":
        report = gnd_isolated_moments(seq, data.get("method", "exact"))
    elif case in ("D1", "D2", "k_valued"):
        report = chung_lu_obstruction_moments(seq, case)
    else:
        raise ConfigError(f"unknown moments case {case!r}")
    result["moments"] = report.to_json()
    if seq.k == 2:
        result["diagnostics"] = moment_diagnostics(seq).to_json()
    delta = to_fraction(data.get("delta", "15/16"))
    result["conditions"] = condition_report(seq, delta).to_json()
    _emit(json.dumps(result, indent=2, sort_keys=True), args.out)
    return 0


def _cmd_enumerate(args) -> int:
    data = _load_config(args.config)
    try:
        seq = DegreeSequence(data["degrees"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad enumerate config: {exc}") from exc
    result: dict = {
        "n": seq.n,
        "degree_sum": seq.total,
        "graphical": erdos_gallai_graphical(seq.degrees) and seq.total % 2 == 0,
    }
    try:
        result["exact_count"] = count_graphs_exact(seq)
    except InfeasibleSizeError:
        if data.get("require_exact", False):
            raise
        result["exact_count"] = None
    if seq.total % 2 == 0 and seq.degrees[-1] >= 1:
        result["mckay"] = mckay_count(seq).to_json()
    else:
        result["mckay"] = None
    _emit(json.dumps(result, indent=2, sort_keys=True), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchspread",
        description="Threshold scans, spread certificates, and enumeration "
        "diagnostics for perfect matchings in inhomogeneous random graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--seed", type=int, default=None, help="master seed override")
        p.add_argument("--trials", type=int, default=None, help="trials override")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default="csv")
            p.add_argument(
                "--no-timing",
                action="store_true",
                help="zero the wall_ms column for byte-identical artifacts",
            )

    p = sub.add_parser("scan", help="property frequency along a parameter grid")
    common(p)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("estimate", help="property frequency at a single point")
    common(p)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("scenario", help="run a named scenario")
    p.add_argument("name")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--seed", type=int, default=2026)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--ladder", default=None, help="comma-separated n ladder")
    p.set_defaults(func=_cmd_scenario)

    p = sub.add_parser("spectrum", help="critical level report for a block model")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("spread-audit", help="verify a spread certificate and cover values")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_spread_audit)

    p = sub.add_parser("moments", help="obstruction moment report for a degree sequence")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("enumerate", help="exact and asymptotic realization counts")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_enumerate)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InfeasibleSizeError as exc:
        sys.stderr.write(f"error (infeasible size): {exc}\n")
        return 3
    except (ConfigError, ValueError, KeyError) as exc:
        sys.stderr.write(f"error (config): {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
