"""Named desk-scale experiment scenarios.

Each scenario writes one CSV per scanned property (scan-row schema) plus a
JSON summary, and returns the summary. Asymptotic statements are rendered as
trends across a ladder of n; nothing here asserts pass/fail, that is the
test suite's job.
"""

from __future__ import annotations

import json
import math
import time
from fractions import Fraction
from pathlib import Path

from .enumeration import (
    chung_lu_obstruction_moments,
    condition_report,
    moment_diagnostics,
)
from .errors import ConfigError
from .experiment import (
    ExperimentConfig,
    ScanRow,
    build_model,
    evaluate_property,
    mc_estimate,
    point_alpha_star,
    rows_to_csv,
    wilson_interval,
)
from .models import DegreeSequence, RngStream

#: Default ladder of graph orders for scenario scans.
DEFAULT_LADDER = (256, 512, 1024, 2048, 4096, 8192)

#: Ladder of orders for the arithmetic-only diagnostics scenario.
DIAGNOSTIC_LADDER = tuple(2**e for e in range(10, 21))


def _joint_rows(desc: dict, props: list[dict], trials: int, stream: RngStream, param):
    """Sample once per trial, evaluate several properties on each sample."""
    model = build_model(desc, None, None)
    start = time.perf_counter()
    hits = [0] * len(props)
    for i in range(trials):
        sample = model.sample(stream.child(i))
        for j, prop in enumerate(props):
            hits[j] += bool(evaluate_property(prop, sample, model))
    alpha = point_alpha_star(model)
    wall = int(round(1000 * (time.perf_counter() - start)))
    rows = []
    for j in range(len(props)):
        lo, hi = wilson_interval(hits[j], trials)
        rows.append(ScanRow(param, trials, hits[j], hits[j] / trials, lo, hi, alpha, wall))
    return rows


def _write(out_dir: Path, name: str, csv_blobs: dict, summary: dict) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    files = {}
    for tag, blob in csv_blobs.items():
        path = out_dir / (f"{name}.csv" if tag == "" else f"{name}_{tag}.csv")
        path.write_text(blob)
        files[tag or "rows"] = str(path)
    summary = dict(summary, files=files)
    (out_dir / f"{name}_summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True, default=str)
    )
    return summary


def _d1_shape_degree(n: int) -> int:
    """High-class degree making the cross probability about 0.2 log(n)/n
    for the half-and-half bi-valued shape with low degree 1."""
    t = 0.2 * math.log(n)
    return max(2, round(t / (2 - t))) if t < 2 else max(2, n // 4)


def sbm_1statement(out_dir, seed, trials, ladder) -> dict:
    """Two equal blocks with every probability 3 log(n)/n: supercritical,
    the perfect-matching frequency should sit near 1 across the ladder."""
    rows = []
    for i, n in enumerate(ladder):
        n += n % 2
        p = Fraction(3 * math.log(n) / n)
        desc = {"model": "sbm", "sizes": [n // 2, n - n // 2], "P": [[p, p], [p, p]]}
        cfg = ExperimentConfig(desc, {"name": "perfect_matching"}, None, (n,), trials, seed)
        rows.append(mc_estimate(cfg, n, i))
    summary = {
        "scenario": "sbm_1statement",
        "pm_frequency_by_n": {str(r.param): r.estimate for r in rows},
        "min_pm_frequency": min(r.estimate for r in rows),
        "alpha_star_by_n": {str(r.param): r.alpha_star for r in rows},
        "seed": seed,
        "trials": trials,
    }
    return _write(Path(out_dir), "sbm_1statement", {"": rows_to_csv(rows)}, summary)


def d1_0statement(out_dir, seed, trials, ladder) -> dict:
    """Half-and-half bi-valued expected-degree model with cross probability
    near 0.2 log(n)/n: an isolated low-class vertex appears in almost every
    sample and perfect matchings vanish."""
    iso_rows, pm_rows, closed_form = [], [], {}
    for i, n in enumerate(ladder):
        n += n % 2
        d1 = _d1_shape_degree(n)
        desc = {"model": "chung_lu", "classes": [[d1, n // 2], [1, n - n // 2]]}
        props = [
            {"name": "isolated_in_block", "block": 2, "scope": "global"},
            {"name": "perfect_matching"},
        ]
        iso, pm = _joint_rows(desc, props, trials, RngStream(seed).child(i), n)
        iso_rows.append(iso)
        pm_rows.append(pm)
        seq = DegreeSequence([d1] * (n // 2) + [1] * (n - n // 2))
        rep = chung_lu_obstruction_moments(seq, "D1")
        closed_form[str(n)] = {
            "d1": d1,
            "ex_isolated": float(rep.ex),
            "cross_p_times_n_over_log_n": float(
                Fraction(d1, (d1 + 1) * (n // 2)) * n / Fraction(math.log(n))
            ),
        }
    summary = {
        "scenario": "d1_0statement",
        "isolated_frequency_by_n": {str(r.param): r.estimate for r in iso_rows},
        "pm_frequency_by_n": {str(r.param): r.estimate for r in pm_rows},
        "closed_form": closed_form,
        "seed": seed,
        "trials": trials,
    }
    return _write(
        Path(out_dir),
        "d1_0statement",
        {"isolated": rows_to_csv(iso_rows), "pm": rows_to_csv(pm_rows)},
        summary,
    )


def d2_0statement(out_dir, seed, trials, ladder) -> dict:
    """Low-degree scan of a small-high-class bi-valued expected-degree model
    at fixed n: the empirical 1/2-crossing should fall where the spectrum
    predictor crosses order-one levels."""
    n = ladder[-1] if ladder else 3000
    n1, d1 = 30, 100
    grid = tuple(range(2, 14, 2))
    desc = {"model": "chung_lu", "classes": [[d1, n1], [2, n - n1]]}
    cfg = ExperimentConfig(desc, {"name": "perfect_matching"}, "d2", grid, trials, seed)
    rows = [mc_estimate(cfg, v, i) for i, v in enumerate(grid)]
    crossing = next((r.param for r in rows if r.estimate >= 0.5), None)
    summary = {
        "scenario": "d2_0statement",
        "n": n,
        "crossing_d2": crossing,
        "alpha_star_by_d2": {str(r.param): r.alpha_star for r in rows},
        "seed": seed,
        "trials": trials,
    }
    return _write(Path(out_dir), "d2_0statement", {"": rows_to_csv(rows)}, summary)


def k_valued_0statement(out_dir, seed, trials, ladder) -> dict:
    """Three-valued expected-degree model with a dominant high class and a
    polynomial low class whose expected degree is 1: isolated low-class
    vertices persist, so perfect matchings do not appear."""
    iso_rows, pm_rows, closed_form = [], [], {}
    for i, n in enumerate(ladder):
        n += n % 4
        d1 = max(3, math.ceil(n**0.25))
        n1, n2 = n // 2, n // 4
        n3 = n - n1 - n2
        seq = DegreeSequence([d1] * n1 + [2] * n2 + [1] * n3)
        desc = {"model": "chung_lu", "classes": [[d1, n1], [2, n2], [1, n3]]}
        props = [
            {"name": "isolated_in_block", "block": 3, "scope": "global"},
            {"name": "perfect_matching"},
        ]
        iso, pm = _joint_rows(desc, props, trials, RngStream(seed).child(i), n)
        iso_rows.append(iso)
        pm_rows.append(pm)
        closed_form[str(n)] = {
            "d1": d1,
            "ex_isolated": float(chung_lu_obstruction_moments(seq, "k_valued").ex),
        }
    summary = {
        "scenario": "k_valued_0statement",
        "isolated_frequency_by_n": {str(r.param): r.estimate for r in iso_rows},
        "pm_frequency_by_n": {str(r.param): r.estimate for r in pm_rows},
        "closed_form": closed_form,
        "seed": seed,
        "trials": trials,
    }
    return _write(
        Path(out_dir),
        "k_valued_0statement",
        {"isolated": rows_to_csv(iso_rows), "pm": rows_to_csv(pm_rows)},
        summary,
    )


def counterexample_5_1(out_dir, seed, trials, ladder) -> dict:
    """Unbalanced two-block model whose smaller side is fully connected:
    matchings exist with probability well above 1/2 even though the
    predictor level, throttled by the sparse within-large-block pairs, sits
    far below 1."""
    n = ladder[-1] if ladder else 500
    n += n % 2
    m = (n - 2) // 2
    rho = Fraction(1 / (n * math.sqrt(math.log(n))))
    desc = {
        "model": "sbm",
        "sizes": [m, m + 2],
        "P": [[Fraction(1), Fraction(1)], [Fraction(1), rho]],
    }
    cfg = ExperimentConfig(desc, {"name": "perfect_matching"}, None, (n,), trials, seed)
    row = mc_estimate(cfg, n, 0)
    summary = {
        "scenario": "counterexample_5_1",
        "n": n,
        "pm_frequency": row.estimate,
        "alpha_star": row.alpha_star,
        "rho": float(rho),
        "predictor_below_one_but_pm_frequent": bool(
            row.alpha_star is not None and row.alpha_star < 1 and row.estimate > 0.5
        ),
        "seed": seed,
        "trials": trials,
    }
    return _write(Path(out_dir), "counterexample_5_1", {"": rows_to_csv([row])}, summary)


def gnd_example_z_ladder(out_dir, seed, trials, ladder) -> dict:
    """Arithmetic-only diagnostics ladder for the concrete bi-valued shape
    d1 = ceil(n^{1/8}), n1 = ceil(n^{15/16}), low degree 2: the enumeration
    correction terms Z should shrink as n doubles."""
    ladder = ladder if ladder else DIAGNOSTIC_LADDER
    lines = ["n,d1,n1,Z_first,max_Z_second,phi_first,d1_sq_over_norm,n2sq_d2cubed_over_norm_sq"]
    diag_by_n = {}
    for n in ladder:
        d1 = math.ceil(n ** (1 / 8))
        n1 = math.ceil(n ** (15 / 16))
        seq = DegreeSequence([d1] * n1 + [2] * (n - n1))
        diag = moment_diagnostics(seq)
        cond = condition_report(seq)
        lines.append(
            ",".join(
                [
                    str(n),
                    str(d1),
                    str(n1),
                    repr(float(diag.Z_first)),
                    repr(float(diag.max_Z_second)),
                    repr(float(diag.phi_first)),
                    repr(float(cond.ratios["d1_sq_over_norm"])),
                    repr(float(cond.ratios["n2sq_d2cubed_over_norm_sq"])),
                ]
            )
        )
        diag_by_n[str(n)] = {
            "Z_first": float(diag.Z_first),
            "max_Z_second": float(diag.max_Z_second),
            "phi_first": float(diag.phi_first),
        }
    z1 = [v["Z_first"] for v in diag_by_n.values()]
    z2 = [v["max_Z_second"] for v in diag_by_n.values()]
    summary = {
        "scenario": "gnd_example_z_ladder",
        "diagnostics_by_n": diag_by_n,
        "Z_first_strictly_decreasing": all(a > b for a, b in zip(z1, z1[1:])),
        "max_Z_second_strictly_decreasing": all(a > b for a, b in zip(z2, z2[1:])),
    }
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "gnd_example_z_ladder.csv").write_text("\n".join(lines) + "\n")
    summary["files"] = {"rows": str(out / "gnd_example_z_ladder.csv")}
    (out / "gnd_example_z_ladder_summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True)
    )
    return summary


SCENARIOS = {
    "sbm_1statement": (sbm_1statement, DEFAULT_LADDER, 100),
    "d1_0statement": (d1_0statement, DEFAULT_LADDER, 100),
    "d2_0statement": (d2_0statement, (3000,), 60),
    "k_valued_0statement": (k_valued_0statement, DEFAULT_LADDER[:4], 100),
    "counterexample_5_1": (counterexample_5_1, (500,), 100),
    "gnd_example_z_ladder": (gnd_example_z_ladder, DIAGNOSTIC_LADDER, 1),
}


def scenario_run(name: str, out_dir, seed: int = 2026, trials=None, ladder=None) -> dict:
    """Run a named scenario; writes CSV and JSON artifacts into out_dir."""
    if name not in SCENARIOS:
        raise ConfigError(
            f"unknown scenario {name!r}; available: {', '.join(sorted(SCENARIOS))}"
        )
    fn, default_ladder, default_trials = SCENARIOS[name]
    return fn(
        out_dir,
        seed,
        int(trials) if trials is not None else default_trials,
        tuple(ladder) if ladder is not None else default_ladder,
    )
