"""Monte Carlo experiment harness: property-frequency estimation across the
random graph models, threshold scans with the spectrum predictor alongside,
Wilson intervals, and deterministic CSV/JSON output.

Reproducibility contract: a run is a pure function of (config, seed). Each
grid point gets child stream ``point_index`` of the master stream, and trial
``i`` at that point gets child ``i`` of the point stream, so per-trial
results do not depend on execution order (trials can run concurrently and
reduce deterministically). Timing columns are the one exception, and can be
zeroed with no_timing for byte-identical artifacts.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .core import GroundSet, ProbVector, SubsetFamily
from .errors import ConfigError
from .matching import count_isolated, has_perfect_matching
from .models import (
    BlockStructure,
    DegreeSequence,
    RngStream,
    chung_lu_probabilities,
    sample_block_model,
    sample_degree_sequence_graph,
    sample_product,
)
from .rational import to_fraction
from .spectrum import critical_alpha

#: z-score of the two-sided 95% normal interval.
Z_95 = 1.959963984540054

CSV_HEADER = (
    "param",
    "trials",
    "successes",
    "estimate",
    "ci_lo",
    "ci_hi",
    "alpha_star",
    "wall_ms",
)


def wilson_interval(successes: int, trials: int, z: float = Z_95) -> tuple[float, float]:
    """Wilson score interval; correct coverage near 0 and 1, where the
    phase-transition scans live."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials**2)) / denom
    # clamping against phat keeps lo <= estimate <= hi under float rounding
    return min(max(0.0, center - half), phat), max(min(1.0, center + half), phat)


@dataclass(frozen=True)
class ScanRow:
    param: object
    trials: int
    successes: int
    estimate: float
    ci_lo: float
    ci_hi: float
    alpha_star: float | None
    wall_ms: int

    def csv_fields(self, no_timing: bool = False) -> list[str]:
        return [
            "" if self.param is None else repr(self.param) if isinstance(self.param, float) else str(self.param),
            str(self.trials),
            str(self.successes),
            repr(self.estimate),
            repr(self.ci_lo),
            repr(self.ci_hi),
            "" if self.alpha_star is None else repr(self.alpha_star),
            "0" if no_timing else str(self.wall_ms),
        ]

    def to_json(self) -> dict:
        return {
            "param": self.param,
            "trials": self.trials,
            "successes": self.successes,
            "estimate": self.estimate,
            "ci_lo": self.ci_lo,
            "ci_hi": self.ci_hi,
            "alpha_star": self.alpha_star,
            "wall_ms": self.wall_ms,
        }


@dataclass(frozen=True)
class ModelInstance:
    """A concrete model at one grid point."""

    kind: str  # "graph" | "subset"
    sampler: Callable
    n: int
    block_structure: BlockStructure | None = None
    family: SubsetFamily | None = None

    def sample(self, rng: RngStream):
        return self.sampler(rng)


def _degrees_from_descriptor(desc: dict, axis: str | None, value) -> DegreeSequence:
    if "classes" in desc:
        classes = [[int(a), int(b)] for a, b in desc["classes"]]
        if axis == "d2":
            d2 = int(value)
            if d2 != value or d2 < 1:
                raise ConfigError("axis d2 needs a positive integer grid")
            classes[-1][0] = d2
        degrees = []
        for deg, size in classes:
            degrees += [deg] * size
        seq = DegreeSequence(degrees)
    else:
        if axis == "d2":
            raise ConfigError("axis d2 needs the 'classes' form of the degree model")
        seq = DegreeSequence(desc["degrees"])
    return seq


def _scaled_block_structure(b: BlockStructure, scale) -> BlockStructure:
    s = to_fraction(scale)
    P = [[min(Fraction(1), s * x) for x in row] for row in b.P]
    return BlockStructure(b.blocks, P)


def build_model(desc: dict, axis: str | None, value) -> ModelInstance:
    """Instantiate a model descriptor at one scan-axis value."""
    kind = desc.get("model")
    if kind == "sbm":
        sizes = [int(s) for s in desc["sizes"]]
        P = [[to_fraction(x) for x in row] for row in desc["P"]]
        b = BlockStructure.from_sizes(sizes, P)
        if axis == "p_scale":
            b = _scaled_block_structure(b, value)
        elif axis is not None:
            raise ConfigError(f"model sbm does not support axis {axis!r}")
        return ModelInstance(
            "graph", lambda rng, b=b: sample_block_model(b, rng), b.n, block_structure=b
        )
    if kind in ("chung_lu", "gnd"):
        seq = _degrees_from_descriptor(desc, axis if axis == "d2" else None, value)
        b = chung_lu_probabilities(seq)
        if axis == "p_scale":
            if kind == "gnd":
                raise ConfigError("model gnd only supports the d2 axis")
            b = _scaled_block_structure(b, value)
        elif axis not in (None, "d2"):
            raise ConfigError(f"model {kind} does not support axis {axis!r}")
        if kind == "chung_lu":
            sampler = lambda rng, b=b: sample_block_model(b, rng)  # noqa: E731
        else:
            attempts = int(desc.get("max_attempts", 1000))
            method = desc.get("method", "rejection")
            sampler = lambda rng, seq=seq: sample_degree_sequence_graph(  # noqa: E731
                seq, rng, max_attempts=attempts, method=method
            )
        return ModelInstance("graph", sampler, seq.n, block_structure=b)
    if kind == "product":
        ground = GroundSet(desc["items"])
        p = desc["p"]
        if isinstance(p, dict):
            vec = ProbVector(ground, {k: to_fraction(v) for k, v in p.items()})
        else:
            vec = ProbVector.uniform(ground, to_fraction(p))
        if axis == "p_scale":
            vec = vec.scaled_capped(to_fraction(value))
        elif axis is not None:
            raise ConfigError(f"model product does not support axis {axis!r}")
        family = None
        if "family" in desc:
            family = SubsetFamily.from_json(desc["family"])
        return ModelInstance(
            "subset",
            lambda rng, g=ground, v=vec: sample_product(g, v, rng),
            len(ground),
            family=family,
        )
    raise ConfigError(f"unknown model descriptor {kind!r}")


def _normalize_property(prop) -> dict:
    if isinstance(prop, str):
        prop = {"name": prop}
    if not isinstance(prop, dict) or "name" not in prop:
        raise ConfigError("property must be a name or an object with a 'name'")
    return prop


def evaluate_property(prop: dict, sample, model: ModelInstance) -> bool:
    name = prop["name"]
    if name == "perfect_matching":
        if model.kind != "graph":
            raise ConfigError("perfect_matching needs a graph model")
        return has_perfect_matching(sample)
    if name == "isolated_vertex_exists":
        if model.kind != "graph":
            raise ConfigError("isolated_vertex_exists needs a graph model")
        return sample.n > 0 and int(sample.degree_array().min()) == 0
    if name == "isolated_in_block":
        if model.kind != "graph" or model.block_structure is None:
            raise ConfigError("isolated_in_block needs a block-structured graph model")
        idx = int(prop.get("block", 1)) - 1
        blocks = model.block_structure.blocks
        if not 0 <= idx < len(blocks):
            raise ConfigError(f"block index {idx + 1} out of range")
        count = count_isolated(sample, blocks[idx], prop.get("scope", "global"))
        return count >= int(prop.get("min_count", 1))
    if name == "family_member":
        if model.kind != "subset":
            raise ConfigError("family_member needs a product model")
        family = model.family
        if family is None and "family" in prop:
            family = SubsetFamily.from_json(prop["family"])
        if family is None:
            raise ConfigError("family_member needs a family in the model or property")
        return frozenset(sample) in family.members
    raise ConfigError(f"unknown property {name!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    model: dict
    prop: dict
    axis: str | None
    grid: tuple
    trials: int
    seed: int
    compute_alpha_star: bool = True

    @classmethod
    def from_json(cls, data: dict, seed=None, trials=None) -> "ExperimentConfig":
        try:
            model = dict(data["model"])
            prop = _normalize_property(data.get("property", "perfect_matching"))
            axis = data.get("axis")
            grid = tuple(data.get("grid", (None,)))
            n_trials = int(trials if trials is not None else data.get("trials", 100))
            the_seed = int(seed if seed is not None else data.get("seed", 0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad experiment config: {exc}") from exc
        if not grid:
            raise ConfigError("grid must be nonempty")
        if n_trials < 1:
            raise ConfigError("trials must be >= 1")
        if axis is not None and axis not in ("p_scale", "d2"):
            raise ConfigError(f"unknown scan axis {axis!r}")
        return cls(
            model,
            prop,
            axis,
            grid,
            n_trials,
            the_seed,
            bool(data.get("compute_alpha_star", True)),
        )


def point_alpha_star(model: ModelInstance) -> float | None:
    if model.block_structure is None or model.n % 2:
        return None
    return critical_alpha(model.block_structure).alpha_star


def mc_estimate(config: ExperimentConfig, point, point_index: int = 0) -> ScanRow:
    """Estimate the property frequency at one grid point with split
    per-trial streams and a Wilson 95% interval."""
    start = time.perf_counter()
    model = build_model(config.model, config.axis, point)
    stream = RngStream(config.seed).child(point_index)
    successes = 0
    for i in range(config.trials):
        sample = model.sample(stream.child(i))
        successes += bool(evaluate_property(config.prop, sample, model))
    lo, hi = wilson_interval(successes, config.trials)
    alpha = point_alpha_star(model) if config.compute_alpha_star else None
    wall_ms = int(round(1000 * (time.perf_counter() - start)))
    return ScanRow(
        point, config.trials, successes, successes / config.trials, lo, hi, alpha, wall_ms
    )


def threshold_scan(config: ExperimentConfig) -> tuple[list[ScanRow], dict]:
    """One row per grid point plus a summary with the empirical 1/2-crossing
    and the predictor trajectory."""
    rows = [mc_estimate(config, v, i) for i, v in enumerate(config.grid)]
    crossing = next((r.param for r in rows if r.estimate >= 0.5), None)
    summary = {
        "crossing_param": crossing,
        "alpha_star_by_param": {str(r.param): r.alpha_star for r in rows},
        "max_estimate": max(r.estimate for r in rows),
        "trials": config.trials,
        "seed": config.seed,
        "axis": config.axis,
    }
    return rows, summary


def rows_to_csv(rows: Sequence[ScanRow], no_timing: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow(r.csv_fields(no_timing=no_timing))
    return buf.getvalue()


def rows_to_json(rows: Sequence[ScanRow], summary: dict | None = None) -> str:
    payload: dict = {"rows": [r.to_json() for r in rows]}
    if summary is not None:
        payload["summary"] = summary
    return json.dumps(payload, indent=2, sort_keys=True)
