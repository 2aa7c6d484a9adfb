"""The two experiment families: group satisfaction versus group size, and
group satisfaction over time.

Both families average over independently generated elections with a
click-through-rate decision maker. Every election is a pure function of
(seed base, model, group size, run index); the decision maker additionally
derives its stream from the rule, so all rules see identical profiles.
Aggregation is exact (rational means) and converted to decimals only when
writing CSV, making reruns byte-identical.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from dynrank.generators import (
    GenConfig,
    RNG_ALGORITHM,
    ctr_select,
    first_party_candidates,
    generate,
)
from dynrank.model import avg_satisfaction, prefix
from dynrank.rules import RULE_IDS, rank

#: iterations for the satisfaction-over-time family, per model
TIME_HORIZON = {"blurred": 11, "spatial": 8}

CSV_HEADER = (
    "model",
    "rule",
    "alpha_num",
    "alpha_den",
    "iteration",
    "mean_satisfaction",
    "stddev",
    "runs",
    "seed_base",
)

_MODEL_CODE = {"blurred": 1, "spatial": 2}


@dataclass(frozen=True)
class ExperimentPoint:
    alpha: Fraction
    iteration: int
    mean: Fraction
    stddev: float
    raw: tuple


@dataclass(frozen=True)
class ExperimentResult:
    model: str
    rule: str
    figure: str
    runs: int
    seed_base: int
    rng_algorithm: str
    points: tuple


def _profile_rng_seed(seed_base, model, group_size, run):
    return np.random.SeedSequence([seed_base, _MODEL_CODE[model], group_size, run])


def _dm_rng(seed_base, model, group_size, run, rule):
    entropy = [seed_base, _MODEL_CODE[model], group_size, run, 100 + RULE_IDS.index(rule)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _make_profile(model, group_size, seed_base, run):
    seed = _profile_rng_seed(seed_base, model, group_size, run)
    cfg = GenConfig(model=model, group_size=group_size, seed=seed)
    return cfg, generate(cfg)


def _ctr_run(profile, rule, dm_rng, selections, record_prefix: Optional[int] = None):
    """Run `selections` CTR-driven choices; return (implemented, prefix sats).

    The decision maker never selects a candidate without supporters (the
    Phragmen rules reject such implementations, and every rule ranks them
    at the bottom anyway); the click-through weights apply to the supported
    candidates in ranking order. With `record_prefix` set, the average
    satisfaction of the first-party group with the top positions of every
    ranking r^1..r^(selections+1) is recorded (used by the over-time
    family).
    """
    implemented = []
    recorded = []
    for _ in range(selections):
        ranking = rank(rule, profile, implemented)
        if record_prefix is not None:
            recorded.append(prefix(ranking, record_prefix))
        selectable = tuple(c for c in ranking if profile.supporter_indices(c))
        if not selectable:
            break
        implemented.append(ctr_select(selectable, dm_rng))
    final = rank(rule, profile, implemented)
    if record_prefix is not None:
        recorded.append(prefix(final, record_prefix))
    return tuple(implemented), recorded


def _mean_std(values):
    if not values:
        return Fraction(0), 0.0
    mean = sum(values, Fraction(0)) / len(values)
    variance = sum(((v - mean) ** 2 for v in values), Fraction(0)) / len(values)
    return mean, math.sqrt(float(variance))


def default_group_sizes(voters: int = 60, step: int = 3):
    return tuple(range(0, voters + 1, step))


def run_satisfaction_vs_alpha(
    model: str,
    rule: str,
    seed_base: int = 20210120,
    runs: int = 100,
    group_sizes=None,
) -> ExperimentResult:
    """Mean satisfaction of the first party with the implemented set, per
    relative group size.

    The decision maker performs k selections, k being the number of
    candidates associated with the group's party; satisfaction refers to
    the full implemented set X^(k+1). An empty group (group size 0) is
    recorded with satisfaction 0.
    """
    cfg_probe = GenConfig(model=model, group_size=0, seed=0)
    group_sizes = default_group_sizes(cfg_probe.voters) if group_sizes is None else group_sizes
    selections = first_party_candidates(cfg_probe)
    points = []
    for group_size in group_sizes:
        raw = []
        for run in range(runs):
            _, profile = _make_profile(model, group_size, seed_base, run)
            dm = _dm_rng(seed_base, model, group_size, run, rule)
            implemented, _ = _ctr_run(profile, rule, dm, selections)
            if group_size == 0:
                raw.append(Fraction(0))
            else:
                raw.append(avg_satisfaction(profile, range(group_size), implemented))
        mean, std = _mean_std(raw)
        points.append(
            ExperimentPoint(
                alpha=Fraction(group_size, cfg_probe.voters),
                iteration=selections,
                mean=mean,
                stddev=std,
                raw=tuple(raw),
            )
        )
    return ExperimentResult(model, rule, "row1", runs, seed_base, RNG_ALGORITHM, tuple(points))


def run_satisfaction_over_time(
    model: str,
    rule: str,
    seed_base: int = 20210120,
    runs: int = 100,
    depth: int = 5,
    horizon: Optional[int] = None,
) -> ExperimentResult:
    """Mean satisfaction of a quarter-sized group with the top `depth`
    ranking positions, per iteration."""
    cfg_probe = GenConfig(model=model, group_size=0, seed=0)
    group_size = cfg_probe.voters // 4
    horizon = TIME_HORIZON[model] if horizon is None else horizon
    group = range(group_size)
    per_iteration = [[] for _ in range(horizon)]
    for run in range(runs):
        _, profile = _make_profile(model, group_size, seed_base, run)
        dm = _dm_rng(seed_base, model, group_size, run, rule)
        _, prefixes = _ctr_run(profile, rule, dm, horizon - 1, record_prefix=depth)
        for t in range(horizon):
            per_iteration[t].append(avg_satisfaction(profile, group, prefixes[t]))
    points = []
    for t, raw in enumerate(per_iteration, start=1):
        mean, std = _mean_std(raw)
        points.append(
            ExperimentPoint(
                alpha=Fraction(group_size, cfg_probe.voters),
                iteration=t,
                mean=mean,
                stddev=std,
                raw=tuple(raw),
            )
        )
    return ExperimentResult(model, rule, "row2", runs, seed_base, RNG_ALGORITHM, tuple(points))


def result_rows(result: ExperimentResult):
    for p in result.points:
        yield (
            result.model,
            result.rule,
            p.alpha.numerator,
            p.alpha.denominator,
            p.iteration,
            f"{float(p.mean):.10g}",
            f"{p.stddev:.10g}",
            result.runs,
            result.seed_base,
        )


def write_csv(results, path) -> None:
    """Write experiment results in the shared CSV schema."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_HEADER)
        for result in results:
            writer.writerows(result_rows(result))


def plot_csv(csv_path, out_path) -> None:
    """Render a CSV produced by ``write_csv`` as a line chart, one series
    per rule. Plots are derived artifacts; nothing reads them back."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series = {}
    with open(csv_path, "r", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            alpha = int(row["alpha_num"]) / int(row["alpha_den"])
            series.setdefault(row["rule"], []).append(
                (alpha, int(row["iteration"]), float(row["mean_satisfaction"]))
            )
    fig, ax = plt.subplots(figsize=(6, 4))
    for rule, rows in sorted(series.items()):
        alphas = {a for a, _, _ in rows}
        if len(alphas) > 1:
            rows.sort()
            ax.plot([a for a, _, _ in rows], [m for _, _, m in rows], label=rule, marker="o")
            ax.set_xlabel("relative group size")
        else:
            rows.sort(key=lambda r: r[1])
            ax.plot([t for _, t, _ in rows], [m for _, _, m in rows], label=rule, marker="o")
            ax.set_xlabel("iteration")
    ax.set_ylabel("mean group satisfaction")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
