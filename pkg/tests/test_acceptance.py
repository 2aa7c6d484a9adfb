"""Acceptance gate: every criterion below runs at its stated scale and
tolerance and prints one PASS/FAIL line (visible with pytest -s / -rA).

Criterion groups:
  worked-example exactness  (exact rankings, < 1 s total)
  property suites           (>= 500 random instances each, < 60 s)
  experiment reproduction   (blurred parties, 100 elections per point)
  runtime envelope          (m in {20, 40, 80}, n = 60)
"""

import random
import time
from fractions import Fraction

import pytest

from dynrank.axioms import (
    adversarial_dm_search,
    check_h_alpha_monotonicity,
    check_js,
    check_weak_monotonicity,
)
from dynrank.experiments import run_satisfaction_over_time, run_satisfaction_vs_alpha
from dynrank.fixtures import (
    dynamic_monotonicity_group,
    dynamic_monotonicity_profile,
    example_one,
    example_two,
    myopic_monotonicity_profile,
    two_party_profile,
    weak_monotonicity_group,
    weak_monotonicity_phragmen_profile,
    weak_monotonicity_seqpav_profile,
)
from dynrank.generators import GenConfig, generate
from dynrank.model import avg_satisfaction, prefix
from dynrank.rules import RULE_IDS, rank
from dynrank.session import replay_trajectory

from suites import (
    phragmen_oracle_suite,
    representation_bounds_suite,
    rule_invariants_suite,
    selection_guarantees_suite,
    weak_monotonicity_suite,
)

_worked_example_seconds = []


def _report(name, ok):
    print(f"ACCEPTANCE {'PASS' if ok else 'FAIL'}: {name}")
    assert ok, name


def _timed(fn):
    start = time.perf_counter()
    result = fn()
    _worked_example_seconds.append(time.perf_counter() - start)
    return result


PROPORTIONAL_RULES = ("dyn-seqpav", "myopic-seqpav", "dyn-phragmen", "myopic-phragmen")


# --- worked-example exactness ---------------------------------------------------


class TestWorkedExamples:
    def test_example_one_all_six_rankings(self):
        def run():
            profile = example_one()
            dynamic = {
                (): ("a", "c", "b", "d", "e"),
                ("b",): ("c", "a", "d", "e"),
                ("b", "d"): ("a", "c", "e"),
            }
            myopic = {
                (): ("a", "b", "c", "d", "e"),
                ("b",): ("c", "d", "a", "e"),
                ("b", "d"): ("a", "c", "e"),
            }
            ok = True
            for implemented, expected in dynamic.items():
                ok &= rank("dyn-seqpav", profile, implemented) == expected
                ok &= rank("dyn-phragmen", profile, implemented) == expected
            for implemented, expected in myopic.items():
                ok &= rank("myopic-seqpav", profile, implemented) == expected
                ok &= rank("myopic-phragmen", profile, implemented) == expected
            return ok

        _report("example 1: six rankings exact", _timed(run))

    def test_example_two_second_round(self):
        def run():
            profile = example_two()
            ok = rank("av", profile, ("c",)) == ("a", "b")
            for rule in PROPORTIONAL_RULES:
                ok &= rank(rule, profile, ("c",)) == ("b", "a")
            return ok

        _report("example 2: rankings after implementing c", _timed(run))

    def test_monotonicity_fixture_dynamic_rules(self):
        def run():
            profile = dynamic_monotonicity_profile(j=6, h=3)
            group = dynamic_monotonicity_group(profile)
            alpha = Fraction(len(group), profile.n)
            ok = rank("dyn-seqpav", profile, ()) == ("a", "b", "c", "d", "e")
            second = rank("dyn-seqpav", profile, ("b",))
            ok &= set(second[:3]) == {"c", "d", "e"} and second[3] == "a"
            ok &= avg_satisfaction(profile, group, prefix(second, 3)) == Fraction(24, 14)
            for rule in ("dyn-seqpav", "dyn-phragmen"):
                traj = replay_trajectory(profile, rule, ("b",))
                violations = check_h_alpha_monotonicity(traj, 3, alpha, [group])
                ok &= [(v.before, v.after) for v in violations] == [
                    (Fraction(26, 14), Fraction(24, 14))
                ]
            myopic_profile = myopic_monotonicity_profile(j=0, h=3)
            myopic_group = dynamic_monotonicity_group(myopic_profile)
            for rule in ("myopic-seqpav", "myopic-phragmen"):
                traj = replay_trajectory(myopic_profile, rule, ("b",))
                violations = check_h_alpha_monotonicity(
                    traj, 3, Fraction(len(myopic_group), myopic_profile.n), [myopic_group]
                )
                ok &= len(violations) == 1
            return ok

        _report("monotonicity fixtures: drop 26/14 to 24/14 flagged for all four rules", _timed(run))

    def test_weak_monotonicity_fixtures(self):
        def run():
            profile = weak_monotonicity_seqpav_profile()
            group = weak_monotonicity_group(profile)
            ok = rank("dyn-seqpav", profile, ()) == ("a", "b", "c", "e", "d")
            ok &= rank("dyn-seqpav", profile, ("b",)) == ("d", "a", "e", "c")
            traj = replay_trajectory(profile, "dyn-seqpav", ("b",))
            violations = check_weak_monotonicity(
                traj, 3, Fraction(len(group), profile.n), [group]
            )
            ok &= [(v.before, v.after) for v in violations] == [
                (Fraction(1), Fraction(9, 39))
            ]
            clone_profile = weak_monotonicity_phragmen_profile()
            ok &= rank("dyn-phragmen", clone_profile, ()) == ("a", "c", "b", "e1", "e2", "d")
            ok &= rank("dyn-phragmen", clone_profile, ("b",)) == ("d", "e1", "e2", "c", "a")
            return ok

        _report("weak monotonicity fixtures: 177-voter and clone variants exact", _timed(run))

    def test_two_party_adversary(self):
        def run():
            profile = two_party_profile(6, 8)
            a_party = frozenset(range(6))
            ok = True
            for rule in ("dyn-seqpav", "dyn-phragmen"):
                result = adversarial_dm_search(profile, rule, 4, 3, a_party)
                ok &= result.trajectory.implemented == ("b1", "b2", "b3")
                ok &= set(result.trajectory.steps[-1][0][:4]) == {"a1", "a2", "a3", "a4"}
                ok &= not check_js(profile, result.trajectory, 2).holds
            return ok

        _report("two-party adversary: X4 = (b1, b2, b3), JS fails at t = 2", _timed(run))

    def test_worked_examples_runtime(self):
        total = sum(_worked_example_seconds)
        _report(f"worked examples total runtime {total:.3f}s < 1s", total < 1.0)


# --- property suites -------------------------------------------------------------


class TestPropertySuites:
    started = None

    def test_rule_invariants_500(self):
        TestPropertySuites.started = time.perf_counter()
        failures = rule_invariants_suite(count=500, seed=1001)
        _report("properties: permutation/conservation/prefix/coincidence/order-invariance", not failures)

    def test_phragmen_simulation_500(self):
        failures = phragmen_oracle_suite(count=500, seed=2002)
        _report("properties: dynamic Phragmen equals continuous simulation", not failures)

    def test_representation_bounds_500(self):
        failures = representation_bounds_suite(count=500, seed=3003)
        _report("properties: group representation depth bounds hold", not failures)

    def test_selection_guarantees_500(self):
        failures = selection_guarantees_suite(count=500, seed=4004)
        _report("properties: clone-setting selection guarantees (tracking, PJS, JS<=5)", not failures)

    def test_weak_monotonicity_500(self):
        failures = weak_monotonicity_suite(count=500, seed=5005)
        _report("properties: myopic rules never violate weak monotonicity", not failures)

    def test_property_suites_runtime(self):
        elapsed = time.perf_counter() - TestPropertySuites.started
        _report(f"property suites runtime {elapsed:.1f}s < 60s", elapsed < 60.0)


# --- experiment reproduction -----------------------------------------------------

SEED_BASE = 20210120
RUNS = 100


@pytest.fixture(scope="module")
def row1_blurred():
    return {
        rule: run_satisfaction_vs_alpha("blurred", rule, seed_base=SEED_BASE, runs=RUNS)
        for rule in RULE_IDS
    }


@pytest.fixture(scope="module")
def row2_blurred():
    return {
        rule: run_satisfaction_over_time("blurred", rule, seed_base=SEED_BASE, runs=RUNS)
        for rule in RULE_IDS
    }


class TestExperiments:
    def test_av_jump_at_majority(self, row1_blurred):
        # NOTE: expected to fail under the specified decision maker. With
        # click-through weights renormalized over min(15, |r|) positions,
        # the DM is forced into the other party's slate once the leading
        # slate drains (about two of ten selections), lifting the minority
        # mean to ~2.3 and capping the majority mean at ~7.8. See the
        # decisions ledger for the window-size analysis.
        points = row1_blurred["av"].points
        low = [p for p in points if p.alpha <= Fraction(45, 100)]
        high = [p for p in points if p.alpha >= Fraction(55, 100)]
        outliers = [
            f"alpha={float(p.alpha):.2f}: {float(p.mean):.2f}"
            for p in low
            if p.mean > 1.0
        ] + [
            f"alpha={float(p.alpha):.2f}: {float(p.mean):.2f}"
            for p in high
            if p.mean < 8.0
        ]
        ok = not outliers
        _report(
            "experiments row 1: AV <= 1.0 below and >= 8.0 above the majority threshold"
            + (f" (outliers: {', '.join(outliers)})" if outliers else ""),
            ok,
        )

    def test_proportional_rules_track_alpha(self, row1_blurred):
        # NOTE: expected to fail at the two extreme grid points (alpha =
        # 0.05 and alpha = 1.0) for the same drain effect: the DM's forced
        # visits to the small party inflate tiny groups (~2.4 instead of
        # 0.5) and depress full groups (~7.8 instead of ~9.5). All interior
        # grid points track 10*alpha within the stated tolerance.
        outliers = []
        for rule in PROPORTIONAL_RULES:
            for p in row1_blurred[rule].points:
                if abs(p.mean - 10 * p.alpha) > Fraction(3, 2):
                    outliers.append(
                        f"{rule} alpha={float(p.alpha):.2f}: {float(p.mean):.2f}"
                    )
        _report(
            "experiments row 1: proportional rules within 1.5 of 10*alpha"
            + (f" (outliers: {', '.join(outliers)})" if outliers else ""),
            not outliers,
        )

    def test_dynamic_rules_steady_over_time(self, row2_blurred):
        # NOTE: expected to fail at the final iteration t = 11. After ten
        # proportional implementations only ~2.5 majority candidates remain,
        # so the top five of any proportional ranking must contain ~2.5
        # group candidates, forcing the mean to ~2.3 there. All earlier
        # iterations sit comfortably inside the band; see the decisions
        # ledger for the full analysis.
        ok = True
        outliers = []
        for rule in ("dyn-seqpav", "dyn-phragmen"):
            for p in row2_blurred[rule].points:
                if not Fraction(3, 4) <= p.mean <= Fraction(7, 4):
                    ok = False
                    outliers.append(f"{rule} t={p.iteration}: {float(p.mean):.2f}")
        _report(
            "experiments row 2: dynamic rules stay within [0.75, 1.75] for all t"
            + (f" (outliers: {', '.join(outliers)})" if outliers else ""),
            ok,
        )

    def test_myopic_rules_oscillate(self, row2_blurred):
        def swing(rule):
            means = [p.mean for p in row2_blurred[rule].points]
            return max(means) - min(means)

        dynamic_swing = max(swing("dyn-seqpav"), swing("dyn-phragmen"))
        myopic_swing = min(swing("myopic-seqpav"), swing("myopic-phragmen"))
        _report(
            "experiments row 2: myopic iteration swing at least twice the dynamic one",
            myopic_swing >= 2 * dynamic_swing,
        )

    def test_av_starves_minority_early(self, row2_blurred):
        ok = True
        for rule in ("dyn-seqpav", "dyn-phragmen"):
            for t in range(5):
                ok &= row2_blurred["av"].points[t].mean < row2_blurred[rule].points[t].mean
        _report("experiments row 2: AV below the dynamic rules for t <= 5", ok)


# --- runtime envelope -------------------------------------------------------------


def _median_wall(fn, min_total=0.2):
    times = []
    reps = 0
    start = time.perf_counter()
    while time.perf_counter() - start < min_total or reps < 3:
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
        reps += 1
    times.sort()
    return times[len(times) // 2]


class TestRuntimeEnvelope:
    def test_scaling_with_candidate_count(self):
        profiles = {
            m: generate(GenConfig(model="blurred", group_size=30, seed=13, candidates=m))
            for m in (20, 40, 80)
        }
        walls = {
            rule: {
                m: _median_wall(lambda p=profiles[m], r=rule: rank(r, p, ()))
                for m in (20, 40, 80)
            }
            for rule in ("dyn-seqpav", "myopic-phragmen")
        }
        seqpav_ratios = [
            walls["dyn-seqpav"][40] / walls["dyn-seqpav"][20],
            walls["dyn-seqpav"][80] / walls["dyn-seqpav"][40],
        ]
        myopic_ratios = [
            walls["myopic-phragmen"][40] / walls["myopic-phragmen"][20],
            walls["myopic-phragmen"][80] / walls["myopic-phragmen"][40],
        ]
        ok = all(r <= 12.0 for r in seqpav_ratios) and all(r <= 4.5 for r in myopic_ratios)
        _report(
            "runtime envelope: doubling m scales dyn-seqpav by "
            f"{max(seqpav_ratios):.1f}x (<= ~8x+overhead) and myopic-phragmen by "
            f"{max(myopic_ratios):.1f}x (<= ~2x+overhead)",
            ok,
        )
