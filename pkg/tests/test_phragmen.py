"""The two Phragmen subroutines: cost splitting and buying times."""

import random
from fractions import Fraction

import pytest

from dynrank.errors import ZeroSupportImplementedError
from dynrank.fixtures import example_one
from dynrank.model import ApprovalProfile
from dynrank.rules import (
    _waterfill_step,
    compute_buying_time,
    compute_debts,
    dynamic_phragmen_trace,
)

from oracles import bruteforce_cost_split, random_profile, random_supported_implemented


class TestComputeDebts:
    def test_single_candidate_equal_split(self):
        debts = compute_debts(example_one(), ("b",))
        assert debts[:5] == (Fraction(1, 5),) * 5
        assert debts[5:] == (Fraction(0),) * 4

    def test_disjoint_supporters(self):
        debts = compute_debts(example_one(), ("b", "d"))
        assert debts[:5] == (Fraction(1, 5),) * 5
        assert debts[5:8] == (Fraction(1, 3),) * 3
        assert debts[8] == 0

    def test_lone_supporter_pays_again(self):
        profile = ApprovalProfile(["a", "b"], [["a"], ["a", "b"]])
        debts = compute_debts(profile, ("a", "b"))
        assert debts == (Fraction(1, 2), Fraction(3, 2))

    def test_conservation(self):
        rng = random.Random(4)
        for _ in range(50):
            profile = random_profile(rng)
            implemented = random_supported_implemented(rng, profile)
            assert sum(compute_debts(profile, implemented)) == len(implemented)

    def test_zero_support_rejected(self):
        profile = ApprovalProfile(["a", "b"], [["a"]])
        with pytest.raises(ZeroSupportImplementedError):
            compute_debts(profile, ("b",))

    def test_matches_bruteforce_split(self):
        rng = random.Random(5)
        for _ in range(60):
            profile = random_profile(rng, n_max=7, m_max=6)
            implemented = random_supported_implemented(rng, profile)
            debts = [Fraction(0)] * profile.n
            for x in implemented:
                expected = bruteforce_cost_split(debts, profile.supporter_indices(x))
                _waterfill_step(debts, profile.supporter_indices(x))
                assert debts == expected

    def test_boundary_prefix_is_minimal(self):
        # equalized debt of the first supporter ties the next supporter's
        # debt exactly; the non-strict stop assigns only the smaller prefix
        debts = [Fraction(0), Fraction(1)]
        equalized, payers = _waterfill_step(debts, (0, 1))
        assert equalized == 1
        assert payers == (0,)
        assert debts == [Fraction(1), Fraction(1)]


class TestComputeBuyingTime:
    def test_equal_split(self):
        profile = ApprovalProfile(["a"], [["a"], ["a"]])
        event = compute_buying_time(profile, "a", [Fraction(0), Fraction(0)])
        assert event.time == Fraction(1, 2)
        assert event.payers == frozenset({0, 1})

    def test_indebted_supporter_excluded_on_tie(self):
        profile = ApprovalProfile(["a"], [["a"], ["a"]])
        event = compute_buying_time(profile, "a", [Fraction(0), Fraction(-1)])
        assert event.time == 1
        assert event.payers == frozenset({0})

    def test_unsupported_is_never(self):
        profile = ApprovalProfile(["a", "b"], [["a"]])
        event = compute_buying_time(profile, "b", [Fraction(0)])
        assert event.is_never

    def test_indebted_supporters_can_join(self):
        profile = ApprovalProfile(["a"], [["a"], ["a"], ["a"]])
        credits = [Fraction(0), Fraction(-1, 10), Fraction(-4)]
        event = compute_buying_time(profile, "a", credits)
        # two cheapest supporters split: (1 + 1/10) / 2
        assert event.time == Fraction(11, 20)
        assert event.payers == frozenset({0, 1})

    def test_payers_cover_cost_and_stay_nonnegative(self):
        rng = random.Random(6)
        for _ in range(100):
            profile = random_profile(rng, n_max=8, m_max=4)
            credits = [Fraction(rng.randint(-8, 4), rng.randint(1, 5)) for _ in range(profile.n)]
            for c in profile.candidates:
                event = compute_buying_time(profile, c, credits)
                if event.is_never:
                    assert not profile.supporter_indices(c)
                    continue
                assert event.time >= 0
                paid = sum(credits[i] + event.time for i in event.payers)
                assert paid >= 1
                assert all(credits[i] + event.time >= 0 for i in event.payers)


class TestTrace:
    def test_example_one_global_times(self):
        trace = dynamic_phragmen_trace(example_one())
        assert [e.candidate for e in trace] == ["a", "c", "b", "d", "e"]
        assert [e.time for e in trace] == [
            Fraction(1, 5),
            Fraction(1, 3),
            Fraction(2, 5),
            Fraction(2, 3),
            Fraction(1),
        ]

    def test_times_nondecreasing(self):
        rng = random.Random(7)
        for _ in range(50):
            profile = random_profile(rng)
            implemented = random_supported_implemented(rng, profile)
            trace = dynamic_phragmen_trace(profile, implemented)
            times = [e.time for e in trace if e.time is not None]
            assert times == sorted(times)
            never_tail = [e.time is None for e in trace]
            assert never_tail == sorted(never_tail)
