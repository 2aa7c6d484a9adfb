"""Dynamic ranking rules.

A dynamic ranking rule maps an approval profile and a sequence of already
implemented candidates to a ranking of the remaining candidates. Five rules
are provided:

================== =============================================================
``av``             order by approval score; implemented candidates are removed
``dyn-seqpav``     greedy harmonic scoring, counting implemented candidates
                   towards voter saturation
``myopic-seqpav``  one-shot harmonic marginals with respect to the implemented
                   set only
``dyn-phragmen``   two phases: debts for implemented candidates, then
                   continuous buying of the remaining ones
``myopic-phragmen`` order by the debt vector each candidate would induce if
                   implemented next
================== =============================================================

With an empty implemented sequence, ``dyn-seqpav`` and ``dyn-phragmen``
coincide with sequential PAV and sequential Phragmen, and both myopic rules
coincide with ``av``.

Ties are always broken by the profile's candidate priority order. All
bookkeeping is exact: integer harmonic numerators for the PAV family,
:class:`fractions.Fraction` debts and credits for the Phragmen family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from dynrank.errors import ZeroSupportImplementedError
from dynrank.model import ApprovalProfile, validate_implemented

RULE_IDS = ("av", "dyn-seqpav", "myopic-seqpav", "dyn-phragmen", "myopic-phragmen")

#: rules whose output does not depend on the order of the implemented sequence
SET_INVARIANT_RULES = ("av", "dyn-seqpav", "myopic-seqpav", "myopic-phragmen")


def tsc(profile: ApprovalProfile, candidates) -> Fraction:
    """Harmonic (PAV) score of a candidate set.

    Each voter contributes 1 + 1/2 + ... + 1/k where k is the number of
    approved candidates inside the set.
    """
    cand_set = set(candidates)
    harmonic = [Fraction(0)]
    for k in range(1, len(cand_set) + 1):
        harmonic.append(harmonic[-1] + Fraction(1, k))
    return sum((harmonic[len(ballot & cand_set)] for ballot in profile.voters), Fraction(0))


def rank_av(profile: ApprovalProfile, implemented=()) -> tuple:
    """Rank remaining candidates by decreasing approval score."""
    implemented = set(validate_implemented(profile, implemented))
    remaining = [c for c in profile.candidates if c not in implemented]
    return tuple(
        sorted(remaining, key=lambda c: (-len(profile.supporter_indices(c)), profile.priority(c)))
    )


def rank_dynamic_seqpav(profile: ApprovalProfile, implemented=()) -> tuple:
    """Greedy harmonic ranking, saturation counted against implemented and
    already ranked candidates together.

    In every round the candidate maximizing the marginal harmonic score is
    appended. Marginals are compared as exact integers scaled by
    lcm(1..m+1). The implemented sequence enters as a set; its order is
    irrelevant.
    """
    implemented_seq = validate_implemented(profile, implemented)
    implemented_set = set(implemented_seq)
    scale = math.lcm(*range(1, profile.m + 2)) if profile.m else 1
    weight = [scale // k for k in range(1, profile.m + 2)]
    sat = [len(ballot & implemented_set) for ballot in profile.voters]
    remaining = [c for c in profile.candidates if c not in implemented_set]
    ranking = []
    while remaining:
        best = None
        best_score = -1
        for c in remaining:
            score = sum(weight[sat[i]] for i in profile.supporter_indices(c))
            if score > best_score:
                best, best_score = c, score
        ranking.append(best)
        remaining.remove(best)
        for i in profile.supporter_indices(best):
            sat[i] += 1
    return tuple(ranking)


def rank_myopic_seqpav(profile: ApprovalProfile, implemented=()) -> tuple:
    """Rank by the harmonic marginal with respect to the implemented set only."""
    implemented_set = set(validate_implemented(profile, implemented))
    scale = math.lcm(*range(1, profile.m + 2)) if profile.m else 1
    weight = [scale // k for k in range(1, profile.m + 2)]
    sat = [len(ballot & implemented_set) for ballot in profile.voters]
    remaining = [c for c in profile.candidates if c not in implemented_set]
    marginal = {
        c: sum(weight[sat[i]] for i in profile.supporter_indices(c)) for c in remaining
    }
    return tuple(sorted(remaining, key=lambda c: (-marginal[c], profile.priority(c))))


# --- Phragmen bookkeeping -----------------------------------------------------


def _waterfill_step(debts, supporter_indices):
    """Distribute one unit of cost over supporters, minimizing the maximum debt.

    Supporters are taken in order of increasing current debt; the shortest
    prefix whose equalized debt does not exceed the next supporter's debt
    pays (non-strict comparison at the boundary, which is outcome-equivalent
    to the strict variant since equal debts merge). Mutates `debts`; returns
    the equalized debt and the paying prefix.
    """
    order = sorted(supporter_indices, key=lambda i: (debts[i], i))
    total = Fraction(0)
    for j, voter in enumerate(order, start=1):
        total += debts[voter]
        equalized = (1 + total) / j
        if j == len(order) or equalized <= debts[order[j]]:
            for payer in order[:j]:
                debts[payer] = equalized
            return equalized, tuple(order[:j])
    raise AssertionError("unreachable: waterfill over empty supporter list")


def compute_debts(profile: ApprovalProfile, implemented=()) -> tuple:
    """Per-voter debts induced by the implemented sequence (in order).

    For each implemented candidate, one unit of cost is distributed over its
    supporters so that the maximum debt among them stays as small as
    possible. The debts sum to the length of the sequence.

    Raises
    ------
        ZeroSupportImplementedError
            If an implemented candidate has no supporters; the cost of such
            a candidate cannot be assigned.
    """
    implemented_seq = validate_implemented(profile, implemented)
    debts = [Fraction(0)] * profile.n
    for x in implemented_seq:
        sup = profile.supporter_indices(x)
        if not sup:
            raise ZeroSupportImplementedError(
                f"implemented candidate {x!r} has no supporters"
            )
        _waterfill_step(debts, sup)
    return tuple(debts)


@dataclass(frozen=True)
class BuyingEvent:
    """Outcome of a buying-time query: when and by whom a candidate is bought.

    ``time`` is the additional waiting time until some supporter subset can
    raise the full cost of 1; ``payers`` is that subset. ``time`` is None
    for candidates without supporters, which can never be bought.
    """

    time: Optional[Fraction]
    payers: frozenset

    @classmethod
    def never(cls):
        return cls(None, frozenset())

    @property
    def is_never(self) -> bool:
        return self.time is None


def compute_buying_time(profile: ApprovalProfile, candidate: str, credits) -> BuyingEvent:
    """Minimal additional time until supporters of `candidate` can pay 1.

    Starting from the nonnegative-balance supporters, indebted supporters
    are admitted one by one in order of decreasing balance; for every such
    group the waiting time is the missing amount divided by the group size.
    The minimum wins; ties go to the smaller group.
    """
    sup = profile.supporter_indices(candidate)
    if not sup:
        return BuyingEvent.never()
    members = sorted((i for i in sup if credits[i] >= 0), key=lambda i: (-credits[i], i))
    indebted = sorted((i for i in sup if credits[i] < 0), key=lambda i: (-credits[i], i))
    total = sum((credits[i] for i in members), Fraction(0))
    best_time = None
    best_payers = None
    for extra in range(len(indebted) + 1):
        if extra > 0:
            members.append(indebted[extra - 1])
            total += credits[indebted[extra - 1]]
        if not members:
            continue
        wait = Fraction(0) if total >= 1 else (1 - total) / len(members)
        if best_time is None or wait < best_time:
            best_time = wait
            best_payers = frozenset(members)
    return BuyingEvent(best_time, best_payers)


@dataclass(frozen=True)
class PurchaseEvent:
    """One purchase in the dynamic Phragmen process.

    ``time`` is the global clock value at the purchase (cumulative over the
    whole phase); it is None for unsupported candidates appended at the end.
    """

    candidate: str
    time: Optional[Fraction]
    payers: frozenset


def _earliest_affordable(bases, scale, sup):
    """Global time at which some subset of `sup` can pool a full credit.

    A voter's balance at global time T is (base + T*scale)/scale; scanning
    prefixes of supporters in decreasing base order, the top j voters are
    funded at time (scale - sum of bases)/(j*scale). Returns that minimum
    as a (numerator, j) pair with implied denominator j*scale; the value is
    independent of the current clock. All arithmetic is plain integers.
    """
    values = sorted((bases[i] for i in sup), reverse=True)
    best_num = best_j = None
    prefix_sum = 0
    for j, b in enumerate(values, start=1):
        prefix_sum += b
        num = scale - prefix_sum
        if best_num is None or num * best_j < best_num * j:
            best_num, best_j = num, j
    return best_num, best_j


def dynamic_phragmen_trace(profile: ApprovalProfile, implemented=()) -> list:
    """Full purchase trace of dynamic Phragmen.

    Phase 1 turns the implemented sequence into per-voter debts; phase 2
    lets voters earn credit at unit rate (starting from the negated debts)
    and repeatedly sells the candidate that is affordable earliest, ties
    broken by priority. Unsupported candidates trail in priority order.

    Balances are kept as exact integers over one shared denominator, which
    is rescaled whenever a purchase time needs a finer grid.
    """
    implemented_seq = validate_implemented(profile, implemented)
    implemented_set = set(implemented_seq)
    debts = compute_debts(profile, implemented_seq)
    scale = math.lcm(*(d.denominator for d in debts)) if debts else 1
    bases = [int(-d * scale) for d in debts]  # balance*scale at global time 0
    clock = 0  # global time * scale
    supported = []
    unsupported = []
    for c in profile.candidates:
        if c in implemented_set:
            continue
        (supported if profile.supporter_indices(c) else unsupported).append(c)
    afford = {
        c: _earliest_affordable(bases, scale, profile.supporter_indices(c))
        for c in supported
    }
    events = []
    while supported:
        # argmin over candidates of max(clock, afford); priority breaks ties
        chosen = None
        chosen_num = chosen_j = None  # event time as num/(j*scale)
        for c in supported:
            num, j = afford[c]
            if num <= clock * j:  # affordable at or before the clock
                num, j = clock, 1
            if chosen is None or num * chosen_j < chosen_num * j:
                chosen, chosen_num, chosen_j = c, num, j
        if chosen_j > 1:
            # refine the shared denominator so the event time is integral
            factor = chosen_j // math.gcd(chosen_num, chosen_j)
            if factor > 1:
                scale *= factor
                clock *= factor
                bases = [b * factor for b in bases]
                afford = {c: (num * factor, j) for c, (num, j) in afford.items()}
            chosen_num = chosen_num * factor // chosen_j if factor > 1 else chosen_num // chosen_j
        event_clock = chosen_num
        sup = profile.supporter_indices(chosen)
        if event_clock > clock:
            # group reaches 1 exactly now; zero-balance members do not pay
            payers = frozenset(i for i in sup if bases[i] + event_clock > 0)
        else:
            # affordable since an earlier simultaneous purchase
            payers = frozenset(i for i in sup if bases[i] + event_clock >= 0)
        for i in payers:
            bases[i] = -event_clock
        clock = event_clock
        events.append(PurchaseEvent(chosen, Fraction(clock, scale), payers))
        supported.remove(chosen)
        del afford[chosen]
        for c in supported:
            if payers.intersection(profile.supporter_indices(c)):
                afford[c] = _earliest_affordable(bases, scale, profile.supporter_indices(c))
    events.extend(PurchaseEvent(c, None, frozenset()) for c in unsupported)
    return events


def rank_dynamic_phragmen(profile: ApprovalProfile, implemented=()) -> tuple:
    """Ranking induced by the dynamic Phragmen purchase process."""
    return tuple(e.candidate for e in dynamic_phragmen_trace(profile, implemented))


def rank_myopic_phragmen(profile: ApprovalProfile, implemented=()) -> tuple:
    """Rank candidates by the debt vector they would induce if implemented next.

    For each remaining candidate the implemented-sequence debts are extended
    by one more cost assignment; candidates with lexicographically smaller
    non-increasing debt vectors rank higher. Unsupported candidates rank
    last. The shared debt phase is computed once and reused per candidate.
    """
    implemented_seq = validate_implemented(profile, implemented)
    implemented_set = set(implemented_seq)
    base_debts = list(compute_debts(profile, implemented_seq))
    remaining = [c for c in profile.candidates if c not in implemented_set]
    sort_key = {}
    for c in remaining:
        sup = profile.supporter_indices(c)
        if not sup:
            sort_key[c] = (1, (), profile.priority(c))
            continue
        induced = list(base_debts)
        _waterfill_step(induced, sup)
        induced.sort(reverse=True)
        sort_key[c] = (0, tuple(induced), profile.priority(c))
    return tuple(sorted(remaining, key=sort_key.__getitem__))


_RULE_FUNCTIONS = {
    "av": rank_av,
    "dyn-seqpav": rank_dynamic_seqpav,
    "myopic-seqpav": rank_myopic_seqpav,
    "dyn-phragmen": rank_dynamic_phragmen,
    "myopic-phragmen": rank_myopic_phragmen,
}


def rank(rule: str, profile: ApprovalProfile, implemented=()) -> tuple:
    """Dispatch to the rule with the given identifier (see ``RULE_IDS``)."""
    try:
        fn = _RULE_FUNCTIONS[rule]
    except KeyError:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULE_IDS}") from None
    return fn(profile, implemented)
