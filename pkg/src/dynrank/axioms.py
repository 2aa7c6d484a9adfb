"""Executable checkers for the monotonicity, representation and selection
properties of dynamic ranking rules.

Checkers operate on immutable trajectories and return violation witnesses
with exact rational satisfaction values. Quantification over voter groups
is handled by explicit group enumeration; see ``enumerate_groups`` for the
families used and ``check_pjs`` for the one case where enumeration is
provably complete.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from dynrank.errors import (
    EmptyGroupError,
    SearchBudgetExceeded,
    ZeroSupportImplementedError,
)
from dynrank.model import ApprovalProfile, avg_satisfaction, prefix
from dynrank.rules import compute_debts, rank
from dynrank.session import Trajectory, replay_trajectory


# --- group enumeration ---------------------------------------------------------


def enumerate_groups(profile: ApprovalProfile, max_common: int = 2, max_union: int = 2, extra=()):
    """Candidate voter groups for axiom checking.

    Enumerates (a) supporter intersections of candidate subsets up to size
    `max_common`, (b) ballot-equality classes and unions of up to
    `max_union` of them, and (c) caller-supplied groups. This family is an
    under-approximation of "all groups" for the monotonicity notions, but
    contains every inclusion-maximal cohesive group.
    """
    groups = set()
    candidates = profile.candidates
    for size in range(1, max_common + 1):
        for common in combinations(candidates, size):
            members = frozenset(
                i for i, ballot in enumerate(profile.voters) if ballot.issuperset(common)
            )
            if members:
                groups.add(members)
    classes = {}
    for i, ballot in enumerate(profile.voters):
        classes.setdefault(ballot, []).append(i)
    class_groups = [frozenset(v) for v in classes.values()]
    for size in range(1, min(max_union, len(class_groups)) + 1):
        for chosen in combinations(class_groups, size):
            groups.add(frozenset().union(*chosen))
    for g in extra:
        members = frozenset(g)
        if members:
            groups.add(members)
    return sorted(groups, key=lambda g: (len(g), sorted(g)))


# --- monotonicity ---------------------------------------------------------------


@dataclass(frozen=True)
class MonotonicityViolation:
    """A group whose top-h satisfaction dropped although it did not approve
    the implemented candidate."""

    t: int
    group: frozenset
    h: int
    alpha: Fraction
    before: Fraction
    after: Fraction


def _monotonicity_scan(traj: Trajectory, h: int, alpha, groups, weak: bool):
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    if h < 1:
        raise ValueError("h must be at least 1")
    profile = traj.profile
    n = profile.n
    violations = []
    for group in groups:
        members = frozenset(group)
        if not members or len(members) < alpha * n:
            continue
        union = frozenset().union(*(profile.voters[i] for i in members))
        for t in range(1, len(traj.steps)):
            selected = traj.steps[t - 1][1]
            if selected is None or selected in union:
                continue
            if weak:
                # skip iterations where the selected candidate is co-approved
                # with any candidate the group cares about
                co_approved = any(
                    selected in ballot and ballot & union
                    for ballot in profile.voters
                )
                if co_approved:
                    continue
            before = avg_satisfaction(profile, members, prefix(traj.ranking_at(t), h))
            after = avg_satisfaction(profile, members, prefix(traj.ranking_at(t + 1), h))
            if after < before:
                violations.append(
                    MonotonicityViolation(t, members, h, alpha, before, after)
                )
    return violations


def check_h_alpha_monotonicity(traj: Trajectory, h: int, alpha, groups):
    """All satisfaction drops at depth h among the supplied groups.

    A violation is an iteration t and a group of relative size at least
    `alpha` none of whose members approve the implemented candidate, yet
    whose average satisfaction with the top h positions decreases from r^t
    to r^(t+1). Groups smaller than alpha * n are skipped.
    """
    return _monotonicity_scan(traj, h, alpha, groups, weak=False)


def check_weak_monotonicity(traj: Trajectory, h: int, alpha, groups):
    """Like ``check_h_alpha_monotonicity``, but an iteration only counts if
    no voter co-approves the implemented candidate together with any
    candidate approved by the group."""
    return _monotonicity_scan(traj, h, alpha, groups, weak=True)


# --- group representation -------------------------------------------------------


@dataclass(frozen=True)
class RepresentationQuery:
    """A group-representation query with all derived statistics.

    ``m_overlap`` counts implemented candidates approved by somebody in the
    group, ``debt_variance`` is the sum of squared debt deviations within
    the group, ``cohesiveness`` is the number of commonly approved
    not-yet-implemented candidates and ``avg_implemented`` the group's
    average satisfaction with the implemented set.
    """

    group: frozenset
    alpha: Fraction
    lam: int
    m_overlap: int
    debt_variance: Optional[Fraction]
    cohesiveness: int
    avg_implemented: Fraction


def build_representation_query(
    profile: ApprovalProfile, implemented, group, lam: Optional[int] = None
) -> RepresentationQuery:
    """Derive all Definition-level statistics for a group; never trust
    caller-supplied values for them.

    ``debt_variance`` is None when the implemented sequence contains a
    candidate without supporters (debts are undefined there).
    """
    members = frozenset(group)
    if not members:
        raise EmptyGroupError("representation queries need a nonempty group")
    implemented = tuple(implemented)
    implemented_set = set(implemented)
    union = frozenset().union(*(profile.voters[i] for i in members))
    common = frozenset.intersection(*(profile.voters[i] for i in members))
    cohesiveness = len(common - implemented_set)
    try:
        debts = compute_debts(profile, implemented)
        d_avg = sum((debts[i] for i in members), Fraction(0)) / len(members)
        variance = sum(((debts[i] - d_avg) ** 2 for i in members), Fraction(0))
    except ZeroSupportImplementedError:
        variance = None
    return RepresentationQuery(
        group=members,
        alpha=Fraction(len(members), profile.n),
        lam=cohesiveness if lam is None else lam,
        m_overlap=len(union & implemented_set),
        debt_variance=variance,
        cohesiveness=cohesiveness,
        avg_implemented=avg_satisfaction(profile, members, implemented_set),
    )


def kappa_dyn_phragmen(alpha, lam: int, m_overlap: int, debt_variance, group_size: int) -> int:
    """Ranking depth guaranteeing satisfaction `lam` under dynamic Phragmen."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return math.ceil((2 * (lam + m_overlap + 1) + Fraction(debt_variance) * group_size) / alpha)


def kappa_dyn_seqpav(alpha, lam: int, avg_implemented) -> int:
    """Ranking depth guaranteeing satisfaction `lam` under dynamic seqPAV."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return math.ceil(2 * (lam + 1 + Fraction(avg_implemented)) ** 2 / alpha**2)


@dataclass(frozen=True)
class GroupRepresentationResult:
    holds: bool
    vacuous: bool
    satisfaction: Optional[Fraction]


def check_group_representation(
    profile: ApprovalProfile, ranking, query: RepresentationQuery, kappa: int
) -> GroupRepresentationResult:
    """Evaluate the group-representation implication on one ranking.

    Vacuously true (with the flag set) when the group's cohesiveness is
    below the queried `lam`; otherwise true iff the group's average
    satisfaction with the top `kappa` positions reaches `lam`.
    """
    if not query.group or query.cohesiveness < query.lam:
        return GroupRepresentationResult(holds=True, vacuous=True, satisfaction=None)
    satisfaction = avg_satisfaction(profile, query.group, prefix(ranking, kappa))
    return GroupRepresentationResult(
        holds=satisfaction >= query.lam, vacuous=False, satisfaction=satisfaction
    )


# --- proportionality degree -----------------------------------------------------


def pd_bound_dphragmen(ell, m_overlap: int, debt_variance, group_size: int) -> Fraction:
    """Satisfaction lower bound of dynamic Phragmen for ell-large groups."""
    ell = Fraction(ell)
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    return (ell - 1) / 2 - Fraction(m_overlap, 2) - Fraction(debt_variance) * group_size / 4


def pd_dseqpav_holds(satisfaction, ell, h: int, avg_implemented) -> bool:
    """Exact test of satisfaction >= ell * sqrt(1/2h) - avg_implemented - 1.

    The bound is irrational; the comparison is decided by squaring, never
    by floating point.
    """
    if h < 1:
        raise ValueError("h must be at least 1")
    satisfaction = Fraction(satisfaction)
    ell = Fraction(ell)
    lhs = satisfaction + Fraction(avg_implemented) + 1
    if lhs < 0:
        return ell > 0 and lhs**2 * 2 * h < ell**2
    return lhs**2 * 2 * h >= ell**2


def pd_bound_dseqpav_decimal(ell, h: int, avg_implemented, digits: int = 4) -> Fraction:
    """Decimal approximation (floor at `digits` places) of the dynamic
    seqPAV degree bound ell * sqrt(1/2h) - avg_implemented - 1."""
    if h < 1:
        raise ValueError("h must be at least 1")
    ell = Fraction(ell)
    scale = 10**digits
    # floor(ell * scale / sqrt(2h)) = floor(sqrt(num^2 / (den^2 * 2h)))
    num = ell.numerator * scale
    den = ell.denominator
    scaled = math.isqrt(num * num // (den * den * 2 * h))
    return Fraction(scaled, scale) - Fraction(avg_implemented) - 1


def kappa_from_pd(degree_inverse_at_lam, alpha) -> int:
    """Translate a proportionality-degree inverse into a representation depth."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return math.ceil(Fraction(degree_inverse_at_lam) / alpha)


# --- justified selection ---------------------------------------------------------


@dataclass(frozen=True)
class SelectionCheckResult:
    holds: bool
    witness_group: Optional[frozenset]
    witness_common: Optional[tuple]


def check_pjs(profile: ApprovalProfile, traj: Trajectory, t: int, ell: int) -> SelectionCheckResult:
    """Proportional justified selection after the first t selections.

    Checks that every group controlling an ell/t fraction of the electorate
    with at least ell commonly approved candidates sees at least ell of its
    approved candidates implemented. The check is exact: a violating group
    can always be widened to the set of voters commonly approving some
    candidate classes (candidates with identical supporter sets, taken ell
    at a time) whose implemented approvals stay within a fixed subset of
    size below ell, so enumerating those groups decides the axiom.
    """
    if t < 1 or ell < 1:
        raise ValueError("t and ell must be at least 1")
    implemented = traj.implemented_before(t + 1)
    if len(implemented) < t:
        raise ValueError(f"trajectory has only {len(implemented)} selections, need {t}")
    implemented_set = frozenset(implemented)
    n = profile.n
    threshold = ell * n  # compare len(group) * t against this, exactly

    # candidate classes: distinct nonempty supporter sets with capacities
    classes = {}
    for c in profile.candidates:
        sup = frozenset(profile.supporter_indices(c))
        if sup:
            entry = classes.setdefault(sup, [0, c])
            entry[0] += 1
    class_list = sorted(
        ((sup, count, witness) for sup, (count, witness) in classes.items()),
        key=lambda e: profile.priority(e[2]),
    )

    allowed_sets = [
        frozenset(allowed)
        for size in range(min(ell, len(implemented_set) + 1))
        for allowed in combinations(sorted(implemented_set), size)
    ]

    def violating_group(base):
        for allowed in allowed_sets:
            group = frozenset(
                i for i in base if profile.voters[i] & implemented_set <= allowed
            )
            if group and len(group) * t >= threshold:
                return group
        return None

    found = None

    def search(start, base, capacity, witnesses):
        nonlocal found
        if found is not None:
            return
        if capacity >= ell:
            group = violating_group(base)
            if group is not None:
                found = (group, tuple(witnesses))
                return
        for idx in range(start, len(class_list)):
            sup, count, witness = class_list[idx]
            merged = base & sup
            if len(merged) * t < threshold:
                continue
            search(idx + 1, merged, capacity + count, witnesses + [witness])
            if found is not None:
                return

    search(0, frozenset(range(n)), 0, [])
    if found is not None:
        return SelectionCheckResult(False, found[0], found[1])
    return SelectionCheckResult(True, None, None)


def check_js(profile: ApprovalProfile, traj: Trajectory, t: int) -> SelectionCheckResult:
    """Justified selection: the ell = 1 case of ``check_pjs``."""
    return check_pjs(profile, traj, t, 1)


# --- adversarial decision maker ---------------------------------------------------


@dataclass(frozen=True)
class AdversarialSearchResult:
    trajectory: Trajectory
    score: int
    exhausted: bool
    nodes: int


def adversarial_dm_search(
    profile: ApprovalProfile,
    rule: str,
    h: int,
    horizon: int,
    target_group,
    beam_width: Optional[int] = None,
    node_budget: Optional[int] = None,
) -> AdversarialSearchResult:
    """Search for DM selections (within the top h) minimizing the target
    group's satisfaction with the implemented set.

    Exhaustive depth-first search over all admissible selection sequences;
    ties resolve to the sequence that is lexicographically smallest in
    priority order. With `beam_width` set, only the best states per level
    are expanded (faster, not exhaustive). A `node_budget` bounds the number
    of expanded rankings; exceeding it raises ``SearchBudgetExceeded``
    carrying the best trajectory found so far.
    """
    members = frozenset(target_group)
    union = frozenset().union(*(profile.voters[i] for i in members)) if members else frozenset()
    nodes = 0
    budget_hit = False

    def implemented_score(seq):
        return len(set(seq) & union)

    def expand(seq):
        nonlocal nodes, budget_hit
        if node_budget is not None and nodes >= node_budget:
            budget_hit = True
            return []
        nodes += 1
        ranking = rank(rule, profile, seq)
        window = ranking[:h]
        return sorted(window, key=profile.priority)

    best_seq = None
    best_score = None

    if beam_width is None:
        def dfs(seq):
            nonlocal best_seq, best_score
            if len(seq) == horizon:
                score = implemented_score(seq)
                if best_score is None or score < best_score:
                    best_seq, best_score = seq, score
                return
            for c in expand(seq):
                if budget_hit:
                    return
                dfs(seq + (c,))

        dfs(())
    else:
        frontier = [()]
        for _ in range(horizon):
            children = []
            for seq in frontier:
                children.extend(seq + (c,) for c in expand(seq))
                if budget_hit:
                    break
            if not children:
                break
            children.sort(key=lambda s: (implemented_score(s), tuple(map(profile.priority, s))))
            frontier = children[:beam_width]
        for seq in frontier:
            if len(seq) == horizon:
                score = implemented_score(seq)
                if best_score is None or score < best_score:
                    best_seq, best_score = seq, score

    if best_seq is None:
        raise SearchBudgetExceeded("budget exhausted before any full trajectory", None)
    result = AdversarialSearchResult(
        trajectory=replay_trajectory(profile, rule, best_seq, h),
        score=best_score,
        exhausted=not budget_hit and beam_width is None,
        nodes=nodes,
    )
    if budget_hit:
        raise SearchBudgetExceeded("node budget exceeded", result)
    return result
