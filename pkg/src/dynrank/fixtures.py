"""Hand-crafted profiles exercising the rules' edge behavior.

These profiles are used by the monotonicity and selection-guarantee test
suites; the integer parameter ``j`` scales the group sizes without changing
the produced rankings, pushing the affected voter group's relative size
towards its limit.
"""

from __future__ import annotations

from dynrank.model import ApprovalProfile


def _expand(blocks):
    """Build a profile from (multiplicity, ballot) blocks over named candidates."""
    candidates = []
    for _, ballot in blocks:
        for c in ballot:
            if c not in candidates:
                candidates.append(c)
    voters = []
    for count, ballot in blocks:
        voters.extend([tuple(ballot)] * count)
    return ApprovalProfile(sorted(candidates), voters)


def voters_with_ballots(profile: ApprovalProfile, *ballots) -> frozenset:
    """Indices of voters whose approval set equals one of the given ballots."""
    wanted = {frozenset(b) for b in ballots}
    return frozenset(i for i, b in enumerate(profile.voters) if b in wanted)


def example_one() -> ApprovalProfile:
    """Nine voters, five candidates: 5 x {a,b}, 3 x {c,d}, 1 x {e}."""
    return _expand([(5, "ab"), (3, "cd"), (1, "e")])


def example_two() -> ApprovalProfile:
    """Seven voters, three candidates: 1 x {a}, 3 x {b}, 3 x {a,c}."""
    return _expand([(1, "a"), (3, "b"), (3, "ac")])


def dynamic_monotonicity_profile(j: int = 6, h: int = 3) -> ApprovalProfile:
    """Profile on which both dynamic rules lose top-h satisfaction for a
    non-approving group after b is implemented.

    `j` must be divisible by 6. For h > 3, one extra bottom-filler
    candidate per depth increment is added, each with its own block of
    supporters, so the top-3 dynamics are preserved at larger depth.
    """
    if j % 6:
        raise ValueError("j must be divisible by 6")
    if h < 3:
        raise ValueError("profile is built for depth h >= 3")
    blocks = [
        (2, ("a",)),
        (15, ("a", "b")),
        (j // 2 + 6, ("b",)),
        (10, ("c",)),
        (10, ("d",)),
        (j + 6, ("a", "c", "d")),
        (j // 3 + 12, ("e",)),
    ]
    for extra in range(2, h - 1):
        blocks.append((j // 3 + 12, (f"e{extra}",)))
    return _expand(blocks)


def dynamic_monotonicity_group(profile: ApprovalProfile) -> frozenset:
    """The dissatisfied group: voters with ballot {a} or {a,c,d}."""
    return voters_with_ballots(profile, "a", "acd")


def myopic_monotonicity_profile(j: int = 0, h: int = 3) -> ApprovalProfile:
    """Variant of the dynamic profile on which the myopic rules fail
    (h,alpha)-monotonicity; any j >= 0 works."""
    if h < 3:
        raise ValueError("profile is built for depth h >= 3")
    blocks = [
        (2, ("a",)),
        (15, ("a", "b")),
        (j + 6, ("b",)),
        (10, ("c",)),
        (10, ("d",)),
        (j + 6, ("a", "c", "d")),
        (j + 16, ("e",)),
    ]
    for extra in range(2, h - 1):
        blocks.append((j + 16, (f"e{extra}",)))
    return _expand(blocks)


def weak_monotonicity_seqpav_profile(x: int = 0) -> ApprovalProfile:
    """177-voter profile (at x = 0) violating weak monotonicity for dynamic
    seqPAV; x must be even."""
    if x % 2:
        raise ValueError("x must be even")
    return _expand(
        [
            (4, ("a",)),
            (2 * x + 27, ("a", "b")),
            (27, ("b",)),
            (30, ("c",)),
            (x + 9, ("c", "d")),
            (9, ("d",)),
            (36, ("a", "d")),
            (x // 2 + 35, ("e",)),
        ]
    )


def weak_monotonicity_phragmen_profile(x: int = 0) -> ApprovalProfile:
    """Same construction with the bottom filler split into e1, e2, violating
    weak monotonicity for dynamic Phragmen."""
    if x % 2:
        raise ValueError("x must be even")
    return _expand(
        [
            (4, ("a",)),
            (2 * x + 27, ("a", "b")),
            (27, ("b",)),
            (30, ("c",)),
            (x + 9, ("c", "d")),
            (9, ("d",)),
            (36, ("a", "d")),
            (x // 2 + 35, ("e1",)),
            (x // 2 + 35, ("e2",)),
        ]
    )


def weak_monotonicity_group(profile: ApprovalProfile) -> frozenset:
    """The supporters of c: voters with ballot {c} or {c,d}."""
    return voters_with_ballots(profile, "c", "cd")


def two_party_profile(party_size: int, candidates_per_party: int) -> ApprovalProfile:
    """Two equal disjoint voter blocks, each approving its own candidate slate.

    Candidates a1..aK then b1..bK in priority order; the a-party voters come
    first. Every candidate within a party is a clone of the others.
    """
    a_slate = [f"a{i}" for i in range(1, candidates_per_party + 1)]
    b_slate = [f"b{i}" for i in range(1, candidates_per_party + 1)]
    voters = [tuple(a_slate)] * party_size + [tuple(b_slate)] * party_size
    return ApprovalProfile(a_slate + b_slate, voters)


def representation_failure_profile(
    implemented_count: int, depth: int, v_size: int, g_size: int
):
    """Construction on which AV and the myopic rules give a cohesive group
    zero top-depth satisfaction.

    Returns (profile, implemented sequence, indices of the group V). V's
    voters approve the implemented candidates plus their own slate of
    `depth` candidates; the remaining voters approve a disjoint slate of the
    same size, which both myopic rules rank on top.
    """
    implemented = [f"x{i}" for i in range(1, implemented_count + 1)]
    v_slate = [f"v{i}" for i in range(1, depth + 1)]
    g_slate = [f"g{i}" for i in range(1, depth + 1)]
    voters = [tuple(implemented + v_slate)] * v_size + [tuple(g_slate)] * g_size
    profile = ApprovalProfile(implemented + v_slate + g_slate, voters)
    return profile, tuple(implemented), frozenset(range(v_size))
