"""Approval profiles, voter groups and satisfaction measures.

Candidates are identified by name (a string). The position of a name in
``ApprovalProfile.candidates`` is the candidate's *priority*: every tie in
every rule is broken in favour of the earlier position. In the live Q&A
application this order is the submission order of questions.

Voters are positional: voter ``i`` is the ``i``-th entry of
``ApprovalProfile.voters``, and voter groups are sets of such indices.

All quantities derived from profiles (scores, debts, credits, buying
times) are exact rationals (:class:`fractions.Fraction`); comparisons and
tie-breaks are therefore decided exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from dynrank.errors import EmptyGroupError, ProfileError, UnknownCandidateError


@dataclass(frozen=True)
class ApprovalProfile:
    """An approval profile: a candidate universe plus per-voter approval sets.

    Parameters
    ----------
        candidates : sequence of str
            Candidate names; the sequence order is the tie-breaking
            priority order (earlier = preferred in ties).

        voters : sequence of iterables of str
            One approval set per voter. Approval sets may be empty.

    Raises
    ------
        ProfileError
            On duplicate candidate names or approvals of unknown candidates.
    """

    candidates: tuple = ()
    voters: tuple = ()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _supporters: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, candidates: Sequence[str] = (), voters: Sequence[Iterable[str]] = ()):
        candidates = tuple(candidates)
        index = {c: i for i, c in enumerate(candidates)}
        if len(index) != len(candidates):
            raise ProfileError("duplicate candidate names")
        approval_sets = []
        for ballot in voters:
            approved = frozenset(ballot)
            unknown = approved - index.keys()
            if unknown:
                raise ProfileError(f"ballot approves unknown candidates: {sorted(unknown)}")
            approval_sets.append(approved)
        object.__setattr__(self, "candidates", candidates)
        object.__setattr__(self, "voters", tuple(approval_sets))
        object.__setattr__(self, "_index", index)
        supporters = {c: [] for c in candidates}
        for i, approved in enumerate(self.voters):
            for c in approved:
                supporters[c].append(i)
        object.__setattr__(
            self, "_supporters", {c: tuple(sup) for c, sup in supporters.items()}
        )

    @property
    def n(self) -> int:
        """Number of voters."""
        return len(self.voters)

    @property
    def m(self) -> int:
        """Number of candidates."""
        return len(self.candidates)

    def priority(self, candidate: str) -> int:
        """Tie-breaking rank of `candidate` (lower = earlier = preferred)."""
        try:
            return self._index[candidate]
        except KeyError:
            raise UnknownCandidateError(f"unknown candidate: {candidate!r}") from None

    def __contains__(self, candidate) -> bool:
        return candidate in self._index

    def supporter_indices(self, candidate: str) -> tuple:
        """Voter indices approving `candidate`, in voter order."""
        if candidate not in self._index:
            raise UnknownCandidateError(f"unknown candidate: {candidate!r}")
        return self._supporters[candidate]


def supporters(profile: ApprovalProfile, candidate: str) -> frozenset:
    """Return the voter group approving `candidate`.

    The size of the returned group is the candidate's approval score.
    """
    return frozenset(profile.supporter_indices(candidate))


def avg_satisfaction(profile: ApprovalProfile, group, candidates) -> Fraction:
    """Average number of approved members of `candidates` over the group.

    Parameters
    ----------
        group : iterable of int
            Nonempty set of voter indices.

        candidates : iterable of str
            The candidate set the satisfaction refers to.

    Returns
    -------
        fractions.Fraction
            (1/|group|) * sum over members of |A_i intersect candidates|.
    """
    members = set(group)
    if not members:
        raise EmptyGroupError("average satisfaction of an empty group is undefined")
    cand_set = set(candidates)
    total = sum(len(profile.voters[i] & cand_set) for i in members)
    return Fraction(total, len(members))


def prefix(ranking: Sequence[str], depth: int) -> frozenset:
    """First `depth` entries of a ranking as a set (clamped to its length)."""
    if depth < 0:
        raise ValueError("prefix depth must be nonnegative")
    return frozenset(ranking[:depth])


def validate_implemented(profile: ApprovalProfile, implemented: Sequence[str]) -> tuple:
    """Check an implemented sequence: known candidates, no duplicates."""
    seq = tuple(implemented)
    seen = set()
    for c in seq:
        if c not in profile:
            raise UnknownCandidateError(f"implemented candidate not in profile: {c!r}")
        if c in seen:
            raise ProfileError(f"implemented sequence repeats candidate: {c!r}")
        seen.add(c)
    return seq


# --- profile document format -------------------------------------------------
#
# JSON object with two fields:
#   "candidates": array of names, order = priority order
#   "voters":     array of ballots, each an array of approved names
# Duplicate approvals within one ballot are rejected.


def profile_from_dict(doc: dict) -> ApprovalProfile:
    """Build a profile from the JSON document structure."""
    if not isinstance(doc, dict) or "candidates" not in doc or "voters" not in doc:
        raise ProfileError("profile document needs 'candidates' and 'voters' fields")
    candidates = doc["candidates"]
    if not isinstance(candidates, list) or not all(isinstance(c, str) for c in candidates):
        raise ProfileError("'candidates' must be an array of strings")
    voters = doc["voters"]
    if not isinstance(voters, list):
        raise ProfileError("'voters' must be an array of ballots")
    for k, ballot in enumerate(voters):
        if not isinstance(ballot, list) or not all(isinstance(c, str) for c in ballot):
            raise ProfileError(f"ballot {k} must be an array of candidate names")
        if len(set(ballot)) != len(ballot):
            raise ProfileError(f"ballot {k} contains duplicate approvals")
    return ApprovalProfile(candidates, voters)


def profile_to_dict(profile: ApprovalProfile) -> dict:
    """Serialize a profile to the JSON document structure."""
    return {
        "candidates": list(profile.candidates),
        "voters": [sorted(ballot, key=profile.priority) for ballot in profile.voters],
    }


def load_profile(path) -> ApprovalProfile:
    """Read a profile document from a JSON file."""
    with open(path, "r", encoding="utf-8") as f:
        return profile_from_dict(json.load(f))


def dump_profile(profile: ApprovalProfile, path) -> None:
    """Write a profile document to a JSON file."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(profile_to_dict(profile), f, indent=1)
        f.write("\n")
