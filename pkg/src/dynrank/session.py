"""Sequential-selection sessions and trajectories.

A session ties a rule to an evolving implemented sequence. States are
immutable snapshots; ``implement`` returns a new state and is the only
transition extending the sequence. Rebuilding a session from
(profile, rule, implemented sequence) reproduces every historical ranking,
so the implemented sequence is the only state that must be persisted.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from typing import Optional

from dynrank.errors import (
    AlreadyImplementedError,
    DepthViolationError,
    SessionError,
    UnknownCandidateError,
)
from dynrank.model import ApprovalProfile, profile_from_dict, profile_to_dict
from dynrank.rules import RULE_IDS, rank


@dataclass(frozen=True)
class SessionState:
    """Immutable snapshot of a moderation session.

    ``history`` holds one (ranking, implemented candidate) pair per past
    iteration; ``ranking`` is the current ranking, always equal to
    rank(rule, profile, implemented).
    """

    profile: ApprovalProfile
    rule: str
    implemented: tuple
    h: Optional[int]
    history: tuple
    ranking: tuple

    @property
    def t(self) -> int:
        """Current iteration number (1 before anything is implemented)."""
        return len(self.implemented) + 1


def new_session(profile: ApprovalProfile, rule: str, h: Optional[int] = None) -> SessionState:
    """Open a session with an empty implemented sequence.

    `h` restricts the moderator to the top h ranking positions; None means
    unrestricted. h = 0 would forbid every selection and is rejected.
    """
    if rule not in RULE_IDS:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULE_IDS}")
    if h is not None and h < 1:
        raise SessionError("depth restriction h must be at least 1")
    return SessionState(
        profile=profile,
        rule=rule,
        implemented=(),
        h=h,
        history=(),
        ranking=rank(rule, profile, ()),
    )


def _check_selectable(state: SessionState, candidate: str) -> None:
    if candidate in state.implemented:
        raise AlreadyImplementedError(f"candidate {candidate!r} was already implemented")
    if candidate not in state.ranking:
        raise UnknownCandidateError(f"candidate {candidate!r} not in the current ranking")
    if state.h is not None and candidate not in state.ranking[: state.h]:
        raise DepthViolationError(
            f"candidate {candidate!r} is below the depth restriction h={state.h}"
        )


def implement(state: SessionState, candidate: str) -> SessionState:
    """Implement a candidate from the current ranking and advance the session."""
    _check_selectable(state, candidate)
    implemented = state.implemented + (candidate,)
    return replace(
        state,
        implemented=implemented,
        history=state.history + ((state.ranking, candidate),),
        ranking=rank(state.rule, state.profile, implemented),
    )


def preview(state: SessionState, candidate: str) -> tuple:
    """Ranking that implementing `candidate` would produce; no state change."""
    _check_selectable(state, candidate)
    return rank(state.rule, state.profile, state.implemented + (candidate,))


def update_profile(state: SessionState, profile: ApprovalProfile) -> SessionState:
    """Swap the live profile (new candidates, changed ballots) and re-rank.

    Implemented candidates must survive the swap. Historical rankings are
    kept as recorded; debts and scores are recomputed from scratch against
    the new profile.
    """
    missing = [c for c in state.implemented if c not in profile]
    if missing:
        raise SessionError(f"new profile drops implemented candidates: {missing}")
    return replace(
        state,
        profile=profile,
        ranking=rank(state.rule, profile, state.implemented),
    )


# --- candidate cloning --------------------------------------------------------

_CLONE_PATTERN = re.compile(r"^(?P<base>.+)#(?P<idx>\d+)$")


def clone_candidates(profile: ApprovalProfile, candidate: str, count: int) -> ApprovalProfile:
    """Add `count` clones of a candidate (identical supporter sets).

    Clones are named ``<base>#k`` with consecutive indices and receive
    priorities immediately following the cloned candidate (and any clones
    it already has).
    """
    if candidate not in profile:
        raise UnknownCandidateError(f"unknown candidate: {candidate!r}")
    if count < 0:
        raise ValueError("clone count must be nonnegative")
    if count == 0:
        return profile
    match = _CLONE_PATTERN.match(candidate)
    base = match.group("base") if match else candidate
    existing = [0]
    for c in profile.candidates:
        m = _CLONE_PATTERN.match(c)
        if m and m.group("base") == base:
            existing.append(int(m.group("idx")))
    new_names = [f"{base}#{k}" for k in range(max(existing) + 1, max(existing) + 1 + count)]

    block_end = max(
        i
        for i, c in enumerate(profile.candidates)
        if c == base or (_CLONE_PATTERN.match(c) and _CLONE_PATTERN.match(c).group("base") == base)
    )
    candidates = (
        list(profile.candidates[: block_end + 1])
        + new_names
        + list(profile.candidates[block_end + 1 :])
    )
    voters = [
        set(ballot) | (set(new_names) if candidate in ballot else set())
        for ballot in profile.voters
    ]
    return ApprovalProfile(candidates, voters)


def ensure_clone_supply(profile: ApprovalProfile, h: int, horizon: int) -> ApprovalProfile:
    """Give every candidate h + horizon - 1 clones.

    With a depth restriction of h and at most `horizon` selections, this
    keeps at least h interchangeable copies of every candidate in the
    ranking throughout the session.
    """
    result = profile
    for c in profile.candidates:
        result = clone_candidates(result, c, h + horizon - 1)
    return result


def clone_base(candidate: str) -> str:
    """Base name of a candidate (strips a ``#k`` clone suffix)."""
    match = _CLONE_PATTERN.match(candidate)
    return match.group("base") if match else candidate


# --- trajectories ---------------------------------------------------------------


@dataclass(frozen=True)
class Trajectory:
    """A full selection run: rankings r^1..r^(T+1) and selections x_1..x_T.

    ``steps`` holds (ranking, implemented) pairs; the final entry carries the
    last ranking with implemented = None.
    """

    profile: ApprovalProfile
    rule: str
    h: Optional[int]
    steps: tuple

    @property
    def implemented(self) -> tuple:
        return tuple(c for _, c in self.steps if c is not None)

    def ranking_at(self, t: int) -> tuple:
        """Ranking r^t shown to the decision maker at iteration t (1-based)."""
        return self.steps[t - 1][0]

    def implemented_before(self, t: int) -> tuple:
        """The sequence X^t of candidates implemented in iterations < t."""
        return self.implemented[: t - 1]


def trajectory_from_session(state: SessionState) -> Trajectory:
    return Trajectory(
        profile=state.profile,
        rule=state.rule,
        h=state.h,
        steps=state.history + ((state.ranking, None),),
    )


def replay_trajectory(profile, rule, implemented, h=None) -> Trajectory:
    """Recompute the trajectory induced by an implemented sequence."""
    steps = []
    for t in range(len(implemented) + 1):
        prefix = tuple(implemented[:t])
        ranking = rank(rule, profile, prefix)
        selected = implemented[t] if t < len(implemented) else None
        steps.append((ranking, selected))
    return Trajectory(profile=profile, rule=rule, h=h, steps=tuple(steps))


def trajectory_to_dict(traj: Trajectory) -> dict:
    return {
        "profile": profile_to_dict(traj.profile),
        "rule": traj.rule,
        "h": traj.h,
        "steps": [
            {"ranking": list(ranking), "implemented": implemented}
            for ranking, implemented in traj.steps
        ],
    }


def trajectory_from_dict(doc: dict) -> Trajectory:
    profile = profile_from_dict(doc["profile"])
    steps = tuple(
        (tuple(step["ranking"]), step.get("implemented")) for step in doc["steps"]
    )
    return Trajectory(profile=profile, rule=doc["rule"], h=doc.get("h"), steps=steps)


def load_trajectory(path) -> Trajectory:
    with open(path, "r", encoding="utf-8") as f:
        return trajectory_from_dict(json.load(f))


def dump_trajectory(traj: Trajectory, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(trajectory_to_dict(traj), f, indent=1)
        f.write("\n")
