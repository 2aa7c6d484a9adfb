"""Random approval profile generators and the probabilistic decision maker.

Both generators produce polarized electorates with an identifiable voter
group (the "first party", always the first `group_size` voter indices).
Profiles are pure functions of the configuration including the seed; the
PRNG algorithm identifier is exported so experiment outputs can record it.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from dynrank.model import ApprovalProfile

#: PRNG used for all generation; recorded in experiment output.
RNG_ALGORITHM = "numpy-pcg64"

#: Click-through rates (percent) for ranking positions 1..15.
CTR_WEIGHTS = (32.5, 17.6, 11.4, 8.1, 6.1, 4.4, 3.5, 3.1, 2.6, 2.4, 1.0, 0.8, 0.7, 0.6, 0.4)

MODEL_IDS = ("blurred", "spatial")


@dataclass(frozen=True)
class GenConfig:
    """Configuration of a generated election.

    `group_size` is the number of voters in the first party. The remaining
    parameters follow the two models: approval probabilities for the
    blurred-parties model, Gaussian spread and approval radius for the
    spatial model.
    """

    model: str
    group_size: int
    seed: int
    voters: int = 60
    candidates: int = 20
    p_in: float = 0.95
    p_out: float = 0.05
    sigma: float = 0.4
    radius: float = 0.8

    def __post_init__(self):
        if self.model not in MODEL_IDS:
            raise ValueError(f"unknown model {self.model!r}; expected one of {MODEL_IDS}")
        if not 0 <= self.group_size <= self.voters:
            raise ValueError("group_size must lie between 0 and the number of voters")
        if self.model == "blurred" and self.candidates % 2:
            raise ValueError("the blurred-parties model needs an even number of candidates")


def candidate_names(count: int) -> list:
    width = len(str(count))
    return [f"c{idx:0{width}d}" for idx in range(1, count + 1)]


def gen_blurred_parties(cfg: GenConfig) -> ApprovalProfile:
    """Two-party model with per-candidate approval coin flips.

    Voters approve own-party candidates with probability `p_in` and other
    candidates with `p_out`, independently. The first half of the
    candidates belongs to the first party.
    """
    rng = np.random.default_rng(cfg.seed)
    n, m = cfg.voters, cfg.candidates
    own = np.zeros((n, m), dtype=bool)
    own[: cfg.group_size, : m // 2] = True
    own[cfg.group_size :, m // 2 :] = True
    approve = rng.random((n, m)) < np.where(own, cfg.p_in, cfg.p_out)
    names = candidate_names(m)
    return ApprovalProfile(
        names, [[names[j] for j in np.flatnonzero(approve[i])] for i in range(n)]
    )


def _spatial_counts(total: int, first: int) -> list:
    rest = total - first
    return [first, (rest + 1) // 2, rest // 2]


def gen_spatial(cfg: GenConfig) -> ApprovalProfile:
    """Three-party Euclidean model.

    Party centers sit at 0, 120 and 240 degrees on the unit circle; voters
    and candidates are sampled from isotropic Gaussians (stddev `sigma`)
    around their party center, and a voter approves every candidate within
    distance `radius`. The first party holds 7 of the 20 candidates and
    `group_size` voters; the other voters split evenly.
    """
    rng = np.random.default_rng(cfg.seed)
    n, m = cfg.voters, cfg.candidates
    angles = np.deg2rad([0.0, 120.0, 240.0])
    centers = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    cand_counts = _spatial_counts(m, (m + 2) // 3)
    voter_counts = [cfg.group_size] + [
        (n - cfg.group_size + 1) // 2,
        (n - cfg.group_size) // 2,
    ]
    cand_party = np.repeat(np.arange(3), cand_counts)
    voter_party = np.repeat(np.arange(3), voter_counts)
    cand_points = centers[cand_party] + rng.normal(0.0, cfg.sigma, size=(m, 2))
    voter_points = centers[voter_party] + rng.normal(0.0, cfg.sigma, size=(n, 2))
    dist = np.linalg.norm(voter_points[:, None, :] - cand_points[None, :, :], axis=2)
    approve = dist <= cfg.radius
    names = candidate_names(m)
    return ApprovalProfile(
        names, [[names[j] for j in np.flatnonzero(approve[i])] for i in range(n)]
    )


def generate(cfg: GenConfig) -> ApprovalProfile:
    """Generate a profile according to the configured model."""
    if cfg.model == "blurred":
        return gen_blurred_parties(cfg)
    return gen_spatial(cfg)


def first_party_candidates(cfg: GenConfig) -> int:
    """Number of candidates associated with the first party."""
    if cfg.model == "blurred":
        return cfg.candidates // 2
    return _spatial_counts(cfg.candidates, (cfg.candidates + 2) // 3)[0]


def ctr_select(ranking, rng) -> str:
    """Sample a candidate from a ranking according to click-through rates.

    Positions beyond the table (or beyond the ranking) receive zero
    probability; the remaining weights are renormalized so a candidate is
    always selected.
    """
    if not ranking:
        raise ValueError("cannot select from an empty ranking")
    k = min(len(CTR_WEIGHTS), len(ranking))
    weights = np.asarray(CTR_WEIGHTS[:k], dtype=float)
    position = rng.choice(k, p=weights / weights.sum())
    return ranking[position]
