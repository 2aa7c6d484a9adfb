import type {
  CandidateCard,
  GroupGauge,
  Movement,
  RankingPayload,
  TrajectoryDoc,
} from "./types.js";

/**
 * Client-side mirror of one session's ranking state. All ordering comes
 * from service payloads; this class only tracks sequence numbers, derives
 * movement indicators from consecutive rankings and holds the transient
 * preview overlay.
 */
export class RankingView {
  seq = -1;
  rule = "";
  h: number | null = null;
  implemented: string[] = [];
  cards: CandidateCard[] = [];
  previewOf: string | null = null;
  previewRanking: string[] | null = null;

  /** Apply a pushed payload; stale payloads (seq not advancing) are dropped. */
  apply(payload: RankingPayload): boolean {
    if (payload.seq <= this.seq) {
      return false;
    }
    const previous = new Map(this.cards.map((c) => [c.name, c.position]));
    this.seq = payload.seq;
    this.rule = payload.rule;
    this.h = payload.h;
    this.implemented = [...payload.implemented];
    this.cards = payload.ranking.map((entry) => ({
      name: entry.name,
      position: entry.position,
      approvals: entry.approvals,
      movement: movementOf(previous.get(entry.name), entry.position),
      selectable: payload.h === null || entry.position <= payload.h,
    }));
    if (this.previewOf !== null && !this.cards.some((c) => c.name === this.previewOf)) {
      this.clearPreview();
    }
    return true;
  }

  setPreview(candidate: string, ranking: string[]): void {
    this.previewOf = candidate;
    this.previewRanking = [...ranking];
  }

  clearPreview(): void {
    this.previewOf = null;
    this.previewRanking = null;
  }

  rankingNames(): string[] {
    return this.cards.map((c) => c.name);
  }

  ruleBadge(): string {
    return this.h === null ? this.rule : `${this.rule} (top ${this.h})`;
  }
}

function movementOf(previous: number | undefined, current: number): Movement {
  if (previous === undefined) {
    return "new";
  }
  if (current < previous) {
    return "up";
  }
  if (current > previous) {
    return "down";
  }
  return "same";
}

/**
 * Satisfaction gauges for the largest like-minded voter groups (voters
 * sharing a ballot), computed from the history document's profile: average
 * approvals within the implemented sequence and within the current top
 * five positions.
 */
export function groupGauges(
  trajectory: TrajectoryDoc,
  implemented: string[],
  rankingNames: string[],
  maxGroups = 4,
): GroupGauge[] {
  const classes = new Map<string, { ballot: Set<string>; size: number }>();
  for (const ballot of trajectory.profile.voters) {
    const key = [...ballot].sort().join(", ");
    const entry = classes.get(key);
    if (entry) {
      entry.size += 1;
    } else {
      classes.set(key, { ballot: new Set(ballot), size: 1 });
    }
  }
  const implementedSet = new Set(implemented);
  const topFive = new Set(rankingNames.slice(0, 5));
  return [...classes.entries()]
    .filter(([key]) => key.length > 0)
    .sort((a, b) => b[1].size - a[1].size || (a[0] < b[0] ? -1 : 1))
    .slice(0, maxGroups)
    .map(([key, { ballot, size }]) => ({
      label: key,
      size,
      implemented: count(ballot, implementedSet),
      topFive: count(ballot, topFive),
    }));
}

function count(ballot: Set<string>, within: Set<string>): number {
  let n = 0;
  for (const name of ballot) {
    if (within.has(name)) {
      n += 1;
    }
  }
  return n;
}
