export interface RankingEntry {
  name: string;
  position: number;
  approvals: number;
}

export interface RankingPayload {
  session: string;
  rule: string;
  h: number | null;
  seq: number;
  implemented: string[];
  ranking: RankingEntry[];
}

export interface TrajectoryStep {
  ranking: string[];
  implemented: string | null;
}

export interface TrajectoryDoc {
  profile: { candidates: string[]; voters: string[][] };
  rule: string;
  h: number | null;
  steps: TrajectoryStep[];
}

export type Movement = "up" | "down" | "same" | "new";

export interface CandidateCard {
  name: string;
  position: number;
  approvals: number;
  movement: Movement;
  selectable: boolean;
}

export interface GroupGauge {
  /** representative ballot of the group, e.g. "a, b" */
  label: string;
  size: number;
  /** average satisfaction with the implemented sequence */
  implemented: number;
  /** average satisfaction with the top five ranking positions */
  topFive: number;
}
