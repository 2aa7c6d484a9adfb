import type { RankingPayload, TrajectoryDoc } from "./types.js";

/** Thin client over the moderation service; the UI never ranks locally. */
export class ServiceClient {
  constructor(readonly baseUrl: string) {}

  private async json<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      const detail = await response.text();
      throw new Error(`${method} ${path} -> ${response.status}: ${detail}`);
    }
    return (await response.json()) as T;
  }

  createSession(rule?: string, h?: number | null, candidates?: string[]): Promise<RankingPayload> {
    return this.json("POST", "/sessions", { rule, h, candidates });
  }

  submitCandidate(session: string, name: string): Promise<{ name: string; priority: number }> {
    return this.json("POST", `/sessions/${session}/candidates`, { name });
  }

  castVote(
    session: string,
    voter: string,
    candidate: string,
    action: "approve" | "retract" = "approve",
  ): Promise<{ ok: boolean; seq: number }> {
    return this.json("PUT", `/sessions/${session}/votes/${voter}`, { candidate, action });
  }

  getRanking(session: string): Promise<RankingPayload> {
    return this.json("GET", `/sessions/${session}/ranking`);
  }

  implement(session: string, candidate: string): Promise<RankingPayload> {
    return this.json("POST", `/sessions/${session}/implement`, { candidate });
  }

  preview(session: string, candidate: string): Promise<{ candidate: string; ranking: string[] }> {
    return this.json("GET", `/sessions/${session}/preview/${candidate}`);
  }

  getHistory(session: string): Promise<TrajectoryDoc> {
    return this.json("GET", `/sessions/${session}/history`);
  }

  /**
   * Subscribe to the ranking stream. Calls `onPayload` for every pushed
   * ranking; resolves when the stream ends, rejects on transport errors.
   * The caller aborts via the signal.
   */
  async stream(
    session: string,
    onPayload: (payload: RankingPayload) => void,
    signal?: AbortSignal,
  ): Promise<void> {
    const response = await fetch(`${this.baseUrl}/sessions/${session}/stream`, { signal });
    if (!response.ok || response.body === null) {
      throw new Error(`stream -> ${response.status}`);
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) {
        return;
      }
      buffer += decoder.decode(value, { stream: true });
      let frameEnd;
      while ((frameEnd = buffer.indexOf("\n\n")) >= 0) {
        const frame = buffer.slice(0, frameEnd);
        buffer = buffer.slice(frameEnd + 2);
        for (const line of frame.split("\n")) {
          if (line.startsWith("data:")) {
            onPayload(JSON.parse(line.slice("data:".length)) as RankingPayload);
          }
        }
      }
    }
  }
}
