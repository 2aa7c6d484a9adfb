import { ServiceClient } from "./api.js";
import { RankingView, groupGauges } from "./model.js";
import { renderAudience, renderModerator } from "./render.js";
import type { GroupGauge } from "./types.js";

const SERVICE_URL = (window as unknown as { DYNRANK_SERVICE?: string }).DYNRANK_SERVICE
  ?? "http://127.0.0.1:8008";

function voterToken(): string {
  let token = localStorage.getItem("dynrank-voter");
  if (!token) {
    token = `v-${Math.random().toString(36).slice(2, 10)}`;
    localStorage.setItem("dynrank-voter", token);
  }
  return token;
}

/**
 * One connected session view. Reconnection replays the history endpoint and
 * resubscribes; the only durable client state is the session id in the URL.
 */
class SessionController {
  readonly client = new ServiceClient(SERVICE_URL);
  readonly view = new RankingView();
  gauges: GroupGauge[] = [];
  approved = new Set<string>();
  private abort = new AbortController();

  constructor(
    readonly sessionId: string,
    readonly mode: "moderator" | "audience",
    readonly root: HTMLElement,
  ) {}

  async connect(): Promise<void> {
    this.view.apply(await this.client.getRanking(this.sessionId));
    await this.refreshGauges();
    this.render();
    void this.subscribe();
  }

  private async subscribe(): Promise<void> {
    for (;;) {
      try {
        await this.client.stream(
          this.sessionId,
          (payload) => {
            if (this.view.apply(payload)) {
              void this.refreshGauges().then(() => this.render());
            }
          },
          this.abort.signal,
        );
      } catch {
        if (this.abort.signal.aborted) {
          return;
        }
      }
      await new Promise((resolve) => setTimeout(resolve, 1000));
      try {
        await this.client.getHistory(this.sessionId); // replay to validate
        this.view.apply(await this.client.getRanking(this.sessionId));
        this.render();
      } catch {
        // service still down; keep retrying
      }
    }
  }

  private async refreshGauges(): Promise<void> {
    const history = await this.client.getHistory(this.sessionId);
    this.gauges = groupGauges(history, this.view.implemented, this.view.rankingNames());
  }

  async implementClick(candidate: string): Promise<void> {
    const payload = await this.client.implement(this.sessionId, candidate);
    this.view.clearPreview();
    if (this.view.apply(payload)) {
      await this.refreshGauges();
    }
    this.render();
  }

  async previewHover(candidate: string): Promise<void> {
    const result = await this.client.preview(this.sessionId, candidate);
    this.view.setPreview(candidate, result.ranking);
    this.render();
  }

  previewLeave(): void {
    this.view.clearPreview();
    this.render();
  }

  async voteToggle(candidate: string): Promise<void> {
    const action = this.approved.has(candidate) ? "retract" : "approve";
    await this.client.castVote(this.sessionId, voterToken(), candidate, action);
    if (action === "approve") {
      this.approved.add(candidate);
    } else {
      this.approved.delete(candidate);
    }
  }

  async submitQuestion(name: string): Promise<void> {
    await this.client.submitCandidate(this.sessionId, name);
  }

  render(): void {
    this.root.innerHTML =
      this.mode === "moderator"
        ? renderModerator(this.view, this.gauges)
        : renderAudience(this.view, this.approved);
    this.wire();
  }

  private wire(): void {
    if (this.mode === "moderator") {
      for (const card of this.root.querySelectorAll<HTMLElement>(".card.selectable")) {
        const name = card.dataset.name!;
        card.addEventListener("click", () => void this.implementClick(name));
        card.addEventListener("mouseenter", () => void this.previewHover(name));
        card.addEventListener("mouseleave", () => this.previewLeave());
      }
      return;
    }
    for (const button of this.root.querySelectorAll<HTMLButtonElement>("button.vote")) {
      button.addEventListener("click", (event) => {
        event.preventDefault();
        void this.voteToggle(button.dataset.name!);
      });
    }
    const form = this.root.querySelector<HTMLFormElement>("form.submit-question");
    form?.addEventListener("submit", (event) => {
      event.preventDefault();
      const input = form.querySelector<HTMLInputElement>("input[name=question]")!;
      if (input.value.trim()) {
        void this.submitQuestion(input.value.trim());
        input.value = "";
      }
    });
  }
}

function route(): void {
  const root = document.getElementById("app")!;
  const match = location.hash.match(/^#\/(moderator|audience)\/([\w-]+)$/);
  if (!match) {
    root.innerHTML =
      `<div class="landing"><h1>dynrank</h1>` +
      `<p>Open <code>#/moderator/&lt;session&gt;</code> or` +
      ` <code>#/audience/&lt;session&gt;</code>.</p></div>`;
    return;
  }
  const controller = new SessionController(
    match[2],
    match[1] as "moderator" | "audience",
    root,
  );
  void controller.connect();
}

window.addEventListener("hashchange", route);
window.addEventListener("DOMContentLoaded", route);
