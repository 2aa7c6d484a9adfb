import type { GroupGauge } from "./types.js";
import type { RankingView } from "./model.js";

const MOVEMENT_GLYPH: Record<string, string> = {
  up: "&#9650;",
  down: "&#9660;",
  same: "&#8211;",
  new: "&#10022;",
};

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Implemented-sequence sidebar: the candidates above the divider. */
export function renderImplemented(view: RankingView): string {
  const items = view.implemented
    .map((name, i) => `<li class="done"><span class="step">${i + 1}</span>${escapeHtml(name)}</li>`)
    .join("");
  return `<ol class="implemented" data-count="${view.implemented.length}">${items}</ol>`;
}

/** The live ranking list with movement markers, depth cutoff and preview overlay. */
export function renderRanking(view: RankingView): string {
  const overlay = new Map<string, number>();
  if (view.previewRanking) {
    view.previewRanking.forEach((name, i) => overlay.set(name, i + 1));
  }
  const rows = view.cards
    .map((card) => {
      const cls = [
        "card",
        card.selectable ? "selectable" : "locked",
        view.previewOf === card.name ? "previewed" : "",
      ]
        .filter(Boolean)
        .join(" ");
      const previewPos =
        view.previewRanking && view.previewOf !== card.name
          ? overlay.has(card.name)
            ? `<span class="preview-pos">&rarr; ${overlay.get(card.name)}</span>`
            : `<span class="preview-pos gone">&rarr; out</span>`
          : "";
      const cutoff =
        view.h !== null && card.position === view.h ? `<div class="cutoff">top ${view.h}</div>` : "";
      return (
        `<li class="${cls}" data-name="${escapeHtml(card.name)}" data-position="${card.position}">` +
        `<span class="pos">${card.position}</span>` +
        `<span class="move ${card.movement}">${MOVEMENT_GLYPH[card.movement]}</span>` +
        `<span class="name">${escapeHtml(card.name)}</span>` +
        `<span class="approvals">${card.approvals}</span>` +
        previewPos +
        `</li>${cutoff}`
      );
    })
    .join("");
  return `<ul class="ranking" data-seq="${view.seq}">${rows}</ul>`;
}

export function renderRuleBadge(view: RankingView): string {
  return `<span class="rule-badge">${escapeHtml(view.ruleBadge())}</span>`;
}

export function renderGauges(gauges: GroupGauge[]): string {
  const bars = gauges
    .map((g) => {
      const pct = Math.min(100, Math.round((g.topFive / 5) * 100));
      return (
        `<div class="gauge" data-group="${escapeHtml(g.label)}">` +
        `<span class="label">{${escapeHtml(g.label)}} &times; ${g.size}</span>` +
        `<div class="bar"><div class="fill" style="width:${pct}%"></div></div>` +
        `<span class="nums">impl ${g.implemented} &middot; top5 ${g.topFive}</span>` +
        `</div>`
      );
    })
    .join("");
  return `<div class="gauges">${bars}</div>`;
}

export function renderModerator(view: RankingView, gauges: GroupGauge[]): string {
  return (
    `<header>${renderRuleBadge(view)}</header>` +
    `<section class="columns">` +
    `<aside><h2>Implemented</h2>${renderImplemented(view)}</aside>` +
    `<main><h2>Ranking</h2>${renderRanking(view)}</main>` +
    `<aside><h2>Groups</h2>${renderGauges(gauges)}</aside>` +
    `</section>`
  );
}

/** Audience route: same ranking, vote buttons instead of implement. */
export function renderAudience(view: RankingView, approved: Set<string>): string {
  const rows = view.cards
    .map((card) => {
      const on = approved.has(card.name);
      return (
        `<li class="card" data-name="${escapeHtml(card.name)}">` +
        `<span class="pos">${card.position}</span>` +
        `<span class="name">${escapeHtml(card.name)}</span>` +
        `<button class="vote ${on ? "on" : "off"}" data-name="${escapeHtml(card.name)}">` +
        `${on ? "retract" : "upvote"} (${card.approvals})</button>` +
        `</li>`
      );
    })
    .join("");
  return (
    `<header>${renderRuleBadge(view)}</header>` +
    `<ul class="ranking audience">${rows}</ul>` +
    `<form class="submit-question"><input name="question" placeholder="Ask a question" />` +
    `<button type="submit">Submit</button></form>`
  );
}
