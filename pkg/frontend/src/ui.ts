// DOM rendering for the rater workbench. All statistics shown here come
// straight from server responses; nothing is recomputed client-side.

import { ApiClient } from "./api.js";
import { ReconciliationController } from "./reconcile.js";
import { RaterSession, SlotState } from "./session.js";
import type { HeatmapPayload, ReliabilityPayload, Scenario } from "./types.js";

const KIND_ORDER = ["A", "G", "I", "L"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class Workbench {
  private root: HTMLElement;
  private gridEl: HTMLElement;
  private evidenceEl: HTMLElement;
  private statsEl: HTMLElement;
  private queueEl: HTMLElement;
  private statusEl: HTMLElement;
  selectedSlot: string | null = null;
  private reconcile: ReconciliationController;

  constructor(
    root: HTMLElement,
    readonly client: ApiClient,
    readonly session: RaterSession
  ) {
    this.root = root;
    this.reconcile = new ReconciliationController(client, session.auditId);
    this.root.innerHTML = "";
    const header = el("header");
    header.append(
      el("h1", "title", `Audit ${session.auditId}`),
      el("span", "rater-badge", `rater: ${session.raterId}`)
    );
    this.statusEl = el("div", "status");
    this.gridEl = el("section", "grid-panel");
    this.evidenceEl = el("aside", "evidence-panel");
    this.statsEl = el("section", "stats-panel");
    this.queueEl = el("section", "queue-panel");
    const main = el("main", "layout");
    main.append(this.gridEl, this.evidenceEl);
    this.root.append(header, this.statusEl, main, this.statsEl, this.queueEl);
  }

  async start(): Promise<void> {
    await this.session.init();
    this.renderGrid();
    await this.refreshPanels();
  }

  setStatus(text: string, isError = false): void {
    this.statusEl.textContent = text;
    this.statusEl.classList.toggle("error", isError);
  }

  renderGrid(): void {
    this.gridEl.innerHTML = "";
    const table = el("table", "slot-grid");
    const head = el("tr");
    head.append(el("th", undefined, "Cell"));
    for (const kind of KIND_ORDER) head.append(el("th", undefined, kind));
    table.append(head);
    for (const row of this.session.gridRows()) {
      const tr = el("tr");
      tr.append(el("th", "cell-label", row[0].cellId));
      for (const state of row) {
        tr.append(this.slotCell(state));
      }
      table.append(tr);
    }
    this.gridEl.append(table);
    const progress = el(
      "div",
      "progress",
      `${this.session.scoredCount}/64 scored` +
        (this.session.complete ? " (complete)" : "")
    );
    this.gridEl.append(progress);
  }

  private slotCell(state: SlotState): HTMLTableCellElement {
    const td = el("td", `slot sync-${state.sync}`);
    td.dataset.slot = state.slotId;
    const mine = el(
      "span",
      "my-value",
      state.myValue === null ? "·" : state.myValue === "present" ? "✓" : "×"
    );
    td.append(mine);
    if (state.borderline) td.append(el("span", "borderline-flag", "?"));
    if (state.otherValues) {
      for (const [rater, value] of Object.entries(state.otherValues)) {
        td.append(
          el("span", "other-value", `${rater}: ${value === "present" ? "✓" : "×"}`)
        );
      }
    } else {
      td.append(el("span", "other-value hidden-value", "blind"));
    }
    td.addEventListener("click", () => void this.selectSlot(state.slotId));
    return td;
  }

  async selectSlot(slotId: string): Promise<void> {
    this.selectedSlot = slotId;
    const state = this.session.slots.get(slotId);
    if (!state) return;
    this.evidenceEl.innerHTML = "";
    this.evidenceEl.append(el("h2", undefined, slotId));
    this.evidenceEl.append(el("p", "question", state.question));

    const form = el("div", "score-form");
    for (const value of ["present", "absent"] as const) {
      const button = el("button", `score-${value}`, value);
      button.addEventListener("click", () => void this.submit(slotId, value));
      form.append(button);
    }
    const borderline = el("label", "borderline-toggle");
    const checkbox = el("input") as HTMLInputElement;
    checkbox.type = "checkbox";
    checkbox.checked = state.borderline;
    borderline.append(checkbox, document.createTextNode(" borderline"));
    const rationale = el("textarea", "rationale") as HTMLTextAreaElement;
    rationale.placeholder = "evidence basis for this judgment";
    rationale.value = state.rationale;
    form.append(borderline, rationale);
    this.evidenceEl.append(form);

    const evidence = await this.client.evidence(this.session.auditId, slotId);
    const list = el("div", "evidence-list");
    if (evidence.mechanisms.length === 0) {
      list.append(el("p", "empty", "no mechanisms claim this slot"));
    }
    for (const mechanism of evidence.mechanisms) {
      const block = el("div", "mechanism");
      block.append(el("h3", undefined, mechanism.name));
      block.append(el("p", undefined, mechanism.description));
      for (const item of evidence.items.filter(
        (i) => i.mechanism_id === mechanism.id
      )) {
        const flags = Object.entries(item.criteria)
          .filter(([, on]) => on)
          .map(([flag]) => flag)
          .join(" ");
        block.append(el("p", "evidence-item", `${item.source_citation} [${flags}]`));
      }
      list.append(block);
    }
    this.evidenceEl.append(list);
  }

  private async submit(slotId: string, value: "present" | "absent"): Promise<void> {
    const form = this.evidenceEl.querySelector<HTMLTextAreaElement>(".rationale");
    const borderline =
      this.evidenceEl.querySelector<HTMLInputElement>(".borderline-toggle input");
    this.renderGrid(); // show the pending state immediately
    const result = await this.session.scoreSlot(
      slotId,
      value,
      form?.value ?? "",
      borderline?.checked ?? false
    );
    if (!result.ok && result.retriable) {
      this.setStatus(`submission conflicted, refetched; retry ${slotId}`, true);
    } else if (!result.ok) {
      this.setStatus(result.error ?? "submission failed", true);
    } else {
      this.setStatus(`${slotId} = ${value} confirmed`);
    }
    this.renderGrid();
    await this.refreshPanels();
  }

  async refreshPanels(): Promise<void> {
    this.statsEl.innerHTML = "";
    this.statsEl.append(el("h2", undefined, "Live statistics (server-computed)"));
    try {
      const reliability: ReliabilityPayload = await this.client.reliability(
        this.session.auditId
      );
      if (reliability.computed) {
        const kappa = reliability.computed.kappa ?? "undefined";
        this.statsEl.append(
          el(
            "p",
            "kappa",
            `kappa = ${kappa} (${reliability.computed.interpretation}), ` +
              `PABAK = ${reliability.computed.pabak}, scope: ${reliability.scope}`
          )
        );
      } else {
        this.statsEl.append(el("p", "kappa", "kappa: awaiting dual submissions"));
      }
    } catch {
      this.statsEl.append(el("p", "kappa", "kappa: not available yet"));
    }
    try {
      const heatmap = await this.client.heatmap(
        this.session.auditId,
        this.session.raterId
      );
      this.statsEl.append(renderHeatmap(heatmap));
    } catch {
      this.statsEl.append(el("p", undefined, "heatmap: not available yet"));
    }
    await this.renderQueue();
  }

  private async renderQueue(): Promise<void> {
    this.queueEl.innerHTML = "";
    this.queueEl.append(el("h2", undefined, "Disagreement queue"));
    let queue;
    try {
      queue = await this.reconcile.refresh();
    } catch {
      this.queueEl.append(el("p", "empty", "queue opens once both raters submit"));
      return;
    }
    if (queue.disagreements.length === 0) {
      this.queueEl.append(el("p", "empty", "no disagreements"));
    }
    for (const row of queue.disagreements) {
      const item = el("div", row.resolved ? "queue-row resolved" : "queue-row");
      const values = Object.entries(row.values)
        .map(([rater, value]) => `${rater}: ${value}`)
        .join(", ");
      item.append(el("span", "queue-slot", row.slot_id));
      item.append(el("span", "queue-values", values));
      if (row.resolved) {
        item.append(
          el(
            "span",
            "queue-resolution",
            `resolved ${row.resolved_value} (${row.criterion_cited})`
          )
        );
      } else {
        for (const value of ["present", "absent"] as const) {
          const button = el("button", "resolve-button", `resolve ${value}`);
          button.addEventListener("click", async () => {
            const outcome = await this.reconcile.resolve(
              row.slot_id,
              value,
              value === "absent" ? "C1" : "C2"
            );
            if (!outcome.ok) this.setStatus(outcome.error ?? "rejected", true);
            await this.refreshPanels();
          });
          item.append(button);
        }
      }
      this.queueEl.append(item);
    }
    const summary = el(
      "p",
      "queue-summary",
      `${this.reconcile.unresolvedCount} unresolved; report ${
        this.reconcile.reportReady ? "ready" : "pending"
      }`
    );
    if (this.reconcile.reportReady && queue.complete) {
      const link = el("button", "report-link", "view final report");
      link.addEventListener("click", () => void this.showReport());
      summary.append(link);
    }
    this.queueEl.append(summary);
  }

  private async showReport(): Promise<void> {
    const scenarios: Scenario[] = ["strict", "baseline", "generous"];
    const parts: string[] = [];
    for (const scenario of scenarios) {
      const report = await this.client.report(this.session.auditId, scenario);
      parts.push(
        `${scenario}: ${report.coverage.total.present}/64 (${report.coverage.total.pct}%)`
      );
    }
    this.setStatus(`consensus totals — ${parts.join("; ")}`);
  }
}

function renderHeatmap(payload: HeatmapPayload): HTMLElement {
  const table = el("table", "heatmap");
  const head = el("tr");
  head.append(el("th", undefined, ""));
  for (const column of payload.columns) head.append(el("th", undefined, column));
  table.append(head);
  payload.rows.forEach((row, i) => {
    const tr = el("tr");
    tr.append(el("th", undefined, row));
    for (const value of payload.grid[i]) {
      tr.append(el("td", value ? "hot" : "cold", value ? "1" : "0"));
    }
    table.append(tr);
  });
  return table;
}
