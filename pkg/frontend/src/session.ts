// One rater's scoring session: grid state, optimistic submission with
// rollback, and blind-phase handling of the other rater's values.
//
// The session never computes agreement or coverage statistics itself; the
// stats panels always display what the server returns.

import { ApiClient, ApiRequestError } from "./api.js";
import type {
  RaterView,
  SheetEntryPayload,
  SlotValue,
  Taxonomy,
  TaxonomySlot,
} from "./types.js";

export type SyncState = "unscored" | "pending" | "confirmed" | "unsynced";

export interface SlotState {
  slotId: string;
  cellId: string;
  kind: string;
  question: string;
  myValue: SlotValue | null;
  rationale: string;
  borderline: boolean;
  sync: SyncState;
  // Other raters' values; stays null until the server reveals them
  // (i.e. until both raters have submitted the slot).
  otherValues: Record<string, SlotValue> | null;
}

export interface ScoreResult {
  ok: boolean;
  retriable: boolean;
  error?: string;
}

export class RaterSession {
  readonly slots = new Map<string, SlotState>();
  private taxonomyLoaded = false;

  constructor(
    readonly client: ApiClient,
    readonly auditId: string,
    readonly raterId: string
  ) {}

  async init(): Promise<void> {
    const taxonomy: Taxonomy = await this.client.taxonomy();
    for (const slot of taxonomy.slots) {
      this.slots.set(slot.id, emptySlotState(slot));
    }
    this.taxonomyLoaded = true;
    await this.refresh();
  }

  get scoredCount(): number {
    let count = 0;
    for (const state of this.slots.values()) {
      if (state.myValue !== null && state.sync !== "unsynced") count += 1;
    }
    return count;
  }

  get complete(): boolean {
    return this.taxonomyLoaded && this.scoredCount === this.slots.size;
  }

  revealedSlots(): string[] {
    return [...this.slots.values()]
      .filter((s) => s.otherValues !== null)
      .map((s) => s.slotId);
  }

  /** Submit one judgment. Optimistic: the grid updates immediately and rolls
   * back if the server rejects. A conflict asks the caller to retry after
   * the automatic refetch. */
  async scoreSlot(
    slotId: string,
    value: SlotValue,
    rationale = "",
    borderline = false
  ): Promise<ScoreResult> {
    const state = this.slots.get(slotId);
    if (!state) return { ok: false, retriable: false, error: `unknown slot ${slotId}` };
    const before = { ...state };
    state.myValue = value;
    state.rationale = rationale;
    state.borderline = borderline;
    state.sync = "pending";
    const entry: SheetEntryPayload = {
      slot_id: slotId,
      value,
      rationale,
      borderline,
    };
    try {
      const ack = await this.client.submitEntries(this.auditId, this.raterId, [entry]);
      state.sync = "confirmed";
      const reveal = ack.reveals[slotId];
      if (reveal) {
        state.otherValues = reveal;
      }
      return { ok: true, retriable: false };
    } catch (error) {
      if (error instanceof ApiRequestError && error.isConflict) {
        // Server state wins: roll back, refetch, prompt a retry.
        Object.assign(state, before);
        await this.refresh();
        return { ok: false, retriable: true, error: error.message };
      }
      if (error instanceof ApiRequestError) {
        Object.assign(state, before);
        return { ok: false, retriable: false, error: error.message };
      }
      // Network failure mid-submit: keep the judgment locally, mark it
      // unsynced so the user can retry.
      state.sync = "unsynced";
      return { ok: false, retriable: true, error: String(error) };
    }
  }

  /** Pull the server's rater-scoped view and resynchronize local state. */
  async refresh(): Promise<RaterView> {
    const view = await this.client.raterView(this.auditId, this.raterId);
    for (const entry of view.entries) {
      const state = this.slots.get(entry.slot_id);
      if (!state) continue;
      state.myValue = entry.value;
      state.rationale = entry.rationale;
      state.borderline = entry.borderline;
      state.sync = "confirmed";
    }
    for (const [slotId, others] of Object.entries(view.revealed)) {
      const state = this.slots.get(slotId);
      if (state) state.otherValues = others;
    }
    return view;
  }

  /** Grid rows in canonical order for rendering: 16 cells x 4 kinds. */
  gridRows(): SlotState[][] {
    const rows: SlotState[][] = [];
    const byCell = new Map<string, SlotState[]>();
    for (const state of this.slots.values()) {
      const row = byCell.get(state.cellId) ?? [];
      row.push(state);
      byCell.set(state.cellId, row);
    }
    for (const row of byCell.values()) {
      const order = ["A", "G", "I", "L"];
      row.sort((a, b) => order.indexOf(a.kind) - order.indexOf(b.kind));
      rows.push(row);
    }
    return rows;
  }
}

function emptySlotState(slot: TaxonomySlot): SlotState {
  return {
    slotId: slot.id,
    cellId: slot.cell_id,
    kind: slot.kind,
    question: slot.diagnostic_question,
    myValue: null,
    rationale: "",
    borderline: false,
    sync: "unscored",
    otherValues: null,
  };
}
