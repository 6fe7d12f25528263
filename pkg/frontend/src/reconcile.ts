// Reconciliation flow: work the disagreement queue down to a consensus.

import { ApiClient, ApiRequestError } from "./api.js";
import type { DisagreementQueue, DisagreementRow } from "./types.js";

export interface ResolveOutcome {
  ok: boolean;
  error?: string;
  unresolved: number;
}

export class ReconciliationController {
  queue: DisagreementRow[] = [];
  raters: string[] = [];
  lastError: string | null = null;

  constructor(readonly client: ApiClient, readonly auditId: string) {}

  async refresh(): Promise<DisagreementQueue> {
    const payload = await this.client.disagreements(this.auditId);
    this.queue = payload.disagreements;
    this.raters = payload.raters;
    return payload;
  }

  get unresolvedCount(): number {
    return this.queue.filter((d) => !d.resolved).length;
  }

  /** Queue is clear: every disputed slot carries a resolution (unrecorded
   * slots fall to the server's conservative default at report time). */
  get reportReady(): boolean {
    return this.unresolvedCount === 0;
  }

  async resolve(
    slotId: string,
    value: "present" | "absent",
    criterion: "C1" | "C2" | "C3" | "conservative-default",
    note = ""
  ): Promise<ResolveOutcome> {
    this.lastError = null;
    try {
      await this.client.reconcile(this.auditId, slotId, value, criterion, note);
    } catch (error) {
      // Server-rejected resolutions (e.g. a slot that is not disputed)
      // surface inline and leave the queue untouched.
      this.lastError =
        error instanceof ApiRequestError ? error.message : String(error);
      return { ok: false, error: this.lastError, unresolved: this.unresolvedCount };
    }
    await this.refresh();
    return { ok: true, unresolved: this.unresolvedCount };
  }
}
