// Thin typed client over the audit engine's HTTP API.
//
// Every request/response pair is passed to an optional capture hook; the
// end-to-end tests use it to prove the blind-phase invariant over the
// traffic the workbench actually consumed.

import type {
  DisagreementQueue,
  EvidencePayload,
  HeatmapPayload,
  RaterView,
  ReliabilityPayload,
  Scenario,
  ScenarioReport,
  SheetEntryPayload,
  SubmitAck,
  Taxonomy,
} from "./types.js";

export interface Exchange {
  method: string;
  path: string;
  status: number;
  requestBody: unknown;
  responseBody: unknown;
}

export type ExchangeHook = (exchange: Exchange) => void;

export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: unknown = null
  ) {
    super(message);
  }

  get isConflict(): boolean {
    return this.code === "conflict" || this.status === 409;
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly onExchange?: ExchangeHook
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      (init.headers as Record<string, string>)["Content-Type"] = "application/json";
      init.body = JSON.stringify(body);
    }
    const response = await fetch(this.baseUrl + path, init);
    const text = await response.text();
    const parsed: unknown = text ? JSON.parse(text) : null;
    this.onExchange?.({
      method,
      path,
      status: response.status,
      requestBody: body ?? null,
      responseBody: parsed,
    });
    if (!response.ok) {
      const err = parsed as { code?: string; message?: string; detail?: unknown } | null;
      throw new ApiRequestError(
        response.status,
        err?.code ?? "error",
        err?.message ?? `${method} ${path} failed with ${response.status}`,
        err?.detail ?? null
      );
    }
    return parsed as T;
  }

  taxonomy(): Promise<Taxonomy> {
    return this.request("GET", "/api/v1/taxonomy");
  }

  createAudit(auditId: string, name: string, designClass = "undesigned"): Promise<unknown> {
    return this.request("POST", "/api/v1/audits", {
      audit_id: auditId,
      ecosystem: { name, design_class: designClass },
    });
  }

  submitEntries(
    auditId: string,
    raterId: string,
    entries: SheetEntryPayload[]
  ): Promise<SubmitAck> {
    return this.request("POST", `/api/v1/audits/${auditId}/sheets`, {
      rater_id: raterId,
      entries,
    });
  }

  raterView(auditId: string, raterId: string): Promise<RaterView> {
    return this.request("GET", `/api/v1/audits/${auditId}/sheets/${raterId}`);
  }

  disagreements(auditId: string): Promise<DisagreementQueue> {
    return this.request("GET", `/api/v1/audits/${auditId}/disagreements`);
  }

  reconcile(
    auditId: string,
    slotId: string,
    resolvedValue: string,
    criterion: string,
    note = ""
  ): Promise<unknown> {
    return this.request("POST", `/api/v1/audits/${auditId}/reconciliations`, {
      slot_id: slotId,
      resolved_value: resolvedValue,
      criterion_cited: criterion,
      discussion_note: note,
    });
  }

  report(auditId: string, scenario: Scenario): Promise<ScenarioReport> {
    return this.request("GET", `/api/v1/audits/${auditId}/report?scenario=${scenario}`);
  }

  reliability(auditId: string): Promise<ReliabilityPayload> {
    return this.request("GET", `/api/v1/audits/${auditId}/reliability`);
  }

  heatmap(auditId: string, rater?: string): Promise<HeatmapPayload> {
    const suffix = rater ? `?rater=${encodeURIComponent(rater)}` : "";
    return this.request("GET", `/api/v1/audits/${auditId}/heatmap${suffix}`);
  }

  evidence(auditId: string, slot?: string): Promise<EvidencePayload> {
    const suffix = slot ? `?slot=${encodeURIComponent(slot)}` : "";
    return this.request("GET", `/api/v1/audits/${auditId}/evidence${suffix}`);
  }
}
