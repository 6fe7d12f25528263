// Payload shapes of the audit engine's HTTP API.

export type SlotValue = "present" | "absent";
export type Scenario = "strict" | "baseline" | "generous";

export interface TaxonomyCell {
  id: string;
  parent: string;
  internal: string;
  institution_name: string;
  governance_function: string;
}

export interface TaxonomySlot {
  id: string;
  cell_id: string;
  kind: string;
  diagnostic_question: string;
}

export interface Taxonomy {
  cells: TaxonomyCell[];
  slots: TaxonomySlot[];
}

export interface SheetEntryPayload {
  slot_id: string;
  value: SlotValue;
  rationale?: string;
  borderline?: boolean;
  evidence_ids?: string[];
}

export interface SubmitAck {
  revision: number;
  rater_id: string;
  updated: string[];
  scored: number;
  complete: boolean;
  // Per submitted slot: other raters' values once both sides have scored it,
  // null while the slot is still blind.
  reveals: Record<string, Record<string, SlotValue> | null>;
}

export interface RaterView {
  audit_id: string;
  rater_id: string;
  revision: number;
  entries: Required<SheetEntryPayload>[];
  complete: boolean;
  revealed: Record<string, Record<string, SlotValue>>;
}

export interface DisagreementRow {
  slot_id: string;
  values: Record<string, SlotValue>;
  rationales: Record<string, string>;
  resolved: boolean;
  resolved_value: SlotValue | null;
  criterion_cited: string | null;
}

export interface DisagreementQueue {
  audit_id: string;
  revision: number;
  raters: string[];
  complete: boolean;
  disagreements: DisagreementRow[];
  unresolved: number;
}

export interface CoverageLine {
  present: number;
  total: number;
  pct: number;
}

export interface CoverageReportPayload {
  scenario: Scenario;
  by_type: Record<string, CoverageLine>;
  by_pillar: Record<string, CoverageLine>;
  total: CoverageLine;
}

export interface ScenarioReport {
  audit_id: string;
  scenario: Scenario;
  generated_at: string;
  coverage: CoverageReportPayload;
  findings: { code: string; subject: string; detail: string }[];
}

export interface ReliabilityPayload {
  computed: {
    matrix: {
      both_present: number;
      a_only: number;
      b_only: number;
      both_absent: number;
      n: number;
    };
    p_o: string;
    p_e: string;
    kappa: string | null;
    kappa_defined: boolean;
    pabak: string;
    interpretation: string;
  } | null;
  cited_reference: {
    overall: string;
    per_pillar: Record<string, string>;
    provenance: string;
  };
  scope: string | null;
}

export interface HeatmapPayload {
  rows: string[];
  columns: string[];
  grid: number[][];
  scope?: string;
  complete?: boolean;
}

export interface EvidencePayload {
  audit_id: string;
  slot: string | null;
  mechanisms: {
    id: string;
    name: string;
    slot_ids: string[];
    description: string;
  }[];
  items: {
    id: string;
    mechanism_id: string;
    source_citation: string;
    criteria: { c1: boolean; c2a: boolean; c2b: boolean; c3: boolean };
    note: string;
  }[];
}

export interface ApiError {
  code: "validation" | "conflict" | "not-found" | "io" | string;
  message: string;
  detail: unknown;
}
