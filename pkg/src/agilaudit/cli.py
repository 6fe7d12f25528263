"""Command-line interface for the audit engine.

Exit codes: 0 ok, 1 validation (incl. unknown ids), 2 revision conflict,
3 storage I/O. Environment: AGIL_DATA_DIR (default ./data), AGIL_PORT
(default 8080).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from . import datasets, reporting, taxonomy
from . import reliability as reliability_mod
from .coverage import EcosystemReport, CoverageLine, CoverageReport, evaluate_prediction
from .document import AuditDocument, Ecosystem, document_from_dict, document_to_dict
from .errors import AuditError, ConflictError, NotFoundError, StorageError, ValidationError
from .evidence import corpus_from_dict, corpus_to_dict, validate_corpus
from .frameworks import collective_coverage, coverage_from_dict, principle_gaps, strong_count, tier_warnings
from .media import aggregate_media, capability_check, correction_loop, status_capability_warnings
from .pipeline import consensus_sheet, run_pipeline, scenario_sheets
from .scoring import (
    SCENARIOS,
    ScoreSheet,
    SheetEntry,
    record_from_dict,
    sheet_from_dict,
    sheet_to_dict,
)
from .store import DocumentStore

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFLICT = 2
EXIT_IO = 3


def _print_json(data) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def _store(args) -> DocumentStore:
    return DocumentStore(args.data_dir)


def _load_json_file(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise StorageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def _unwrap_payload(data: dict) -> dict:
    # Accept both bare payloads and reference-dataset envelopes.
    return data["payload"] if isinstance(data, dict) and "payload" in data else data


# --- audit ------------------------------------------------------------------

def cmd_audit_new(args) -> int:
    ecosystem = Ecosystem(args.name, args.description, args.design_class)
    doc = None
    if args.corpus:
        corpus = corpus_from_dict(_unwrap_payload(_load_json_file(args.corpus)))
        doc = AuditDocument(audit_id=args.id, ecosystem=ecosystem, corpus=corpus)
    created = _store(args).create(args.id, ecosystem, doc)
    print(f"created audit {created.audit_id!r} at revision {created.revision}")
    return EXIT_OK


def cmd_audit_show(args) -> int:
    doc = _store(args).load(args.id)
    if args.json:
        _print_json(document_to_dict(doc))
        return EXIT_OK
    print(f"audit {doc.audit_id} (revision {doc.revision})")
    print(f"  ecosystem: {doc.ecosystem.name} [{doc.ecosystem.design_class}]")
    print(f"  sheets: {', '.join(s.rater_id for s in doc.sheets) or 'none'}")
    print(f"  mechanisms: {len(doc.corpus.mechanisms)}, evidence items: {len(doc.corpus.items)}")
    print(f"  reconciliations: {len(doc.reconciliations)}")
    print(f"  borderline cases: {len(doc.borderline_registry)}")
    print(f"  media assessment entries: {len(doc.media_assessment)}")
    return EXIT_OK


def cmd_audit_export(args) -> int:
    doc = _store(args).load(args.id)
    text = json.dumps(document_to_dict(doc), indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"exported {args.id} to {args.out}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_audit_import(args) -> int:
    data = _unwrap_payload(_load_json_file(args.file))
    doc = document_from_dict(data)
    _store(args).import_document(doc, overwrite=args.overwrite)
    print(f"imported audit {doc.audit_id!r} at revision {doc.revision}")
    return EXIT_OK


# --- evidence -----------------------------------------------------------------

def cmd_evidence_add(args) -> int:
    payload = _unwrap_payload(_load_json_file(args.corpus))
    incoming = corpus_from_dict(payload)

    def mutation(doc: AuditDocument) -> AuditDocument:
        if args.replace:
            merged = incoming
        else:
            merged = corpus_from_dict(
                {
                    "mechanisms": [m for m in corpus_to_dict(doc.corpus)["mechanisms"]]
                    + corpus_to_dict(incoming)["mechanisms"],
                    "items": [i for i in corpus_to_dict(doc.corpus)["items"]]
                    + corpus_to_dict(incoming)["items"],
                    "project_survey_note": incoming.project_survey_note
                    or doc.corpus.project_survey_note,
                }
            )
        return replace(doc, corpus=merged)

    doc = _store(args).update_latest(args.audit, mutation)
    diagnostics = validate_corpus(doc.corpus)
    print(f"corpus now has {len(doc.corpus.mechanisms)} mechanisms, {len(doc.corpus.items)} items")
    for diag in diagnostics:
        print(f"  warning [{diag.code}] {diag.subject}: {diag.message}")
    return EXIT_OK


def cmd_evidence_list(args) -> int:
    doc = _store(args).load(args.audit)
    if args.json:
        _print_json(corpus_to_dict(doc.corpus))
        return EXIT_OK
    for mechanism in doc.corpus.mechanisms:
        flags = doc.corpus.mechanism_flags(mechanism.id)
        print(f"{mechanism.id}: {mechanism.name} -> {', '.join(mechanism.slot_ids)}")
        print(
            f"  criteria: c1={'y' if flags.c1 else 'n'} c2a={'y' if flags.c2a else 'n'} "
            f"c2b={'y' if flags.c2b else 'n'} c3={'y' if flags.c3 else 'n'}"
        )
    diagnostics = validate_corpus(doc.corpus)
    for diag in diagnostics:
        print(f"warning [{diag.code}] {diag.subject}: {diag.message}")
    return EXIT_OK


# --- scoring ---------------------------------------------------------------

def cmd_score_import(args) -> int:
    payload = _unwrap_payload(_load_json_file(args.file))
    sheet = sheet_from_dict({**payload, "audit_id": args.audit})

    def mutation(doc: AuditDocument) -> AuditDocument:
        return doc.with_sheet(sheet)

    doc = _store(args).update_latest(args.audit, mutation)
    print(
        f"imported sheet for rater {sheet.rater_id!r} "
        f"({len(sheet.entries)}/64 slots); revision {doc.revision}"
    )
    return EXIT_OK


def cmd_score_enter(args) -> int:
    taxonomy.require_slot(args.slot)
    entry = SheetEntry(
        slot_id=args.slot,
        value=args.value,
        rationale=args.rationale,
        borderline=args.borderline,
        evidence_ids=tuple(args.evidence.split(",")) if args.evidence else (),
    )

    def mutation(doc: AuditDocument) -> AuditDocument:
        sheet = doc.sheet_for(args.rater) or ScoreSheet(args.rater, args.audit, ())
        return doc.with_sheet(sheet.with_entry(entry))

    doc = _store(args).update_latest(args.audit, mutation)
    sheet = doc.sheet_for(args.rater)
    print(f"{args.slot} = {args.value} for rater {args.rater!r} ({len(sheet.entries)}/64 scored)")
    return EXIT_OK


def cmd_reconcile(args) -> int:
    store = _store(args)
    doc = store.load(args.audit)
    raters = [s for s in doc.sheets if s.rater_id != "consensus"]
    if len(raters) < 2:
        raise ValidationError("reconciliation requires two rater sheets")
    a, b = raters[0], raters[1]
    if args.slot not in a.by_slot or args.slot not in b.by_slot:
        raise ValidationError(f"slot {args.slot} is not scored by both raters")
    va, vb = a.by_slot[args.slot].value, b.by_slot[args.slot].value
    if va == vb:
        raise ValidationError(f"slot {args.slot} is not disputed")
    record = record_from_dict(
        {
            "slot_id": args.slot,
            "rater_values": {a.rater_id: va, b.rater_id: vb},
            "resolved_value": args.value,
            "criterion_cited": args.criterion,
            "discussion_note": args.note,
        }
    )

    def mutation(current: AuditDocument) -> AuditDocument:
        kept = tuple(r for r in current.reconciliations if r.slot_id != args.slot)
        return replace(current, reconciliations=kept + (record,))

    doc = store.update_latest(args.audit, mutation)
    print(f"recorded resolution for {args.slot}: {args.value} (citing {args.criterion})")
    return EXIT_OK


# --- statistics and reports ---------------------------------------------------

def cmd_kappa(args) -> int:
    doc = _store(args).load(args.audit)
    raters = [s for s in doc.sheets if s.rater_id != "consensus"]
    if len(raters) < 2:
        raise ValidationError("kappa requires two rater sheets")
    stats = reliability_mod.reliability_stats(raters[0], raters[1], args.pillar or "all")
    if args.json:
        _print_json(stats.as_dict())
        return EXIT_OK
    matrix = stats.matrix
    print(f"agreement matrix (n={matrix.n}, filter={args.pillar or 'all'})")
    print(f"  {'':>12} B present  B absent")
    print(f"  {'A present':>12} {matrix.both_present:>9} {matrix.a_only:>9}")
    print(f"  {'A absent':>12} {matrix.b_only:>9} {matrix.both_absent:>9}")
    kappa = reliability_mod.render6(stats.kappa) if stats.kappa is not None else "undefined"
    print(f"  p_o = {reliability_mod.render6(stats.p_o)}")
    print(f"  p_e = {reliability_mod.render6(stats.p_e)}")
    print(f"  kappa = {kappa} ({stats.interpretation})")
    print(f"  PABAK = {reliability_mod.render6(stats.pabak)}")
    return EXIT_OK


def cmd_report(args) -> int:
    doc = _store(args).load(args.audit)
    bundle = run_pipeline(doc, generated_at=args.generated_at)
    markdown = reporting.render_markdown(bundle)
    if args.json:
        Path(args.json).write_text(reporting.export_bundle(bundle) + "\n", encoding="utf-8")
        print(f"wrote JSON bundle to {args.json}")
    if args.heatmap:
        Path(args.heatmap).write_text(
            reporting.heatmap_csv(consensus_sheet(doc)), encoding="utf-8"
        )
        print(f"wrote heatmap CSV to {args.heatmap}")
    if args.out:
        Path(args.out).write_text(markdown + "\n", encoding="utf-8")
        print(f"wrote Markdown report to {args.out}")
    elif not args.json and not args.heatmap:
        print(markdown)
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    doc = _store(args).load(args.audit)
    sheets = scenario_sheets(doc)
    from .coverage import compute_coverage

    rows = {}
    for scenario in SCENARIOS:
        report = compute_coverage(sheets[scenario], scenario)
        rows[scenario] = report.as_dict()
    if args.json:
        _print_json(rows)
        return EXIT_OK
    print(f"sensitivity analysis for {args.audit} ({len(doc.borderline_registry)} borderline cases)")
    for scenario in ("strict", "baseline", "generous"):
        total = rows[scenario]["total"]
        by_pillar = rows[scenario]["by_pillar"]
        pillars = ", ".join(f"{p}={by_pillar[p]['present']}" for p in taxonomy.PILLAR_CODES)
        print(f"  {scenario:>8}: {total['present']}/64 ({total['pct']}%)  [{pillars}]")
    return EXIT_OK


def cmd_media(args) -> int:
    doc = _store(args).load(args.audit)
    aggregate = aggregate_media(doc.media_assessment) if doc.media_assessment else None
    sheet = consensus_sheet(doc)
    capability = capability_check(sheet, doc.boundary_cell_overrides())
    warnings = (
        status_capability_warnings(doc.media_assessment, capability)
        if doc.media_assessment
        else []
    )
    if args.json:
        _print_json(
            {
                "aggregate": aggregate,
                "capability": [c.as_dict() for c in capability],
                "warnings": warnings,
            }
        )
        return EXIT_OK
    if aggregate:
        print(
            f"media status: {aggregate['functional']} functional, "
            f"{aggregate['proto']} proto-functional, {aggregate['absent']} absent"
        )
    else:
        print("media status: no assessment recorded")
    capable = [c for c in capability if c.capable]
    print(f"capability: {len(capable)} of {len(capability)} pathways meet the minimum configuration")
    for result in capability:
        if not result.capable:
            missing = ", ".join(r.slot_id for r in result.blocked_reasons)
            print(f"  {result.pathway_id}: blocked (missing {missing})")
    for warning in warnings:
        print(f"warning: {warning}")
    return EXIT_OK


def cmd_loop(args) -> int:
    doc = _store(args).load(args.audit)
    sheet = consensus_sheet(doc)
    incident = None
    if args.incident:
        incident = datasets.load_reference("clawhavoc-incident") if args.incident == "clawhavoc" else None
    steps = correction_loop(sheet, incident)
    if args.json:
        _print_json([s.as_dict() for s in steps])
        return EXIT_OK
    if incident:
        print(f"correction loop against incident {incident.id!r}: {incident.description}")
    for step in steps:
        ready = ", ".join(step.ready_cells) or "-"
        print(f"  {step.step}: {step.status} (requires {', '.join(step.required_cells)}; ready: {ready})")
    return EXIT_OK


def cmd_frameworks(args) -> int:
    matrices = datasets.framework_matrices()
    if args.path:
        for path in args.path:
            payload = _unwrap_payload(_load_json_file(path))
            if isinstance(payload, list):
                matrices.extend(coverage_from_dict(f) for f in payload)
            else:
                matrices.append(coverage_from_dict(payload))
    if args.refs:
        wanted = set(args.refs.split(","))
        matrices = [m for m in matrices if m.framework_id in wanted]
        unknown = wanted - {m.framework_id for m in matrices}
        if unknown:
            raise ValidationError(f"unknown framework ids: {sorted(unknown)}")
    if not matrices:
        raise ValidationError("no framework matrices selected")
    collective = collective_coverage(matrices)
    result = {
        "strong_counts": {m.framework_id: strong_count(m) for m in matrices},
        "covered_cells": sorted(collective["covered_cells"]),
        "universal_gaps": sorted(collective["universal_gaps"]),
        "tier_warnings": tier_warnings(matrices),
    }
    if args.ostrom:
        mappings = datasets.ostrom_mapping()
        result["ostrom_gaps"] = sorted(principle_gaps(mappings))
    if args.json:
        _print_json(result)
        return EXIT_OK
    for fid, count in sorted(result["strong_counts"].items()):
        print(f"{fid}: {count} strong cells")
    print(f"universal gaps: {', '.join(result['universal_gaps']) or 'none'}")
    for warning in result["tier_warnings"]:
        print(f"warning: {warning}")
    if args.ostrom:
        print(f"design-principle gaps: {', '.join(result['ostrom_gaps'])}")
    return EXIT_OK


def cmd_predict(args) -> int:
    payload = _unwrap_payload(_load_json_file(args.input))
    if not isinstance(payload, list):
        raise ValidationError("predict input must be a JSON list of ecosystem entries")
    reports = []
    for entry in payload:
        pillar_present = entry.get("pillar_present")
        if pillar_present is None:
            raise ValidationError(
                f"entry {entry.get('ecosystem_id')!r} needs pillar_present counts"
            )
        report = CoverageReport(
            scenario=entry.get("scenario", "baseline"),
            by_type={k: CoverageLine(0, 16) for k in taxonomy.KIND_CODES},
            by_pillar={
                k: CoverageLine(int(pillar_present[k]), 16) for k in taxonomy.PILLAR_CODES
            },
            total=CoverageLine(sum(int(pillar_present[k]) for k in taxonomy.PILLAR_CODES), 64),
        )
        reports.append(
            EcosystemReport(entry["ecosystem_id"], entry["design_class"], report)
        )
    outcome = evaluate_prediction(reports)
    result = {
        "verdicts": [v.as_dict() for v in outcome["verdicts"]],
        "summary": outcome["summary"],
    }
    if args.json:
        _print_json(result)
        return EXIT_OK
    for verdict in result["verdicts"]:
        print(
            f"{verdict['ecosystem_id']} ({verdict['design_class']}): "
            f"L={verdict['l_pct']}% G={verdict['g_pct']}% -> {verdict['verdict']}"
        )
    summary = result["summary"]
    if summary["prediction_holds"] is None:
        print(f"summary: {summary['note']}")
    else:
        status = "holds" if summary["prediction_holds"] else "does not hold"
        print(
            f"summary: prediction {status} "
            f"({summary['holds']} of {summary['undesigned_count']} undesigned ecosystems)"
        )
    return EXIT_OK


def cmd_taxonomy_dump(args) -> int:
    _print_json(taxonomy.as_dict())
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    app = create_app(DocumentStore(args.data_dir), workbench_dir=args.workbench)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agil-audit",
        description="Governance-coverage audit engine: score, reconcile, and report on the 64-slot diagnostic.",
    )
    parser.add_argument(
        "--data-dir",
        default=os.environ.get("AGIL_DATA_DIR", "./data"),
        help="audit document directory (env AGIL_DATA_DIR, default ./data)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    audit = sub.add_parser("audit", help="manage audit documents")
    audit_sub = audit.add_subparsers(dest="subcommand", required=True)
    new = audit_sub.add_parser("new", help="create an audit")
    new.add_argument("--id", required=True)
    new.add_argument("--name", required=True)
    new.add_argument("--description", default="")
    new.add_argument("--design-class", choices=["undesigned", "designed"], default="undesigned")
    new.add_argument("--corpus", help="seed the evidence corpus from a JSON file")
    new.set_defaults(func=cmd_audit_new)
    show = audit_sub.add_parser("show", help="summarize an audit")
    show.add_argument("--id", required=True)
    show.add_argument("--json", action="store_true")
    show.set_defaults(func=cmd_audit_show)
    export = audit_sub.add_parser("export", help="export the document JSON")
    export.add_argument("--id", required=True)
    export.add_argument("--out")
    export.set_defaults(func=cmd_audit_export)
    imp = audit_sub.add_parser("import", help="import a document JSON")
    imp.add_argument("file")
    imp.add_argument("--overwrite", action="store_true")
    imp.set_defaults(func=cmd_audit_import)

    evidence = sub.add_parser("evidence", help="manage the evidence corpus")
    evidence_sub = evidence.add_subparsers(dest="subcommand", required=True)
    add = evidence_sub.add_parser("add", help="merge a corpus JSON file into the audit")
    add.add_argument("--audit", required=True)
    add.add_argument("--corpus", required=True)
    add.add_argument("--replace", action="store_true")
    add.set_defaults(func=cmd_evidence_add)
    lst = evidence_sub.add_parser("list", help="list mechanisms and their criteria")
    lst.add_argument("--audit", required=True)
    lst.add_argument("--json", action="store_true")
    lst.set_defaults(func=cmd_evidence_list)

    score = sub.add_parser("score", help="enter or import rater scores")
    score_sub = score.add_subparsers(dest="subcommand", required=True)
    simp = score_sub.add_parser("import", help="import a full sheet JSON")
    simp.add_argument("--audit", required=True)
    simp.add_argument("file")
    simp.set_defaults(func=cmd_score_import)
    senter = score_sub.add_parser("enter", help="enter a single slot judgment")
    senter.add_argument("--audit", required=True)
    senter.add_argument("--rater", required=True)
    senter.add_argument("--slot", required=True)
    senter.add_argument("--value", choices=["present", "absent"], required=True)
    senter.add_argument("--rationale", default="")
    senter.add_argument("--borderline", action="store_true")
    senter.add_argument("--evidence", default="")
    senter.set_defaults(func=cmd_score_enter)

    rec = sub.add_parser("reconcile", help="record a resolution for a disputed slot")
    rec.add_argument("--audit", required=True)
    rec.add_argument("--slot", required=True)
    rec.add_argument("--value", choices=["present", "absent"], required=True)
    rec.add_argument(
        "--criterion", choices=["C1", "C2", "C3", "conservative-default"], required=True
    )
    rec.add_argument("--note", default="")
    rec.set_defaults(func=cmd_reconcile)

    kappa = sub.add_parser("kappa", help="inter-rater agreement statistics")
    kappa.add_argument("--audit", required=True)
    kappa.add_argument("--pillar", choices=list(taxonomy.PILLAR_CODES))
    kappa.add_argument("--json", action="store_true")
    kappa.set_defaults(func=cmd_kappa)

    report = sub.add_parser("report", help="render the audit report")
    report.add_argument("--audit", required=True)
    report.add_argument("--out", help="write Markdown to a file")
    report.add_argument("--json", help="write the canonical JSON bundle to a file")
    report.add_argument("--heatmap", help="write the heatmap CSV to a file")
    report.add_argument("--generated-at", help="pin the bundle timestamp")
    report.set_defaults(func=cmd_report)

    sens = sub.add_parser("sensitivity", help="strict/baseline/generous totals")
    sens.add_argument("--audit", required=True)
    sens.add_argument("--json", action="store_true")
    sens.set_defaults(func=cmd_sensitivity)

    media = sub.add_parser("media", help="media aggregate and pathway capability")
    media.add_argument("--audit", required=True)
    media.add_argument("--json", action="store_true")
    media.set_defaults(func=cmd_media)

    loop = sub.add_parser("loop", help="cybernetic correction-loop check")
    loop.add_argument("--audit", required=True)
    loop.add_argument("--incident", help="named incident record (e.g. clawhavoc)")
    loop.add_argument("--json", action="store_true")
    loop.set_defaults(func=cmd_loop)

    fw = sub.add_parser("frameworks", help="framework coverage summaries")
    fw.add_argument("--refs", help="comma-separated framework ids")
    fw.add_argument("--path", action="append", help="additional matrix JSON file(s)")
    fw.add_argument("--ostrom", action="store_true", help="include design-principle gaps")
    fw.add_argument("--json", action="store_true")
    fw.set_defaults(func=cmd_frameworks)

    predict = sub.add_parser("predict", help="evaluate the under-investment prediction")
    predict.add_argument("--input", required=True, help="JSON list of ecosystem entries")
    predict.add_argument("--json", action="store_true")
    predict.set_defaults(func=cmd_predict)

    tax = sub.add_parser("taxonomy", help="taxonomy introspection")
    tax_sub = tax.add_subparsers(dest="subcommand", required=True)
    dump = tax_sub.add_parser("dump", help="dump the full taxonomy as JSON")
    dump.set_defaults(func=cmd_taxonomy_dump)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=int(os.environ.get("AGIL_PORT", "8080")))
    serve.add_argument("--workbench", help="serve static workbench assets from this directory")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConflictError as exc:
        print(f"conflict: {exc}", file=sys.stderr)
        return EXIT_CONFLICT
    except (ValidationError, NotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except StorageError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
