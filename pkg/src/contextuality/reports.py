"""Analysis reports and their deterministic serialization.

Report bodies are byte-stable for fixed inputs and seed: floats are
serialized at 12 significant digits, keys have a fixed order, and no
timestamps appear in the body.  Optional run metadata lives in a
separate block excluded from determinism guarantees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Literal

from .observables import ObservableSet
from .personalization import (
    PersEstimate,
    SamplingPlan,
    TripleReport,
    evaluate_triples,
    resolve_plan,
    sample_triples,
    summarize,
)

ReportFormat = Literal["json", "csv"]


@dataclass(frozen=True)
class AnalysisReport:
    """Per-triple verdicts plus the aggregate estimate and config echo."""

    source: str
    observable_ids: tuple[str, ...]
    plan: SamplingPlan
    triples: tuple[TripleReport, ...]
    pers: PersEstimate

    def __post_init__(self):
        tally = summarize(list(self.triples), self.plan)
        if (
            tally.violations != self.pers.violations
            or tally.sampled != self.pers.sampled
            or tally.applicable != self.pers.applicable
        ):
            raise ValueError("PersEstimate does not tally with the per-triple reports")

    @property
    def skipped(self) -> tuple[tuple[tuple[str, str, str], str], ...]:
        return tuple((r.ids, r.error) for r in self.triples if r.skipped)


def analyze(
    source, observables: ObservableSet, plan: SamplingPlan, workers: int = 1
) -> AnalysisReport:
    """Sample, evaluate, and package everything into one report."""
    plan = resolve_plan(plan, observables)
    triples = sample_triples(observables, plan)
    reports = evaluate_triples(source, triples, plan, workers=workers)
    return AnalysisReport(
        source=getattr(source, "observables", observables).source or "<in-memory>",
        observable_ids=observables.ids(),
        plan=plan,
        triples=tuple(reports),
        pers=summarize(reports, plan),
    )


def _sig(x: float) -> float:
    """Quantize to 12 significant digits for byte-stable serialization."""
    return float(f"{float(x):.12g}")


def _triple_row(report: TripleReport) -> dict:
    row: dict = {"observables": list(report.ids)}
    if report.skipped:
        row.update(
            params=None, accardi_verdict=None, accardi_slack=None,
            lp_feasible=None, lp_max_violation=None, error=report.error,
        )
        return row
    params = report.params
    row["params"] = {
        "p": _sig(params.p),
        "q": _sig(params.q),
        "r": _sig(params.r),
        "applicable": params.applicable,
        "deviations": [_sig(d) for d in params.deviations],
    }
    row["accardi_verdict"] = report.accardi.verdict
    row["accardi_slack"] = _sig(report.accardi.slack)
    row["lp_feasible"] = report.lp.feasible
    row["lp_max_violation"] = _sig(report.lp.max_violation)
    row["error"] = None
    return row


def report_body(report: AnalysisReport) -> dict:
    """The deterministic body as plain data with stable key order."""
    plan = report.plan
    pers = report.pers
    return {
        "config": {
            "source": report.source,
            "observables": list(report.observable_ids),
            "num_triples": plan.num_triples,
            "mode": plan.mode,
            "seed": plan.seed,
            "bistochastic_tol": _sig(plan.bistochastic_tol),
            "smoothing": _sig(plan.smoothing),
            "feasibility_tol": _sig(plan.feasibility_tol),
        },
        "pers": {
            "pers_accardi": _sig(pers.pers_accardi),
            "pers_lp": _sig(pers.pers_lp),
            "pers_accardi_sampled": _sig(pers.pers_accardi_sampled),
            "sampled": pers.sampled,
            "decided": pers.decided,
            "applicable": pers.applicable,
            "accardi_violations": pers.violations[0],
            "lp_violations": pers.violations[1],
            "skipped": pers.skipped,
            "seed": pers.seed,
            "ci95_accardi": [_sig(v) for v in pers.ci95_accardi],
            "ci95_lp": [_sig(v) for v in pers.ci95_lp],
        },
        "triples": [_triple_row(r) for r in report.triples],
        "skipped": [
            {"observables": list(ids), "reason": reason} for ids, reason in report.skipped
        ],
    }


_CSV_COLUMNS = (
    "a", "b", "c", "p", "q", "r", "delta_ab", "delta_bc", "delta_ca",
    "applicable", "accardi_verdict", "accardi_slack", "lp_feasible",
    "lp_max_violation", "error",
)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_report(
    report: AnalysisReport, format: ReportFormat = "json", metadata: dict | None = None
) -> str:
    """Serialize a report; the body is deterministic, metadata is not.

    JSON carries the full body (and, when given, a separate "metadata"
    block).  CSV is the plot-ready tabular view: one row per sampled
    triple with slack and residual columns.
    """
    if format == "json":
        document = {"report": report_body(report)}
        if metadata:
            document["metadata"] = metadata
        return json.dumps(document, indent=2) + "\n"
    if format == "csv":
        lines = [",".join(_CSV_COLUMNS)]
        for triple in report.triples:
            if triple.skipped:
                reason = (triple.error or "").replace(",", ";").replace("\n", " ")
                cells = list(triple.ids) + [""] * 11 + [reason]
            else:
                params = triple.params
                cells = [
                    *triple.ids,
                    _csv_cell(_sig(params.p)),
                    _csv_cell(_sig(params.q)),
                    _csv_cell(_sig(params.r)),
                    _csv_cell(_sig(params.deviations[0])),
                    _csv_cell(_sig(params.deviations[1])),
                    _csv_cell(_sig(params.deviations[2])),
                    _csv_cell(params.applicable),
                    triple.accardi.verdict,
                    _csv_cell(_sig(triple.accardi.slack)),
                    _csv_cell(triple.lp.feasible),
                    _csv_cell(_sig(triple.lp.max_violation)),
                    "",
                ]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {format!r}")
