"""Scoring classifications into per-expression result tables.

Tables follow the classic layout: one row per expression with tested /
true / false counts and their percentages, plus a Total row. Percentages
are always derived from counts.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_DOWN, ROUND_HALF_UP, Decimal

from .errors import EvalError

ROUNDING = {"half_up": ROUND_HALF_UP, "truncate": ROUND_DOWN}

TEXT_HEADER = ("total image", "feeling", "tested image", "true classify",
               "false classify", "true rate %", "false rate %")
AGG_TEXT_HEADER = ("Data Base", "Total Image", "tested image", "true classify",
                   "false classify", "true rate %", "false rate %")
CSV_COLUMNS = ("total_image", "feeling", "tested_image", "true_classify",
               "false_classify", "true_rate", "false_rate")
AGG_CSV_COLUMNS = ("database", "total_image", "tested_image", "true_classify",
                   "false_classify", "true_rate", "false_rate")
CHART_COLUMNS = ("label", "true_rate", "false_rate")
TOTAL_LABEL = "Total"


def rate(true_count, tested, places=2, rounding="half_up"):
    """Percentage 100 * true_count / tested, rounded to ``places`` decimals.

    ``rounding`` is "half_up" (default) or "truncate".
    """
    if tested < 1:
        raise EvalError("rate needs at least one tested sample")
    if not 0 <= true_count <= tested:
        raise EvalError(f"count {true_count} outside 0..{tested}")
    exact = Decimal(100 * true_count) / Decimal(tested)
    return float(exact.quantize(Decimal(1).scaleb(-places), rounding=ROUNDING[rounding]))


@dataclass(frozen=True)
class LabelRow:
    label: str
    tested: int
    true_classify: int
    false_classify: int
    true_rate: float
    false_rate: float
    total_images: int = 0

    @classmethod
    def from_counts(cls, label, tested, true_classify, total_images=None):
        false = tested - true_classify
        return cls(label, tested, true_classify, false, rate(true_classify, tested),
                   rate(false, tested), tested if total_images is None else total_images)

    def display_rates(self, places=2, rounding="half_up"):
        return (rate(self.true_classify, self.tested, places, rounding),
                rate(self.false_classify, self.tested, places, rounding))


@dataclass(frozen=True)
class EvaluationReport:
    rows: list
    total: LabelRow
    confusion: dict = field(default_factory=dict)  # (actual, predicted) -> count

    kind = "label"

    def accuracy(self):
        return self.total.true_classify / self.total.tested


@dataclass(frozen=True)
class AggregateReport:
    rows: list
    total: LabelRow

    kind = "aggregate"


def _total_row(rows):
    return LabelRow.from_counts(
        TOTAL_LABEL,
        sum(r.tested for r in rows),
        sum(r.true_classify for r in rows),
        sum(r.total_images for r in rows),
    )


def score(results, total_images=None):
    """Build a report from (sample, result) pairs.

    A prediction counts as true iff its label equals the sample's label.
    ``total_images`` optionally maps label -> dataset size for the
    "total image" column; it defaults to the tested count.
    """
    results = list(results)
    if not results:
        raise EvalError("cannot score an empty result list")
    tested, correct, confusion = {}, {}, {}
    for sample, result in results:
        actual, predicted = sample.label, result.label
        tested[actual] = tested.get(actual, 0) + 1
        correct[actual] = correct.get(actual, 0) + (predicted == actual)
        confusion[(actual, predicted)] = confusion.get((actual, predicted), 0) + 1
    total_images = total_images or {}
    rows = [LabelRow.from_counts(label, n, correct[label], total_images.get(label, n))
            for label, n in tested.items()]
    return EvaluationReport(rows, _total_row(rows), confusion)


def aggregate(reports):
    """Cross-dataset table: one row per (name, report) plus a grand total."""
    reports = list(reports)
    if not reports:
        raise EvalError("cannot aggregate an empty report list")
    rows = [LabelRow.from_counts(name, r.total.tested, r.total.true_classify, r.total.total_images)
            for name, r in reports]
    return AggregateReport(rows, _total_row(rows))


# --- rendering ---------------------------------------------------------------

def _fmt(x, places=2):
    return f"{x:.{places}f}"


def _row_dict(row, kind):
    first = "database" if kind == "aggregate" else "feeling"
    return {
        "total_image": row.total_images,
        first: row.label,
        "tested_image": row.tested,
        "true_classify": row.true_classify,
        "false_classify": row.false_classify,
        "true_rate": row.true_rate,
        "false_rate": row.false_rate,
    }


def _render_text(report, places, rounding):
    agg = report.kind == "aggregate"
    header = AGG_TEXT_HEADER if agg else TEXT_HEADER
    body = []
    for row in list(report.rows) + [report.total]:
        tr, fr = row.display_rates(places, rounding)
        cells = [row.label, str(row.total_images)] if agg else [str(row.total_images), row.label]
        cells += [str(row.tested), str(row.true_classify), str(row.false_classify),
                  _fmt(tr, places), _fmt(fr, places)]
        body.append(cells)
    widths = [max(len(h), *(len(r[i]) for r in body)) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for cells in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render_table(report, style="text", places=2, rounding="half_up"):
    """Render a report as text (classic column headings), csv or json.

    ``places`` and ``rounding`` only affect the text style; csv and json
    always carry the two-decimal half-up rates stored on each row.
    """
    kind = report.kind
    if style == "text":
        return _render_text(report, places, rounding)
    rows = [_row_dict(r, kind) for r in report.rows]
    total = _row_dict(report.total, kind)
    if style == "json":
        return json.dumps({"kind": kind, "rows": rows, "total": total}, indent=2) + "\n"
    if style == "csv":
        columns = AGG_CSV_COLUMNS if kind == "aggregate" else CSV_COLUMNS
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for r in rows + [total]:
            writer.writerow({**r, "true_rate": _fmt(r["true_rate"]), "false_rate": _fmt(r["false_rate"])})
        return buf.getvalue()
    raise ValueError(f"unknown style {style!r}")


def _row_from_dict(d, kind):
    label = d["database"] if kind == "aggregate" else d["feeling"]
    return LabelRow(
        label=label,
        tested=int(d["tested_image"]),
        true_classify=int(d["true_classify"]),
        false_classify=int(d["false_classify"]),
        true_rate=float(d["true_rate"]),
        false_rate=float(d["false_rate"]),
        total_images=int(d["total_image"]),
    )


def parse_table(document, style):
    """Inverse of render_table for the csv and json styles."""
    if style == "json":
        doc = json.loads(document)
        kind = doc["kind"]
        rows = [_row_from_dict(r, kind) for r in doc["rows"]]
        total = _row_from_dict(doc["total"], kind)
    elif style == "csv":
        records = list(csv.DictReader(io.StringIO(document)))
        if not records:
            raise EvalError("empty table document")
        kind = "aggregate" if "database" in records[0] else "label"
        rows = [_row_from_dict(r, kind) for r in records[:-1]]
        total = _row_from_dict(records[-1], kind)
    else:
        raise ValueError(f"cannot parse style {style!r}")
    if kind == "aggregate":
        return AggregateReport(rows, total)
    return EvaluationReport(rows, total, {})


def chart_csv(report):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CHART_COLUMNS)
    for row in list(report.rows) + [report.total]:
        writer.writerow([row.label, _fmt(row.true_rate), _fmt(row.false_rate)])
    return buf.getvalue()


def emit_chart_data(report, path):
    """Write the bar-chart series (label,true_rate,false_rate) as CSV."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(chart_csv(report))
    except OSError as exc:
        raise EvalError(f"cannot write chart data to {path}: {exc}") from None


def confusion_records(report):
    return [{"actual": a, "predicted": p, "count": n} for (a, p), n in report.confusion.items()]
