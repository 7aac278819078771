"""CSV (full precision) and Markdown (two decimals) report emitters."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from ..learners import DISPLAY_NAMES
from .experiment import PhaseOneReport, PhaseTwoReport


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def phase_one_csv(rep: PhaseOneReport) -> str:
    rows = [["algorithm", "accuracy", "precision", "recall", "f1"]]
    for r in rep.rows:
        m = r.report
        rows.append(
            [r.spec.family, repr(m.accuracy), repr(m.weighted_precision),
             repr(m.weighted_recall), repr(m.weighted_f1)]
        )
    return _csv(rows)


def phase_one_markdown(rep: PhaseOneReport) -> str:
    best = rep.best()
    lines = [
        "| ML Algorithm | Accuracy | Precision | Recall | F-1 |",
        "|---|---|---|---|---|",
    ]
    for r in rep.rows:
        m = r.report
        f1 = f"**{m.weighted_f1:.2f}**" if r is best else f"{m.weighted_f1:.2f}"
        lines.append(
            f"| {r.name} | {m.accuracy:.2f} | {m.weighted_precision:.2f} "
            f"| {m.weighted_recall:.2f} | {f1} |"
        )
    return "\n".join(lines) + "\n"


_MEASURES = (("accuracy", "Accuracy"), ("precision", "Precision"),
             ("recall", "Recall"), ("f1", "F-1"))


def phase_two_csv(rep: PhaseTwoReport) -> str:
    rows = [["algorithm", "class", "accuracy", "precision", "recall", "f1",
             "selection_f1", "winner"]]
    for c, name in enumerate(rep.class_names):
        for a, spec in enumerate(rep.algorithms):
            cell = rep.grid[(a, c)]
            rows.append(
                [spec.family, name, repr(cell.accuracy), repr(cell.precision),
                 repr(cell.recall), repr(cell.f1), repr(cell.selection_f1),
                 int(rep.winners[c] == a)]
            )
    return _csv(rows)


def phase_two_markdown(rep: PhaseTwoReport) -> str:
    """Algorithm x measure rows, one column per class; winners' F-1 in bold."""
    header = "| ML Algorithm | Measure | " + " | ".join(rep.class_names) + " |"
    lines = [header, "|" + "---|" * (len(rep.class_names) + 2)]
    for a, spec in enumerate(rep.algorithms):
        for i, (attr, label) in enumerate(_MEASURES):
            cells = []
            for c in range(len(rep.class_names)):
                value = f"{getattr(rep.grid[(a, c)], attr):.2f}"
                if attr == "f1" and rep.winners[c] == a:
                    value = f"**{value}**"
                cells.append(value)
            algo = DISPLAY_NAMES[spec.family] if i == 0 else ""
            lines.append(f"| {algo} | {label} | " + " | ".join(cells) + " |")
    cr = rep.combined_report
    lines += [
        "",
        f"Combined OvR model (single-label): accuracy {cr.accuracy:.2f}, "
        f"weighted F-1 {cr.weighted_f1:.2f}",
    ]
    return "\n".join(lines) + "\n"


def write_reports(outdir, phase_one=None, phase_two=None) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name, text):
        path = outdir / name
        path.write_text(text, encoding="utf-8")
        written.append(path)

    if phase_one is not None:
        emit("phase_one.csv", phase_one_csv(phase_one))
        emit("phase_one.md", phase_one_markdown(phase_one))
        best = phase_one.best()
        emit("phase_one_best_per_class.csv", best.report.to_csv())
        emit("phase_one_best_per_class.md",
             f"Per-class report for {best.name}\n\n" + best.report.to_markdown())
    if phase_two is not None:
        emit("phase_two.csv", phase_two_csv(phase_two))
        emit("phase_two.md", phase_two_markdown(phase_two))
        emit("phase_two_combined.csv", phase_two.combined_report.to_csv())
    return written
