"""rich tables and report files for evaluation, agreement and ablation results."""

from pathlib import Path
from typing import Dict, List, Sequence

from rich.table import Table

from ..data.stats import CorpusStatistics
from ..models.io import dumps_json
from ..parsers.corpus_parser import write_text
from .ablation import AblationReport, matrix_tsv
from .agreement import AgreementReport
from .metrics import EvalReport, report_tsv


def eval_table(report: EvalReport, title: str = "evaluation") -> Table:
    table = Table(title=title)
    table.add_column("class", style="cyan")
    table.add_column("precision", justify="right")
    table.add_column("recall", justify="right")
    table.add_column("F1", justify="right", style="bold")
    table.add_column("support", justify="right")
    for label, p, r, f, s in zip(
        report.classes, report.precision, report.recall, report.f1, report.support
    ):
        table.add_row(label, f"{p:.4f}", f"{r:.4f}", f"{f:.4f}", str(s))
    table.add_row(
        "macro",
        "",
        "",
        f"{report.macro_f1:.4f}",
        str(sum(report.support)),
        style="green",
    )
    return table


def confusion_table(report: EvalReport) -> Table:
    table = Table(title="confusion (rows = truth)")
    table.add_column("", style="cyan")
    for label in report.classes:
        table.add_column(label, justify="right")
    for label, row in zip(report.classes, report.confusion):
        table.add_row(label, *(str(v) for v in row))
    return table


def agreement_table(report: AgreementReport, mode: str) -> Table:
    table = Table(title=f"{mode} agreement")
    table.add_column("statistic", style="cyan")
    table.add_column("value", justify="right")
    table.add_row("kappa", f"{report.kappa:.6f}")
    table.add_row("observed agreement", f"{report.observed:.6f}")
    table.add_row("expected agreement", f"{report.expected:.6f}")
    table.add_row("raters", str(report.raters))
    table.add_row("items", str(report.items))
    return table


def ablation_table(report: AblationReport) -> Table:
    lines = [line.split("\t") for line in matrix_tsv(report).strip().split("\n")]
    table = Table(
        title=f"macro F1, task {report.task}" + (" (partial)" if report.partial else "")
    )
    for index, column in enumerate(lines[0]):
        table.add_column(
            column,
            style="cyan" if index == 0 else None,
            justify="left" if index == 0 else "right",
        )
    for row in lines[1:]:
        table.add_row(*(cell if cell != "ERR" else "[red]ERR[/red]" for cell in row))
    return table


def statistics_tables(stats: CorpusStatistics) -> List[Table]:
    sources = Table(title=f"documents by source ({stats.documents} total)")
    for column in ("source", "NOT", "OFF", "total"):
        sources.add_column(column, style="cyan" if column == "source" else None)
    for source, row in stats.by_source.items():
        sources.add_row(source, str(row["NOT"]), str(row["OFF"]), str(row["Total"]))

    hierarchy = Table(title="label hierarchy")
    for column in ("class", "targeting", "target", "total"):
        hierarchy.add_column(column)
    for level_a, level_b, level_c, count in stats.hierarchy:
        hierarchy.add_row(level_a, level_b, level_c, str(count))

    hate = Table(title="hate speech")
    hate.add_column("class")
    hate.add_column("total")
    for label, count in stats.hate.items():
        hate.add_row(label, str(count))
    return [sources, hierarchy, hate]


def write_eval_report(
    report: EvalReport, directory: Path, stem: str = "eval"
) -> Dict[str, Path]:
    paths = {"tsv": directory / f"{stem}.tsv", "json": directory / f"{stem}.json"}
    write_text(paths["tsv"], report_tsv(report))
    write_text(paths["json"], dumps_json(report.as_dict()))
    return paths


def write_ablation_report(report: AblationReport, directory: Path) -> Dict[str, Path]:
    """`ablation.tsv` (variant x regime matrix) and `ablation.json` (every cell)."""
    paths = {"tsv": directory / "ablation.tsv", "json": directory / "ablation.json"}
    write_text(paths["tsv"], matrix_tsv(report))
    write_text(paths["json"], dumps_json(report.as_dict()))
    return paths


def probability_rows(
    ids: Sequence[str], labels: Sequence[str], probabilities: Sequence[Sequence[float]]
) -> list:
    return [
        (doc_id, label, list(row))
        for doc_id, label, row in zip(ids, labels, probabilities)
    ]
