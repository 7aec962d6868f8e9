"""count summaries of an ingested corpus (per source, per label level)."""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .documents import LABELS_A, LABELS_HATE, LabeledDocument


@dataclass(frozen=True)
class CorpusStatistics:
    by_source: Dict[str, Dict[str, int]]
    hierarchy: List[Tuple[str, str, str, int]]
    hate: Dict[str, int]
    documents: int


def corpus_statistics(documents: Sequence[LabeledDocument]) -> CorpusStatistics:
    """OFF/NOT per source, the OFF -> TIN/UNT -> IND/GRP/OTH tree and HATE totals."""
    by_source: Dict[str, Counter] = {}
    for doc in documents:
        if doc.label_a is not None:
            by_source.setdefault(doc.source or "-", Counter())[doc.label_a] += 1

    table = {}
    totals: Counter = Counter()
    for source in sorted(by_source):
        row = {label: by_source[source][label] for label in LABELS_A}
        row["Total"] = sum(row.values())
        table[source] = row
        totals.update(row)
    if table:
        table["Total"] = {label: totals[label] for label in (*LABELS_A, "Total")}

    level_b = Counter(doc.label_b for doc in documents if doc.label_b)
    level_c = Counter(doc.label_c for doc in documents if doc.label_c)
    level_a = Counter(doc.label_a for doc in documents if doc.label_a)
    hierarchy = [
        ("OFF", "TIN", target, level_c[target]) for target in ("IND", "GRP", "OTH")
    ]
    hierarchy.append(("OFF", "TIN", "Total", level_b["TIN"]))
    hierarchy.append(("OFF", "UNT", "--", level_b["UNT"]))
    hierarchy.append(("OFF", "Total", "--", level_a["OFF"]))
    hierarchy.append(("NOT", "--", "--", level_a["NOT"]))

    hate_counts = Counter(doc.label_hate for doc in documents if doc.label_hate)
    hate = {label: hate_counts[label] for label in LABELS_HATE}
    return CorpusStatistics(
        by_source=table, hierarchy=hierarchy, hate=hate, documents=len(documents)
    )


def statistics_tsv(stats: CorpusStatistics) -> str:
    lines = ["Source\tNOT\tOFF\tTotal"]
    for source, row in stats.by_source.items():
        lines.append(f"{source}\t{row['NOT']}\t{row['OFF']}\t{row['Total']}")
    lines.append("")
    lines.append("Class\tTargeting\tTarget\tTotal")
    for level_a, level_b, level_c, count in stats.hierarchy:
        lines.append(f"{level_a}\t{level_b}\t{level_c}\t{count}")
    lines.append("")
    lines.append("Class\tTotal")
    for label, count in stats.hate.items():
        lines.append(f"{label}\t{count}")
    return "\n".join(lines) + "\n"
