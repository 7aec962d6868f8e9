"""annotation files for agreement statistics."""

import io
from pathlib import Path
from typing import List, Tuple

from ..core.errors import ParseError


def _rows(path: Path) -> List[Tuple[int, List[str]]]:
    try:
        content = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"invalid UTF-8 at byte {e.start}", source=str(path))
    rows = []
    for number, line in enumerate(io.StringIO(content), start=1):
        line = line.rstrip("\r\n")
        if line.strip() and not line.startswith("#"):
            rows.append((number, line.split("\t")))
    if not rows:
        raise ParseError("empty ratings file", source=str(path))
    return rows


def read_rating_counts(path: Path) -> Tuple[List[str], List[str], List[List[int]]]:
    """`item<TAB>category...` header, then one row of rater counts per item.

    returns (categories, item ids, counts).
    """
    rows = _rows(path)
    (_, header), body = rows[0], rows[1:]
    if len(header) < 2 or header[0] != "item":
        raise ParseError(
            "header must be `item<TAB>category...`", line=rows[0][0], source=str(path)
        )
    items, counts = [], []
    for number, cells in body:
        if len(cells) != len(header):
            raise ParseError(
                f"expected {len(header)} columns, found {len(cells)}",
                line=number,
                source=str(path),
            )
        try:
            values = [int(cell) for cell in cells[1:]]
        except ValueError:
            raise ParseError(
                "rating counts must be integers", line=number, source=str(path)
            )
        if any(value < 0 for value in values):
            raise ParseError(
                "rating counts must be non-negative", line=number, source=str(path)
            )
        items.append(cells[0])
        counts.append(values)
    return header[1:], items, counts


def read_rater_labels(path: Path) -> Tuple[List[str], List[str]]:
    """`item<TAB>rater1<TAB>rater2` rows of category labels for Cohen's kappa."""
    rows = _rows(path)
    if rows[0][1][0] == "item":
        rows = rows[1:]
    first, second = [], []
    for number, cells in rows:
        if len(cells) != 3 or not cells[1] or not cells[2]:
            raise ParseError(
                "expected `item<TAB>label<TAB>label`", line=number, source=str(path)
            )
        first.append(cells[1])
        second.append(cells[2])
    return first, second
