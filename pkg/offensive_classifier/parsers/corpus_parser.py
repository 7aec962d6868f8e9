"""readers and writers for the OLID TSV and the internal corpus format."""

import io
import re
from pathlib import Path
from typing import IO, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..core.errors import ParseError, ValidationError
from ..data.documents import LabeledDocument, implied_labels

OLID_COLUMNS = ("id", "tweet", "subtask_a", "subtask_b", "subtask_c")
INTERNAL_COLUMNS = ("id", "label", "text")
NULL = "NULL"

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}
_ESCAPED = re.compile(r"\\(.)")


def escape_text(text: str) -> str:
    return "".join(_ESCAPES.get(char, char) for char in text)


def unescape_text(text: str) -> str:
    return _ESCAPED.sub(lambda m: _UNESCAPES.get(m.group(1), m.group(0)), text)


def _lines(stream: IO[str]) -> Iterator[Tuple[int, str]]:
    for number, line in enumerate(stream, start=1):
        yield number, line.rstrip("\r\n")


def _cell(value: str) -> Optional[str]:
    value = value.strip()
    return None if value in ("", NULL) else value


def parse_olid(stream: IO[str], source: str = "olid") -> List[LabeledDocument]:
    """parse an OLID-style TSV (header required, `NULL` marks an absent label).

    test files that only carry a prefix of the columns (`id tweet`, or up to
    `subtask_a`) are accepted; every data row must match the header width.
    """
    lines = _lines(stream)
    try:
        _, header = next(lines)
    except StopIteration:
        raise ParseError("missing header row", line=1, source=source)

    columns = tuple(cell.strip() for cell in header.split("\t"))
    if len(columns) < 2 or columns != OLID_COLUMNS[: len(columns)]:
        raise ParseError(
            f"expected header {' '.join(OLID_COLUMNS)}, got {header!r}",
            line=1,
            source=source,
        )

    documents = []
    for number, line in lines:
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != len(columns):
            raise ParseError(
                f"expected {len(columns)} tab-separated columns, found {len(cells)}",
                line=number,
                source=source,
            )
        labels = [_cell(cell) for cell in cells[2:]] + [None] * (5 - len(columns))
        try:
            documents.append(
                LabeledDocument(
                    id=cells[0].strip(),
                    raw_text=cells[1],
                    label_a=labels[0],
                    label_b=labels[1],
                    label_c=labels[2],
                    source=source,
                )
            )
        except ValidationError as e:
            raise ValidationError(f"{source}:{number}: {e}") from e
    return documents


def serialize_olid(documents: Iterable[LabeledDocument]) -> str:
    """inverse of parse_olid for documents whose text has no tabs or newlines."""
    rows = ["\t".join(OLID_COLUMNS)]
    for doc in documents:
        if any(char in doc.raw_text for char in "\t\n\r"):
            raise ValidationError(
                f"document {doc.id}: OLID rows cannot hold tabs or newlines"
            )
        rows.append(
            "\t".join(
                [
                    doc.id,
                    doc.raw_text,
                    doc.label_a or NULL,
                    doc.label_b or NULL,
                    doc.label_c or NULL,
                ]
            )
        )
    return "\n".join(rows) + "\n"


def parse_internal(stream: IO[str], source: str = "internal") -> List[LabeledDocument]:
    """parse `id<TAB>label<TAB>text` lines; the header row is optional."""
    documents = []
    for number, line in _lines(stream):
        if not line.strip():
            continue
        cells = line.split("\t")
        if number == 1 and tuple(cell.strip() for cell in cells) == INTERNAL_COLUMNS:
            continue
        if len(cells) != 3:
            raise ParseError(
                f"expected 3 tab-separated columns, found {len(cells)}",
                line=number,
                source=source,
            )
        doc_id, label, text = cells
        label_value = _cell(label)
        try:
            labels = implied_labels(label_value) if label_value else {}
            documents.append(
                LabeledDocument(
                    id=doc_id.strip(),
                    raw_text=unescape_text(text),
                    source=source,
                    **labels,
                )
            )
        except ValidationError as e:
            raise ValidationError(f"{source}:{number}: {e}") from e
    return documents


def serialize_internal(documents: Iterable[LabeledDocument], label_field: str) -> str:
    rows = ["\t".join(INTERNAL_COLUMNS)]
    for doc in documents:
        label = getattr(doc, label_field) or NULL
        rows.append("\t".join([doc.id, label, escape_text(doc.raw_text)]))
    return "\n".join(rows) + "\n"


def _open_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"invalid UTF-8 at byte {e.start}", source=str(path))


def read_corpus(path: Path) -> List[LabeledDocument]:
    """read either format, deciding by the header row."""
    content = _open_text(path)
    source = path.stem
    if content.startswith("id\ttweet"):
        return parse_olid(io.StringIO(content), source=source)
    return parse_internal(io.StringIO(content), source=source)


def read_texts(path: Path) -> List[Tuple[str, str]]:
    """(id, text) pairs from an OLID file, an internal file, or `id<TAB>text` rows."""
    content = _open_text(path)
    if content.startswith("id\ttweet"):
        return [
            (doc.id, doc.raw_text)
            for doc in parse_olid(io.StringIO(content), source=path.stem)
        ]

    pairs = []
    for number, line in _lines(io.StringIO(content)):
        if not line.strip():
            continue
        cells = line.split("\t")
        if number == 1 and cells[0].strip() == "id":
            continue
        if len(cells) == 2:
            doc_id, text = cells
        elif len(cells) == 3:
            doc_id, _, text = cells
        else:
            raise ParseError(
                f"expected `id<TAB>text`, found {len(cells)} columns",
                line=number,
                source=str(path),
            )
        pairs.append((doc_id.strip(), unescape_text(text)))
    return pairs


def write_text(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8", newline="\n")


def read_predictions(
    path: Path,
) -> Tuple[List[str], List[Tuple[str, str, List[float]]]]:
    """read `id label p(class)...` rows written by the predict command."""
    content = _open_text(path)
    lines = list(_lines(io.StringIO(content)))
    if not lines:
        raise ParseError("empty prediction file", source=str(path))
    header = lines[0][1].split("\t")
    if header[:2] != ["id", "label"]:
        raise ParseError(
            "prediction header must start with `id<TAB>label`", line=1, source=str(path)
        )
    classes = header[2:]
    rows = []
    for number, line in lines[1:]:
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != len(header):
            raise ParseError(
                f"expected {len(header)} columns, found {len(cells)}",
                line=number,
                source=str(path),
            )
        try:
            probabilities = [float(cell) for cell in cells[2:]]
        except ValueError:
            raise ParseError(
                "probability cells must be numbers", line=number, source=str(path)
            )
        rows.append((cells[0], cells[1], probabilities))
    return classes, rows


def format_predictions(
    classes: Sequence[str], rows: Iterable[Tuple[str, str, Sequence[float]]]
) -> str:
    lines = ["\t".join(["id", "label", *classes])]
    for doc_id, label, probabilities in rows:
        lines.append(
            "\t".join([doc_id, label, *(repr(float(p)) for p in probabilities)])
        )
    return "\n".join(lines) + "\n"
