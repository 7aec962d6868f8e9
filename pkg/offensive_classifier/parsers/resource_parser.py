"""readers for the shipped two-column resource files and word lists."""

from importlib import resources
from pathlib import Path
from typing import IO, Iterator, List, Optional, Tuple, Union

from ..core.errors import ParseError

RESOURCE_PACKAGE = "offensive_classifier.resources"


def read_two_column(
    stream: IO[str], source: str = ""
) -> Iterator[Tuple[int, str, str]]:
    """(line number, left, right) per `left<TAB>right` line; `#` lines are comments."""
    for number, line in enumerate(stream, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cells = line.split("\t")
        if len(cells) != 2 or not cells[0].strip() or not cells[1].strip():
            raise ParseError(
                "expected two non-empty tab-separated columns",
                line=number,
                source=source,
            )
        yield number, cells[0].strip(), cells[1].strip()


def read_word_list(stream: IO[str]) -> List[str]:
    """one word per line, blank lines and `#` comments skipped."""
    words = []
    for line in stream:
        word = line.strip()
        if word and not word.startswith("#"):
            words.append(word)
    return words


def open_resource(name: str, path: Optional[Union[str, Path]] = None) -> IO[str]:
    """open `path` if given, otherwise the packaged resource `name`."""
    if path is not None:
        return open(path, encoding="utf-8")
    return resources.files(RESOURCE_PACKAGE).joinpath(name).open("r", encoding="utf-8")


def resource_path(name: str) -> str:
    return str(resources.files(RESOURCE_PACKAGE).joinpath(name))
