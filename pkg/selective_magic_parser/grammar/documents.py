"""Sectioned input files.

One file may carry several sections introduced by a header line such as
``grammar:``. Lines belonging to other sections are blanked rather than
removed so that error line numbers still point into the original file.
"""

import logging
import re
from pathlib import Path

from selective_magic_parser.errors import TfgError

logger = logging.getLogger(__name__)

SECTIONS = ("signature", "grammar", "parse_types", "delays", "index")
_HEADER = re.compile(rf"^\s*({'|'.join(SECTIONS)})\s*:\s*$")


def split_sections(text: str, default: str) -> dict[str, str]:
    """Map each section present in ``text`` to its line-preserving body.

    A file without headers is all ``default``; otherwise text before the
    first header belongs to no section.
    """
    lines = text.splitlines()
    if not any(_HEADER.match(line) for line in lines):
        return {default: text}
    owners: list[str | None] = []
    current: str | None = None
    for line in lines:
        match = _HEADER.match(line)
        if match:
            current = match.group(1)
            owners.append(None)
        else:
            owners.append(current)
    result: dict[str, str] = {}
    for name in dict.fromkeys(o for o in owners if o is not None):
        body = [line if owner == name else "" for line, owner in zip(lines, owners, strict=True)]
        result[name] = "\n".join(body) + "\n"
    return result


def read_text(path: str | Path) -> str:
    """Read a file, turning OS failures into located errors."""
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise TfgError(f"cannot read file: {e.strerror}", source=str(path)) from e
    except UnicodeDecodeError as e:
        raise TfgError(
            f"not UTF-8 text: byte 0x{e.object[e.start]:02x} at offset {e.start}", source=str(path)
        ) from e


def read_section(path: str | Path, section: str, headerless: bool = True) -> str | None:
    """Text of ``section`` in the file at ``path``, or None if it has none.

    With ``headerless`` a file without any header is read whole as the
    section asked for; without it such a file holds no sections at all.
    """
    text = read_text(path)
    if not headerless and not any(_HEADER.match(line) for line in text.splitlines()):
        return None
    found = split_sections(text, section).get(section)
    if found is not None:
        logger.debug(f"Section {section} read from {path}")
    return found
