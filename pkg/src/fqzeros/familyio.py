"""Reading and writing polynomial family files.

A file starts with a header line ``q=<q> m=<m> d=<d>``, then holds one
polynomial per line.  Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import ParseError
from .gf import field_make
from .polyspace import PolyFamily, format_poly, parse_poly

_HEADER = re.compile(r"^\s*q\s*=\s*(\d+)\s+m\s*=\s*(\d+)\s+d\s*=\s*(\d+)\s*$")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_family(text: str) -> PolyFamily:
    header = None
    members = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if header is None:
            mh = _HEADER.match(line)
            if not mh:
                raise ParseError("expected header 'q=<q> m=<m> d=<d>'", lineno, 1)
            q, m, d = (int(g) for g in mh.groups())
            F = field_make(q)
            header = (F, m, d)
            continue
        F, m, d = header
        members.append(parse_poly(line, F, m + 1, d=d, line=lineno))
    if header is None:
        raise ParseError("missing header line", 1, 1)
    if not members:
        raise ParseError("no polynomials after the header", None, None)
    return PolyFamily(members)


def read_family(path: str | Path) -> PolyFamily:
    return parse_family(Path(path).read_text(encoding="utf-8"))


def format_family(fam: PolyFamily, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"q={fam.field.q} m={fam.m} d={fam.d}")
    lines.extend(format_poly(f) for f in fam)
    return "\n".join(lines) + "\n"
