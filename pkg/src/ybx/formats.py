"""Plain-text file formats: cycle sets, braces, and corpora.

All three formats carry explicit version headers and round-trip
byte-identically, so golden files stay diffable.
"""

from __future__ import annotations

from typing import Sequence

from .brace import FiniteBrace
from .cycleset import CycleSet

CYCLESET_HEADER = "cycleset v1"
BRACE_HEADER = "brace v1"
CORPUS_HEADER = "corpus v1"


class FormatError(Exception):
    pass


def serialize_cycle_set(X: CycleSet) -> str:
    lines = [CYCLESET_HEADER, f"n {X.n}"]
    lines.extend(" ".join(map(str, row)) for row in X.table)
    return "\n".join(lines) + "\n"


def _parse_table(lines: list[str], start: int, n: int, what: str) -> tuple[list[list[int]], int]:
    rows = []
    for i in range(n):
        if start + i >= len(lines):
            raise FormatError(f"{what}: expected {n} rows, file ends after {i}")
        try:
            row = [int(tok) for tok in lines[start + i].split()]
        except ValueError as exc:
            raise FormatError(f"{what}: bad row {i}: {exc}") from None
        if len(row) != n:
            raise FormatError(f"{what}: row {i} has {len(row)} entries, expected {n}")
        rows.append(row)
    return rows, start + n


def _parse_size(line: str, what: str) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != "n":
        raise FormatError(f"{what}: expected 'n <N>', got {line!r}")
    return int(parts[1])


def parse_cycle_set(text: str) -> CycleSet:
    lines = text.splitlines()
    if not lines or lines[0] != CYCLESET_HEADER:
        raise FormatError(f"missing header {CYCLESET_HEADER!r}")
    n = _parse_size(lines[1], "cycle set")
    rows, _ = _parse_table(lines, 2, n, "cycle set")
    return CycleSet(rows)


def serialize_brace(B: FiniteBrace) -> str:
    lines = [BRACE_HEADER, f"n {B.n}", "add"]
    lines.extend(" ".join(map(str, row)) for row in B.add)
    lines.append("mul")
    lines.extend(" ".join(map(str, row)) for row in B.mul)
    return "\n".join(lines) + "\n"


def parse_brace(text: str) -> FiniteBrace:
    lines = text.splitlines()
    if not lines or lines[0] != BRACE_HEADER:
        raise FormatError(f"missing header {BRACE_HEADER!r}")
    n = _parse_size(lines[1], "brace")
    if lines[2] != "add":
        raise FormatError("expected 'add' table marker")
    add, pos = _parse_table(lines, 3, n, "brace add")
    if pos >= len(lines) or lines[pos] != "mul":
        raise FormatError("expected 'mul' table marker")
    mul, _ = _parse_table(lines, pos + 1, n, "brace mul")
    return FiniteBrace(add, mul)


def serialize_corpus(tables: Sequence[CycleSet]) -> str:
    parts = [f"{CORPUS_HEADER} count={len(tables)}"]
    for X in tables:
        parts.append(serialize_cycle_set(X).rstrip("\n"))
    return "\n\n".join(parts) + "\n"


def parse_corpus(text: str) -> list[CycleSet]:
    blocks = text.split("\n\n")
    header = blocks[0].strip()
    if not header.startswith(CORPUS_HEADER):
        raise FormatError(f"missing header {CORPUS_HEADER!r}")
    try:
        count = int(header.split("count=")[1])
    except (IndexError, ValueError):
        raise FormatError("corpus header lacks a count") from None
    records = [parse_cycle_set(block if block.endswith("\n") else block + "\n")
               for block in blocks[1:] if block.strip()]
    if len(records) != count:
        raise FormatError(f"corpus count={count} but {len(records)} records present")
    return records
