"""Plain-text design and orthogonal-array files.

Design file::

    # comment lines and blank lines are ignored
    v b
    0 1 2
    ...            (b block lines, 0-based point indices)

OA file::

    k n lambda
    0 0 0
    ...            (lambda * n^2 rows of k symbols)
"""

from __future__ import annotations

from pathlib import Path

from .designs import IncidenceStructure, OrthogonalArray


class FormatError(ValueError):
    pass


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append((lineno, line.split()))
    return out


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}") from None


def parse_design(text: str) -> IncidenceStructure:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty design file")
    lineno, head = lines[0]
    header = _ints(head, lineno)
    if len(header) != 2:
        raise FormatError(f"line {lineno}: header must be 'v b'")
    v, b = header
    if v < 0 or b < 0:
        raise FormatError(f"line {lineno}: negative size")
    body = lines[1:]
    if len(body) != b:
        raise FormatError(f"header declares {b} blocks but file has {len(body)}")
    blocks = [_ints(tokens, n) for n, tokens in body]
    try:
        return IncidenceStructure(v, blocks)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_design(inc: IncidenceStructure) -> str:
    lines = [f"{inc.num_points} {inc.num_blocks}"]
    lines += [" ".join(map(str, blk)) for blk in inc.blocks]
    return "\n".join(lines) + "\n"


def parse_oa(text: str) -> OrthogonalArray:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty OA file")
    lineno, head = lines[0]
    header = _ints(head, lineno)
    if len(header) != 3:
        raise FormatError(f"line {lineno}: header must be 'k n lambda'")
    k, n, lam = header
    rows = [_ints(tokens, n_) for n_, tokens in lines[1:]]
    if len(rows) != lam * n * n:
        raise FormatError(f"expected lambda*n^2 = {lam * n * n} rows, found {len(rows)}")
    for (lineno, _), row in zip(lines[1:], rows):
        if len(row) != k:
            raise FormatError(f"line {lineno}: expected {k} symbols, found {len(row)}")
        if any(not 0 <= s < n for s in row):
            raise FormatError(f"line {lineno}: symbol outside [0, {n})")
    try:
        return OrthogonalArray(k, n, lam, rows)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_oa(oa: OrthogonalArray) -> str:
    lines = [f"{oa.k} {oa.n} {oa.lam}"]
    lines += [" ".join(map(str, row)) for row in oa.rows]
    return "\n".join(lines) + "\n"


def read_design(path) -> IncidenceStructure:
    return parse_design(Path(path).read_text(encoding="utf-8"))


def write_design(path, inc: IncidenceStructure) -> None:
    Path(path).write_text(format_design(inc), encoding="utf-8")


def read_oa(path) -> OrthogonalArray:
    return parse_oa(Path(path).read_text(encoding="utf-8"))


def write_oa(path, oa: OrthogonalArray) -> None:
    Path(path).write_text(format_oa(oa), encoding="utf-8")
