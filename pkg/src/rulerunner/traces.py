"""Finite traces of observation sets, inline/file formats, random generation.

Inline syntax follows the bracketed dash notation, e.g. ``[c - a - b,d - b]``;
``.`` writes an empty cell.  The last cell of a trace implicitly carries the
end-of-input marker; the marker is positional, so ``END`` is rejected as an
observation name.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .ltl import ATOM_RE


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class Trace:
    cells: tuple[frozenset[str], ...]

    def __post_init__(self) -> None:
        if not self.cells:
            raise TraceError("a trace must contain at least one cell")

    def __len__(self) -> int:
        return len(self.cells)

    def __getitem__(self, i: int) -> frozenset[str]:
        return self.cells[i]

    def atoms(self) -> set[str]:
        out: set[str] = set()
        for cell in self.cells:
            out |= cell
        return out


def _check_atom(name: str, where: str) -> str:
    if name == "END":
        raise TraceError(f"{where}: 'END' is reserved for the end-of-trace marker")
    if not ATOM_RE.fullmatch(name):
        raise TraceError(f"{where}: invalid observation name {name!r}")
    return name


def _parse_cell(text: str, where: str) -> frozenset[str]:
    text = text.strip()
    if text == "." or not text:
        return frozenset()
    parts = [p for chunk in text.split(",") for p in chunk.split()]
    return frozenset(_check_atom(p, where) for p in parts)


def parse_trace_inline(text: str) -> Trace:
    """Parse the inline dash notation; brackets and whitespace are optional."""
    stripped = text.strip()
    if stripped.startswith("[") and stripped.endswith("]"):
        stripped = stripped[1:-1]
    if not stripped.strip():
        raise TraceError("empty trace")
    cells = []
    for i, chunk in enumerate(stripped.split("-")):
        cells.append(_parse_cell(chunk, f"cell {i}"))
    return Trace(tuple(cells))


def format_trace_inline(t: Trace) -> str:
    rendered = [",".join(sorted(cell)) if cell else "." for cell in t.cells]
    return "[" + " - ".join(rendered) + "]"


def parse_trace_lines(lines: list[str], source: str = "<trace>") -> Trace:
    """One cell per line; ``#`` lines are comments, blank lines empty cells."""
    cells = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        try:
            cells.append(_parse_cell(line, "line"))
        except TraceError as exc:
            raise TraceError(f"{source}:{lineno}: {exc}") from None
    if not cells:
        raise TraceError(f"{source}: empty trace")
    return Trace(tuple(cells))


def read_trace_file(path: str) -> Trace:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()  # trailing newline does not open a cell
    return parse_trace_lines(lines, source=path)


def format_trace_file(t: Trace) -> str:
    return "\n".join(",".join(sorted(cell)) for cell in t.cells) + "\n"


@dataclass(frozen=True)
class GenParams:
    atoms: tuple[str, ...]
    length: int
    density: float
    seed: int
    count: int = 1

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ValueError("atom alphabet must be nonempty")
        for a in self.atoms:
            _check_atom(a, "alphabet")
        if self.length < 1:
            raise ValueError("trace length must be >= 1")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("density must lie in [0, 1]")
        if self.count < 1:
            raise ValueError("count must be >= 1")


def gen_traces(params: GenParams) -> list[Trace]:
    """Seeded random traces: each atom appears in each cell independently
    with probability `density`."""
    rng = random.Random(params.seed)
    out = []
    for _ in range(params.count):
        cells = tuple(
            frozenset(a for a in params.atoms if rng.random() < params.density)
            for _ in range(params.length)
        )
        out.append(Trace(cells))
    return out
