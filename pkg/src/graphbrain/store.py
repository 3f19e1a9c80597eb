"""Plain-text store of precomputed invariant values.

One record per line::

    # graphbrain-store v1
    D~{,independence_number,1,exact
    D~{,lovasz_theta,1.0000000000000002,approx:0.001,graphbrain-0.1.0

Fields are graph6, invariant name, value (``inf``, ``-inf``, ``undef`` or a
decimal), exactness (``exact`` or ``approx:<tol>``) and an optional tool
version.  Lines starting with ``#`` are comments.  Later records for the same
(graph, invariant) pair win.
"""

from __future__ import annotations

import contextlib
import fcntl
import math
import os
from pathlib import Path
from typing import Iterable

from graphbrain.canon import MAX_CANON_ORDER, canonical_form
from graphbrain.graphs import Graph6Error, parse_graph6
from graphbrain.invariants import InvariantValue
from graphbrain.table import ValueTable

HEADER = "# graphbrain-store v1"
STORE_ENV = "GRAPHBRAIN_STORE"
TOOL_VERSION = "graphbrain-0.1.0"


class StoreFormatError(ValueError):
    pass


def default_store_path() -> Path | None:
    path = os.environ.get(STORE_ENV)
    return Path(path) if path else None


def encode_value(x: float) -> str:
    if x != x:
        return "undef"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if float(x).is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(float(x))


def decode_value(s: str) -> float:
    if s == "undef":
        return math.nan
    if s == "inf":
        return math.inf
    if s == "-inf":
        return -math.inf
    return float(s)


def encode_exactness(v: InvariantValue) -> str:
    return "exact" if v.exact else f"approx:{v.tolerance!r}"


def decode_exactness(s: str) -> float | None:
    if s == "exact":
        return None
    if s.startswith("approx:"):
        return float(s[len("approx:"):])
    raise ValueError(f"bad exactness {s!r}")


def _canonical_key(g6: str) -> str:
    g = parse_graph6(g6)
    if g.n <= MAX_CANON_ORDER:
        return canonical_form(g).decode()
    return g6


def format_record(key: str, name: str, value: InvariantValue, version: str | None = None) -> str:
    fields = [key, name, encode_value(value.value), encode_exactness(value)]
    if version:
        fields.append(version)
    return ",".join(fields)


def parse_records(lines: Iterable[str], source: str = "<store>"):
    """Yield ``(graph6, name, InvariantValue, version)`` per record line."""
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) not in (4, 5) or not parts[0] or not parts[1]:
            raise StoreFormatError(f"{source}:{lineno}: expected 4 or 5 comma-separated fields")
        try:
            key = _canonical_key(parts[0])
            value = InvariantValue(decode_value(parts[2]), decode_exactness(parts[3]))
        except (Graph6Error, ValueError) as exc:
            raise StoreFormatError(f"{source}:{lineno}: {exc}") from None
        yield key, parts[1], value, parts[4] if len(parts) == 5 else None


def load_table(path, table: ValueTable | None = None) -> ValueTable:
    table = table if table is not None else ValueTable()
    path = Path(path)
    if not path.exists():
        return table
    with open(path) as fh:
        for key, name, value, version in parse_records(fh, str(path)):
            table.set(key, name, value, version)
    return table


def save_table(table: ValueTable, path) -> None:
    lines = [HEADER]
    for key, name, value in table.cells():
        lines.append(format_record(key, name, value, table.versions.get((key, name))))
    Path(path).write_text("\n".join(lines) + "\n")


@contextlib.contextmanager
def _locked_append(path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a+") as fh:
        fcntl.flock(fh, fcntl.LOCK_EX)
        try:
            fh.seek(0, os.SEEK_END)
            if fh.tell() == 0:
                fh.write(HEADER + "\n")
            yield fh
        finally:
            fh.flush()
            fcntl.flock(fh, fcntl.LOCK_UN)


def append_cells(path, table: ValueTable, cells: Iterable[tuple[str, str]], version: str = TOOL_VERSION) -> int:
    """Append the given (graph key, invariant) cells of ``table`` to the store file."""
    cells = list(cells)
    if not cells:
        return 0
    with _locked_append(Path(path)) as fh:
        for key, name in cells:
            table.versions[key, name] = version
            fh.write(format_record(key, name, table.get(key, name), version) + "\n")
    return len(cells)


def append_graph6(path, graphs, comment: str) -> None:
    """Append graphs to a graph6 file after a provenance comment line."""
    from graphbrain.graphs import write_graph6

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a") as fh:
        fcntl.flock(fh, fcntl.LOCK_EX)
        try:
            fh.write(f"# {comment}\n")
            for g in graphs:
                fh.write(write_graph6(g) + "\n")
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)
