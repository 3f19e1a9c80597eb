"""In-memory (graph x invariant) value table."""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from graphbrain.canon import MAX_CANON_ORDER, canonical_form
from graphbrain.graphs import Graph, parse_graph6, write_graph6
from graphbrain.invariants import INVARIANTS, InvariantValue


class IncompleteTableError(KeyError):
    pass


def graph_key(g: Graph) -> str:
    """Canonical graph6 string; graphs too large to canonicalise keep their own."""
    if g.n <= MAX_CANON_ORDER:
        return canonical_form(g).decode()
    return write_graph6(g)


class ValueTable:
    """Rows are graphs keyed by canonical graph6, columns are invariant names.

    Columns need not be known invariants; such values are kept verbatim and
    can be used as long as nothing asks to compute them.
    """

    def __init__(self):
        self._graphs: dict[str, Graph] = {}
        self._cells: dict[str, dict[str, InvariantValue]] = {}
        self.versions: dict[tuple[str, str], str] = {}

    def __len__(self) -> int:
        return len(self._graphs)

    def __contains__(self, key: str) -> bool:
        return key in self._graphs

    def keys(self) -> list[str]:
        return list(self._graphs)

    def graph(self, key: str) -> Graph:
        return self._graphs[key]

    def add(self, g: Graph) -> str:
        key = graph_key(g)
        if key not in self._graphs:
            self._graphs[key] = g
            self._cells[key] = {}
        elif g.name and not self._graphs[key].name:
            self._graphs[key] = g
        return key

    def add_key(self, key: str) -> str:
        if key not in self._graphs:
            self._graphs[key] = parse_graph6(key)
            self._cells[key] = {}
        return key

    def set(self, key: str, name: str, value: InvariantValue, version: str | None = None):
        self.add_key(key)
        self._cells[key][name] = value
        if version is not None:
            self.versions[key, name] = version

    def get(self, key: str, name: str) -> InvariantValue:
        try:
            return self._cells[key][name]
        except KeyError:
            raise IncompleteTableError(f"no value for {name!r} on {key!r}") from None

    def has(self, key: str, name: str) -> bool:
        return name in self._cells.get(key, {})

    def missing(self, keys: Iterable[str], names: Iterable[str]) -> list[tuple[str, str]]:
        names = list(names)
        return [(k, n) for k in keys for n in names if not self.has(k, n)]

    def ensure(self, keys: Iterable[str], names: Iterable[str]) -> list[tuple[str, str]]:
        """Compute every missing cell; returns the cells that were filled."""
        filled = self.missing(keys, names)
        for key, name in filled:
            if name not in INVARIANTS:
                raise IncompleteTableError(f"no value for {name!r} on {key!r} and no way to compute it")
            self._cells[key][name] = INVARIANTS[name].compute(self._graphs[key])
        return filled

    def column(self, keys: list[str], name: str) -> np.ndarray:
        return np.array([self.get(k, name).value for k in keys], dtype=float)

    def tolerance_column(self, keys: list[str], name: str) -> np.ndarray:
        return np.array([self.get(k, name).tolerance or 0.0 for k in keys], dtype=float)

    def cells(self) -> Iterator[tuple[str, str, InvariantValue]]:
        for key, row in self._cells.items():
            for name, value in row.items():
                yield key, name, value
