"""Command line entry point: ``graphbrain <command> ...``.

Exit codes: 0 success, 1 counterexample found, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from graphbrain import canon, graphs as gk
from graphbrain.dalmatian import TargetSpec, run
from graphbrain.expr import OPERATORS
from graphbrain.graphs import Graph, named_graph, parse_graph6, read_graph6_file, write_graph6
from graphbrain.invariants import INVARIANTS
from graphbrain.refute import (
    DEFAULT_MODELS,
    THETA_EXHAUSTIVE_ORDER,
    ModelRange,
    builtin_corpus,
    check_graphs,
    corpus_entry,
    entry_from_conjecture,
    exhaustive_check,
    fuzz_check,
)
from graphbrain.store import STORE_ENV, append_cells, append_graph6, default_store_path, load_table
from graphbrain.table import ValueTable


class InputError(Exception):
    pass


def _split(text: str | None, sep: str = ",") -> list[str]:
    return [t.strip() for t in (text or "").split(sep) if t.strip()]


def load_graphs(spec: str) -> list[Graph]:
    """Resolve a comma-separated list of graph sources.

    Sources: ``catalog`` / ``catalog:table`` / ``catalog:NAME``, ``g6:STRING``,
    ``file:PATH`` (or a bare existing path), ``connected:N``, ``all:N``.
    """
    out: list[Graph] = []
    unknown = []
    for item in _split(spec):
        kind, _, arg = item.partition(":")
        if kind == "catalog" and not arg:
            out += gk.catalog()
        elif kind == "catalog" and arg == "table":
            out += gk.table_graphs()
        elif kind == "catalog":
            try:
                out.append(named_graph(arg))
            except KeyError:
                unknown.append(item)
        elif kind == "g6":
            out.append(parse_graph6(arg))
        elif kind == "file":
            out += read_graph6_file(arg)
        elif kind in ("connected", "all") and arg.isdigit():
            gen = canon.enumerate_connected if kind == "connected" else canon.enumerate_graphs
            out += list(gen(int(arg)))
        elif Path(item).exists():
            out += read_graph6_file(item)
        else:
            unknown.append(item)
    if unknown:
        raise InputError(f"unknown graph sources: {', '.join(unknown)}")
    return out


def _label(g: Graph) -> str:
    return g.name or write_graph6(g)


def _check_invariants(names: list[str]):
    bad = [n for n in names if n not in INVARIANTS]
    if bad:
        raise InputError(f"unknown invariants: {', '.join(bad)}")


def _open_table(args) -> tuple[ValueTable, Path | None]:
    path = Path(args.store) if args.store else default_store_path()
    table = load_table(path) if path else ValueTable()
    return table, path


def read_config(path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment line."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(f"{path}:{lineno}: expected key = value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


# --------------------------------------------------------------------------
# commands

def cmd_compute(args) -> int:
    graphs = load_graphs(args.graphs)
    names = list(INVARIANTS) if args.invariants == "all" else _split(args.invariants)
    _check_invariants(names)
    table, path = _open_table(args)
    keys = [table.add(g) for g in graphs]
    filled = table.ensure(keys, names)
    if path:
        append_cells(path, table, filled)
    for g, key in zip(graphs, keys):
        for name in names:
            value = table.get(key, name).value
            shown = int(value) if value == value and float(value).is_integer() else value
            if len(graphs) == 1 and len(names) == 1:
                print(shown)
            else:
                print(f"{_label(g)}\t{name}\t{shown}")
    return 0


_CONJECTURE_DEFAULTS = {
    "target": "independence_number",
    "direction": "upper",
    "pool": "",
    "ops": "",
    "consts": "",
    "theory": "",
    "max_complexity": "3",
    "max_candidates": "",
    "time_limit": "",
    "graphs": "catalog:table",
}


def cmd_conjecture(args) -> int:
    settings = dict(_CONJECTURE_DEFAULTS)
    if args.config:
        settings.update(read_config(args.config))
    for key in _CONJECTURE_DEFAULTS:
        value = getattr(args, key)
        if value is not None:
            settings[key] = str(value)
    pool = _split(settings["pool"])
    ops = _split(settings["ops"])
    bad_ops = [o for o in ops if o not in OPERATORS]
    if bad_ops:
        raise InputError(f"unknown operators: {', '.join(bad_ops)} (known: {', '.join(OPERATORS)})")
    _check_invariants(pool + [settings["target"]])
    table, path = _open_table(args)
    spec = TargetSpec(
        target=settings["target"],
        direction=settings["direction"],
        objects=load_graphs(settings["graphs"]),
        pool=pool,
        constants=[Fraction(c) for c in _split(settings["consts"])],
        operators=ops,
        theory=_split(settings["theory"], ";"),
        max_complexity=int(settings["max_complexity"]),
        max_candidates=int(settings["max_candidates"]) if settings["max_candidates"] else None,
        time_limit=float(settings["time_limit"]) if settings["time_limit"] else None,
    )
    before = {(k, n) for k, n, _ in table.cells()}
    result = run(spec, table)
    if path:
        append_cells(path, table, [(k, n) for k, n, _ in table.cells() if (k, n) not in before])
    for line in result.lines():
        print(line)
    rep = result.report
    print(
        f"# examined {rep.examined}, emitted {len(rep.emitted)}, kept {len(result.conjectures)}, "
        f"pruned {len(rep.pruned)}, {rep.wall_time:.3f}s" + (f", partial: {rep.reason}" if rep.partial else ""),
        file=sys.stderr,
    )
    return 0


def _entries(names: str):
    if names == "all":
        return builtin_corpus()
    try:
        return [corpus_entry(n) for n in _split(names)]
    except KeyError as exc:
        known = ", ".join(e.name for e in builtin_corpus())
        raise InputError(f"{exc.args[0]} (known: {known})") from None


def _report(result, counterexamples_file, provenance: str) -> int:
    print(result)
    if result.verified:
        return 0
    if counterexamples_file:
        append_graph6(counterexamples_file, [result.counterexample], provenance)
    return 1


def cmd_verify(args) -> int:
    status = 0
    extra = load_graphs(args.graphs) if args.graphs else []
    for entry in _entries(args.entry):
        max_order = args.max_order
        if entry.uses_theta and max_order > THETA_EXHAUSTIVE_ORDER:
            print(f"# {entry.name}: theta entries are capped at order {THETA_EXHAUSTIVE_ORDER}", file=sys.stderr)
            max_order = THETA_EXHAUSTIVE_ORDER
        connected = False if args.all_graphs else None
        result = exhaustive_check(entry, max_order, connected)
        if result.verified and extra:
            more = check_graphs(entry, extra)
            more.count += result.count
            result = more
        status = max(status, _report(result, args.counterexamples, f"counterexample to {entry}"))
    return status


def cmd_search(args) -> int:
    entry = entry_from_conjecture(args.conjecture)
    if args.exhaustive:
        result = exhaustive_check(entry, args.exhaustive)
        if not result.verified:
            return _report(result, args.counterexamples, f"counterexample to {entry} (exhaustive)")
    names = _split(args.models) or [m.name for m in DEFAULT_MODELS]
    known = {m.name for m in DEFAULT_MODELS}
    bad = [m for m in names if m not in known]
    if bad:
        raise InputError(f"unknown models: {', '.join(bad)} (known: {', '.join(sorted(known))})")
    models = [ModelRange(m, n_min=args.n_min, n_max=args.n_max) for m in names]
    result = fuzz_check(entry, models, args.trials, args.seed)
    return _report(result, args.counterexamples, f"counterexample to {entry} (seed {args.seed})")


def cmd_catalog(args) -> int:
    for g in gk.catalog():
        print(f"{g.name}\t{write_graph6(g)}\tn={g.n}\tm={len(g.edges())}")
    return 0


def cmd_ingest(args) -> int:
    table, path = _open_table(args)
    if path is None:
        raise InputError(f"ingest needs --store or ${STORE_ENV}")
    names = list(INVARIANTS) if args.invariants == "all" else _split(args.invariants)
    _check_invariants(names)
    graphs = [g for f in args.files for g in read_graph6_file(f)]
    keys = [table.add(g) for g in graphs]
    filled = table.ensure(keys, names)
    append_cells(path, table, filled)
    print(f"ingested {len(set(keys))} graphs, {len(filled)} new values")
    return 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphbrain", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def with_store(sp):
        sp.add_argument("--store", help="value store file (default $GRAPHBRAIN_STORE)")
        return sp

    sp = with_store(sub.add_parser("compute", help="compute invariants for graphs"))
    sp.add_argument("--graphs", required=True)
    sp.add_argument("--invariants", required=True, help="comma list or 'all'")
    sp.set_defaults(func=cmd_compute)

    sp = with_store(sub.add_parser("conjecture", help="run the Dalmatian conjecturer"))
    sp.add_argument("--config")
    sp.add_argument("--target")
    sp.add_argument("--direction", choices=["upper", "lower"])
    sp.add_argument("--pool")
    sp.add_argument("--ops")
    sp.add_argument("--consts")
    sp.add_argument("--theory", help="';'-separated expressions")
    sp.add_argument("--max-complexity", type=int)
    sp.add_argument("--max-candidates", type=int)
    sp.add_argument("--time-limit", type=float)
    sp.add_argument("--graphs")
    sp.set_defaults(func=cmd_conjecture)

    sp = sub.add_parser("verify", help="exhaustively check corpus entries")
    sp.add_argument("--entry", default="all")
    sp.add_argument("--max-order", type=int, default=7)
    sp.add_argument("--all-graphs", action="store_true", help="include disconnected graphs")
    sp.add_argument("--graphs", help="extra graph sources to check")
    sp.add_argument("--counterexamples", help="graph6 file to append counterexamples to")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("search-counterexample", help="hunt for a counterexample")
    sp.add_argument("--conjecture", required=True)
    sp.add_argument("--models", default="")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n-min", type=int, default=2)
    sp.add_argument("--n-max", type=int, default=40)
    sp.add_argument("--exhaustive", type=int, default=0, help="first check all connected graphs up to this order")
    sp.add_argument("--counterexamples")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("catalog", help="list named graphs")
    sp.set_defaults(func=cmd_catalog)

    sp = with_store(sub.add_parser("ingest", help="add graph6 files to the value store"))
    sp.add_argument("files", nargs="+")
    sp.add_argument("--invariants", default="all")
    sp.set_defaults(func=cmd_ingest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
