"""Conjecture, hunt for counterexamples, add them, conjecture again.

Starts from the four table graphs and stops once no kept conjecture is
refuted by any connected graph up to ``--max-order`` vertices.
"""

import argparse
import warnings
from dataclasses import dataclass, field

from graphbrain import graphs as gk
from graphbrain.dalmatian import TargetSpec, add_counterexample, refresh, run
from graphbrain.graphs import write_graph6
from graphbrain.refute import check_graphs, entry_from_conjecture
from graphbrain.canon import graphs_up_to


@dataclass
class LoopConfig:
    direction: str = "upper"
    pool: list = field(default_factory=lambda: ["order", "max_degree", "min_degree", "radius", "girth", "size"])
    operators: list = field(default_factory=lambda: ["add", "sub", "div", "floor", "sqrt"])
    max_complexity: int = 4
    max_order: int = 7
    rounds: int = 10


def main(cfg: LoopConfig):
    spec = TargetSpec(target="independence_number", direction=cfg.direction, objects=gk.table_graphs(),
                      pool=cfg.pool, operators=cfg.operators, max_complexity=cfg.max_complexity)
    stream = list(graphs_up_to(cfg.max_order))
    for round_no in range(1, cfg.rounds + 1):
        res = run(spec)
        print(f"round {round_no}: {len(spec.objects)} objects, {res.report.examined} candidates")
        for c in res.conjectures:
            print(f"    {c}")
        found = None
        for c in res.conjectures:
            check = check_graphs(entry_from_conjecture(str(c)), stream)
            if not check.verified:
                found = (c, check.counterexample)
                break
        if found is None:
            print(f"no kept conjecture is refuted by connected graphs up to order {cfg.max_order}")
            return
        c, g = found
        print(f"  counterexample {write_graph6(g)} to {c}")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            spec = add_counterexample(spec, g, res.conjectures)
        for r in refresh(res.conjectures, spec):
            if r.status == "disproved":
                print(f"  disproved: {r}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--direction", default=LoopConfig.direction, choices=["upper", "lower"])
    p.add_argument("--max-complexity", type=int, default=LoopConfig.max_complexity)
    p.add_argument("--max-order", type=int, default=LoopConfig.max_order)
    p.add_argument("--rounds", type=int, default=LoopConfig.rounds)
    main(LoopConfig(**vars(p.parse_args())))
