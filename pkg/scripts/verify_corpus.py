"""Exhaustively check every corpus entry, then fuzz the ones that survive."""

import argparse
import time
from dataclasses import dataclass

from graphbrain.refute import THETA_EXHAUSTIVE_ORDER, builtin_corpus, exhaustive_check, fuzz_check


@dataclass
class VerifyConfig:
    max_order: int = 7
    fuzz_trials: int = 100
    seed: int = 0


def main(cfg: VerifyConfig):
    for entry in builtin_corpus():
        order = min(cfg.max_order, THETA_EXHAUSTIVE_ORDER) if entry.uses_theta else cfg.max_order
        start = time.perf_counter()
        result = exhaustive_check(entry, order)
        if result.verified and cfg.fuzz_trials:
            fuzzed = fuzz_check(entry, trials=cfg.fuzz_trials, seed=cfg.seed)
            if not fuzzed.verified:
                result = fuzzed
        print(f"{entry.source:12s} {result}  [{time.perf_counter() - start:.1f}s]  {entry}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-order", type=int, default=VerifyConfig.max_order)
    p.add_argument("--fuzz-trials", type=int, default=VerifyConfig.fuzz_trials)
    p.add_argument("--seed", type=int, default=VerifyConfig.seed)
    main(VerifyConfig(**vars(p.parse_args())))
