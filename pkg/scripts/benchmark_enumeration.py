"""Expression enumeration throughput over a 5-invariant, 6-operator pool."""

import argparse
import time

from graphbrain.expr import OPERATORS, ExpressionSpace, symbols


def main(max_complexity: int):
    inv = symbols([f"i{k}" for k in range(1, 6)])
    ops = [OPERATORS[n] for n in ("add", "sub", "mul", "div", "sqrt", "floor")]
    space = ExpressionSpace(inv, [], ops)
    total, elapsed = 0, 0.0
    for c in range(1, max_complexity + 1):
        start = time.perf_counter()
        size = len(space.stratum(c))
        dt = time.perf_counter() - start
        total, elapsed = total + size, elapsed + dt
        print(f"complexity {c}: {size:9d} expressions  {dt:7.3f} s  {size / max(dt, 1e-9) / 1e6:6.2f} M/s")
    print(f"total {total} in {elapsed:.2f} s = {total / elapsed / 1e6:.2f} M/s")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-complexity", type=int, default=7)
    main(p.parse_args().max_complexity)
