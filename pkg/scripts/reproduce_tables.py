"""Print the complexity <= 3 expression list and the upper/lower bound tables."""

from graphbrain import graphs as gk
from graphbrain.expr import OPERATORS, enumerate_expressions, evaluate, render, symbols
from graphbrain.invariants import INVARIANTS, LOWER_BOUNDS, UPPER_BOUNDS, independence_number
from graphbrain.parse import parse_expression


def expression_list():
    b = symbols(["b1", "b2", "b3"])
    for e in enumerate_expressions(b, [], [OPERATORS["add"], OPERATORS["sqrt"]], 3):
        print(f"  {e.complexity}  {render(e)}")


def bound_table(bounds):
    graphs = gk.table_graphs()
    print(f"  {'bound':34s}" + "".join(f"{g.name:>10s}" for g in graphs))
    for text in bounds:
        e = parse_expression(text)
        row = []
        for g in graphs:
            v = evaluate(e, {s.name: float(INVARIANTS[s.name].fn(g)) for s in e.symbols()})
            row.append(f"{v:10.4g}")
        print(f"  {text:34s}" + "".join(row))
    print(f"  {'independence_number':34s}" + "".join(f"{independence_number(g):10d}" for g in graphs))


if __name__ == "__main__":
    print("expressions of complexity <= 3 over b1, b2, b3 with + and sqrt:")
    expression_list()
    print("\nupper bounds:")
    bound_table(UPPER_BOUNDS)
    print("\nlower bounds:")
    bound_table(LOWER_BOUNDS)
