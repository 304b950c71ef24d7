"""
Reading instances
=================

Graph coloring problems come as DIMACS ``.col`` files; anything else uses
the line-oriented CSP text format. Both load into the same instance type.
"""

# %%
import random

from hyperkb.formats import dump_csp_text, dump_dimacs_col, parse_csp_text, parse_dimacs_col
from hyperkb.generate import random_graph
from hyperkb.oracle import brute_force_solve

col = """c the triangle
p edge 3 3
e 1 2
e 2 3
e 1 3
"""
inst = parse_dimacs_col(col, colors=2)
print(dump_csp_text(inst))

# %%
# The text form round-trips.
assert parse_csp_text(dump_csp_text(inst)) == inst

# %%
# A random graph, written out and read back with three colors.
edges = random_graph(random.Random(3), 5, 0.6)
text = dump_dimacs_col(5, edges)
print(text)
graph = parse_dimacs_col(text, colors=3)
res = brute_force_solve(graph)
print(res.status.value, "with", res.model_count, "colorings")
