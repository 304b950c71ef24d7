"""
The three-vertex coloring example
=================================

Three mutually adjacent vertices and two colors: the instance has no
solution. Each agent owns one vertex, resolves its domain against the
nogoods it holds and passes what it learns on. This script walks one
agent's view through the first rounds and then runs the whole network.
"""

# %%
from hyperkb import Policy, run_synchronous, worked_example
from hyperkb.kb import init_store
from hyperkb.resolver import generate_full

inst = worked_example()
for n in inst.nogoods:
    print(inst.format_nogood(n))

# %%
# x1 sorts its nogoods into one bucket per value it can take.
store = init_store(0, inst, Policy.EKBM)
for value, tails in store.bucket_view().items():
    print(f"x1={value}:", sorted(t.format(inst.labels) for t in tails))

# %%
# Picking one tail per bucket gives a nogood without x1. Combinations such
# as x2=1 with x2=2 can never all hold and are filtered out.
batch = generate_full(store)
print("generated", batch.raw_count, "dropped as false", batch.false_dropped)
for n in batch.resolvents:
    print("  ", inst.format_nogood(n))

# %%
# The full lock-step run, round by round.
verdict, report = run_synchronous(inst, Policy.EKBM)
for rm in report.rounds:
    row = rm["x1"]
    print(f"round {rm.round}: generated={row.generated} added={row.added} "
          f"eliminated={row.eliminated} kb={row.kb_size_after}")
print(verdict.outcome.value, "in round", verdict.rounds)
print("x1 ends with", sorted(inst.format_nogood(n) for n in report.stores[0]))
