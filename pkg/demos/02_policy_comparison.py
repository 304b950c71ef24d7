"""
Managed and unmanaged knowledge bases
=====================================

The same instance under both insertion policies. Without management
every received nogood is kept and every combination is sent; with it,
false combinations are never formed and narrower nogoods evict the
wider ones they imply. The table printed last is the data behind the
usual "generated" and "KB size" curves.
"""

# %%
from hyperkb import Policy, compare_reports, run_synchronous, worked_example

inst = worked_example()
_, base = run_synchronous(inst, Policy.BASELINE)
_, managed = run_synchronous(inst, Policy.EKBM)

# %%
cmp = compare_reports(base, managed)
print(cmp.to_text())

# %%
# Cumulative generation per agent, one column per policy.
for agent in inst.labels:
    gb = base.series(agent, "generated")
    gm = managed.series(agent, "generated")
    running = [(sum(gb[: i + 1]), sum(gm[: i + 1])) for i in range(len(gb))]
    print(agent, running)
