"""
Random delays
=============

The asynchronous scheduler delivers each message after a seeded random
delay while keeping every channel first-in first-out. The verdict never
depends on the seed; the amount of work can.
"""

# %%
from hyperkb import Policy, run_async, worked_example
from hyperkb.simnet import dump_trace

inst = worked_example()
for seed in range(5):
    for policy in Policy:
        verdict, report = run_async(inst, policy, seed=seed, max_delay=4)
        generated = sum(report.total(a, "generated") for a in inst.labels)
        print(f"seed {seed} {policy.value:8} {verdict.outcome.value} at tick {verdict.rounds}, "
              f"generated {generated}, {len(report.trace)} trace records")

# %%
# The first few deliveries of one run, as written by ``--trace``.
_, report = run_async(inst, Policy.EKBM, seed=0)
print("".join(dump_trace(report.trace, inst.labels).splitlines(keepends=True)[:6]))
