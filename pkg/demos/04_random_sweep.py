"""
Checking verdicts against enumeration
=====================================

Small random instances, each solved by brute force and by both policies.
A refutation must mean there is no solution and saturation must mean
there is one.
"""

# %%
import random
from collections import Counter

from hyperkb import Policy, run_synchronous
from hyperkb.generate import random_instance
from hyperkb.oracle import OracleStatus, brute_force_solve

rng = random.Random(1)
tally = Counter()
for _ in range(200):
    inst = random_instance(rng, max_arity=2)
    truth = brute_force_solve(inst).status
    for policy in Policy:
        verdict, _ = run_synchronous(inst, policy)
        agrees = (verdict.outcome.value == "refuted") == (truth is OracleStatus.UNSAT)
        tally[(policy.value, truth.value, agrees)] += 1

for key, count in sorted(tally.items()):
    print(key, count)

# %%
# How much the managed policy saves across the sweep.
rng = random.Random(1)
saved = []
for _ in range(200):
    inst = random_instance(rng, max_arity=2)
    totals = {}
    for policy in Policy:
        _, report = run_synchronous(inst, policy)
        totals[policy] = sum(report.total(a, "generated") for a in inst.labels)
    saved.append(totals[Policy.BASELINE] - totals[Policy.EKBM])
print("generation saved: min", min(saved), "max", max(saved), "mean", sum(saved) / len(saved))
