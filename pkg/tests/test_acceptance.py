"""Acceptance criteria, one test each, each printing a single PASS/FAIL line.

Run just this file with ``pytest tests/test_acceptance.py -v``; the lines are
repeated in the terminal summary. ``python tests/test_acceptance.py`` prints
them without pytest.
"""

import functools
import itertools
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES, naive_cross_product, naive_is_false  # noqa: E402
from hyperkb import Policy, run_async, run_synchronous, worked_example  # noqa: E402
from hyperkb.generate import random_instance  # noqa: E402
from hyperkb.kb import NogoodStore  # noqa: E402
from hyperkb.model import EMPTY, canonicalize  # noqa: E402
from hyperkb.oracle import OracleStatus, brute_force_solve, entailment_checker  # noqa: E402
from hyperkb.resolver import generate_full, generate_incremental  # noqa: E402
from hyperkb.simnet import dump_trace  # noqa: E402

POLICIES = (Policy.BASELINE, Policy.EKBM)
SWEEP_SEED = 4242
SWEEP_SIZE = 500
ASYNC_SEEDS = range(5)
MAX_DELAY = 3
STORE_SEED = 777
STORE_COUNT = 200


def _report(number, title, ok, detail):
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


# ---- criteria 1 and 2: the worked example --------------------------------

def _timed_sync(policy):
    start = time.perf_counter()
    verdict, report = run_synchronous(worked_example(), policy)
    return verdict, report, time.perf_counter() - start


def criterion_1():
    verdict, rep, elapsed = _timed_sync(Policy.BASELINE)
    problems = []
    for x in rep.agents:
        got = {
            "initial kb": rep.rounds[0][x].kb_size_after,
            "round-0 generated": rep.rounds[0][x].generated,
            "round-1 added": rep.rounds[1][x].added,
            "round-1 generated": rep.rounds[1][x].generated,
            "round-2 added": rep.rounds[2][x].added,
            "round-2 generated": rep.rounds[2][x].generated,
        }
        want = {
            "initial kb": 4,
            "round-0 generated": 4,
            "round-1 added": 5,
            "round-1 generated": 21,
            "round-2 added": 2,
            "round-2 generated": 11,
        }
        problems += [f"{x} {k}={got[k]} want {v}" for k, v in want.items() if got[k] != v]
    if len(rep.rounds) != 3:
        problems.append(f"{len(rep.rounds)} rounds")
    if not verdict.outcome.value == "refuted" or verdict.witness != EMPTY:
        problems.append(f"verdict {verdict}")
    if elapsed >= 1.0:
        problems.append(f"took {elapsed:.3f}s")
    detail = "; ".join(problems) or f"4/4/5/21/2/11 per variable, refuted, {elapsed * 1000:.0f} ms"
    return _report(1, "baseline worked example", not problems, detail)


def criterion_2():
    verdict, rep, elapsed = _timed_sync(Policy.EKBM)
    problems = []
    for x in rep.agents:
        got = {
            "round-0 generated": rep.rounds[0][x].generated,
            "round-1 added": rep.rounds[1][x].added,
            "round-1 generated": rep.rounds[1][x].generated,
            "round-2 added": rep.rounds[2][x].added,
            "round-2 eliminated": rep.rounds[2][x].eliminated,
            "kb before refutation": rep.rounds[2][x].kb_size_after,
            "final generated": rep.rounds[2][x].generated,
        }
        want = {
            "round-0 generated": 2,
            "round-1 added": 4,
            "round-1 generated": 10,
            "round-2 added": 2,
            "round-2 eliminated": 8,
            "kb before refutation": 2,
            "final generated": 1,
        }
        problems += [f"{x} {k}={got[k]} want {v}" for k, v in want.items() if got[k] != v]
        final = rep.stores[rep.agents.index(x)]
        if len(final) != 2:
            problems.append(f"{x} final store {sorted(final)}")
    if verdict.outcome.value != "refuted" or verdict.rounds != 2:
        problems.append(f"verdict {verdict}")
    if elapsed >= 1.0:
        problems.append(f"took {elapsed:.3f}s")
    detail = "; ".join(problems) or f"2/4/10/2+8 elim/kb 2/1 empty per variable, {elapsed * 1000:.0f} ms"
    return _report(2, "EKBM worked example", not problems, detail)


def criterion_3():
    _, base, _ = _timed_sync(Policy.BASELINE)
    _, managed, _ = _timed_sync(Policy.EKBM)
    problems = []
    for x in base.agents:
        tb, tm = base.total(x, "generated"), managed.total(x, "generated")
        if (tb, tm) != (36, 13):
            problems.append(f"{x} totals baseline={tb} ekbm={tm}")
        kb_b = base.series(x, "kb_size_after")
        kb_m = managed.series(x, "kb_size_after")
        if any(b < a for a, b in itertools.pairwise(kb_b)):
            problems.append(f"{x} baseline kb decreases {kb_b}")
        if not any(b < a for a, b in itertools.pairwise(kb_m)):
            problems.append(f"{x} ekbm kb never decreases {kb_m}")
    detail = "; ".join(problems) or "13 vs 36 per variable, ekbm kb 4,8,2, baseline kb 4,9,11"
    return _report(3, "generation and KB size comparison", not problems, detail)


# ---- criteria 4 to 7: the random sweep ------------------------------------

def sweep_instances():
    rng = random.Random(SWEEP_SEED)
    # binary nogoods, like the coloring constraints of the worked example
    return [
        random_instance(rng, n_vars=(2, 4), domain_size=(2, 3), n_nogoods=(0, 10), max_arity=2)
        for _ in range(SWEEP_SIZE)
    ]


def _fifo_violations(report):
    last = {}
    bad = 0
    for rec in report.trace:
        key = (rec.sender, rec.receiver)
        prev = last.get(key)
        if prev is not None and (rec.seq <= prev.seq or rec.send_tick < prev.send_tick or rec.tick < prev.tick):
            bad += 1
        last[key] = rec
    return bad


@functools.lru_cache(maxsize=None)
def run_sweep():
    """Every run of the sweep, collecting what criteria 4 to 7 inspect."""
    out = {
        "verdict_errors": [],
        "mismatches": [],
        "truncated": 0,
        "fifo": 0,
        "runs": 0,
        "seen": [],
        "traces": {},
    }
    instances = sweep_instances()
    start = time.perf_counter()
    for i, inst in enumerate(instances):
        expected = brute_force_solve(inst).status
        seen = set(inst.nogoods)

        def observer(_tick, _agent, batch, seen=seen):
            seen.update(batch.resolvents)

        outcomes = {}
        for policy in POLICIES:
            runs = [("sync", run_synchronous(inst, policy, observer=observer))]
            for seed in ASYNC_SEEDS:
                runs.append(
                    (f"async/{seed}", run_async(inst, policy, seed, MAX_DELAY, observer=observer))
                )
            for name, (verdict, report) in runs:
                out["runs"] += 1
                refuted = verdict.outcome.value == "refuted"
                if report.truncated:
                    out["truncated"] += 1
                if refuted != (expected is OracleStatus.UNSAT) or report.truncated:
                    out["verdict_errors"].append((i, policy.value, name, verdict.outcome.value))
                outcomes[(policy, name)] = verdict.outcome
                out["fifo"] += _fifo_violations(report)
                for stored in report.stores.values():
                    seen.update(stored)
                seen.update(r.nogood for r in report.trace if r.nogood is not None)
                if name == "async/0" and i % 5 == 0:
                    out["traces"][(i, policy)] = dump_trace(report.trace, inst.labels).encode()
        for name in ["sync"] + [f"async/{s}" for s in ASYNC_SEEDS]:
            a, b = outcomes[(Policy.BASELINE, name)], outcomes[(Policy.EKBM, name)]
            if a != b:
                out["mismatches"].append((i, name, a.value, b.value))
        out["seen"].append(seen)
    out["elapsed"] = time.perf_counter() - start
    out["instances"] = instances
    return out


def criterion_4():
    s = run_sweep()
    n_unsat = sum(brute_force_solve(inst).status is OracleStatus.UNSAT for inst in s["instances"])
    ok = not s["verdict_errors"] and s["elapsed"] < 60.0 and len(s["instances"]) >= 500
    detail = (
        f"{len(s['instances'])} instances ({n_unsat} unsat), {s['runs']} runs, "
        f"{len(s['verdict_errors'])} violations, {s['truncated']} truncated, {s['elapsed']:.1f} s"
    )
    if s["verdict_errors"]:
        detail += f", first {s['verdict_errors'][0]}"
    return _report(4, "refutation soundness sweep", ok, detail)


def criterion_5():
    s = run_sweep()
    detail = f"{len(s['mismatches'])} mismatches over {len(s['instances'])} instances x 6 schedules"
    if s["mismatches"]:
        detail += f", first {s['mismatches'][0]}"
    return _report(5, "baseline and EKBM verdicts agree", not s["mismatches"], detail)


def criterion_6():
    s = run_sweep()
    checked = 0
    bad = []
    for inst, seen in zip(s["instances"], s["seen"]):
        entails = entailment_checker(inst)
        for n in seen:
            checked += 1
            if not entails(n):
                bad.append((inst, n))
    detail = f"{checked} distinct nogoods checked, {len(bad)} not entailed"
    if bad:
        detail += f", first {bad[0][0].format_nogood(bad[0][1])}"
    return _report(6, "every generated or stored nogood is entailed", not bad, detail)


def criterion_7():
    s = run_sweep()
    differing = 0
    for (i, policy), first in s["traces"].items():
        _, again = run_async(s["instances"][i], policy, 0, MAX_DELAY)
        if dump_trace(again.trace, s["instances"][i].labels).encode() != first:
            differing += 1
    # a second pass with a different instance family, replayed in full
    rng = random.Random(SWEEP_SEED + 1)
    for _ in range(20):
        inst = random_instance(rng)
        for policy in POLICIES:
            seed = rng.randrange(1000)
            a = run_async(inst, policy, seed, MAX_DELAY)[1]
            b = run_async(inst, policy, seed, MAX_DELAY)[1]
            differing += dump_trace(a.trace, inst.labels) != dump_trace(b.trace, inst.labels)
    ok = differing == 0 and s["fifo"] == 0
    detail = (
        f"{len(s['traces']) + 40} replayed runs, {differing} trace differences, "
        f"{s['fifo']} out-of-order deliveries over {s['runs']} runs"
    )
    return _report(7, "deterministic traces and FIFO channels", ok, detail)


# ---- criterion 8: resolver algebra -----------------------------------------

def random_store(rng):
    """A store over owner 0 with a random history split into old and new tails."""
    n_vars = rng.randint(2, 4)
    domain = tuple(range(1, rng.randint(1, 3) + 1))
    store = NogoodStore(0, domain, Policy.BASELINE)

    def draw():
        d = rng.choice(domain)
        k = rng.randint(0, 3)
        # tails may repeat a variable, so false resolvents do occur
        lits = [(rng.randint(1, n_vars - 1), rng.randint(1, 3)) for _ in range(k)]
        return canonicalize([(0, d), *lits])

    for _ in range(rng.randint(len(domain), 4 * len(domain))):
        store.update(draw())
    store.take_new_tails()
    for _ in range(rng.randint(0, 2 * len(domain))):
        store.update(draw())
    return store, store.take_new_tails()


def resolver_violations(store, new):
    problems = []
    old = {d: store.buckets[d] - new[d] for d in store.domain}
    for policy in POLICIES:
        keep = (lambda n: not naive_is_false(n)) if policy is Policy.EKBM else (lambda n: True)
        full = generate_full(store, policy)
        inc = generate_incremental(store, new, policy)
        old_part = {n for n in naive_cross_product(store.domain, old) if keep(n)}
        want_full = [n for n in naive_cross_product(store.domain, store.buckets) if keep(n)]
        if inc.distinct | old_part != full.distinct:
            problems.append(f"{policy.value}: incremental plus old differs from full")
        if full.distinct != set(want_full) or full.raw_count != len(want_full):
            problems.append(f"{policy.value}: full differs from the cross product")
        new_combos = len(want_full) - sum(
            1 for n in naive_cross_product(store.domain, old) if keep(n)
        )
        if inc.raw_count != new_combos:
            problems.append(f"{policy.value}: incremental raw count {inc.raw_count} != {new_combos}")
    for gen in (lambda p: generate_full(store, p), lambda p: generate_incremental(store, new, p)):
        base, managed = gen(Policy.BASELINE), gen(Policy.EKBM)
        if managed.distinct != {n for n in base.distinct if not naive_is_false(n)}:
            problems.append("ekbm output is not baseline minus false resolvents")
        if base.raw_count != managed.raw_count + managed.false_dropped:
            problems.append("raw counts do not account for the dropped false resolvents")
    return problems


def criterion_8():
    rng = random.Random(STORE_SEED)
    failures = []
    with_new = 0
    for k in range(STORE_COUNT):
        store, new = random_store(rng)
        with_new += any(new.values())
        for p in resolver_violations(store, new):
            failures.append((k, p))
    detail = f"{STORE_COUNT} stores ({with_new} with new tails), {len(failures)} violations"
    if failures:
        detail += f", first {failures[0]}"
    return _report(8, "resolver algebra", not failures, detail)


# ---- pytest entry points ----------------------------------------------------

def test_criterion_1_baseline_golden():
    assert criterion_1()


def test_criterion_2_ekbm_golden():
    assert criterion_2()


def test_criterion_3_comparison_counters():
    assert criterion_3()


def test_criterion_4_refutation_soundness():
    assert criterion_4()


def test_criterion_5_policy_agreement():
    assert criterion_5()


def test_criterion_6_nogood_soundness():
    assert criterion_6()


def test_criterion_7_determinism_and_fifo():
    assert criterion_7()


def test_criterion_8_resolver_algebra():
    assert criterion_8()


if __name__ == "__main__":
    results = [c() for c in (criterion_1, criterion_2, criterion_3, criterion_4,
                             criterion_5, criterion_6, criterion_7, criterion_8)]
    sys.exit(0 if all(results) else 1)
