"""Agents, FIFO channels and the two schedulers that drive them.

One agent owns one variable. Every generated resolvent is sent to each
variable it mentions, through a dedicated channel per ordered agent pair
(a baseline resolvent mentioning its own generator travels over the
loopback channel like any other message).

``run_synchronous`` advances in lock-step rounds: round 0 generates from
the whole knowledge base, later rounds first apply everything sent in the
previous round and then generate from the tails that arrived. This is the
schedule behind the worked example's per-round counts.

``run_async`` is a discrete-event loop with seeded random delays, clamped
so each channel still delivers in send order.
"""

from __future__ import annotations

import enum
import heapq
import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .kb import NogoodStore, Policy, UpdateStatus, init_store
from .metrics import MetricEvent, Outcome, RunReport, Verdict, record_event
from .model import EMPTY, CspInstance, Nogood, check_instance, instance_key
from .resolver import GenerationBatch, generate_full, generate_incremental

Observer = Callable[[int, int, GenerationBatch], None]

__all__ = [
    "AgentState",
    "Channel",
    "Message",
    "MessageKind",
    "Outcome",
    "TraceRecord",
    "Verdict",
    "dump_trace",
    "related_agents",
    "run_async",
    "run_synchronous",
]


class MessageKind(enum.Enum):
    ADD_NOGOOD = "add_nogood"
    HALT = "halt"


@dataclass(frozen=True)
class Message:
    kind: MessageKind
    sender: int
    send_tick: int
    seq: int
    nogood: Nogood | None = None


@dataclass
class Channel:
    """FIFO link from ``src`` to ``dst``.

    ``push`` never lets a message overtake an earlier one: a delivery tick
    earlier than the previous message's is raised to match it.
    """

    src: int
    dst: int
    queue: deque = field(default_factory=deque)
    next_seq: int = 0
    last_deliver: int = 0

    def push(self, kind: MessageKind, send_tick: int, deliver_tick: int, nogood: Nogood | None = None) -> tuple[int, Message]:
        deliver_tick = max(deliver_tick, self.last_deliver)
        msg = Message(kind, self.src, send_tick, self.next_seq, nogood)
        self.next_seq += 1
        self.last_deliver = deliver_tick
        self.queue.append((deliver_tick, msg))
        return deliver_tick, msg

    def pop(self) -> tuple[int, Message]:
        return self.queue.popleft()


@dataclass
class AgentState:
    var: int
    store: NogoodStore
    halted: bool = False


@dataclass(frozen=True)
class TraceRecord:
    """One delivery (or Halt emission) as seen by the receiving side."""

    tick: int
    sender: int
    receiver: int
    kind: str
    seq: int
    send_tick: int
    nogood: Nogood | None
    outcome: str

    def to_json(self, labels: Sequence[str]) -> str:
        return json.dumps(
            {
                "tick": self.tick,
                "sender": labels[self.sender],
                "receiver": labels[self.receiver],
                "kind": self.kind,
                "seq": self.seq,
                "send_tick": self.send_tick,
                "nogood": self.nogood.format(labels) if self.nogood is not None else None,
                "outcome": self.outcome,
            },
            ensure_ascii=False,
        )


def dump_trace(records: list[TraceRecord], labels: Sequence[str]) -> str:
    """Line-delimited JSON, one record per line."""
    return "".join(r.to_json(labels) + "\n" for r in records)


def related_agents(n: Nogood) -> frozenset[int]:
    """Variables mentioned by *n*; these agents receive it."""
    return n.variables()


class _Network:
    def __init__(self, inst: CspInstance, policy: Policy, scheduler: str, observer=None):
        self.inst = inst
        self.policy = policy
        self.observer = observer
        self.agents = [AgentState(v, init_store(v, inst, policy)) for v in range(inst.var_count)]
        self.channels: dict[tuple[int, int], Channel] = {}
        self.report = RunReport(policy, inst.labels, scheduler, instance_key(inst))
        for a in self.agents:
            self.metric(0, a.var, "kb", 0, kb_size=a.store.size())

    def metric(self, rnd: int, agent: int, kind: str, amount: int = 1, eliminated: int = 0, kb_size: int | None = None):
        record_event(self.report, MetricEvent(rnd, agent, kind, amount, eliminated, kb_size))

    def channel(self, src: int, dst: int) -> Channel:
        ch = self.channels.get((src, dst))
        if ch is None:
            ch = self.channels[src, dst] = Channel(src, dst)
        return ch

    def trace(self, tick: int, src: int, dst: int, msg: Message, outcome: str):
        self.report.trace.append(
            TraceRecord(tick, src, dst, msg.kind.value, msg.seq, msg.send_tick, msg.nogood, outcome)
        )

    def generated(self, tick: int, agent: int, batch: GenerationBatch):
        self.metric(tick, agent, "generated", batch.raw_count)
        if self.observer is not None:
            self.observer(tick, agent, batch)

    def finish(self, verdict: Verdict) -> tuple[Verdict, RunReport]:
        self.report.verdict = verdict
        self.report.stores = {a.var: frozenset(a.store.stored) for a in self.agents}
        return verdict, self.report

    def deliver(self, tick: int, dst: int, msg: Message) -> bool:
        """Apply an AddNogood at *dst*; return True if the store grew."""
        agent = self.agents[dst]
        if agent.halted:
            self.trace(tick, msg.sender, dst, msg, "ignored")
            return False
        outcome = agent.store.update(msg.nogood, self.policy)
        self.metric(
            tick, dst, outcome.status.value, 1, len(outcome.eliminated), kb_size=agent.store.size()
        )
        label = outcome.status.value
        if outcome.eliminated:
            label += f":eliminated={len(outcome.eliminated)}"
        self.trace(tick, msg.sender, dst, msg, label)
        return outcome.status is UpdateStatus.ADDED

    def halt_flood(self, tick: int, origin: int):
        self.agents[origin].halted = True
        for a in self.agents:
            if a.var != origin:
                _, msg = self.channel(origin, a.var).push(MessageKind.HALT, tick, tick)
                self.trace(tick, origin, a.var, msg, "halt")
                a.halted = True


def _checked(inst: CspInstance, policy) -> Policy:
    check_instance(inst)
    return Policy.parse(policy)


def run_synchronous(
    inst: CspInstance,
    policy: Policy | str = Policy.EKBM,
    max_rounds: int = 100,
    observer: Observer | None = None,
) -> tuple[Verdict, RunReport]:
    """Lock-step run over rounds ``0 .. max_rounds-1`` at most.

    ``observer(round, agent, batch)`` is called after every generation.
    """
    policy = _checked(inst, policy)
    if max_rounds <= 0:
        raise ValueError("max_rounds must be positive")
    net = _Network(inst, policy, "sync", observer)
    if EMPTY in inst.nogoods:
        return net.finish(Verdict.refuted(0))
    batches: dict[int, GenerationBatch] = {}
    for a in net.agents:
        batches[a.var] = generate_full(a.store, policy)
        a.store.take_new_tails()
        net.generated(0, a.var, batches[a.var])

    rnd = 0
    while True:
        refuting = [v for v, b in sorted(batches.items()) if b.refutes]
        if refuting:
            net.halt_flood(rnd, refuting[0])
            verdict = Verdict.refuted(rnd)
            break
        inbox: dict[int, list[Message]] = {a.var: [] for a in net.agents}
        for src, batch in sorted(batches.items()):
            sent = 0
            for ng in batch.resolvents:
                for dst in sorted(related_agents(ng)):
                    _, msg = net.channel(src, dst).push(MessageKind.ADD_NOGOOD, rnd, rnd + 1, ng)
                    inbox[dst].append(msg)
                    sent += 1
            net.metric(rnd, src, "sent", sent)
        if not any(inbox.values()):
            verdict = Verdict.saturated(rnd)
            break
        if rnd + 1 >= max_rounds:
            net.report.truncated = True
            verdict = Verdict.saturated(rnd)
            break
        rnd += 1
        for a in net.agents:
            for msg in sorted(inbox[a.var], key=lambda m: (m.sender, m.seq)):
                tick, queued = net.channel(msg.sender, a.var).pop()
                assert queued is msg
                net.deliver(rnd, a.var, msg)
        batches = {}
        for a in net.agents:
            if a.store.has_new_tails():
                batch = generate_incremental(a.store, a.store.take_new_tails(), policy)
                batches[a.var] = batch
                net.generated(rnd, a.var, batch)
    return net.finish(verdict)


def run_async(
    inst: CspInstance,
    policy: Policy | str = Policy.EKBM,
    seed: int = 0,
    max_delay: int = 3,
    max_events: int = 1_000_000,
    observer: Observer | None = None,
) -> tuple[Verdict, RunReport]:
    """Discrete-event run with random per-message delay in ``1..max_delay``.

    Events are ordered by (delivery tick, sender, receiver, channel
    sequence). Metric "rounds" are ticks. The run stops at the first empty
    nogood (every other agent is sent a Halt), when no message is in
    flight, or after ``max_events`` deliveries (reported as truncated).
    """
    policy = _checked(inst, policy)
    if max_delay < 1 or max_events <= 0:
        raise ValueError("max_delay and max_events must be positive")
    rng = random.Random(seed)
    net = _Network(inst, policy, "async", observer)
    if EMPTY in inst.nogoods:
        return net.finish(Verdict.refuted(0))
    heap: list[tuple[int, int, int, int]] = []

    def send(tick: int, src: int, batch: GenerationBatch):
        sent = 0
        for ng in batch.resolvents:
            for dst in sorted(related_agents(ng)):
                ch = net.channel(src, dst)
                due, msg = ch.push(MessageKind.ADD_NOGOOD, tick, tick + 1 + int(rng.random() * max_delay), ng)
                heapq.heappush(heap, (due, src, dst, msg.seq))
                sent += 1
        net.metric(tick, src, "sent", sent)

    verdict = None
    for a in net.agents:
        batch = generate_full(a.store, policy)
        a.store.take_new_tails()
        net.generated(0, a.var, batch)
        if batch.refutes:
            net.halt_flood(0, a.var)
            verdict = Verdict.refuted(0)
            break
        send(0, a.var, batch)

    events = 0
    now = 0
    while verdict is None:
        if not heap:
            verdict = Verdict.saturated(now)
            break
        if events >= max_events:
            net.report.truncated = True
            verdict = Verdict.saturated(now)
            break
        due, src, dst, seq = heapq.heappop(heap)
        tick, msg = net.channel(src, dst).pop()
        assert tick == due and msg.seq == seq
        now = due
        events += 1
        if not net.deliver(now, dst, msg):
            continue
        store = net.agents[dst].store
        batch = generate_incremental(store, store.take_new_tails(), policy)
        net.generated(now, dst, batch)
        if batch.refutes:
            net.halt_flood(now, dst)
            verdict = Verdict.refuted(now)
            break
        send(now, dst, batch)
    return net.finish(verdict)
