"""Per-round, per-agent counters and the reports built from them."""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

from .kb import Policy
from .model import EMPTY, Nogood

METRIC_FIELDS = (
    "generated",
    "sent",
    "received",
    "added",
    "dropped_duplicate",
    "dropped_subsumed",
    "eliminated",
    "kb_size_after",
)
COLUMNS = ("round", "agent") + METRIC_FIELDS

_RECEIVE_KINDS = ("added", "dropped_duplicate", "dropped_subsumed")


class Outcome(enum.Enum):
    REFUTED = "refuted"
    SATURATED = "saturated"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    rounds: int
    witness: Nogood | None = None

    @classmethod
    def refuted(cls, rounds: int) -> Verdict:
        return cls(Outcome.REFUTED, rounds, EMPTY)

    @classmethod
    def saturated(cls, rounds: int) -> Verdict:
        return cls(Outcome.SATURATED, rounds)


@dataclass
class AgentMetrics:
    agent: str
    generated: int = 0
    sent: int = 0
    received: int = 0
    added: int = 0
    dropped_duplicate: int = 0
    dropped_subsumed: int = 0
    eliminated: int = 0
    kb_size_after: int = 0


@dataclass
class RoundMetrics:
    round: int
    agents: list[AgentMetrics]

    def __getitem__(self, agent: int | str) -> AgentMetrics:
        if isinstance(agent, str):
            for row in self.agents:
                if row.agent == agent:
                    return row
            raise KeyError(agent)
        return self.agents[agent]


class MetricEvent(NamedTuple):
    """One countable happening at ``agent`` (a variable index) in ``round``.

    ``kind`` is one of ``generated``, ``sent``, ``added``,
    ``dropped_duplicate``, ``dropped_subsumed`` or ``kb`` (size refresh only).
    """

    round: int
    agent: int
    kind: str
    amount: int = 1
    eliminated: int = 0
    kb_size: int | None = None


@dataclass
class RunReport:
    policy: Policy
    agents: tuple[str, ...]
    scheduler: str = "sync"
    instance_key: str = ""
    verdict: Verdict | None = None
    rounds: list[RoundMetrics] = field(default_factory=list)
    truncated: bool = False
    trace: list = field(default_factory=list)
    # final knowledge base of every agent, keyed by variable index
    stores: dict = field(default_factory=dict)

    def series(self, agent: int | str, name: str) -> list[int]:
        return [getattr(r[agent], name) for r in self.rounds]

    def total(self, agent: int | str, name: str) -> int:
        return sum(self.series(agent, name))

    def final_kb_size(self, agent: int | str) -> int:
        return self.rounds[-1][agent].kb_size_after if self.rounds else 0


def _open_round(report: RunReport, number: int) -> RoundMetrics:
    prev = report.rounds[-1] if report.rounds else None
    rows = []
    for i, label in enumerate(report.agents):
        kb = prev.agents[i].kb_size_after if prev else 0
        rows.append(AgentMetrics(label, kb_size_after=kb))
    rm = RoundMetrics(number, rows)
    report.rounds.append(rm)
    return rm


def record_event(report: RunReport, event: MetricEvent) -> RunReport:
    """Fold *event* into *report* (in place) and return it.

    Rounds are opened contiguously as events move forward; an event for a
    round already closed raises ``ValueError``.
    """
    if not report.rounds:
        _open_round(report, 0)
    current = report.rounds[-1].round
    if event.round < current:
        raise ValueError(f"event for round {event.round} arrived after round {current} opened")
    while current < event.round:
        current += 1
        _open_round(report, current)
    row = report.rounds[-1].agents[event.agent]
    kind = event.kind
    if kind in _RECEIVE_KINDS:
        row.received += event.amount
        setattr(row, kind, getattr(row, kind) + event.amount)
        row.eliminated += event.eliminated
    elif kind in ("generated", "sent"):
        setattr(row, kind, getattr(row, kind) + event.amount)
    elif kind != "kb":
        raise ValueError(f"unknown metric event kind {kind!r}")
    if event.kb_size is not None:
        row.kb_size_after = event.kb_size
    return report


def report_rows(report: RunReport) -> list[dict]:
    rows = []
    for rm in report.rounds:
        for am in rm.agents:
            d = asdict(am)
            rows.append({"round": rm.round, **{c: d[c] for c in COLUMNS[1:]}})
    return rows


def _verdict_dict(report: RunReport) -> dict | None:
    v = report.verdict
    if v is None:
        return None
    return {"outcome": v.outcome.value, "rounds": v.rounds}


def emit_report(report: RunReport, fmt: str = "csv") -> str:
    """Serialise *report* as ``csv`` (metric rows only) or ``json``."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(report_rows(report))
        return buf.getvalue()
    if fmt == "json":
        doc = {
            "policy": report.policy.value,
            "scheduler": report.scheduler,
            "instance": report.instance_key,
            "verdict": _verdict_dict(report),
            "truncated": report.truncated,
            "columns": list(COLUMNS),
            "rounds": report_rows(report),
        }
        return json.dumps(doc, indent=2) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


@dataclass
class Comparison:
    """Side-by-side view of two runs on the same instance."""

    label_a: str
    label_b: str
    agents: tuple[str, ...]
    rows: list[dict]
    totals: dict[str, dict[str, int]]
    verdict_a: Outcome | None
    verdict_b: Outcome | None

    @property
    def verdicts_agree(self) -> bool:
        return self.verdict_a == self.verdict_b

    def to_text(self) -> str:
        a, b = self.label_a, self.label_b
        head = f"{'round':>5} {'agent':>6} {'gen_' + a:>14} {'gen_' + b:>14} {'kb_' + a:>13} {'kb_' + b:>13}"
        lines = [head]
        for r in self.rows:
            lines.append(
                f"{r['round']:>5} {r['agent']:>6} {r['generated_a']:>14} {r['generated_b']:>14}"
                f" {r['kb_size_a']:>13} {r['kb_size_b']:>13}"
            )
        lines.append("")
        for agent in self.agents:
            t = self.totals[agent]
            lines.append(
                f"total {agent}: generated {a}={t['generated_a']} {b}={t['generated_b']}"
                f"  peak kb {a}={t['peak_kb_a']} {b}={t['peak_kb_b']}"
            )
        va = self.verdict_a.value if self.verdict_a else "-"
        vb = self.verdict_b.value if self.verdict_b else "-"
        lines.append(f"verdict {a}={va} {b}={vb} agree={'yes' if self.verdicts_agree else 'NO'}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["round", "agent", "generated_a", "generated_b", "kb_size_a", "kb_size_b"]
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.rows)
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "a": self.label_a,
            "b": self.label_b,
            "rows": self.rows,
            "totals": self.totals,
            "verdict_a": self.verdict_a.value if self.verdict_a else None,
            "verdict_b": self.verdict_b.value if self.verdict_b else None,
            "verdicts_agree": self.verdicts_agree,
        }
        return json.dumps(doc, indent=2) + "\n"


def compare_reports(a: RunReport, b: RunReport) -> Comparison:
    if a.instance_key != b.instance_key or a.agents != b.agents:
        raise ValueError("reports come from different instances")
    n_rounds = max(len(a.rounds), len(b.rounds))

    def at(rep: RunReport, i: int, agent: int) -> tuple[int, int]:
        if i < len(rep.rounds):
            row = rep.rounds[i].agents[agent]
            return row.generated, row.kb_size_after
        # a finished run keeps its last knowledge base and generates nothing
        return 0, rep.rounds[-1].agents[agent].kb_size_after if rep.rounds else 0

    rows = []
    totals = {
        label: {"generated_a": 0, "generated_b": 0, "peak_kb_a": 0, "peak_kb_b": 0}
        for label in a.agents
    }
    for i in range(n_rounds):
        for j, label in enumerate(a.agents):
            ga, ka = at(a, i, j)
            gb, kbb = at(b, i, j)
            rows.append(
                {"round": i, "agent": label, "generated_a": ga, "generated_b": gb,
                 "kb_size_a": ka, "kb_size_b": kbb}
            )
            t = totals[label]
            t["generated_a"] += ga
            t["generated_b"] += gb
            t["peak_kb_a"] = max(t["peak_kb_a"], ka)
            t["peak_kb_b"] = max(t["peak_kb_b"], kbb)
    return Comparison(
        a.policy.value if a.policy != b.policy else "a",
        b.policy.value if a.policy != b.policy else "b",
        a.agents,
        rows,
        totals,
        a.verdict.outcome if a.verdict else None,
        b.verdict.outcome if b.verdict else None,
    )
