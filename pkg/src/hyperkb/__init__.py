"""Distributed hyper-resolution consistency with managed nogood stores.

Each agent owns one CSP variable and resolves its domain clause against the
nogoods it holds. With ``Policy.EKBM`` an agent drops false resolvents before
sending them and keeps its store free of subsumed nogoods; ``Policy.BASELINE``
only drops exact duplicates.
"""

from .formats import ParseError, dump_csp_text, load_instance, parse_csp_text, parse_dimacs_col
from .kb import NogoodStore, Policy, UpdateOutcome, UpdateStatus, init_store, store_size
from .metrics import Outcome, RunReport, Verdict, compare_reports, emit_report, record_event
from .model import (
    EMPTY,
    CspInstance,
    InstanceError,
    Literal,
    Nogood,
    canonicalize,
    compile_neq_constraint,
    is_false_nogood,
    nogood,
    subsumes,
    worked_example,
    validate_instance,
)
from .oracle import OracleStatus, brute_force_solve, entailment_checker, entails
from .resolver import GenerationBatch, generate_full, generate_incremental
from .simnet import related_agents, run_async, run_synchronous

__version__ = "0.1.0"

__all__ = [
    "EMPTY",
    "CspInstance",
    "GenerationBatch",
    "InstanceError",
    "Literal",
    "Nogood",
    "NogoodStore",
    "OracleStatus",
    "Outcome",
    "ParseError",
    "Policy",
    "RunReport",
    "UpdateOutcome",
    "UpdateStatus",
    "Verdict",
    "brute_force_solve",
    "canonicalize",
    "compare_reports",
    "compile_neq_constraint",
    "dump_csp_text",
    "emit_report",
    "entailment_checker",
    "entails",
    "generate_full",
    "generate_incremental",
    "init_store",
    "is_false_nogood",
    "load_instance",
    "nogood",
    "parse_csp_text",
    "parse_dimacs_col",
    "record_event",
    "related_agents",
    "run_async",
    "run_synchronous",
    "store_size",
    "subsumes",
    "worked_example",
    "validate_instance",
]
