"""Brute-force ground truth by full assignment enumeration.

Deliberately naive: no propagation, no pruning, nothing shared with the
resolution engine beyond the instance types.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator

from .model import CspInstance, Nogood

DEFAULT_CAP = 10**7


class OracleStatus(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"


@dataclass(frozen=True)
class OracleResult:
    status: OracleStatus
    witness: tuple[int, ...] | None
    model_count: int


class EnumerationCapExceeded(RuntimeError):
    pass


def _check_cap(inst: CspInstance, cap: int) -> None:
    total = math.prod(len(d) for d in inst.domains)
    if total > cap:
        raise EnumerationCapExceeded(f"{total} assignments exceed the cap of {cap}")


def assignments(inst: CspInstance) -> Iterator[tuple[int, ...]]:
    """All complete assignments, last variable varying fastest."""
    return itertools.product(*inst.domains)


def violates(assignment: tuple[int, ...], n: Nogood) -> bool:
    """True when every literal of *n* holds under *assignment*."""
    return all(assignment[var] == val for var, val in n.literals)


def is_model(inst: CspInstance, assignment: tuple[int, ...]) -> bool:
    return not any(violates(assignment, n) for n in inst.nogoods)


def models(inst: CspInstance, cap: int = DEFAULT_CAP) -> Iterator[tuple[int, ...]]:
    _check_cap(inst, cap)
    for a in assignments(inst):
        if is_model(inst, a):
            yield a


def brute_force_solve(inst: CspInstance, cap: int = DEFAULT_CAP) -> OracleResult:
    witness = None
    count = 0
    for a in models(inst, cap):
        if witness is None:
            witness = a
        count += 1
    status = OracleStatus.SAT if count else OracleStatus.UNSAT
    return OracleResult(status, witness, count)


def entails(inst: CspInstance, n: Nogood, cap: int = DEFAULT_CAP) -> bool:
    """True when every solution of *inst* also satisfies *n*."""
    return not any(violates(a, n) for a in models(inst, cap))


def entailment_checker(inst: CspInstance, cap: int = DEFAULT_CAP) -> Callable[[Nogood], bool]:
    """Like :func:`entails`, with the model list enumerated once up front."""
    found = list(models(inst, cap))

    def check(n: Nogood) -> bool:
        return not any(violates(a, n) for a in found)

    return check
