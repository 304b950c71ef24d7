"""Domain vocabulary: literals, nogoods and CSP instances.

A nogood is stored as a canonical (sorted, duplicate-free) tuple of
``Literal`` values and stands for the negated conjunction of its literals.
The empty nogood is the refutation.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence


class Literal(NamedTuple):
    """The assignment ``var = val``; tuple ordering gives the canonical order."""

    var: int
    val: int


@dataclass(frozen=True, order=True)
class Nogood:
    literals: tuple[Literal, ...] = ()
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(self.literals))

    def __hash__(self) -> int:
        return self._hash

    def __iter__(self):
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __contains__(self, lit) -> bool:
        return lit in self.literals

    @property
    def is_empty(self) -> bool:
        return not self.literals

    def variables(self) -> frozenset[int]:
        return frozenset(lit.var for lit in self.literals)

    def union(self, *others: Nogood) -> Nogood:
        lits = set(self.literals)
        for other in others:
            lits.update(other.literals)
        return canonicalize(lits)

    def without(self, lit: Literal) -> Nogood:
        return Nogood(tuple(x for x in self.literals if x != lit))

    def format(self, labels: Sequence[str] | None = None) -> str:
        if not self.literals:
            return "¬()"
        parts = []
        for var, val in self.literals:
            name = labels[var] if labels is not None else f"v{var}"
            parts.append(f"{name}={val}")
        return "¬(" + " ∧ ".join(parts) + ")"

    def __repr__(self) -> str:
        return f"Nogood({self.format()})"


# A bucket entry: what is left of a nogood once the owner literal is removed.
Tail = Nogood

EMPTY = Nogood(())


def canonicalize(literals: Iterable[Literal | tuple[int, int]]) -> Nogood:
    """Sort and deduplicate *literals* into a ``Nogood``."""
    return Nogood(tuple(sorted({Literal(int(v), int(d)) for v, d in literals})))


def nogood(*pairs: tuple[int, int]) -> Nogood:
    """Shorthand: ``nogood((0, 1), (1, 1))`` is ``¬(v0=1 ∧ v1=1)``."""
    return canonicalize(pairs)


def is_false_nogood(n: Nogood) -> bool:
    """True when *n* assigns two different values to one variable.

    Such a conjunction can never hold, so the nogood constrains nothing.
    """
    seen: dict[int, int] = {}
    for var, val in n.literals:
        if seen.setdefault(var, val) != val:
            return True
    return False


def subsumes(a: Nogood, b: Nogood) -> bool:
    """True when the literals of *a* are a subset of those of *b*."""
    if len(a) > len(b):
        return False
    return set(a.literals) <= set(b.literals)


class InstanceError(ValueError):
    """An instance failed validation; ``violations`` lists every problem."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid instance")


@dataclass(frozen=True)
class CspInstance:
    """Variables ``0..n-1`` with integer domains and extensional nogoods.

    Nogoods are stored sorted and deduplicated so two instances with the same
    constraints compare equal regardless of input order.
    """

    domains: tuple[tuple[int, ...], ...]
    nogoods: tuple[Nogood, ...] = ()
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "domains", tuple(tuple(int(v) for v in d) for d in self.domains))
        object.__setattr__(self, "nogoods", tuple(sorted(set(self.nogoods))))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"x{i + 1}" for i in range(len(self.domains))))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def var_count(self) -> int:
        return len(self.domains)

    def label(self, var: int) -> str:
        return self.labels[var]

    def format_nogood(self, n: Nogood) -> str:
        return n.format(self.labels)


def validate_instance(inst: CspInstance) -> list[str]:
    """Return every invariant violation in *inst* (empty list means valid)."""
    problems = []
    n = inst.var_count
    if len(inst.labels) != n:
        problems.append(f"label count {len(inst.labels)} does not match variable count {n}")
    elif len(set(inst.labels)) != n:
        problems.append("duplicate variable labels")
    for var, dom in enumerate(inst.domains):
        if not dom:
            problems.append(f"empty domain for variable {var}")
        elif len(set(dom)) != len(dom):
            problems.append(f"repeated value in domain of variable {var}")
        if any(v < 0 for v in dom):
            problems.append(f"negative value in domain of variable {var}")
    for ng in inst.nogoods:
        for var, val in ng.literals:
            if not 0 <= var < n:
                problems.append(f"nogood {ng.format()} references undeclared variable {var}")
            elif val not in inst.domains[var]:
                problems.append(
                    f"nogood {ng.format()} uses value {val} outside the domain of variable {var}"
                )
    return problems


def check_instance(inst: CspInstance) -> CspInstance:
    problems = validate_instance(inst)
    if problems:
        raise InstanceError(problems)
    return inst


def compile_neq_constraint(u: int, v: int, domains: Sequence[Sequence[int]] | CspInstance) -> list[Nogood]:
    """Expand ``u != v`` into one pairwise nogood per shared value."""
    if u == v:
        raise ValueError(f"not-equal constraint on a single variable ({u})")
    if isinstance(domains, CspInstance):
        domains = domains.domains
    shared = sorted(set(domains[u]) & set(domains[v]))
    return [nogood((u, d), (v, d)) for d in shared]


def coloring_instance(n: int, edges: Iterable[tuple[int, int]], colors: int) -> CspInstance:
    """Graph coloring over vertices ``0..n-1`` with colors ``1..colors``."""
    domains = tuple(tuple(range(1, colors + 1)) for _ in range(n))
    ngs: list[Nogood] = []
    for u, v in edges:
        ngs.extend(compile_neq_constraint(u, v, domains))
    return CspInstance(domains, tuple(ngs))


def worked_example() -> CspInstance:
    """Three mutually adjacent vertices, two colors: unsatisfiable."""
    return coloring_instance(3, [(0, 1), (0, 2), (1, 2)], 2)


def instance_key(inst: CspInstance) -> str:
    """Stable short digest identifying an instance's content."""
    body = repr((inst.domains, [n.literals for n in inst.nogoods], inst.labels))
    return hashlib.sha256(body.encode()).hexdigest()[:16]


class LiteralCodec:
    """Bitmask encoding of literal sets; bit ``i`` stands for ``literals[i]``.

    The codec only grows: encoding a nogood with unseen literals assigns
    them fresh bits. Masks and decodings are memoised.
    """

    def __init__(self, literals: Iterable[Literal] = ()):
        self.literals: list[Literal] = []
        self.bit: dict[Literal, int] = {}
        self._masks: dict[Nogood, int] = {}
        self._decoded: dict[int, Nogood] = {}
        self._groups: dict[int, int] = {}
        self.var_groups: list[int] = []
        for lit in sorted(set(literals)):
            self._add(lit)

    def _add(self, lit: Literal) -> int:
        i = len(self.literals)
        self.literals.append(lit)
        self.bit[lit] = i
        g = self._groups[lit.var] = self._groups.get(lit.var, 0) | (1 << i)
        if g & (g - 1):
            # only variables with two or more literals can make a union false
            self.var_groups = [x for x in self._groups.values() if x & (x - 1)]
        return i

    @property
    def width(self) -> int:
        return len(self.literals)

    def mask(self, n: Nogood) -> int:
        m = self._masks.get(n)
        if m is None:
            m = 0
            for lit in n.literals:
                i = self.bit.get(lit)
                if i is None:
                    i = self._add(lit)
                m |= 1 << i
            self._masks[n] = m
        return m

    def is_false(self, m: int) -> bool:
        for g in self.var_groups:
            x = m & g
            if x & (x - 1):
                return True
        return False

    def decode(self, m: int) -> Nogood:
        n = self._decoded.get(m)
        if n is None:
            lits = []
            i = 0
            rest = m
            while rest:
                if rest & 1:
                    lits.append(self.literals[i])
                rest >>= 1
                i += 1
            n = self._decoded[m] = Nogood(tuple(sorted(lits)))
        return n
