"""Per-agent knowledge base with bucketed tails and managed insertion."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .model import CspInstance, Literal, LiteralCodec, Nogood, Tail, is_false_nogood


class Policy(enum.Enum):
    BASELINE = "baseline"
    EKBM = "ekbm"

    @classmethod
    def parse(cls, text: str | Policy) -> Policy:
        if isinstance(text, Policy):
            return text
        return cls(text.lower())


class UpdateStatus(enum.Enum):
    DROPPED_DUPLICATE = "dropped_duplicate"
    DROPPED_SUBSUMED = "dropped_subsumed"
    ADDED = "added"


@dataclass(frozen=True)
class UpdateOutcome:
    status: UpdateStatus
    eliminated: tuple[Nogood, ...] = ()


class NogoodStore:
    """Nogoods held by the agent owning variable ``owner``.

    ``buckets[d]`` holds, for every stored nogood containing ``owner=d``,
    the tail left after removing that literal. ``new_tails`` is the subset
    of bucket entries added since the last :meth:`take_new_tails`.
    The owner's domain clause is implicit in ``domain`` and is not counted
    by :meth:`size`.
    """

    def __init__(self, owner: int, domain: tuple[int, ...], policy: Policy = Policy.BASELINE):
        self.owner = owner
        self.domain = tuple(domain)
        self.policy = policy
        self.stored: set[Nogood] = set()
        self.buckets: dict[int, set[Tail]] = {d: set() for d in self.domain}
        self.new_tails: dict[int, set[Tail]] = {d: set() for d in self.domain}
        self.codec = LiteralCodec()
        # bucket contents as codec masks, kept in step with ``buckets``
        self.bucket_masks: dict[int, dict[Tail, int]] = {d: {} for d in self.domain}

    def owner_literals(self, n: Nogood) -> list[Literal]:
        return [lit for lit in n.literals if lit.var == self.owner]

    def _insert(self, n: Nogood) -> None:
        self.stored.add(n)
        for lit in self.owner_literals(n):
            tail = n.without(lit)
            self.buckets[lit.val].add(tail)
            self.new_tails[lit.val].add(tail)
            self.bucket_masks[lit.val][tail] = self.codec.mask(tail)

    def _remove(self, n: Nogood) -> None:
        self.stored.discard(n)
        for lit in self.owner_literals(n):
            tail = n.without(lit)
            self.buckets[lit.val].discard(tail)
            self.new_tails[lit.val].discard(tail)
            self.bucket_masks[lit.val].pop(tail, None)

    def update(self, received: Nogood, policy: Policy | None = None) -> UpdateOutcome:
        """Insert *received*, applying subsumption management under EKBM."""
        policy = self.policy if policy is None else policy
        own = self.owner_literals(received)
        if not own:
            raise ValueError(
                f"nogood {received!r} has no literal of variable {self.owner}; misrouted"
            )
        if received in self.stored:
            return UpdateOutcome(UpdateStatus.DROPPED_DUPLICATE)
        if policy is Policy.BASELINE:
            self._insert(received)
            return UpdateOutcome(UpdateStatus.ADDED)

        if is_false_nogood(received):
            # senders filter these; a stray one is dropped like a duplicate
            return UpdateOutcome(UpdateStatus.DROPPED_DUPLICATE)
        (lit,) = own
        rest = set(received.without(lit).literals)
        doomed = []
        # Every nogood stored here carries exactly one owner literal, so any
        # subsumption partner of ``received`` lives in the same bucket.
        for tail in sorted(self.buckets[lit.val]):
            tail_lits = set(tail.literals)
            if tail_lits <= rest:
                return UpdateOutcome(UpdateStatus.DROPPED_SUBSUMED)
            if rest <= tail_lits:
                doomed.append(tail.union(Nogood((lit,))))
        for g in doomed:
            self._remove(g)
        self._insert(received)
        return UpdateOutcome(UpdateStatus.ADDED, tuple(doomed))

    def take_new_tails(self) -> dict[int, frozenset[Tail]]:
        taken = {d: frozenset(ts) for d, ts in self.new_tails.items()}
        for ts in self.new_tails.values():
            ts.clear()
        return taken

    def has_new_tails(self) -> bool:
        return any(self.new_tails.values())

    def size(self) -> int:
        return len(self.stored)

    __len__ = size

    def bucket_view(self) -> dict[int, frozenset[Tail]]:
        return {d: frozenset(ts) for d, ts in self.buckets.items()}

    def derived_buckets(self) -> dict[int, set[Tail]]:
        """Recompute buckets from ``stored`` (used to check coherence)."""
        out: dict[int, set[Tail]] = {d: set() for d in self.domain}
        for n in self.stored:
            for lit in self.owner_literals(n):
                out[lit.val].add(n.without(lit))
        return out

    def __repr__(self) -> str:
        return f"NogoodStore(owner={self.owner}, size={self.size()}, policy={self.policy.value})"


def init_store(owner: int, inst: CspInstance, policy: Policy = Policy.BASELINE) -> NogoodStore:
    """Build *owner*'s store from the instance's nogoods that mention it.

    Under EKBM the initial nogoods go through :meth:`NogoodStore.update`, so
    false or subsumed initial constraints never enter the store.
    """
    store = NogoodStore(owner, inst.domains[owner], policy)
    for n in inst.nogoods:
        if any(lit.var == owner for lit in n.literals):
            if policy is Policy.BASELINE:
                store._insert(n)
            else:
                store.update(n, policy)
    return store


def store_size(store: NogoodStore) -> int:
    return store.size()

