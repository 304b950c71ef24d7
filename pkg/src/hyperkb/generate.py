"""Seeded random instance generators for sweeps and demos."""

from __future__ import annotations

import random

from .model import CspInstance, Nogood, coloring_instance, nogood


def random_instance(
    rng: random.Random,
    n_vars: tuple[int, int] = (2, 4),
    domain_size: tuple[int, int] = (2, 3),
    n_nogoods: tuple[int, int] = (0, 10),
    max_arity: int = 3,
) -> CspInstance:
    """Random extensional CSP; each nogood touches distinct variables."""
    n = rng.randint(*n_vars)
    domains = tuple(tuple(range(1, rng.randint(*domain_size) + 1)) for _ in range(n))
    ngs: list[Nogood] = []
    for _ in range(rng.randint(*n_nogoods)):
        k = rng.randint(1, min(max_arity, n))
        vs = rng.sample(range(n), k)
        ngs.append(nogood(*((v, rng.choice(domains[v])) for v in vs)))
    return CspInstance(domains, tuple(ngs))


def random_graph(rng: random.Random, n: int, p: float) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]


def random_coloring(rng: random.Random, n: int, p: float, colors: int) -> CspInstance:
    return coloring_instance(n, random_graph(rng, n, p), colors)
