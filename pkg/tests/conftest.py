import itertools

import pytest
from hypothesis import strategies as st

from hyperkb.model import CspInstance, Literal, Nogood, canonicalize, nogood, worked_example

# variable indices for the three-vertex example (labels x1, x2, x3)
X1, X2, X3 = 0, 1, 2


def ng(*pairs):
    return nogood(*pairs)


@pytest.fixture
def example():
    return worked_example()


def naive_cross_product(domain, buckets):
    """Every combination of one tail per bucket, in lexicographic tail order."""
    lists = [sorted(buckets[d]) for d in domain]
    if not lists or any(not ls for ls in lists):
        return []
    out = []
    for combo in itertools.product(*lists):
        lits = set()
        for tail in combo:
            lits.update(tail.literals)
        out.append(canonicalize(lits))
    return out


def naive_is_false(n):
    lits = list(n.literals)
    return any(a.var == b.var and a.val != b.val for a, b in itertools.combinations(lits, 2))


def all_assignments(domains):
    return itertools.product(*domains)


def violated(assignment, n):
    return all(assignment[v] == d for v, d in n.literals)


# ---- hypothesis strategies -------------------------------------------------

DOMAIN = (1, 2, 3)


def literals(n_vars=4, values=DOMAIN):
    return st.builds(Literal, st.integers(0, n_vars - 1), st.sampled_from(values))


def nogoods(n_vars=4, values=DOMAIN, max_size=4):
    return st.lists(literals(n_vars, values), max_size=max_size).map(canonicalize)


def nogoods_with(owner, n_vars=4, values=DOMAIN, max_size=3):
    """Nogoods guaranteed to mention *owner*."""
    return st.tuples(st.sampled_from(values), nogoods(n_vars, values, max_size)).map(
        lambda t: t[1].union(Nogood((Literal(owner, t[0]),)))
    )


@st.composite
def small_instances(draw, max_vars=4, max_domain=3, max_nogoods=8, max_arity=3):
    n = draw(st.integers(1, max_vars))
    domains = tuple(tuple(range(1, draw(st.integers(1, max_domain)) + 1)) for _ in range(n))
    ngs = []
    for _ in range(draw(st.integers(0, max_nogoods))):
        k = draw(st.integers(1, min(max_arity, n)))
        vs = draw(st.permutations(range(n)))[:k]
        ngs.append(canonicalize((v, draw(st.sampled_from(domains[v]))) for v in vs))
    return CspInstance(domains, tuple(ngs))


# ---- acceptance summary ----------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
