"""Shared test utilities: independent oracles and data builders."""

import random

from mszip import CodeTriple, Multiset


def linear_forward(pairs, sym):
    """Linear-scan oracle for forward_lookup over canonical (sym, count) pairs."""
    c = 0
    for s, cnt in pairs:
        if s == sym:
            return c, cnt
        if s > sym:
            break
        c += cnt
    raise KeyError(sym)


def linear_reverse(pairs, i):
    """Linear-scan oracle for reverse_lookup."""
    c = 0
    for s, cnt in pairs:
        if i < c + cnt:
            return s, c, cnt
        c += cnt
    raise IndexError(i)


def random_triple(rng: random.Random, max_n=1 << 15) -> CodeTriple:
    n = rng.randint(1, max_n)
    p = rng.randint(1, n)
    c = rng.randint(0, n - p)
    return CodeTriple(c, p, n)


def random_multiset(rng: random.Random, max_total=256, alphabet=1 << 16) -> Multiset:
    """Mixed repeat profiles: unique-heavy, skewed, all-same."""
    total = rng.randint(1, max_total)
    profile = rng.randrange(4)
    if profile == 0:  # mostly unique
        syms = [rng.randrange(alphabet) for _ in range(total)]
    elif profile == 1:  # few symbols, heavy repeats
        pool = [rng.randrange(alphabet) for _ in range(max(1, total // 8))]
        syms = [rng.choice(pool) for _ in range(total)]
    elif profile == 2:  # geometric-ish run lengths
        syms = []
        while len(syms) < total:
            s = rng.randrange(alphabet)
            run = min(total - len(syms), 1 + int(rng.expovariate(0.5)))
            syms.extend([s] * run)
    else:  # single symbol
        syms = [rng.randrange(alphabet)] * total
    return Multiset.from_iterable(syms)
