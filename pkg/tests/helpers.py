"""Shared generators and independent oracles used across the test suite."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from matchspread.core import GroundSet, ProbVector, SubsetFamily, up_closure
from matchspread.models import Graph
from matchspread.spread import SpreadMeasure, verify_q_spread

ITEMS = "abcdefghijklmnopqrstuvwx"


def ground(k: int) -> GroundSet:
    return GroundSet(ITEMS[:k])


def random_increasing_family(rng, gset: GroundSet, max_generators: int = 4) -> SubsetFamily:
    """Upward closure of a few random generator sets; never empty, and the
    full power set only if a generator came out empty (rerolled)."""
    items = list(gset.items)
    while True:
        gens = []
        for _ in range(rng.randint(1, max_generators)):
            size = rng.randint(1, max(1, len(items)))
            gens.append(frozenset(rng.sample(items, size)))
        fam = up_closure(SubsetFamily(gset, gens))
        if 0 < len(fam.members) < (1 << len(gset)):
            return fam


def random_prob_vector(rng, gset: GroundSet, denom: int = 8) -> ProbVector:
    return ProbVector(gset, {x: Fraction(rng.randint(0, denom), denom) for x in gset})


def union_hit_probability(family: SubsetFamily, p: ProbVector, k: int) -> Fraction:
    """P(S_1 cup ... cup S_k in family) for k independent p-samples, by
    exhaustive enumeration over k-tuples of subsets (tiny ground sets)."""
    items = family.ground.items
    weighted = []
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            s = frozenset(combo)
            w = math.prod(
                (p[x] if x in s else 1 - p[x] for x in items), start=Fraction(1)
            )
            weighted.append((s, w))
    total = Fraction(0)
    for tup in itertools.product(weighted, repeat=k):
        union = frozenset().union(*(s for s, _ in tup))
        if union in family.members:
            total += math.prod((w for _, w in tup), start=Fraction(1))
    return total


def random_graph(rng, n: int, p: float) -> Graph:
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Graph(n, edges)


def all_perfect_matchings(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Every perfect matching of the complete graph on 0..n-1."""
    if n % 2:
        return []

    def rec(vertices: tuple[int, ...]):
        if not vertices:
            yield ()
            return
        v = vertices[0]
        for i in range(1, len(vertices)):
            u = vertices[i]
            rest = vertices[1:i] + vertices[i + 1 :]
            for tail in rec(rest):
                yield ((v, u),) + tail

    return [tuple(sorted(m)) for m in rec(tuple(range(n)))]


def all_matchings(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Every vertex-disjoint edge set of the complete graph (incl. empty)."""
    out = [()]
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for k in range(1, n // 2 + 1):
        for combo in itertools.combinations(edges, k):
            verts = [x for e in combo for x in e]
            if len(verts) == len(set(verts)):
                out.append(tuple(sorted(combo)))
    return out


def verified_spread_triple(rng, max_items: int = 5):
    """(family, q, nu) with nu certified q-spread, built by bumping a
    uniform q until exact verification passes."""
    k = rng.randint(2, max_items)
    gset = ground(k)
    items = list(gset.items)
    nsets = rng.randint(1, 4)
    support = set()
    while len(support) < nsets:
        size = rng.randint(0, k)
        support.add(frozenset(rng.sample(items, size)))
    support = sorted(support, key=lambda s: (len(s), sorted(s)))
    raw = [rng.randint(1, 8) for _ in support]
    tot = sum(raw)
    nu = SpreadMeasure(support, [Fraction(r, tot) for r in raw])
    family = SubsetFamily(gset, support)
    denom = 16
    for num in range(1, denom + 1):
        q = ProbVector.uniform(gset, Fraction(num, denom))
        if verify_q_spread(nu, q, family).ok:
            return family, q, nu
    raise AssertionError("q = 1 must verify: total mass 1 <= 2")
