"""Cover programs, their LP relaxation, dual spread certificates, and exact
block-invariant permutation probabilities.

The chain implemented here, all in exact rationals:

  * the cover value V(H, q) = min over covers G of H of the expected count
    e_q(G), searched exhaustively on tiny ground sets;
  * its LP relaxation V_f(H, q) <= V(H, q), solved by exact simplex;
  * spread certificates: a probability measure nu on H with
    sum_{T >= S} nu(T) <= 2 prod_{s in S} q_s for every S certifies, by LP
    weak duality, that V_f(H, q) >= 1/2 and hence V(H, q) >= 1/2;
  * the probability that a uniform block-invariant permutation maps a
    partial matching S into a fixed perfect matching H, in closed form and
    by brute-force permutation enumeration;
  * the forced-edge variant, where permutations fix the vertices of a
    pinned edge set F and the certificate only charges the edges outside F.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .core import ProbVector, SubsetFamily, falling_factorial, t_ell_transform
from .errors import InfeasibleSizeError
from .exactlp import solve_min_geq
from .models import BlockStructure, Graph, edge_ground_set, edge_item
from .rational import fraction_str, to_fraction

#: Numerator of the certificate construction q = NUM / max(block sizes).
SPREAD_NUMERATOR = 30

#: Brute-force permutation enumeration budget (product of block factorials).
PERMUTATION_BUDGET = 10**7


@dataclass(frozen=True)
class SpreadMeasure:
    """A probability measure on a family of subsets (weights sum to 1)."""

    support: tuple
    weights: tuple

    def __init__(self, support: Iterable, weights: Iterable):
        supp = tuple(frozenset(s) for s in support)
        w = tuple(to_fraction(x) for x in weights)
        if len(supp) != len(set(supp)):
            raise ValueError("support sets must be distinct")
        if len(supp) != len(w):
            raise ValueError("support and weights must have equal length")
        if any(x < 0 for x in w):
            raise ValueError("weights must be nonnegative")
        if sum(w) != 1:
            raise ValueError(f"weights must sum to 1, got {sum(w)}")
        object.__setattr__(self, "support", supp)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, support: Iterable) -> "SpreadMeasure":
        supp = [frozenset(s) for s in support]
        return cls(supp, [Fraction(1, len(supp))] * len(supp))

    def mass_on_supersets(self, s: frozenset) -> Fraction:
        """sum of nu(T) over support sets T containing s."""
        return sum(
            (w for t, w in zip(self.support, self.weights) if s <= t), Fraction(0)
        )

    def containment_probability(self, s: frozenset) -> Fraction:
        """P(s subseteq H) for H drawn from this measure. Same value as
        mass_on_supersets by definition; kept as a separate literal loop so
        the identity can be cross-checked."""
        total = Fraction(0)
        for t, w in zip(self.support, self.weights):
            if all(x in t for x in s):
                total += w
        return total

    def to_json(self) -> dict:
        return {
            "support": [sorted(t) for t in self.support],
            "weights": [fraction_str(w) for w in self.weights],
        }


@dataclass(frozen=True)
class PermutationMeasure:
    """A probability measure on permutations of 0..n-1 (tuples sigma with
    sigma[i] the image of i)."""

    n: int
    support: tuple
    weights: tuple

    def __init__(self, n: int, support: Iterable, weights: Iterable):
        supp = tuple(tuple(s) for s in support)
        w = tuple(to_fraction(x) for x in weights)
        for s in supp:
            if sorted(s) != list(range(n)):
                raise ValueError(f"{s!r} is not a permutation of range({n})")
        if len(supp) != len(set(supp)) or len(supp) != len(w):
            raise ValueError("support must be distinct and match weights")
        if any(x < 0 for x in w) or sum(w) != 1:
            raise ValueError("weights must be nonnegative and sum to 1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "support", supp)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, n: int, support: Iterable) -> "PermutationMeasure":
        supp = [tuple(s) for s in support]
        return cls(n, supp, [Fraction(1, len(supp))] * len(supp))

    def fixes_vertices(self, vertices: Iterable[int]) -> bool:
        verts = list(vertices)
        return all(s[v] == v for s in self.support for v in verts)


@dataclass(frozen=True)
class CoverSolution:
    """A cover (or fractional cover) of a family together with its value."""

    cover: SubsetFamily
    value: Fraction
    fractional_weights: Mapping | None = None

    def to_json(self) -> dict:
        out = {
            "cover": sorted([sorted(s) for s in self.cover.members]),
            "value": fraction_str(self.value),
        }
        if self.fractional_weights is not None:
            out["fractional_weights"] = {
                ",".join(map(str, sorted(s))): fraction_str(w)
                for s, w in self.fractional_weights.items()
            }
        return out


@dataclass(frozen=True)
class SpreadVerdict:
    ok: bool
    violating_set: frozenset | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violating_set": None if self.violating_set is None else sorted(self.violating_set),
            "lhs": None if self.lhs is None else fraction_str(self.lhs),
            "rhs": None if self.rhs is None else fraction_str(self.rhs),
        }


COVER_EXACT_CEILING = 5
COVER_FRACTIONAL_CEILING = 8


def _candidate_subsets(h: SubsetFamily) -> list[frozenset]:
    """Subsets of some member, the only useful cover generators, in a
    canonical order (by size then items)."""
    seen = set()
    for t in h.members:
        items = sorted(t)
        for k in range(len(items) + 1):
            for combo in itertools.combinations(items, k):
                seen.add(frozenset(combo))
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def _subset_cost(s: frozenset, q: ProbVector) -> Fraction:
    return math.prod((q[x] for x in s), start=Fraction(1))


def cover_value_exact(h: SubsetFamily, q: ProbVector) -> CoverSolution:
    """Minimum expected count e_q(G) over families G covering H (every
    member of H contains some member of G). Exhaustive branch and bound."""
    if len(h.ground) > COVER_EXACT_CEILING:
        raise InfeasibleSizeError(
            f"exact cover search needs |X| <= {COVER_EXACT_CEILING}, got {len(h.ground)}"
        )
    if q.ground != h.ground:
        raise ValueError("probability vector defined on a different ground set")
    members = sorted(h.members, key=lambda s: (len(s), sorted(s)))
    if not members:
        return CoverSolution(SubsetFamily(h.ground, []), Fraction(0))
    candidates = _candidate_subsets(h)
    cost = {s: _subset_cost(s, q) for s in candidates}
    covers = {s: [i for i, t in enumerate(members) if s <= t] for s in candidates}
    cand_for = [
        sorted((s for s in candidates if s <= t), key=lambda s: cost[s])
        for t in members
    ]
    all_mask = (1 << len(members)) - 1

    best_value = Fraction(1)  # the cover {empty set} always works
    best_cover = [frozenset()]

    def dfs(uncovered: int, chosen: list, total: Fraction) -> None:
        nonlocal best_value, best_cover
        if total >= best_value:
            return
        if uncovered == 0:
            best_value = total
            best_cover = list(chosen)
            return
        t_idx = (uncovered & -uncovered).bit_length() - 1
        for s in cand_for[t_idx]:
            new_total = total + cost[s]
            if new_total >= best_value:
                break  # candidates are cost-sorted
            mask = uncovered
            for i in covers[s]:
                mask &= ~(1 << i)
            chosen.append(s)
            dfs(mask, chosen, new_total)
            chosen.pop()

    dfs(all_mask, [], Fraction(0))
    return CoverSolution(SubsetFamily(h.ground, best_cover), best_value)


def fractional_cover_value(h: SubsetFamily, q: ProbVector) -> CoverSolution:
    """The LP relaxation of the cover value: weights g(S) >= 0 with
    sum_{S subseteq T} g(S) >= 1 for every member T, minimizing
    sum g(S) prod_{x in S} q_x. Exact rational optimum."""
    if len(h.ground) > COVER_FRACTIONAL_CEILING:
        raise InfeasibleSizeError(
            f"fractional cover LP needs |X| <= {COVER_FRACTIONAL_CEILING}, got {len(h.ground)}"
        )
    if q.ground != h.ground:
        raise ValueError("probability vector defined on a different ground set")
    members = sorted(h.members, key=lambda s: (len(s), sorted(s)))
    if not members:
        return CoverSolution(SubsetFamily(h.ground, []), Fraction(0), {})
    candidates = _candidate_subsets(h)
    costs = [_subset_cost(s, q) for s in candidates]
    rows = [
        [Fraction(1) if s <= t else Fraction(0) for s in candidates] for t in members
    ]
    rhs = [Fraction(1)] * len(members)
    value, x = solve_min_geq(costs, rows, rhs)
    weights = {s: w for s, w in zip(candidates, x) if w != 0}
    return CoverSolution(SubsetFamily(h.ground, list(weights)), value, weights)


def verify_q_spread(
    nu: SpreadMeasure, q: ProbVector, strict_support: SubsetFamily
) -> SpreadVerdict:
    """Check sum_{T >= S} nu(T) <= 2 prod_{s in S} q_s for every S.

    Only subsets of support sets can violate (any other S has zero mass
    above it), so those are enumerated exhaustively; the verdict covers all
    S of the ground set.
    """
    for t in nu.support:
        if t not in strict_support.members:
            raise ValueError(f"measure charges {set(t)!r} outside the declared support")
        if not t <= set(q.ground.items):
            raise ValueError("support sets must live inside the ground set of q")
    total_subsets = sum(1 << len(t) for t in nu.support)
    if total_subsets > 1 << 24:
        raise InfeasibleSizeError("support too rich to enumerate subset constraints")
    checked = set()
    for t in sorted(nu.support, key=lambda s: (len(s), sorted(s))):
        items = sorted(t)
        for k in range(len(items) + 1):
            for combo in itertools.combinations(items, k):
                s = frozenset(combo)
                if s in checked:
                    continue
                checked.add(s)
                lhs = nu.mass_on_supersets(s)
                rhs = 2 * _subset_cost(s, q)
                if lhs > rhs:
                    return SpreadVerdict(False, s, lhs, rhs)
    return SpreadVerdict(True)


def spread_implies_half(nu: SpreadMeasure, q: ProbVector, h: SubsetFamily) -> bool:
    """Weak-duality consequence of a verified certificate: the cover value
    of the supported family is at least 1/2. Returns the checked verdict."""
    verdict = verify_q_spread(nu, q, h)
    if not verdict.ok:
        raise ValueError(
            f"measure is not q-spread: violated at {set(verdict.violating_set)}"
        )
    return cover_value_exact(h, q).value >= Fraction(1, 2)


def _matching_edge_list(edges: Iterable, n: int) -> list[tuple[int, int]]:
    out = []
    seen = set()
    for e in edges:
        u, v = e
        if u > v:
            u, v = v, u
        if not (0 <= u < v < n):
            raise ValueError(f"edge {e!r} invalid on {n} vertices")
        if u in seen or v in seen:
            raise ValueError("edge set is not vertex-disjoint")
        seen.add(u)
        seen.add(v)
        out.append((u, v))
    return sorted(out)


def _require_perfect_matching(h: Graph) -> list[tuple[int, int]]:
    edges = _matching_edge_list(h.edges, h.n)
    if 2 * len(edges) != h.n:
        raise ValueError("graph is not a perfect matching of its vertex set")
    return edges


def block_permutation_spread_prob(
    h: Graph, b: BlockStructure, s: Iterable, mode: str = "closed_form"
) -> Fraction:
    """P(sigma(S) subseteq H) for sigma a uniform block-invariant
    permutation, H a perfect matching, S a partial matching.

    Closed form: with s_ij, h_ij the S- and H-edge counts between blocks i
    and j, and zeta(i) = 2 s_ii + sum_{j != i} s_ij the S-vertices in block
    i, the count of block-invariant sigma with sigma(S) inside H is

        prod_i 2^{s_ii} (h_ii)_{s_ii} * prod_{i<j} (h_ij)_{s_ij}
            * prod_i (n_i - zeta(i))!

    over prod_i n_i!. The 2^{s_ii} accounts for the two vertex maps that
    realize one within-block edge map; brute force over all block-invariant
    permutations validates it.
    """
    if b.n != h.n:
        raise ValueError("matching and block structure disagree on n")
    h_edges = _require_perfect_matching(h)
    s_edges = _matching_edge_list(s, b.n)
    blk = b.vertex_block()
    k = b.k

    def pair_counts(edges):
        counts: dict[tuple[int, int], int] = {}
        for u, v in edges:
            i, j = sorted((int(blk[u]), int(blk[v])))
            counts[(i, j)] = counts.get((i, j), 0) + 1
        return counts

    h_counts = pair_counts(h_edges)
    s_counts = pair_counts(s_edges)

    if mode == "closed_form":
        num = Fraction(1)
        for (i, j), sij in s_counts.items():
            hij = h_counts.get((i, j), 0)
            ff = falling_factorial(hij, sij)
            num *= (Fraction(2) ** sij) * ff if i == j else ff
            if num == 0:
                return Fraction(0)
        denom = Fraction(1)
        for i in range(k):
            ni = b.sizes[i]
            zeta = 2 * s_counts.get((i, i), 0) + sum(
                s_counts.get((min(i, j), max(i, j)), 0) for j in range(k) if j != i
            )
            num *= math.factorial(ni - zeta)
            denom *= math.factorial(ni)
        return num / denom

    if mode == "brute_force":
        total = math.prod(math.factorial(sz) for sz in b.sizes)
        if total > PERMUTATION_BUDGET:
            raise InfeasibleSizeError(
                f"brute force needs prod n_i! <= {PERMUTATION_BUDGET}, got {total}"
            )
        h_set = set(h_edges)
        sigma = list(range(b.n))
        good = 0
        block_lists = [list(blk_verts) for blk_verts in b.blocks]
        for perms in itertools.product(
            *[itertools.permutations(bl) for bl in block_lists]
        ):
            for bl, pm in zip(block_lists, perms):
                for src, dst in zip(bl, pm):
                    sigma[src] = dst
            ok = True
            for u, v in s_edges:
                a, c = sigma[u], sigma[v]
                if (a, c) not in h_set and (c, a) not in h_set:
                    ok = False
                    break
            good += ok
        return Fraction(good, total)

    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class SpreadQResult:
    q: ProbVector
    capped: bool
    capped_items: tuple


def spread_q_construction(b: BlockStructure, alpha) -> SpreadQResult:
    """The certificate vector q_uv = 30 / max(n_y, n_z) on edges whose block
    pair reaches level alpha in the threshold graph, 0 elsewhere. Values are
    capped at 1 (the cap can bind at small n) and the cap is flagged."""
    from .spectrum import pair_capacity_alpha

    alpha = float(alpha)
    caps = pair_capacity_alpha(b)
    blk = b.vertex_block()
    sizes = b.sizes
    ground = edge_ground_set(b.n)
    values = {}
    capped_items = []
    for u in range(b.n):
        for v in range(u + 1, b.n):
            i, j = sorted((int(blk[u]), int(blk[v])))
            if caps[(i, j)] >= alpha:
                raw = Fraction(SPREAD_NUMERATOR, max(sizes[i], sizes[j]))
                if raw > 1:
                    capped_items.append(edge_item(u, v))
                    raw = Fraction(1)
                values[edge_item(u, v)] = raw
            else:
                values[edge_item(u, v)] = Fraction(0)
    return SpreadQResult(
        ProbVector(ground, values), bool(capped_items), tuple(sorted(capped_items))
    )


def _is_subgraph_isomorphic(edges: list[tuple[int, int]], host: Graph) -> bool:
    """Is the graph spanned by ``edges`` isomorphic to a subgraph of host
    (injective vertex map sending every edge to a host edge)?"""
    verts = sorted({x for e in edges for x in e})
    if not verts:
        return True
    host_adj = host.adjacency_sets()
    host_verts = list(range(host.n))
    adj = {v: set() for v in verts}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    order = sorted(verts, key=lambda v: -len(adj[v]))
    assignment: dict[int, int] = {}
    used: set[int] = set()

    def extend(idx: int) -> bool:
        if idx == len(order):
            return True
        v = order[idx]
        for cand in host_verts:
            if cand in used:
                continue
            ok = True
            for u in adj[v]:
                if u in assignment and assignment[u] not in host_adj[cand]:
                    ok = False
                    break
            if ok:
                assignment[v] = cand
                used.add(cand)
                if extend(idx + 1):
                    return True
                used.discard(cand)
                del assignment[v]
        return False

    return extend(0)


@dataclass(frozen=True)
class ForcedSpreadVerdict:
    ok: bool
    violating_edges: tuple | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None
    amplified_p: ProbVector | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violating_edges": (
                None
                if self.violating_edges is None
                else [f"{u}-{v}" for u, v in self.violating_edges]
            ),
            "lhs": None if self.lhs is None else fraction_str(self.lhs),
            "rhs": None if self.rhs is None else fraction_str(self.rhs),
            "amplified_p": None if self.amplified_p is None else self.amplified_p.to_json(),
        }


FORCED_CHECK_VERTEX_CEILING = 8
FORCED_CHECK_SUBSET_BUDGET = 500_000


def forced_spread_check(
    h: Graph, f: Iterable, pi: PermutationMeasure, q: ProbVector
) -> ForcedSpreadVerdict:
    """Premise check for the forced-edge certificate: for every edge set R
    with F subseteq R isomorphic to a subgraph of h,

        P_sigma(sigma(R) subseteq h) <= 2 prod_{r in R minus F} q_r,

    where every sigma in the support fixes each vertex incident to F. On
    success also reports the amplified vector p = T_{|E(h)|}(q)."""
    n = h.n
    if n > FORCED_CHECK_VERTEX_CEILING:
        raise InfeasibleSizeError(
            f"forced-edge premise enumeration needs n <= {FORCED_CHECK_VERTEX_CEILING}"
        )
    if pi.n != n:
        raise ValueError("permutation measure acts on the wrong vertex set")
    f_edges = []
    for e in f:
        u, v = e
        if u > v:
            u, v = v, u
        if (u, v) not in h.edges:
            raise ValueError(f"forced edge {e!r} not an edge of h")
        f_edges.append((u, v))
    f_edges = sorted(set(f_edges))
    fixed_vertices = sorted({x for e in f_edges for x in e})
    if not pi.fixes_vertices(fixed_vertices):
        raise ValueError("a support permutation moves a vertex incident to F")
    if q.ground != edge_ground_set(n):
        raise ValueError("q must live on the complete edge ground set of h")

    all_edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    f_set = set(f_edges)
    other = [e for e in all_edges if e not in f_set]
    max_extra = h.edge_count() - len(f_edges)
    budget = sum(math.comb(len(other), kk) for kk in range(max_extra + 1))
    if budget > FORCED_CHECK_SUBSET_BUDGET:
        raise InfeasibleSizeError("too many candidate edge sets to enumerate")

    h_set = set(h.edges)

    def sigma_prob(r_edges) -> Fraction:
        total = Fraction(0)
        for sigma, w in zip(pi.support, pi.weights):
            ok = True
            for u, v in r_edges:
                a, c = sigma[u], sigma[v]
                if (a, c) not in h_set and (c, a) not in h_set:
                    ok = False
                    break
            if ok:
                total += w
        return total

    for kk in range(max_extra + 1):
        for combo in itertools.combinations(other, kk):
            r_edges = f_edges + list(combo)
            if not _is_subgraph_isomorphic(r_edges, h):
                continue
            lhs = sigma_prob(r_edges)
            if lhs == 0:
                continue
            rhs = 2 * math.prod(
                (q[edge_item(u, v)] for u, v in combo), start=Fraction(1)
            )
            if lhs > rhs:
                return ForcedSpreadVerdict(False, tuple(sorted(r_edges)), lhs, rhs)
    return ForcedSpreadVerdict(True, amplified_p=t_ell_transform(q, max(h.edge_count(), 1)))
