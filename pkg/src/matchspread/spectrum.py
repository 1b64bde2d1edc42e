"""Deterministic threshold-graph predictor for perfect matchings in block
models.

For a block structure (U, P) and a level alpha >= 0, the threshold graph
joins u in U_x to v in U_y exactly when

    P(x, y) >= alpha * log(n) / max(n_x, n_y)        (natural log),

equivalently when the pair capacity P(x, y) * max(n_x, n_y) / log(n) is at
least alpha. The graph shrinks as alpha grows, so there is a critical level
alpha_star: the largest alpha at which a perfect matching survives. It is a
bottleneck value, attained at one of the finitely many pair capacities, and
is computed here by binary search over the exact (rational, log-free) scaled
capacities with a matching-feasibility test at each probe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .matching import kernel_matching_csr
from .models import BlockStructure, DegreeSequence, Graph, chung_lu_probabilities
from .rational import fraction_str


@dataclass(frozen=True)
class SpectrumReport:
    """Critical level of the threshold-graph family.

    ``alpha_star`` is None when even the positive-capacity graph has no
    perfect matching. ``alpha_star_scaled`` is the exact rational
    alpha_star * log(n) (no logarithm involved), which the float
    ``alpha_star`` is derived from.
    """

    n: int
    alpha_star: float | None
    alpha_star_scaled: Fraction | None
    witness_matching: tuple | None
    candidate_alphas: tuple
    candidate_scaled: tuple

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "alpha_star": self.alpha_star,
            "alpha_star_scaled": (
                None if self.alpha_star_scaled is None else fraction_str(self.alpha_star_scaled)
            ),
            "witness_matching": (
                None
                if self.witness_matching is None
                else [f"{u}-{v}" for u, v in self.witness_matching]
            ),
            "candidate_alphas": list(self.candidate_alphas),
            "candidate_scaled": [fraction_str(c) for c in self.candidate_scaled],
        }


def pair_capacity_scaled(b: BlockStructure) -> dict:
    """Exact scaled capacity P(x, y) * max(n_x, n_y) per block pair x <= y."""
    sizes = b.sizes
    return {
        (i, j): b.P[i][j] * max(sizes[i], sizes[j])
        for i in range(b.k)
        for j in range(i, b.k)
    }


def pair_capacity_alpha(b: BlockStructure) -> dict:
    """Float capacities in alpha units: scaled / log(n). All threshold
    comparisons in this module go through these exact same floats."""
    logn = math.log(b.n) if b.n > 1 else None
    return {
        pair: (float(c) / logn if logn else math.inf)
        for pair, c in pair_capacity_scaled(b).items()
    }


def _allowed_pairs_scaled(b: BlockStructure, scaled_threshold: Fraction) -> set:
    caps = pair_capacity_scaled(b)
    return {pair for pair, c in caps.items() if c >= scaled_threshold}


def _block_graph_arrays(b: BlockStructure, allowed: set):
    """Edge arrays of the blown-up graph with all pairs of allowed blocks."""
    us, vs = [], []
    for (i, j) in sorted(allowed):
        bi = np.array(b.blocks[i], dtype=np.int64)
        if i == j:
            if len(bi) >= 2:
                iu, iv = np.triu_indices(len(bi), k=1)
                us.append(bi[iu])
                vs.append(bi[iv])
        else:
            bj = np.array(b.blocks[j], dtype=np.int64)
            iu, iv = np.meshgrid(bi, bj, indexing="ij")
            us.append(iu.ravel())
            vs.append(iv.ravel())
    if not us:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(us), np.concatenate(vs)


def _pm_of_two_blocks(b: BlockStructure, allowed: set):
    """Exact feasibility for k = 2: a perfect matching of the blow-up is a
    triple (m00, m01, m11) with 2 m00 + m01 = n0, 2 m11 + m01 = n1 and
    every positive count on an allowed pair."""
    n0, n1 = b.sizes
    mate = np.full(b.n, -1, dtype=np.int64)
    cross_limit = min(n0, n1) if (0, 1) in allowed else 0
    for m01 in range(n0 % 2, cross_limit + 1, 2):
        if (n1 - m01) % 2:
            break  # parities differ: no m01 can work
        m00, m11 = (n0 - m01) // 2, (n1 - m01) // 2
        if (m00 == 0 or (0, 0) in allowed) and (m11 == 0 or (1, 1) in allowed):
            b0 = list(b.blocks[0])
            b1 = list(b.blocks[1])
            for u, v in zip(b0[:m01], b1[:m01]):
                mate[u], mate[v] = v, u
            for rest in (b0[m01:], b1[m01:]):
                for u, v in zip(rest[0::2], rest[1::2]):
                    mate[u], mate[v] = v, u
            return True, mate
    return False, mate


def _pm_of_allowed(b: BlockStructure, allowed: set):
    """(has_pm, mate array) for the blown-up graph, without materializing a
    Graph object (the blow-up can have millions of edges)."""
    n = b.n
    if len(allowed) == b.k * (b.k + 1) // 2:
        # every block pair allowed: the blow-up is the complete graph
        if n % 2:
            return False, np.full(n, -1, dtype=np.int64)
        mate = np.arange(n, dtype=np.int64)
        mate[0::2] += 1
        mate[1::2] -= 1
        return True, mate
    if b.k == 1:
        # no allowed pair (the complete case returned above)
        return n == 0, np.full(max(n, 1), -1, dtype=np.int64)[:n]
    if b.k == 2:
        return _pm_of_two_blocks(b, allowed)
    u, v = _block_graph_arrays(b, allowed)
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    order = np.lexsort((cols, rows))
    indices = cols[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    mate = kernel_matching_csr(n, indptr, indices)
    return int(np.count_nonzero(mate >= 0)) == n, mate


def build_spectrum(b: BlockStructure, alpha) -> Graph:
    """The threshold graph at level alpha (alpha in natural-log units).

    Monotone: alpha1 >= alpha2 implies edges(alpha1) subseteq edges(alpha2).
    """
    alpha = float(alpha)
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    caps = pair_capacity_alpha(b)
    allowed = {pair for pair, c in caps.items() if c >= alpha}
    u, v = _block_graph_arrays(b, allowed)
    return Graph.from_arrays(b.n, u, v)


def critical_alpha(b: BlockStructure) -> SpectrumReport:
    """Largest alpha at which the threshold graph keeps a perfect matching.

    Equals the bottleneck value max over perfect matchings M of the minimum
    pair capacity along M; None when no perfect matching exists even on the
    positive-capacity edges.
    """
    if b.n % 2:
        raise ValueError("odd vertex count: no perfect matching at any level")
    logn = math.log(b.n)
    scaled = sorted(set(pair_capacity_scaled(b).values()))
    candidate_alphas = tuple(float(c) / logn for c in scaled)
    positives = [c for c in scaled if c > 0]

    def feasible(threshold: Fraction):
        return _pm_of_allowed(b, _allowed_pairs_scaled(b, threshold))

    if not positives:
        return SpectrumReport(b.n, None, None, None, candidate_alphas, tuple(scaled))
    ok, mate = feasible(positives[0])
    if not ok:
        return SpectrumReport(b.n, None, None, None, candidate_alphas, tuple(scaled))
    lo, hi = 0, len(positives) - 1
    best_mate = mate
    while lo < hi:  # invariant: positives[lo] feasible, looking for the max
        mid = (lo + hi + 1) // 2
        ok, mate = feasible(positives[mid])
        if ok:
            lo = mid
            best_mate = mate
        else:
            hi = mid - 1
    star = positives[lo]
    witness = tuple(
        (v, int(best_mate[v])) for v in range(b.n) if 0 <= v < best_mate[v]
    )
    return SpectrumReport(
        b.n, float(star) / logn, star, witness, candidate_alphas, tuple(scaled)
    )


def bivalued_spectrum_has_pm(d: DegreeSequence, alpha) -> bool:
    """Closed-form perfect-matching test for the threshold graph of a
    two-valued expected-degree model.

    With x the larger vertex class (the higher-degree class on ties), the
    graph has a perfect matching iff n is even and the capacity of the pair
    (x, low class) reaches alpha. Uses the capped pair probabilities, so it
    agrees with has_perfect_matching(build_spectrum(chung_lu_probabilities(d),
    alpha)) exactly, including at small n where the cap binds.
    """
    alpha = float(alpha)
    d1, n1, d2, n2 = d.bivalued()
    if (n1 + n2) % 2:
        return False
    caps = pair_capacity_alpha(chung_lu_probabilities(d))
    x = 0 if n1 >= n2 else 1
    return caps[(x, 1)] >= alpha
