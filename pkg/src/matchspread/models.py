"""Random graph models: product-measure subsets, the stochastic block model,
Chung-Lu expected-degree graphs, and uniform graphs with exact degrees.

Samplers are pure functions of (parameters, RngStream): the same stream
always reproduces the same draw, and concurrent trials should use distinct
child streams split from a master seed.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import GroundSet, ProbVector
from .rational import check_probability, to_fraction


@dataclass(frozen=True)
class RngStream:
    """A splittable, reproducible random stream (seed plus spawn path)."""

    seed: int
    path: tuple[int, ...] = ()

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=self.path)
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, index: int) -> "RngStream":
        return RngStream(self.seed, self.path + (index,))


@dataclass(frozen=True)
class Graph:
    """A simple graph on vertices 0..n-1 with canonical (u, v), u < v edges."""

    n: int
    edges: frozenset

    def __init__(self, n: int, edges: Iterable):
        canon = set()
        for e in edges:
            u, v = e
            if u > v:
                u, v = v, u
            if not (0 <= u < v < n):
                raise ValueError(f"edge {e!r} invalid on {n} vertices (loops forbidden)")
            canon.add((u, v))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(canon))

    @classmethod
    def from_arrays(cls, n: int, u: np.ndarray, v: np.ndarray) -> "Graph":
        uu = np.minimum(u, v)
        vv = np.maximum(u, v)
        return cls(n, zip(uu.tolist(), vv.tolist()))

    def edge_count(self) -> int:
        return len(self.edges)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        cached = self.__dict__.get("_arrays")
        if cached is None:
            if self.edges:
                arr = np.array(sorted(self.edges), dtype=np.int64)
                cached = (arr[:, 0], arr[:, 1])
            else:
                cached = (np.empty(0, np.int64), np.empty(0, np.int64))
            self.__dict__["_arrays"] = cached
        return cached

    def degree_array(self) -> np.ndarray:
        u, v = self.edge_arrays()
        return np.bincount(np.concatenate([u, v]), minlength=self.n)

    def adjacency_sets(self) -> list[set]:
        adj: list[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def with_edges(self, extra: Iterable) -> "Graph":
        return Graph(self.n, list(self.edges) + list(extra))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": sorted(f"{u}-{v}" for u, v in self.edges)}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        edges = [tuple(map(int, s.split("-"))) for s in data["edges"]]
        return cls(data["n"], edges)


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


@dataclass(frozen=True)
class BlockStructure:
    """A partition of 0..n-1 into blocks plus a symmetric probability matrix."""

    blocks: tuple
    P: tuple

    def __init__(self, blocks: Sequence[Sequence[int]], P: Sequence[Sequence]):
        blocks = tuple(tuple(sorted(b)) for b in blocks)
        if not blocks or any(len(b) == 0 for b in blocks):
            raise ValueError("blocks must be nonempty")
        flat = [v for b in blocks for v in b]
        n = len(flat)
        if sorted(flat) != list(range(n)):
            raise ValueError("blocks must partition the vertex range 0..n-1")
        k = len(blocks)
        mat = tuple(
            tuple(check_probability(to_fraction(P[i][j]), f"P[{i}][{j}]") for j in range(k))
            for i in range(k)
        )
        for i in range(k):
            for j in range(k):
                if mat[i][j] != mat[j][i]:
                    raise ValueError("probability matrix must be symmetric")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "P", mat)

    @classmethod
    def from_sizes(cls, sizes: Sequence[int], P: Sequence[Sequence]) -> "BlockStructure":
        """Blocks of consecutive vertex ranges with the given sizes."""
        blocks, start = [], 0
        for s in sizes:
            blocks.append(range(start, start + s))
            start += s
        return cls(blocks, P)

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def vertex_block(self) -> np.ndarray:
        out = np.empty(self.n, dtype=np.int64)
        for i, b in enumerate(self.blocks):
            out[list(b)] = i
        return out

    def to_json(self) -> dict:
        from .rational import fraction_str

        return {
            "blocks": [list(b) for b in self.blocks],
            "P": [[fraction_str(x) for x in row] for row in self.P],
        }


@dataclass(frozen=True)
class DegreeSequence:
    """A nonincreasing integer degree sequence with its value-class split."""

    degrees: tuple[int, ...]

    def __init__(self, degrees: Iterable[int]):
        degs = tuple(sorted((int(d) for d in degrees), reverse=True))
        if not degs:
            raise ValueError("degree sequence must be nonempty")
        if degs[-1] < 0:
            raise ValueError("degrees must be nonnegative")
        object.__setattr__(self, "degrees", degs)

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def total(self) -> int:
        """The L1 norm, i.e. twice the edge count of any realization."""
        return sum(self.degrees)

    @property
    def values(self) -> tuple[int, ...]:
        """Distinct degree values in decreasing order."""
        out = []
        for d in self.degrees:
            if not out or out[-1] != d:
                out.append(d)
        return tuple(out)

    @property
    def class_sizes(self) -> tuple[int, ...]:
        return tuple(self.degrees.count(v) for v in self.values)

    def classes(self) -> tuple[tuple[int, ...], ...]:
        """Vertex index ranges grouped by equal degree (vertices sorted by
        decreasing degree, so classes are consecutive)."""
        out, start = [], 0
        for size in self.class_sizes:
            out.append(tuple(range(start, start + size)))
            start += size
        return tuple(out)

    @property
    def k(self) -> int:
        return len(self.values)

    def bivalued(self) -> tuple[int, int, int, int]:
        """(d1, n1, d2, n2) for a two-valued sequence; raises otherwise."""
        if self.k != 2:
            raise ValueError(f"sequence takes {self.k} distinct values, need exactly 2")
        (d1, d2), (n1, n2) = self.values, self.class_sizes
        return d1, n1, d2, n2

    def to_json(self) -> dict:
        return {"degrees": list(self.degrees)}


def erdos_gallai_graphical(degrees_desc: Sequence[int]) -> bool:
    """Erdos-Gallai test on a nonincreasing degree sequence."""
    d = list(degrees_desc)
    n = len(d)
    if n == 0:
        return True
    if d[0] > n - 1 or d[-1] < 0 or sum(d) % 2:
        return False
    prefix = [0]
    for x in d:
        prefix.append(prefix[-1] + x)
    asc = d[::-1]  # ascending, for bisect
    for k in range(1, n + 1):
        lhs = prefix[k]
        # sum over i > k of min(d_i, k), with d sorted descending
        tail = d[k:]
        cut = len(tail) - bisect.bisect_right(asc, k, 0, len(tail))
        small_sum = prefix[n] - prefix[k + cut]
        rhs = k * (k - 1) + cut * k + small_sum
        if lhs > rhs:
            return False
    return True


def sample_distinct(gen: np.random.Generator, n: int, m: int) -> np.ndarray:
    """m distinct uniform values from range(n), reproducible in the stream."""
    if not 0 <= m <= n:
        raise ValueError(f"cannot draw {m} distinct values from range({n})")
    if m == 0:
        return np.empty(0, dtype=np.int64)
    if 3 * m >= n:
        return gen.permutation(n)[:m]
    chosen: set = set()
    out: list[int] = []
    while len(out) < m:
        for x in gen.integers(0, n, size=2 * (m - len(out))).tolist():
            if x not in chosen:
                chosen.add(x)
                out.append(x)
                if len(out) == m:
                    break
    return np.array(out, dtype=np.int64)


def _triangular_decode(block: np.ndarray, idx: np.ndarray):
    """Map pair indices to (u, v) pairs inside one block."""
    m = len(block)
    cum = np.cumsum(np.arange(m - 1, 0, -1))
    i = np.searchsorted(cum, idx, side="right")
    prev = np.where(i > 0, cum[np.maximum(i - 1, 0)], 0)
    j = i + 1 + (idx - prev)
    return block[i], block[j]


def sample_product(ground: GroundSet, p: ProbVector, rng: RngStream) -> frozenset:
    """Include each ground-set item independently with its probability."""
    if p.ground != ground:
        raise ValueError("probability vector defined on a different ground set")
    gen = rng.generator()
    draws = gen.random(len(ground))
    return frozenset(x for x, r in zip(ground.items, draws) if r < float(p[x]))


def sample_block_model(b: BlockStructure, rng: RngStream) -> Graph:
    """One draw of the block model: pair {u, v} with u in block i, v in
    block j appears independently with probability P[i][j]."""
    gen = rng.generator()
    us: list[np.ndarray] = []
    vs: list[np.ndarray] = []
    for i in range(b.k):
        bi = np.array(b.blocks[i], dtype=np.int64)
        for j in range(i, b.k):
            p = float(b.P[i][j])
            if p <= 0.0:
                continue
            if i == j:
                npairs = len(bi) * (len(bi) - 1) // 2
            else:
                bj = np.array(b.blocks[j], dtype=np.int64)
                npairs = len(bi) * len(bj)
            if npairs == 0:
                continue
            cnt = npairs if p >= 1.0 else int(gen.binomial(npairs, p))
            if cnt == 0:
                continue
            idx = sample_distinct(gen, npairs, cnt)
            if i == j:
                u, v = _triangular_decode(bi, idx)
            else:
                u, v = bi[idx // len(bj)], bj[idx % len(bj)]
            us.append(u)
            vs.append(v)
    if not us:
        return Graph(b.n, [])
    return Graph.from_arrays(b.n, np.concatenate(us), np.concatenate(vs))


def chung_lu_probabilities(d: DegreeSequence) -> BlockStructure:
    """Block structure of the expected-degree model: vertices grouped by
    equal degree, block-pair probability min(1, a_i a_j / ||d||_1)."""
    if d.degrees[-1] < 1:
        raise ValueError(
            "zero-degree vertices are not allowed here; remove them and resample"
        )
    total = d.total
    vals = d.values
    P = [
        [min(Fraction(1), Fraction(vals[i] * vals[j], total)) for j in range(d.k)]
        for i in range(d.k)
    ]
    return BlockStructure(d.classes(), P)


def sample_chung_lu(d: DegreeSequence, rng: RngStream) -> Graph:
    """One draw of the expected-degree model (no self-pairs)."""
    return sample_block_model(chung_lu_probabilities(d), rng)


def _havel_hakimi_graph(d: DegreeSequence) -> Graph:
    remaining = [[deg, v] for v, deg in enumerate(d.degrees)]
    edges = []
    while True:
        remaining.sort(key=lambda t: (-t[0], t[1]))
        top = remaining[0]
        if top[0] == 0:
            break
        need = top[0]
        top[0] = 0
        if need > len(remaining) - 1:
            raise ValueError("sequence is not graphical")
        for other in remaining[1 : need + 1]:
            if other[0] == 0:
                raise ValueError("sequence is not graphical")
            other[0] -= 1
            edges.append((top[1], other[1]))
    return Graph(d.n, edges)


def sample_degree_sequence_graph(
    d: DegreeSequence,
    rng: RngStream,
    max_attempts: int = 1000,
    method: str = "rejection",
) -> Graph:
    """Sample a simple graph with exactly the prescribed degrees.

    method="rejection": configuration-model pairing, resampled until simple.
    Exactly uniform over realizations; efficient when the maximum degree is
    small relative to the total. method="switching": Havel-Hakimi start plus
    random double-edge switches, approximately uniform, for sequences where
    rejection is hopeless.
    """
    if d.total % 2:
        raise ValueError("degree sum must be even")
    if not erdos_gallai_graphical(d.degrees):
        raise ValueError("degree sequence is not graphical")
    n = d.n
    gen = rng.generator()
    if method == "rejection":
        stubs = np.repeat(np.arange(n, dtype=np.int64), d.degrees)
        for _ in range(max_attempts):
            perm = gen.permutation(stubs)
            u = np.minimum(perm[0::2], perm[1::2])
            v = np.maximum(perm[0::2], perm[1::2])
            if np.any(u == v):
                continue
            keys = u * n + v
            if len(np.unique(keys)) != len(keys):
                continue
            return Graph.from_arrays(n, u, v)
        raise RuntimeError(
            f"rejection sampling failed after {max_attempts} attempts; "
            "for heavy-tailed sequences retry with method='switching' "
            "(approximately uniform)"
        )
    if method == "switching":
        g = _havel_hakimi_graph(d)
        edges = sorted(g.edges)
        present = set(edges)
        m = len(edges)
        if m < 2:
            return g
        for _ in range(20 * m):
            a, b = gen.integers(0, m, size=2).tolist()
            if a == b:
                continue
            (x, y), (z, w) = edges[a], edges[b]
            if gen.random() < 0.5:
                z, w = w, z
            # propose {x,y},{z,w} -> {x,w},{z,y}
            if len({x, y, z, w}) < 4:
                continue
            e1 = (min(x, w), max(x, w))
            e2 = (min(z, y), max(z, y))
            if e1 in present or e2 in present:
                continue
            present.discard(edges[a])
            present.discard(edges[b])
            present.add(e1)
            present.add(e2)
            edges[a], edges[b] = e1, e2
        return Graph(n, edges)
    raise ValueError(f"unknown sampling method {method!r}")


def edge_item(u: int, v: int) -> str:
    """Canonical ground-set encoding of an edge."""
    if u > v:
        u, v = v, u
    return f"{u}-{v}"


def edge_ground_set(n: int) -> GroundSet:
    """The edge set of the complete graph on 0..n-1 as a ground set."""
    return GroundSet([edge_item(u, v) for u in range(n) for v in range(u + 1, n)], r=2)
