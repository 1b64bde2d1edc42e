"""Perfect-matching decisions and isolated-vertex obstruction counters.

The maximum-matching kernel is compiled (Cython) when available, with a
pure-Python fallback selected at import; both implement the identical
blossom-contraction algorithm. The exhaustive oracle below is intentionally
independent of the kernel so the two can cross-check each other.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import InfeasibleSizeError
from .models import Graph

try:  # pragma: no cover - exercised implicitly by whichever build runs
    from . import _matching_cy as _kernel
except ImportError:  # pragma: no cover
    from . import _matching_py as _kernel

from . import _matching_py

KERNEL_BACKEND: str = _kernel.BACKEND

#: Exhaustive pairing oracle is refused beyond this many vertices.
ORACLE_CEILING = 14


def available_backends() -> dict:
    """Matching kernels importable in this build, keyed by backend name."""
    out = {_matching_py.BACKEND: _matching_py.maximum_matching_csr}
    if _kernel.BACKEND != _matching_py.BACKEND:
        out[_kernel.BACKEND] = _kernel.maximum_matching_csr
    return out


def kernel_matching_csr(n: int, indptr: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """Run the active kernel directly on CSR arrays (mate array out)."""
    return np.asarray(_kernel.maximum_matching_csr(n, indptr, indices), dtype=np.int64)


def graph_csr(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """CSR adjacency (indptr, indices) with neighbor lists sorted."""
    u, v = g.edge_arrays()
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    order = np.lexsort((cols, rows))
    indices = cols[order]
    counts = np.bincount(rows, minlength=g.n)
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, indices.astype(np.int64)


def maximum_matching(g: Graph, backend: str | None = None) -> np.ndarray:
    """Mate array of a maximum matching (mate[v] = -1 when unmatched)."""
    fn = _kernel.maximum_matching_csr if backend is None else available_backends()[backend]
    indptr, indices = graph_csr(g)
    return np.asarray(fn(g.n, indptr, indices), dtype=np.int64)


def maximum_matching_edges(g: Graph) -> list[tuple[int, int]]:
    mate = maximum_matching(g)
    return [(v, int(mate[v])) for v in range(g.n) if 0 <= v < mate[v]]


def matching_size(g: Graph) -> int:
    mate = maximum_matching(g)
    return int(np.count_nonzero(mate >= 0)) // 2


def check_perfect_matching(g: Graph) -> tuple[bool, str]:
    """Decision plus a reason code: "ok", "odd_order" or "no_perfect_matching"."""
    if g.n % 2:
        return False, "odd_order"
    if g.n and int(g.degree_array().min()) == 0:
        return False, "no_perfect_matching"
    if matching_size(g) * 2 == g.n:
        return True, "ok"
    return False, "no_perfect_matching"


def has_perfect_matching(g: Graph) -> bool:
    return check_perfect_matching(g)[0]


def count_isolated(g: Graph, block: Iterable[int], scope: str = "global") -> int:
    """Vertices of ``block`` with no neighbor at all ("global") or no
    neighbor inside the block ("within_block")."""
    block = np.asarray(sorted(block), dtype=np.int64)
    if len(block) and (block[0] < 0 or block[-1] >= g.n):
        raise ValueError("block contains vertices outside the graph")
    u, v = g.edge_arrays()
    if scope == "global":
        deg = g.degree_array()
        return int(np.count_nonzero(deg[block] == 0))
    if scope == "within_block":
        inside = np.zeros(g.n, dtype=bool)
        inside[block] = True
        both = inside[u] & inside[v]
        deg_in = np.bincount(
            np.concatenate([u[both], v[both]]), minlength=g.n
        )
        return int(np.count_nonzero(deg_in[block] == 0))
    raise ValueError(f"unknown scope {scope!r}")


def brute_force_pm_oracle(g: Graph) -> bool:
    """Exhaustive recursion over vertex pairings; independent of the
    matching kernel."""
    if g.n > ORACLE_CEILING:
        raise InfeasibleSizeError(
            f"pairing oracle needs n <= {ORACLE_CEILING}, got {g.n}"
        )
    if g.n % 2:
        return False
    adj = g.adjacency_sets()
    free = set(range(g.n))

    def pair_up() -> bool:
        if not free:
            return True
        v = min(free)
        free.discard(v)
        for u in sorted(adj[v] & free):
            free.discard(u)
            if pair_up():
                free.add(u)
                free.add(v)
                return True
            free.add(u)
        free.add(v)
        return False

    return pair_up()
