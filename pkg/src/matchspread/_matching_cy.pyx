# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled maximum-cardinality matching kernel (blossom contraction).

Mirrors _matching_py.py line for line; selected automatically at import
when the extension is built. See benchmarks/matching_bench.py for the
speed comparison.
"""

import numpy as np

BACKEND = "cython"


cdef long long _lca(long long a, long long b,
                    long long[::1] base, long long[::1] mate, long long[::1] p,
                    signed char[::1] seen) noexcept:
    cdef Py_ssize_t i, n = base.shape[0]
    for i in range(n):
        seen[i] = 0
    while True:
        a = base[a]
        seen[a] = 1
        if mate[a] == -1:
            break
        a = p[mate[a]]
    while True:
        b = base[b]
        if seen[b]:
            return b
        b = p[mate[b]]


cdef void _mark_path(long long v, long long b, long long child,
                     long long[::1] base, long long[::1] mate, long long[::1] p,
                     signed char[::1] blossom) noexcept:
    while base[v] != b:
        blossom[base[v]] = 1
        blossom[base[mate[v]]] = 1
        p[v] = child
        child = mate[v]
        v = p[mate[v]]


cdef bint _find_path(long long root, long long n,
                     long long[::1] iptr, long long[::1] adj,
                     long long[::1] mate, long long[::1] p, long long[::1] base,
                     signed char[::1] used, signed char[::1] blossom,
                     signed char[::1] seen, long long[::1] queue) noexcept:
    cdef long long i, k, v, to, cur, u, pv, nxt
    cdef long long qi = 0, qn = 0
    for i in range(n):
        used[i] = 0
        p[i] = -1
        base[i] = i
    used[root] = 1
    queue[qn] = root
    qn += 1
    while qi < qn:
        v = queue[qi]
        qi += 1
        for k in range(iptr[v], iptr[v + 1]):
            to = adj[k]
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != -1 and p[mate[to]] != -1):
                # odd cycle: contract the blossom down to the common base
                cur = _lca(v, to, base, mate, p, seen)
                for i in range(n):
                    blossom[i] = 0
                _mark_path(v, cur, to, base, mate, p, blossom)
                _mark_path(to, cur, v, base, mate, p, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = 1
                            queue[qn] = i
                            qn += 1
            elif p[to] == -1:
                p[to] = v
                if mate[to] == -1:
                    # augment along the alternating path back to the root
                    u = to
                    while u != -1:
                        pv = p[u]
                        nxt = mate[pv]
                        mate[u] = pv
                        mate[pv] = u
                        u = nxt
                    return True
                used[mate[to]] = 1
                queue[qn] = mate[to]
                qn += 1
    return False


def maximum_matching_csr(n, indptr, indices):
    """Maximum matching of a simple graph given as CSR adjacency.

    Returns an int64 array ``mate`` with ``mate[v]`` the partner of v, or -1.
    """
    cdef long long nn = n
    iptr_arr = np.ascontiguousarray(indptr, dtype=np.int64)
    adj_arr = np.ascontiguousarray(indices, dtype=np.int64)
    cdef long long[::1] iptr = iptr_arr
    cdef long long[::1] adj = adj_arr

    mate_arr = np.full(nn, -1, dtype=np.int64)
    p_arr = np.full(nn, -1, dtype=np.int64)
    base_arr = np.arange(nn, dtype=np.int64)
    queue_arr = np.zeros(max(nn, 1), dtype=np.int64)
    used_arr = np.zeros(nn, dtype=np.int8)
    blossom_arr = np.zeros(nn, dtype=np.int8)
    seen_arr = np.zeros(nn, dtype=np.int8)

    cdef long long[::1] mate = mate_arr
    cdef long long[::1] p = p_arr
    cdef long long[::1] base = base_arr
    cdef long long[::1] queue = queue_arr
    cdef signed char[::1] used = used_arr
    cdef signed char[::1] blossom = blossom_arr
    cdef signed char[::1] seen = seen_arr

    cdef long long v, k, u
    for v in range(nn):
        if mate[v] == -1:
            for k in range(iptr[v], iptr[v + 1]):
                u = adj[k]
                if mate[u] == -1:
                    mate[u] = v
                    mate[v] = u
                    break

    for v in range(nn):
        if mate[v] == -1:
            _find_path(v, nn, iptr, adj, mate, p, base, used, blossom, seen, queue)
    return mate_arr
