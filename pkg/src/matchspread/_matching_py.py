"""Pure-Python maximum-cardinality matching kernel (blossom contraction).

This is the fallback selected when the compiled extension is unavailable.
It mirrors _matching_cy.pyx line for line: same greedy seeding, same BFS
order, hence identical mate arrays.
"""

BACKEND = "python"


def maximum_matching_csr(n, indptr, indices):
    """Maximum matching of a simple graph given as CSR adjacency.

    Returns a list ``mate`` with ``mate[v]`` the partner of v, or -1.
    """
    iptr = [int(x) for x in indptr]
    adj = [int(x) for x in indices]
    mate = [-1] * n

    for v in range(n):
        if mate[v] == -1:
            for k in range(iptr[v], iptr[v + 1]):
                u = adj[k]
                if mate[u] == -1:
                    mate[u] = v
                    mate[v] = u
                    break

    p = [-1] * n
    base = list(range(n))
    used = [False] * n
    blossom = [False] * n

    def lca(a, b):
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == -1:
                break
            a = p[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = p[mate[b]]

    def mark_path(v, b, child):
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[mate[v]]] = True
            p[v] = child
            child = mate[v]
            v = p[mate[v]]

    def find_path(root):
        for i in range(n):
            used[i] = False
            p[i] = -1
            base[i] = i
        used[root] = True
        queue = [root]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for k in range(iptr[v], iptr[v + 1]):
                to = adj[k]
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and p[mate[to]] != -1):
                    # odd cycle: contract the blossom down to the common base
                    cur = lca(v, to)
                    for i in range(n):
                        blossom[i] = False
                    mark_path(v, cur, to)
                    mark_path(to, cur, v)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
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
                    used[mate[to]] = True
                    queue.append(mate[to])
        return False

    for v in range(n):
        if mate[v] == -1:
            find_path(v)
    return mate
