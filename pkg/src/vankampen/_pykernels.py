"""Pure-Python versions of the hot loops. Same signatures as ``_kernels``."""

from __future__ import annotations

from collections import deque


def bfs_levels(indptr, indices, n, source):
    """Unweighted distances from ``source`` over a CSR adjacency; -1 if unreached."""
    dist = [-1] * n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if dist[v] < 0:
                dist[v] = du
                queue.append(v)
    return dist


def all_pairs_max(indptr, indices, n):
    """Largest finite BFS distance over all ordered pairs; -1 if disconnected."""
    best = 0
    for s in range(n):
        d = bfs_levels(indptr, indices, n, s)
        for x in d:
            if x < 0:
                return -1
            if x > best:
                best = x
    return best


def perm_orbits(perm):
    """Orbits of a permutation given as a list, each starting at its least element."""
    n = len(perm)
    seen = [False] * n
    orbits = []
    for start in range(n):
        if seen[start]:
            continue
        orbit = []
        d = start
        while not seen[d]:
            seen[d] = True
            orbit.append(d)
            d = perm[d]
        orbits.append(orbit)
    return orbits


def canonical_order(sigma, twin, root):
    """Darts in discovery order of a traversal from ``root``.

    Each newly met dart is followed immediately by its twin, so relabelling by
    position gives twin pairs (2k, 2k+1). Rooted maps are isomorphic iff the
    relabelled permutations coincide.
    """
    n = len(sigma)
    pos = [-1] * n
    order = []
    if n == 0:
        return order
    pos[root] = 0
    order.append(root)
    t = twin[root]
    pos[t] = 1
    order.append(t)
    i = 0
    while i < len(order):
        d = order[i]
        nxt = sigma[d]
        if pos[nxt] < 0:
            pos[nxt] = len(order)
            order.append(nxt)
            tw = twin[nxt]
            pos[tw] = len(order)
            order.append(tw)
        i += 1
    return order
