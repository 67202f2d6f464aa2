# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in ``_pykernels``."""

from libc.stdlib cimport malloc, free


cdef int* _to_c(object seq, Py_ssize_t n) except NULL:
    cdef int* buf = <int*>malloc((n if n > 0 else 1) * sizeof(int))
    cdef Py_ssize_t i
    if buf == NULL:
        raise MemoryError()
    for i in range(n):
        buf[i] = seq[i]
    return buf


cdef void _bfs(int* indptr, int* indices, int n, int source, int* dist, int* queue) noexcept:
    cdef int head = 0, tail = 0, u, v, k, du
    for k in range(n):
        dist[k] = -1
    dist[source] = 0
    queue[tail] = source
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if dist[v] < 0:
                dist[v] = du
                queue[tail] = v
                tail += 1


def bfs_levels(indptr, indices, int n, int source):
    cdef int* ip = _to_c(indptr, n + 1)
    cdef int* ix = _to_c(indices, len(indices))
    cdef int* dist = <int*>malloc((n if n > 0 else 1) * sizeof(int))
    cdef int* queue = <int*>malloc((n if n > 0 else 1) * sizeof(int))
    try:
        _bfs(ip, ix, n, source, dist, queue)
        return [dist[i] for i in range(n)]
    finally:
        free(ip)
        free(ix)
        free(dist)
        free(queue)


def all_pairs_max(indptr, indices, int n):
    cdef int* ip = _to_c(indptr, n + 1)
    cdef int* ix = _to_c(indices, len(indices))
    cdef int* dist = <int*>malloc((n if n > 0 else 1) * sizeof(int))
    cdef int* queue = <int*>malloc((n if n > 0 else 1) * sizeof(int))
    cdef int best = 0, s, i
    try:
        for s in range(n):
            _bfs(ip, ix, n, s, dist, queue)
            for i in range(n):
                if dist[i] < 0:
                    return -1
                if dist[i] > best:
                    best = dist[i]
        return best
    finally:
        free(ip)
        free(ix)
        free(dist)
        free(queue)


def perm_orbits(perm):
    cdef Py_ssize_t n = len(perm)
    cdef int* p = _to_c(perm, n)
    cdef char* seen = <char*>malloc(n + 1)
    cdef int start, d
    cdef list orbits = []
    cdef list orbit
    try:
        for start in range(n):
            seen[start] = 0
        for start in range(n):
            if seen[start]:
                continue
            orbit = []
            d = start
            while not seen[d]:
                seen[d] = 1
                orbit.append(d)
                d = p[d]
            orbits.append(orbit)
        return orbits
    finally:
        free(p)
        free(seen)


def canonical_order(sigma, twin, int root):
    cdef Py_ssize_t n = len(sigma)
    if n == 0:
        return []
    cdef int* sg = _to_c(sigma, n)
    cdef int* tw = _to_c(twin, n)
    cdef int* pos = <int*>malloc(n * sizeof(int))
    cdef int* order = <int*>malloc(n * sizeof(int))
    cdef int i = 0, count = 0, d, nxt, t
    try:
        for i in range(n):
            pos[i] = -1
        pos[root] = 0
        order[0] = root
        t = tw[root]
        pos[t] = 1
        order[1] = t
        count = 2
        i = 0
        while i < count:
            d = order[i]
            nxt = sg[d]
            if pos[nxt] < 0:
                pos[nxt] = count
                order[count] = nxt
                count += 1
                t = tw[nxt]
                pos[t] = count
                order[count] = t
                count += 1
            i += 1
        return [order[i] for i in range(count)]
    finally:
        free(sg)
        free(tw)
        free(pos)
        free(order)
