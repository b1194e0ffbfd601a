"""Pure-Python kernels: masked multi-source Dijkstra and component labeling.

Reference implementation of the same contract as the compiled module
``padpart._speedups``; selected by ``padpart._kernels`` when the extension
is unavailable (or when PADPART_PURE_PYTHON is set).  Both backends must
produce bit-identical ``dist``/``parent``/``comp`` arrays.
"""

from __future__ import annotations

from heapq import heappop, heappush


def dijkstra_masked(indptr, nbr, wt, sources, mask, dist, parent, cutoff):
    """Multi-source Dijkstra over the CSR graph restricted to ``mask``.

    ``dist`` must be pre-filled with +inf and ``parent`` with -1; both are
    written in place.  Vertices whose final distance exceeds ``cutoff`` are
    left unsettled.  Among predecessors achieving the optimal distance the
    smallest vertex id wins.
    """
    ip = indptr.tolist()
    nb = nbr.tolist()
    w = wt.tolist()
    ok = mask.tolist()
    n = len(ok)
    d_l = dist.tolist()
    p_l = parent.tolist()
    settled = bytearray(n)
    heap = []
    for s in sources.tolist():
        d_l[s] = 0.0
        heappush(heap, (0.0, s))
    while heap:
        d, u = heappop(heap)
        if settled[u]:
            continue
        if d > cutoff:
            break
        settled[u] = 1
        for k in range(ip[u], ip[u + 1]):
            v = nb[k]
            if not ok[v]:
                continue
            nd = d + w[k]
            if nd < d_l[v]:
                d_l[v] = nd
                p_l[v] = u
                heappush(heap, (nd, v))
            elif nd == d_l[v] and u < p_l[v]:
                p_l[v] = u
    dist[:] = d_l
    parent[:] = p_l


def label_components(indptr, nbr, mask, comp):
    """Label connected components of the masked graph.

    ``comp`` must be pre-filled with -1 and is written in place.  Component
    ids are assigned in increasing order of the smallest contained vertex.
    Returns the number of components.
    """
    ip = indptr.tolist()
    nb = nbr.tolist()
    ok = mask.tolist()
    n = len(ok)
    c_l = comp.tolist()
    label = 0
    stack = []
    for v in range(n):
        if not ok[v] or c_l[v] >= 0:
            continue
        c_l[v] = label
        stack.append(v)
        while stack:
            u = stack.pop()
            for k in range(ip[u], ip[u + 1]):
                x = nb[k]
                if ok[x] and c_l[x] < 0:
                    c_l[x] = label
                    stack.append(x)
        label += 1
    comp[:] = c_l
    return label
