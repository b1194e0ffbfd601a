# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: masked multi-source Dijkstra and component labeling.

Semantics must match padpart._fallback exactly (bit-identical outputs).
"""

import numpy as np


cdef inline void _heap_push(double[::1] hd, int[::1] hv, Py_ssize_t* size,
                            double d, int v) noexcept nogil:
    cdef Py_ssize_t i = size[0]
    cdef Py_ssize_t p
    cdef double td
    cdef int tv
    hd[i] = d
    hv[i] = v
    size[0] += 1
    while i > 0:
        p = (i - 1) >> 1
        if hd[p] > hd[i] or (hd[p] == hd[i] and hv[p] > hv[i]):
            td = hd[p]; hd[p] = hd[i]; hd[i] = td
            tv = hv[p]; hv[p] = hv[i]; hv[i] = tv
            i = p
        else:
            break


cdef inline void _heap_pop(double[::1] hd, int[::1] hv, Py_ssize_t* size,
                           double* out_d, int* out_v) noexcept nogil:
    cdef Py_ssize_t last, i, c
    cdef double dl
    cdef int vl
    out_d[0] = hd[0]
    out_v[0] = hv[0]
    size[0] -= 1
    last = size[0]
    if last == 0:
        return
    dl = hd[last]
    vl = hv[last]
    i = 0
    while True:
        c = 2 * i + 1
        if c >= last:
            break
        if c + 1 < last and (hd[c + 1] < hd[c] or
                             (hd[c + 1] == hd[c] and hv[c + 1] < hv[c])):
            c += 1
        if hd[c] < dl or (hd[c] == dl and hv[c] < vl):
            hd[i] = hd[c]
            hv[i] = hv[c]
            i = c
        else:
            break
    hd[i] = dl
    hv[i] = vl


def dijkstra_masked(long long[::1] indptr, int[::1] nbr, double[::1] wt,
                    int[::1] sources, unsigned char[::1] mask,
                    double[::1] dist, int[::1] parent, double cutoff):
    """Multi-source Dijkstra over the CSR graph restricted to ``mask``.

    ``dist`` pre-filled with +inf, ``parent`` with -1; written in place.
    Parent ties at equal distance resolve to the smallest vertex id.
    """
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t cap = nbr.shape[0] + sources.shape[0] + 1
    heap_d_arr = np.empty(cap, dtype=np.float64)
    heap_v_arr = np.empty(cap, dtype=np.int32)
    settled_arr = np.zeros(n, dtype=np.uint8)
    cdef double[::1] heap_d = heap_d_arr
    cdef int[::1] heap_v = heap_v_arr
    cdef unsigned char[::1] settled = settled_arr
    cdef Py_ssize_t hsize = 0
    cdef Py_ssize_t k
    cdef long long e
    cdef int s, u, v
    cdef double d, nd
    with nogil:
        for k in range(sources.shape[0]):
            s = sources[k]
            dist[s] = 0.0
            _heap_push(heap_d, heap_v, &hsize, 0.0, s)
        while hsize > 0:
            _heap_pop(heap_d, heap_v, &hsize, &d, &u)
            if settled[u]:
                continue
            if d > cutoff:
                break
            settled[u] = 1
            for e in range(indptr[u], indptr[u + 1]):
                v = nbr[e]
                if mask[v] == 0:
                    continue
                nd = d + wt[e]
                if nd < dist[v]:
                    dist[v] = nd
                    parent[v] = u
                    _heap_push(heap_d, heap_v, &hsize, nd, v)
                elif nd == dist[v] and u < parent[v]:
                    parent[v] = u


def label_components(long long[::1] indptr, int[::1] nbr,
                     unsigned char[::1] mask, int[::1] comp):
    """Label components of the masked graph; ids ordered by smallest vertex.

    ``comp`` pre-filled with -1; written in place.  Returns the count.
    """
    cdef Py_ssize_t n = comp.shape[0]
    stack_arr = np.empty(n, dtype=np.int32)
    cdef int[::1] stack = stack_arr
    cdef Py_ssize_t top
    cdef int label = 0
    cdef int v, u, x
    cdef long long e
    with nogil:
        for v in range(n):
            if mask[v] == 0 or comp[v] >= 0:
                continue
            comp[v] = label
            top = 0
            stack[top] = v
            top += 1
            while top > 0:
                top -= 1
                u = stack[top]
                for e in range(indptr[u], indptr[u + 1]):
                    x = nbr[e]
                    if mask[x] != 0 and comp[x] < 0:
                        comp[x] = label
                        stack[top] = x
                        top += 1
            label += 1
    return label
