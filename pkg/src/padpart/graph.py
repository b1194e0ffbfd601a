"""Weighted undirected graphs and the metric primitives shared by all schemes.

Vertices are dense ids ``0..n-1``.  A "vertex set" argument is any iterable
of vertex ids; operations return sorted ``numpy`` int32 arrays.  Distance
comparisons against a bound use a small relative tolerance so that vertices
sitting exactly on a ball boundary are included deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import InvariantError

_REL_TOL = 1e-9


def dist_leq(d, bound):
    """True when distance ``d`` is within ``bound`` up to relative tolerance."""
    return d <= bound + _REL_TOL * max(1.0, abs(bound))


def _tol(bound):
    return bound + _REL_TOL * max(1.0, abs(bound))


class Graph:
    """Immutable weighted undirected graph with a CSR adjacency index.

    No self-loops, at most one edge per unordered pair, weights >= 0.
    Zero weights are permitted but collapse the metric; the padding
    guarantees assume a genuine metric.
    """

    __slots__ = ("vertex_count", "_eu", "_ev", "_ew", "_indptr", "_nbr", "_wt")

    def __init__(self, vertex_count, edges):
        n = int(vertex_count)
        if n < 0:
            raise ValueError("vertex_count must be >= 0")
        self.vertex_count = n
        eu, ev, ew = [], [], []
        seen = set()
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside vertex range 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            if not (w >= 0.0) or not np.isfinite(w):
                raise ValueError(f"edge {key} has invalid weight {w}")
            eu.append(key[0])
            ev.append(key[1])
            ew.append(w)
        self._eu = np.asarray(eu, dtype=np.int32)
        self._ev = np.asarray(ev, dtype=np.int32)
        self._ew = np.asarray(ew, dtype=np.float64)
        deg = np.zeros(n, dtype=np.int64)
        np.add.at(deg, self._eu, 1)
        np.add.at(deg, self._ev, 1)
        self._indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=self._indptr[1:])
        m2 = int(self._indptr[-1])
        self._nbr = np.empty(m2, dtype=np.int32)
        self._wt = np.empty(m2, dtype=np.float64)
        cursor = self._indptr[:-1].copy()
        for u, v, w in zip(self._eu, self._ev, self._ew):
            self._nbr[cursor[u]] = v
            self._wt[cursor[u]] = w
            cursor[u] += 1
            self._nbr[cursor[v]] = u
            self._wt[cursor[v]] = w
            cursor[v] += 1
        # sort each adjacency row by neighbor id for deterministic iteration
        for u in range(n):
            lo, hi = self._indptr[u], self._indptr[u + 1]
            order = np.argsort(self._nbr[lo:hi], kind="stable")
            self._nbr[lo:hi] = self._nbr[lo:hi][order]
            self._wt[lo:hi] = self._wt[lo:hi][order]

    @property
    def edge_count(self):
        return int(self._eu.size)

    @property
    def edges(self):
        """Edges as (u, v, w) tuples with u < v, in construction order."""
        return [
            (int(u), int(v), float(w))
            for u, v, w in zip(self._eu, self._ev, self._ew)
        ]

    def edge_arrays(self):
        """Internal endpoint/weight arrays (u, v, w); do not mutate."""
        return self._eu, self._ev, self._ew

    def degree(self, u):
        return int(self._indptr[u + 1] - self._indptr[u])

    def neighbors(self, u):
        return self._nbr[self._indptr[u]:self._indptr[u + 1]]

    def edge_weight(self, u, v):
        row = self.neighbors(u)
        k = np.searchsorted(row, v)
        if k < row.size and row[k] == v:
            return float(self._wt[self._indptr[u] + k])
        raise KeyError(f"no edge ({u},{v})")

    def has_edge(self, u, v):
        row = self.neighbors(u)
        k = np.searchsorted(row, v)
        return bool(k < row.size and row[k] == v)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and sorted(
            self.edges
        ) == sorted(other.edges)

    def __repr__(self):
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"


def as_vertex_array(vs, n):
    """Normalize a vertex-set argument to a sorted unique int32 array."""
    if isinstance(vs, np.ndarray) and vs.dtype.kind in "iu":
        arr = np.unique(vs).astype(np.int32, copy=False)
    else:
        arr = np.asarray(sorted(set(int(v) for v in vs)), dtype=np.int32)
    if arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise ValueError("vertex id outside 0..n-1")
    return arr

def mask_of(vs, n):
    m = np.zeros(n, dtype=np.uint8)
    arr = as_vertex_array(vs, n)
    m[arr] = 1
    return m


@dataclass
class DistanceMap:
    """Distances (+inf when unreachable) and parent pointers (-1 at sources)."""

    dist: np.ndarray
    parent: np.ndarray

    def reachable(self, v):
        return bool(np.isfinite(self.dist[v]))

    def path_to(self, v):
        """Vertex sequence from a source to ``v`` along parent pointers."""
        if not self.reachable(v):
            raise ValueError(f"vertex {v} unreachable")
        out = [int(v)]
        while self.parent[out[-1]] >= 0:
            out.append(int(self.parent[out[-1]]))
        out.reverse()
        return out


def _run_dijkstra(g, sources, mask, cutoff=np.inf):
    dist = np.full(g.vertex_count, np.inf, dtype=np.float64)
    parent = np.full(g.vertex_count, -1, dtype=np.int32)
    if sources.size:
        _kernels.dijkstra_masked(
            g._indptr, g._nbr, g._wt, sources, mask, dist, parent, cutoff
        )
    return dist, parent


def shortest_paths(g, sources, restrict=None):
    """Exact multi-source Dijkstra inside the induced subgraph G[restrict].

    Parent ties at equal distance break toward the smallest vertex id.
    Vertices outside ``restrict`` (default: all vertices) are unreachable.
    """
    n = g.vertex_count
    mask = (
        np.ones(n, dtype=np.uint8) if restrict is None else mask_of(restrict, n)
    )
    src = as_vertex_array(sources, n)
    if np.any(mask[src] == 0):
        raise ValueError("sources must lie inside the restrict set")
    dist, parent = _run_dijkstra(g, src, mask)
    return DistanceMap(dist, parent)


def connected_components(g, restrict=None):
    """Components of G[restrict], ordered by smallest contained vertex id."""
    n = g.vertex_count
    mask = (
        np.ones(n, dtype=np.uint8) if restrict is None else mask_of(restrict, n)
    )
    comp = np.full(n, -1, dtype=np.int32)
    count = _kernels.label_components(g._indptr, g._nbr, mask, comp)
    return split_labels(comp, count)


def split_labels(comp, count):
    """Group vertex ids by component label array into sorted arrays."""
    members = np.flatnonzero(comp >= 0).astype(np.int32)
    labels = comp[members]
    order = np.argsort(labels, kind="stable")
    members = members[order]
    bounds = np.searchsorted(labels[order], np.arange(count + 1))
    return [members[bounds[i]:bounds[i + 1]] for i in range(count)]


def ball(g, center_set, radius, restrict=None):
    """All vertices of G[restrict] within ``radius`` of ``center_set``."""
    n = g.vertex_count
    mask = (
        np.ones(n, dtype=np.uint8) if restrict is None else mask_of(restrict, n)
    )
    centers = as_vertex_array(center_set, n)
    if np.any(mask[centers] == 0):
        raise ValueError("center_set must lie inside the restrict set")
    return ball_masked(g, centers, radius, mask)


def ball_masked(g, centers, radius, mask):
    """Ball around a prepared center array inside a prepared uint8 mask."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    cut = _tol(radius)
    dist, _ = _run_dijkstra(g, centers, mask, cutoff=cut)
    return np.flatnonzero(dist <= cut).astype(np.int32)


def boundary_neighbors(g, s, restrict=None):
    """Vertices of ``restrict`` adjacent to at least one vertex of ``s``."""
    n = g.vertex_count
    in_s = mask_of(s, n).astype(bool)
    in_r = (
        np.ones(n, dtype=bool)
        if restrict is None
        else mask_of(restrict, n).astype(bool)
    )
    eu, ev, _ = g.edge_arrays()
    hits = np.concatenate(
        (ev[in_s[eu] & in_r[ev]], eu[in_s[ev] & in_r[eu]])
    )
    return np.unique(hits).astype(np.int32)


def sets_adjacent(g, a_mask, b_mask):
    """True when some edge joins the two (bool or uint8) vertex masks."""
    eu, ev, _ = g.edge_arrays()
    a = a_mask.astype(bool, copy=False)
    b = b_mask.astype(bool, copy=False)
    return bool(np.any((a[eu] & b[ev]) | (a[ev] & b[eu])))


def net_on_paths(g, paths, spacing, restrict=None):
    """Greedy net points along each path, ordered by (path index, position).

    Walks every path from its start and selects a vertex whenever the
    accumulated path distance since the last selected vertex reaches
    ``spacing``.  A vertex already selected on an earlier path (in
    particular a shared start) is not emitted again.  Consecutive selected
    points on a path are >= spacing apart in the path metric, and every
    path vertex is within spacing of a selected point on its path.
    """
    return [v for v, _, _ in net_on_paths_detailed(g, paths, spacing)]


def net_on_paths_detailed(g, paths, spacing):
    """Like :func:`net_on_paths` but yields (vertex, path_index, position)."""
    if spacing <= 0:
        raise ValueError("spacing must be > 0")
    chosen = []
    chosen_set = set()
    for pi, path in enumerate(paths):
        path = [int(v) for v in path]
        if not path:
            continue
        acc = np.inf  # force selection of the path start
        pos = 0.0
        prev = None
        for v in path:
            if prev is not None:
                w = g.edge_weight(prev, v)
                acc += w
                pos += w
            if acc >= spacing:
                if v not in chosen_set:
                    chosen_set.add(v)
                    chosen.append((v, pi, pos))
                acc = 0.0
            prev = v
    return chosen


def cluster_diameter(g, c, mode="strong"):
    """Max pairwise distance over ``c`` in G (weak) or in G[c] (strong).

    Strong mode returns +inf when G[c] is disconnected.
    """
    n = g.vertex_count
    members = as_vertex_array(c, n)
    if members.size == 0:
        raise ValueError("cluster must be nonempty")
    if mode not in ("weak", "strong"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "weak":
        mask = np.ones(n, dtype=np.uint8)
    else:
        mask = np.zeros(n, dtype=np.uint8)
        mask[members] = 1
    best = 0.0
    one = np.empty(1, dtype=np.int32)
    for v in members:
        one[0] = v
        dist, _ = _run_dijkstra(g, one, mask)
        worst = float(np.max(dist[members]))
        if worst > best:
            best = worst
    return best


@dataclass
class ClusterInfo:
    """How a cluster came to be: producing step kind, center, radius draw."""

    kind: str
    center: int
    draw: float
    event: int = -1


@dataclass
class Partition:
    """A disjoint cover of the vertex set with per-cluster metadata."""

    assignment: np.ndarray
    clusters: list = field(default_factory=list)
    info: list = field(default_factory=list)

    def cluster_of(self, z):
        return int(self.assignment[z])

    def cluster_count(self):
        return len(self.clusters)

    def cut_edge_count(self, g):
        eu, ev, _ = g.edge_arrays()
        if eu.size == 0:
            return 0
        return int(np.count_nonzero(self.assignment[eu] != self.assignment[ev]))

    def validate(self, g):
        n = g.vertex_count
        if self.assignment.shape != (n,):
            raise InvariantError("assignment length mismatch")
        if n and np.any(self.assignment < 0):
            raise InvariantError("unassigned vertices present")
        seen = np.zeros(n, dtype=bool)
        for idx, cl in enumerate(self.clusters):
            if cl.size == 0:
                raise InvariantError(f"cluster {idx} is empty")
            if np.any(seen[cl]):
                raise InvariantError(f"cluster {idx} overlaps an earlier one")
            seen[cl] = True
            if np.any(self.assignment[cl] != idx):
                raise InvariantError(f"assignment inconsistent for cluster {idx}")
        if not np.all(seen):
            raise InvariantError("clusters do not cover the vertex set")


class PartitionBuilder:
    """Accumulates clusters, enforcing disjointness and full coverage."""

    def __init__(self, g):
        self.g = g
        self.assignment = np.full(g.vertex_count, -1, dtype=np.int32)
        self.clusters = []
        self.info = []

    def uncovered(self, vertices):
        vertices = np.asarray(vertices, dtype=np.int32)
        return vertices[self.assignment[vertices] < 0]

    def add(self, vertices, info):
        """Add the not-yet-covered part of ``vertices`` as a new cluster.

        Empty leftovers are dropped.  Returns the cluster index or -1.
        """
        fresh = self.uncovered(vertices)
        if fresh.size == 0:
            return -1
        idx = len(self.clusters)
        self.assignment[fresh] = idx
        self.clusters.append(np.sort(fresh))
        self.info.append(info)
        return idx

    def finish(self):
        part = Partition(self.assignment, self.clusters, self.info)
        part.validate(self.g)
        return part
