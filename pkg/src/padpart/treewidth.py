"""Strong-diameter partition for graphs with a known tree decomposition.

Vertices are processed in nondecreasing order of the height of their
shallowest bag (ties by vertex id).  A still-present vertex carves the
ball of truncated-exponential radius around itself in the residual graph;
already-removed vertices are skipped without consuming randomness.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .graph import ClusterInfo, PartitionBuilder, as_vertex_array, ball_masked
from . import _kernels
from .sampling import TexpParams, texp_sample
from .trace import DecompositionTrace


@dataclass
class TreeDecomposition:
    """Bags of vertices arranged on a tree; ``root`` defaults to bag 0."""

    bags: list
    tree_edges: list
    root: int = 0

    def __post_init__(self):
        self.bags = [sorted(int(v) for v in bag) for bag in self.bags]
        self.tree_edges = [(int(a), int(b)) for a, b in self.tree_edges]

    def width(self):
        return max((len(b) for b in self.bags), default=0) - 1

    def __eq__(self, other):
        if not isinstance(other, TreeDecomposition):
            return NotImplemented
        return (
            [set(b) for b in self.bags] == [set(b) for b in other.bags]
            and sorted(tuple(sorted(e)) for e in self.tree_edges)
            == sorted(tuple(sorted(e)) for e in other.tree_edges)
            and self.root == other.root
        )


def _bag_adjacency(td):
    k = len(td.bags)
    adj = [[] for _ in range(k)]
    for a, b in td.tree_edges:
        if not (0 <= a < k and 0 <= b < k):
            raise ValidationError(f"tree edge ({a},{b}) references unknown bag")
        adj[a].append(b)
        adj[b].append(a)
    return adj


def validate_tree_decomposition(g, td):
    """Check all four decomposition conditions; returns the width."""
    k = len(td.bags)
    if k == 0:
        raise ValidationError("decomposition has no bags")
    adj = _bag_adjacency(td)
    if len(td.tree_edges) != k - 1:
        raise ValidationError(
            f"bag graph has {len(td.tree_edges)} edges, a tree on {k} bags needs {k - 1}"
        )
    seen = [False] * k
    queue = deque([0])
    seen[0] = True
    count = 1
    while queue:
        a = queue.popleft()
        for b in adj[a]:
            if not seen[b]:
                seen[b] = True
                count += 1
                queue.append(b)
    if count != k:
        raise ValidationError("bag graph is not connected (not a tree)")

    covered = np.zeros(g.vertex_count, dtype=bool)
    bags_of = [[] for _ in range(g.vertex_count)]
    for i, bag in enumerate(td.bags):
        for v in bag:
            if not 0 <= v < g.vertex_count:
                raise ValidationError(f"bag {i} contains unknown vertex {v}")
            covered[v] = True
            bags_of[v].append(i)
    if not covered.all():
        v = int(np.flatnonzero(~covered)[0])
        raise ValidationError(f"uncovered vertex {v}")
    for u, v, _ in zip(*g.edge_arrays()):
        if not set(bags_of[u]) & set(bags_of[v]):
            raise ValidationError(f"uncovered edge ({u},{v})")
    for v in range(g.vertex_count):
        mine = set(bags_of[v])
        start = bags_of[v][0]
        reach = {start}
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if b in mine and b not in reach:
                    reach.add(b)
                    queue.append(b)
        if reach != mine:
            raise ValidationError(
                f"bags containing vertex {v} do not form a connected subtree"
            )
    return td.width()


@dataclass
class HeightOrder:
    """Per-vertex shallowest-bag height and the processing order."""

    height: np.ndarray  # h(v)
    bag: np.ndarray  # the smallest bag id attaining h(v)
    order: np.ndarray  # vertices sorted by (h(v), v)


def height_order(g, td):
    k = len(td.bags)
    adj = _bag_adjacency(td)
    bag_h = np.full(k, -1, dtype=np.int64)
    bag_h[td.root] = 0
    queue = deque([td.root])
    while queue:
        a = queue.popleft()
        for b in adj[a]:
            if bag_h[b] < 0:
                bag_h[b] = bag_h[a] + 1
                queue.append(b)
    n = g.vertex_count
    h = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
    b_of = np.full(n, -1, dtype=np.int64)
    for i in range(k):  # ascending bag id, so ties keep the smallest bag
        for v in td.bags[i]:
            if bag_h[i] < h[v]:
                h[v] = bag_h[i]
                b_of[v] = i
    order = np.lexsort((np.arange(n), h)).astype(np.int32)
    return HeightOrder(h, b_of, order)


def treewidth_partition(g, td, delta, rng):
    """Ball carving along the height order; clusters are residual balls."""
    if delta <= 0:
        raise ValueError("delta must be > 0")
    width = validate_tree_decomposition(g, td)
    r = width + 1
    dist = TexpParams(0.0, 1.0 / 2.0, 8.0 * r)
    trace = DecompositionTrace(
        graph=g,
        scheme="treewidth",
        delta=float(delta),
        params={"width": width, "r": r},
        process={"l": 0.0, "u": 1.0 / 2.0, "b": 4.0 * r},
    )
    builder = PartitionBuilder(g)
    stream = rng.split(0)
    order = height_order(g, td).order
    remaining = np.ones(g.vertex_count, dtype=np.uint8)
    comp = np.empty(g.vertex_count, dtype=np.int32)
    center = np.empty(1, dtype=np.int32)
    for v in order.tolist():
        if not remaining[v]:
            continue
        radius = texp_sample(dist, stream)
        center[0] = v
        cluster = ball_masked(g, center, radius * delta, remaining)
        comp.fill(-1)
        _kernels.label_components(g._indptr, g._nbr, remaining, comp)
        component = np.flatnonzero(comp == comp[v]).astype(np.int32)
        idx = trace.add_event(
            kind="tw_ball",
            skeleton=as_vertex_array([v], g.vertex_count),
            radius=radius,
            buffer=cluster,
            supernode=len(trace.events),
            component=component,
        )
        builder.add(cluster, ClusterInfo("tw_ball", v, radius, idx))
        remaining[cluster] = 0
    return builder.finish(), trace
