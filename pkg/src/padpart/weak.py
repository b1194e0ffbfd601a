"""Weak-diameter random partition via buffered skeleton trees.

Stage one repeatedly picks a residual component, grows a tree of shortest
paths from a root toward every adjacent supernode, and removes a buffer of
truncated-exponential radius around the tree.  Stage two walks the stored
trees, selects a delta/8 net along each root path, and carves balls of
truncated-exponential radius around the net points inside the residual
graph each tree was built in.  Every cluster ends up with weak diameter at
most delta.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvariantError, MinorParameterWarning
from .graph import (
    ClusterInfo,
    PartitionBuilder,
    as_vertex_array,
    ball_masked,
    boundary_neighbors,
    mask_of,
    net_on_paths_detailed,
    shortest_paths,
)
from .sampling import TexpParams, texp_sample
from .trace import DecompositionTrace, NetPointRecord


@dataclass(frozen=True)
class WeakParams:
    """Partition scale delta and declared minor parameter r."""

    delta: float
    r: int

    @property
    def buffer_dist(self):
        return TexpParams(0.0, 1.0 / 8.0, 16.0 * self.r)

    @property
    def ball_dist(self):
        return TexpParams(1.0 / 4.0, 1.0 / 2.0, 20.0 * self.r)


def build_skeleton_tree(g, component, adjacent_supernodes, root):
    """Shortest paths from ``root`` to the nearest neighbor of each supernode.

    ``adjacent_supernodes`` is a list of vertex sets, each with at least one
    neighbor inside ``component``.  Returns one path per supernode (ties on
    distance break toward the smaller vertex id); with no adjacent
    supernodes the tree is just the root.
    """
    comp = as_vertex_array(component, g.vertex_count)
    root = int(root)
    if root not in set(comp.tolist()):
        raise ValueError("root must lie in the component")
    targets = [boundary_neighbors(g, s, comp) for s in adjacent_supernodes]
    return _tree_paths(g, comp, targets, root)


def _tree_paths(g, comp, target_lists, root):
    if not target_lists:
        return [[root]]
    dm = shortest_paths(g, [root], comp)
    paths = []
    for targets in target_lists:
        if targets.size == 0:
            raise InvariantError(
                "listed supernode has no neighbor in the component"
            )
        d = dm.dist[targets]
        if not np.isfinite(d).any():
            raise InvariantError("supernode neighbors unreachable from root")
        best = int(targets[np.lexsort((targets, d))[0]])
        paths.append(dm.path_to(best))
    return paths


def weak_random_partition(g, params, rng):
    """Run both stages; returns the partition and its replayable trace."""
    if params.delta <= 0:
        raise ValueError("delta must be > 0")
    if params.r < 1:
        raise ValueError("r must be >= 1")
    n = g.vertex_count
    delta = float(params.delta)
    trace = DecompositionTrace(
        graph=g,
        scheme="weak",
        delta=delta,
        params={"r": params.r},
        process={
            "l": 0.0,
            "u": 1.0 / 8.0,
            "b": 2.0 * params.r,
            "cut_l": 1.0 / 4.0,
            "cut_u": 1.0 / 2.0,
            "cut_b": 5.0 * params.r,
        },
    )
    buf_stream = rng.split(0)
    ball_stream = rng.split(1)
    eu, ev_arr, _ = g.edge_arrays()

    remaining = np.ones(n, dtype=np.uint8)
    owner = np.full(n, -1, dtype=np.int32)  # supernode owning a removed vertex
    comp_labels = np.empty(n, dtype=np.int32)
    supernode_count = 0
    warned = False
    while remaining.any():
        comp_labels.fill(-1)
        _kernels.label_components(g._indptr, g._nbr, remaining, comp_labels)
        in_comp = comp_labels == 0  # the component with the smallest vertex
        comp = np.flatnonzero(in_comp).astype(np.int32)
        crossing_u = owner[ev_arr[in_comp[eu]]]
        crossing_v = owner[eu[in_comp[ev_arr]]]
        hits = np.concatenate((crossing_u, crossing_v))
        adjacent = tuple(int(j) for j in np.unique(hits[hits >= 0]))
        if len(adjacent) > params.r and not warned:
            warnings.warn(
                f"component saw {len(adjacent)} pairwise-adjacent supernodes; "
                f"the input is not K_{params.r + 1}-minor-free, padding "
                "guarantees are void (see extract_minor_witness)",
                MinorParameterWarning,
                stacklevel=2,
            )
            warned = True
        targets = [
            np.unique(
                np.concatenate(
                    (
                        eu[in_comp[eu] & (owner[ev_arr] == j)],
                        ev_arr[in_comp[ev_arr] & (owner[eu] == j)],
                    )
                )
            ).astype(np.int32)
            for j in adjacent
        ]
        root = int(comp[0])
        paths = _tree_paths(g, comp, targets, root)
        tree_vertices = as_vertex_array(
            np.fromiter((v for p in paths for v in p), dtype=np.int32), n
        )
        radius = texp_sample(params.buffer_dist, buf_stream)
        buffer = ball_masked(
            g, tree_vertices, radius * delta, in_comp.view(np.uint8)
        )
        trace.add_event(
            kind="supernode",
            skeleton=tree_vertices,
            radius=radius,
            buffer=buffer,
            supernode=supernode_count,
            component=comp,
            adjacent=adjacent,
            paths=tuple(tuple(p) for p in paths),
        )
        owner[buffer] = supernode_count
        supernode_count += 1
        remaining[buffer] = 0

    builder = PartitionBuilder(g)
    for idx, ev in enumerate(trace.events):
        net = net_on_paths_detailed(g, ev.paths, delta / 8.0)
        comp_mask = mask_of(ev.component, n)
        center = np.empty(1, dtype=np.int32)
        for v, pi, pos in net:
            alpha = texp_sample(params.ball_dist, ball_stream)
            center[0] = v
            region = ball_masked(g, center, alpha * delta, comp_mask)
            cluster = builder.add(
                region, ClusterInfo("net_ball", v, alpha, idx)
            )
            trace.net_points.append(
                NetPointRecord(
                    event=idx,
                    path_index=pi,
                    position=pos,
                    center=v,
                    alpha=alpha,
                    cluster=cluster,
                )
            )
    return builder.finish(), trace


def extract_minor_witness(trace, component_event):
    """Clique-minor model certified by one trace event.

    Returns the vertex sets of the supernodes that were adjacent to the
    event's component: disjoint, connected, and pairwise joined by an edge.
    Used to certify that an input was not K_{r+1}-minor-free whenever more
    than r sets come back.
    """
    if not 0 <= component_event < len(trace.events):
        raise ValueError("event index out of range")
    ev = trace.events[component_event]
    return [trace.supernode_members(j) for j in ev.adjacent]
