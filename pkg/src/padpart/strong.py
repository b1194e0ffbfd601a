"""Strong-diameter random partition via buffered paths and cone carving.

Each supernode starts from a seed vertex and grows one buffered shortest
path at a time until it touches every supernode visible from the residual
components around it.  Every path buffer is immediately partitioned into
cones: a cone around center c collects the vertices whose detour
d(u, c) - d(u, path) is at most a uniform draw from [delta/8, delta/4],
with distances recomputed in the shrinking induced subgraph.  Cones (plus
the seed singletons) have strong diameter at most delta.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvariantError, MinorParameterWarning
from .graph import (
    ClusterInfo,
    PartitionBuilder,
    _run_dijkstra,
    _tol,
    as_vertex_array,
    ball,
    boundary_neighbors,
    connected_components,
    mask_of,
    sets_adjacent,
    shortest_paths,
)
from .sampling import TexpParams, texp_sample
from .trace import ConeRecord, DecompositionTrace

CONE_WIDTH_LO = 1.0 / 8.0
CONE_WIDTH_HI = 1.0 / 4.0


@dataclass(frozen=True)
class StrongParams:
    delta: float
    r: int

    @property
    def buffer_dist(self):
        return TexpParams(0.0, 1.0 / 4.0, 8.0 * (self.r**2 + self.r))


def create_cones(g, s, p, delta, rng):
    """Partition buffer ``s`` into cones centered on residual path vertices.

    ``p`` is an ordered vertex sequence contained in ``s``; every vertex of
    ``s`` must be within delta/4 of ``p`` inside G[s].  Returns the list of
    :class:`ConeRecord` in carving order; their members partition ``s``.
    """
    n = g.vertex_count
    s_arr = as_vertex_array(s, n)
    order = []
    seen = set()
    for v in p:
        v = int(v)
        if v not in seen:
            seen.add(v)
            order.append(v)
    s_set = set(s_arr.tolist())
    if not seen <= s_set:
        raise ValueError("path must be contained in the buffer set")
    full_mask = np.zeros(n, dtype=np.uint8)
    full_mask[s_arr] = 1
    dm = shortest_paths(g, order, s_arr)
    if not np.all(dm.dist[s_arr] <= _tol(delta / 4.0)):
        raise InvariantError(
            "buffer vertex farther than delta/4 from its path"
        )
    cones = []
    remaining = full_mask.copy()
    residual_path = order
    while residual_path:
        c = residual_path[0]
        alpha = rng.uniform(CONE_WIDTH_LO, CONE_WIDTH_HI)
        one = np.asarray([c], dtype=np.int32)
        dist_c, _ = _run_dijkstra(g, one, remaining)
        src = np.asarray(sorted(residual_path), dtype=np.int32)
        dist_p, _ = _run_dijkstra(g, src, remaining)
        with np.errstate(invalid="ignore"):
            inside = (
                (remaining != 0)
                & np.isfinite(dist_c)
                & np.isfinite(dist_p)
                & (dist_c - dist_p <= _tol(alpha * delta))
            )
        members = np.flatnonzero(inside).astype(np.int32)
        cones.append(ConeRecord(-1, c, alpha, members))
        remaining[members] = 0
        residual_path = [v for v in residual_path if remaining[v]]
    if remaining.any():
        raise InvariantError("cones did not cover the buffer")
    return cones


def strong_random_partition(g, params, rng):
    """Returns a partition with strong diameter <= delta, plus its trace."""
    if params.delta <= 0:
        raise ValueError("delta must be > 0")
    if params.r < 1:
        raise ValueError("r must be >= 1")
    r = params.r
    trace = DecompositionTrace(
        graph=g,
        scheme="strong",
        delta=float(params.delta),
        params={"r": r},
        process={"l": 0.0, "u": 1.0 / 4.0, "b": 2.0 * (r**2 + r)},
    )
    builder = PartitionBuilder(g)
    _strong_partition_into(
        g, params, rng, None, builder, trace, "main", itertools.count()
    )
    return builder.finish(), trace


def _strong_partition_into(g, params, rng, within, builder, trace, scope, alloc):
    """Partition G[within] in place into ``builder``/``trace``.

    The genus scheme reuses this for its planar components, so supernode
    ids come from the shared ``alloc`` counter and trace events carry
    ``scope``.  The supernode list starts empty for each invocation.
    """
    n = g.vertex_count
    delta = float(params.delta)
    buf_stream = rng.split(0)
    cone_stream = rng.split(1)
    remaining = (
        np.ones(n, dtype=np.uint8) if within is None else mask_of(within, n)
    )
    supernodes = []  # (id, bool mask) of completed supernodes
    warned = False
    while remaining.any():
        comp = connected_components(g, np.flatnonzero(remaining))[0]
        comp_mask = np.zeros(n, dtype=bool)
        comp_mask[comp] = True
        sid = next(alloc)
        seed = int(comp[0])
        adjacent = tuple(
            j for j, sm in supernodes if sets_adjacent(g, sm, comp_mask)
        )
        if len(adjacent) > params.r and not warned:
            warnings.warn(
                f"component saw {len(adjacent)} pairwise-adjacent supernodes; "
                f"the input is not K_{params.r + 1}-minor-free, padding "
                "guarantees are void",
                MinorParameterWarning,
                stacklevel=3,
            )
            warned = True
        idx = trace.add_event(
            kind="seed",
            skeleton=np.asarray([seed], dtype=np.int32),
            radius=0.0,
            buffer=np.asarray([seed], dtype=np.int32),
            supernode=sid,
            component=comp,
            adjacent=adjacent,
            scope=scope,
        )
        builder.add([seed], ClusterInfo("seed", seed, 0.0, idx))
        remaining[seed] = 0
        w_mask = np.zeros(n, dtype=bool)
        w_mask[seed] = True
        while True:
            pick = _select_expansion(
                g, remaining, comp_mask, w_mask, supernodes
            )
            if pick is None:
                break
            cij, cij_mask, target_id, target_mask, adjacent_ids = pick
            if len(adjacent_ids) > params.r and not warned:
                warnings.warn(
                    f"component saw {len(adjacent_ids)} pairwise-adjacent "
                    f"supernodes; the input is not K_{params.r + 1}-minor-"
                    "free, padding guarantees are void",
                    MinorParameterWarning,
                    stacklevel=3,
                )
                warned = True
            u = int(boundary_neighbors(g, np.flatnonzero(w_mask), cij)[0])
            dm = shortest_paths(g, [u], cij)
            targets = boundary_neighbors(g, np.flatnonzero(target_mask), cij)
            d = dm.dist[targets]
            best = int(targets[np.lexsort((targets, d))[0]])
            path = dm.path_to(best)
            radius = texp_sample(params.buffer_dist, buf_stream)
            buffer = ball(g, path, radius * delta, cij)
            idx = trace.add_event(
                kind="path_buffer",
                skeleton=as_vertex_array(path, n),
                radius=radius,
                buffer=buffer,
                supernode=sid,
                component=cij,
                adjacent=adjacent_ids,
                paths=(tuple(path),),
                scope=scope,
            )
            for cone in create_cones(g, buffer, path, delta, cone_stream):
                cone.parent_buffer = idx
                trace.cones.append(cone)
                builder.add(
                    cone.members, ClusterInfo("cone", cone.center, cone.alpha, idx)
                )
            w_mask[buffer] = True
            remaining[buffer] = 0
        supernodes.append((sid, w_mask))


def _select_expansion(g, remaining, comp_mask, w_mask, supernodes):
    """First (component, supernode) pair the working supernode must reach.

    Scans residual components of the region in smallest-vertex order and
    completed supernodes in id order; a pair qualifies when the component
    touches both the working supernode and a supernode the working one
    does not touch yet.  Also reports all supernode ids adjacent to the
    chosen component.
    """
    region = np.flatnonzero((remaining != 0) & comp_mask)
    if region.size == 0:
        return None
    for cij in connected_components(g, region):
        cij_mask = np.zeros(g.vertex_count, dtype=bool)
        cij_mask[cij] = True
        if not sets_adjacent(g, cij_mask, w_mask):
            continue
        adjacent_ids = tuple(
            j for j, sm in supernodes if sets_adjacent(g, sm, cij_mask)
        )
        for j, sm in supernodes:
            if j not in adjacent_ids:
                continue
            if not sets_adjacent(g, w_mask, sm):
                return cij, cij_mask, j, sm, adjacent_ids
    return None
