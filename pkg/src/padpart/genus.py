"""Strong-diameter partition for graphs embedded via a rotation system.

The embedded genus of each residual component is computed by face tracing
(Euler's formula).  Non-planar components lose a buffered cycle made of
two shortest paths from a common root, chosen so that its removal strictly
lowers the embedded genus; the buffer is carved into cones.  Planar
components are handed to the strong-diameter path scheme with minor
parameter 5.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantError, ValidationError
from .graph import as_vertex_array, ball, connected_components, shortest_paths
from .graph import PartitionBuilder
from .sampling import TexpParams, texp_sample
from .strong import StrongParams, _strong_partition_into, create_cones
from .trace import DecompositionTrace
from .graph import ClusterInfo


@dataclass
class RotationSystem:
    """Cyclic order of neighbors around every vertex (a combinatorial embedding)."""

    order: list
    _pos: list = field(default=None, repr=False)

    def __post_init__(self):
        self.order = [[int(v) for v in row] for row in self.order]

    def position_maps(self):
        if self._pos is None:
            self._pos = [
                {v: i for i, v in enumerate(row)} for row in self.order
            ]
        return self._pos

    def __eq__(self, other):
        if not isinstance(other, RotationSystem):
            return NotImplemented
        return self.order == other.order


def validate_rotation(g, rot):
    """Each edge must appear exactly once around each endpoint, nothing else."""
    if len(rot.order) != g.vertex_count:
        raise ValidationError(
            f"rotation lists {len(rot.order)} vertices, graph has {g.vertex_count}"
        )
    for v, row in enumerate(rot.order):
        if len(set(row)) != len(row):
            raise ValidationError(f"rotation at vertex {v} repeats a neighbor")
        expected = set(g.neighbors(v).tolist())
        if set(row) != expected:
            raise ValidationError(
                f"rotation at vertex {v} does not match its incident edges"
            )


def _component_genus(g, rot, members):
    """Embedded genus of one connected component via face tracing."""
    mem = set(int(v) for v in members)
    v_count = len(mem)
    darts = []
    for u in mem:
        for v in g.neighbors(u).tolist():
            if v in mem:
                darts.append((u, v))
    e_count = len(darts) // 2
    if e_count == 0:
        return 0
    pos = rot.position_maps()
    visited = set()
    faces = 0
    for start in darts:
        if start in visited:
            continue
        faces += 1
        cur = start
        while True:
            visited.add(cur)
            u, v = cur
            row = rot.order[v]
            i = pos[v][u]
            # successor of u around v, restricted to the component
            for step in range(1, len(row) + 1):
                w = row[(i + step) % len(row)]
                if w in mem:
                    break
            cur = (v, w)
            if cur == start:
                break
    euler2 = 2 - v_count + e_count - faces
    if euler2 < 0 or euler2 % 2:
        raise ValidationError(
            f"face tracing gave inconsistent Euler characteristic {euler2}"
        )
    return euler2 // 2


def genus_from_embedding(g, rot, restrict=None):
    """Max embedded genus over the components of G[restrict]."""
    comps = connected_components(g, restrict)
    best = 0
    for comp in comps:
        best = max(best, _component_genus(g, rot, comp))
    return best


@dataclass
class GenusCycle:
    """Two shortest paths from a common root whose union reduces the genus."""

    root: int
    path_a: list
    path_b: list
    cycle_vertices: np.ndarray
    order: list  # carving order: path_a, then unseen path_b vertices


def find_reducing_cycle(g, rot, component):
    """First shortest-path-tree fundamental cycle whose removal lowers genus.

    Candidates are scanned in graph edge order; each is verified by
    recomputing the embedded genus of what remains.  Raises when no
    candidate works (possible for adversarial rotation systems).
    """
    comp = as_vertex_array(component, g.vertex_count)
    base = genus_from_embedding(g, rot, comp)
    if base < 1:
        raise ValueError("component is already planar under its embedding")
    root = int(comp[0])
    dm = shortest_paths(g, [root], comp)
    in_comp = set(comp.tolist())
    parent = dm.parent
    for u, v, _ in zip(*g.edge_arrays()):
        u, v = int(u), int(v)
        if u not in in_comp or v not in in_comp:
            continue
        if parent[u] == v or parent[v] == u:
            continue  # tree edge
        path_a = dm.path_to(u)
        path_b = dm.path_to(v)
        order = list(path_a) + [x for x in path_b if x not in set(path_a)]
        rest = sorted(in_comp - set(order))
        if genus_from_embedding(g, rot, rest) <= base - 1:
            return GenusCycle(
                root=root,
                path_a=path_a,
                path_b=path_b,
                cycle_vertices=as_vertex_array(order, g.vertex_count),
                order=order,
            )
    raise InvariantError(
        f"no genus-reducing fundamental cycle found in component rooted at {root}"
    )


def genus_partition(g, rot, delta, genus_bound, rng):
    """Partition an embedded graph into strong-diameter <= delta clusters."""
    if delta <= 0:
        raise ValueError("delta must be > 0")
    validate_rotation(g, rot)
    genus_bound = int(genus_bound)
    overall = genus_from_embedding(g, rot)
    if genus_bound < overall:
        raise ValueError(
            f"genus_bound {genus_bound} below embedded genus {overall}"
        )
    # rate 8*log(genus_bound), clamped at genus_bound 2 so it stays positive
    rate = 8.0 * math.log(max(genus_bound, 2))
    dist = TexpParams(0.0, 1.0 / 4.0, rate)
    trace = DecompositionTrace(
        graph=g,
        scheme="genus",
        delta=float(delta),
        params={"genus_bound": genus_bound},
        process={"l": 0.0, "u": 1.0 / 4.0, "b": rate / 4.0},
    )
    builder = PartitionBuilder(g)
    alloc = itertools.count()
    buf_stream = rng.split(0)
    cone_stream = rng.split(1)
    planar_streams = rng.split(2)
    planar_index = 0
    remaining = np.ones(g.vertex_count, dtype=np.uint8)
    while remaining.any():
        comp = connected_components(g, np.flatnonzero(remaining))[0]
        if _component_genus(g, rot, comp) == 0:
            sub = planar_streams.split(planar_index)
            planar_index += 1
            _strong_partition_into(
                g, StrongParams(delta, 5), sub, comp, builder, trace,
                "planar", alloc,
            )
            remaining[comp] = 0
            continue
        cycle = find_reducing_cycle(g, rot, comp)
        radius = texp_sample(dist, buf_stream)
        buffer = ball(g, cycle.order, radius * delta, comp)
        idx = trace.add_event(
            kind="genus_buffer",
            skeleton=cycle.cycle_vertices,
            radius=radius,
            buffer=buffer,
            supernode=next(alloc),
            component=comp,
            paths=(tuple(cycle.path_a), tuple(cycle.path_b)),
        )
        for cone in create_cones(g, buffer, cycle.order, delta, cone_stream):
            cone.parent_buffer = idx
            trace.cones.append(cone)
            builder.add(
                cone.members, ClusterInfo("cone", cone.center, cone.alpha, idx)
            )
        remaining[buffer] = 0
    return builder.finish(), trace
