"""Decomposition traces: the replayable history of a partition run.

A trace records, in execution order, every vertex-removal event: the
skeleton (tree / path / single vertex / cycle), its radius draw, the
buffer it carved, and the component it was built in.  The residual graph
before any event is reconstructible from the removal prefix, which is what
the verification harness replays.  Net-ball and cone records capture the
cluster-carving side of the weak and strong/genus schemes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .graph import as_vertex_array


@dataclass
class TraceEvent:
    """One buffer removal: skeleton A, draw R, buffer K = B(A, R*delta)."""

    kind: str  # "supernode" | "seed" | "path_buffer" | "tw_ball" | "genus_buffer"
    skeleton: np.ndarray
    radius: float
    buffer: np.ndarray
    supernode: int
    component: np.ndarray
    adjacent: tuple = ()
    paths: tuple = ()
    scope: str = "main"

    def is_skeleton(self):
        """Whether the event counts as a threatening skeleton of its scheme."""
        return self.kind != "seed" and self.scope == "main"


@dataclass
class NetPointRecord:
    """A ball carved at a net point of a weak-scheme skeleton tree."""

    event: int
    path_index: int
    position: float
    center: int
    alpha: float
    cluster: int


@dataclass
class ConeRecord:
    """A cone carved from a path/cycle buffer."""

    parent_buffer: int  # index of the owning TraceEvent
    center: int
    alpha: float
    members: np.ndarray


@dataclass
class DecompositionTrace:
    """Full history of one partition run over ``graph``."""

    graph: object
    scheme: str
    delta: float
    params: dict
    process: dict  # skeleton-process parameters: l, u, b
    events: list = field(default_factory=list)
    net_points: list = field(default_factory=list)
    cones: list = field(default_factory=list)

    def add_event(self, **kw):
        self.events.append(TraceEvent(**kw))
        return len(self.events) - 1

    def residual_before(self, index):
        """Mask of vertices still present just before event ``index``."""
        n = self.graph.vertex_count
        mask = np.ones(n, dtype=np.uint8)
        for ev in self.events[:index]:
            mask[ev.buffer] = 0
        return mask

    def supernode_members(self, supernode_id):
        """Union of the buffers belonging to one supernode."""
        parts = [
            ev.buffer for ev in self.events if ev.supernode == supernode_id
        ]
        if not parts:
            return np.empty(0, dtype=np.int32)
        return np.unique(np.concatenate(parts)).astype(np.int32)

    def supernode_ids(self):
        out = []
        for ev in self.events:
            if ev.supernode not in out:
                out.append(ev.supernode)
        return out

    def to_json(self):
        doc = {
            "scheme": self.scheme,
            "n": self.graph.vertex_count,
            "delta": self.delta,
            "params": self.params,
            "process": self.process,
            "events": [
                {
                    "kind": ev.kind,
                    "skeleton": np.asarray(ev.skeleton).tolist(),
                    "radius": ev.radius,
                    "buffer": np.asarray(ev.buffer).tolist(),
                    "supernode": ev.supernode,
                    "component": np.asarray(ev.component).tolist(),
                    "adjacent": list(ev.adjacent),
                    "paths": [list(map(int, p)) for p in ev.paths],
                    "scope": ev.scope,
                }
                for ev in self.events
            ],
            "net_points": [
                {
                    "event": r.event,
                    "path_index": r.path_index,
                    "position": r.position,
                    "center": r.center,
                    "alpha": r.alpha,
                    "cluster": r.cluster,
                }
                for r in self.net_points
            ],
            "cones": [
                {
                    "parent_buffer": r.parent_buffer,
                    "center": r.center,
                    "alpha": r.alpha,
                    "members": np.asarray(r.members).tolist(),
                }
                for r in self.cones
            ],
        }
        return json.dumps(doc, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, graph, text):
        doc = json.loads(text)
        if doc["n"] != graph.vertex_count:
            raise ValueError("trace was recorded for a different graph size")
        n = graph.vertex_count
        trace = cls(
            graph=graph,
            scheme=doc["scheme"],
            delta=float(doc["delta"]),
            params=doc["params"],
            process=doc["process"],
        )
        for ev in doc["events"]:
            trace.events.append(
                TraceEvent(
                    kind=ev["kind"],
                    skeleton=as_vertex_array(ev["skeleton"], n),
                    radius=ev["radius"],
                    buffer=as_vertex_array(ev["buffer"], n),
                    supernode=ev["supernode"],
                    component=as_vertex_array(ev["component"], n),
                    adjacent=tuple(ev["adjacent"]),
                    paths=tuple(tuple(p) for p in ev["paths"]),
                    scope=ev["scope"],
                )
            )
        for r in doc["net_points"]:
            trace.net_points.append(NetPointRecord(**r))
        for r in doc["cones"]:
            trace.cones.append(
                ConeRecord(
                    parent_buffer=r["parent_buffer"],
                    center=r["center"],
                    alpha=r["alpha"],
                    members=as_vertex_array(r["members"], n),
                )
            )
        return trace
