"""Monte Carlo estimation and trace verification for the partition schemes.

Estimators split the master stream per trial index, so results are
independent of evaluation order and of the number of worker threads.
Statistical pass/fail uses three standard errors around one-sided bounds:
only gross violations fail.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import TraceIntegrityError
from .genus import genus_from_embedding, genus_partition
from .graph import (
    _run_dijkstra,
    _tol,
    as_vertex_array,
    ball,
    dist_leq,
    mask_of,
    sets_adjacent,
)
from . import _kernels
from .strong import StrongParams, strong_random_partition
from .treewidth import treewidth_partition
from .weak import WeakParams, weak_random_partition

WILSON_Z = 1.959963984540054  # two-sided 95%


@dataclass(frozen=True)
class Scheme:
    """Which partition algorithm to run, with its inputs."""

    name: str  # weak | strong | treewidth | genus
    delta: float
    r: int = None
    genus_bound: int = None
    td: object = None
    rotation: object = None


def run_scheme(g, scheme, rng):
    """Dispatch one partition run; returns (partition, trace)."""
    if scheme.name == "weak":
        if scheme.r is None:
            raise ValueError("weak scheme needs r")
        return weak_random_partition(g, WeakParams(scheme.delta, scheme.r), rng)
    if scheme.name == "strong":
        if scheme.r is None:
            raise ValueError("strong scheme needs r")
        return strong_random_partition(
            g, StrongParams(scheme.delta, scheme.r), rng
        )
    if scheme.name == "treewidth":
        if scheme.td is None:
            raise ValueError("treewidth scheme needs a tree decomposition")
        return treewidth_partition(g, scheme.td, scheme.delta, rng)
    if scheme.name == "genus":
        if scheme.rotation is None:
            raise ValueError("genus scheme needs a rotation system")
        bound = scheme.genus_bound
        if bound is None:
            bound = genus_from_embedding(g, scheme.rotation)
        return genus_partition(g, scheme.rotation, scheme.delta, bound, rng)
    raise ValueError(f"unknown scheme {scheme.name!r}")


def wilson_interval(successes, trials, z=WILSON_Z):
    if trials < 1:
        raise ValueError("trials must be >= 1")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
        / denom
    )
    return (max(0.0, center - half), min(1.0, center + half))


def _frequency_stderr(successes, trials):
    phat = successes / trials
    return math.sqrt(phat * (1.0 - phat) / trials)


@dataclass
class PaddingEstimate:
    gamma: float
    delta_param: float
    trials: int
    success_count: int
    point_estimate: float
    wilson_ci: tuple


def _trial_blocks(trials, workers):
    edges = [trials * i // workers for i in range(workers + 1)]
    return [(lo, hi) for lo, hi in zip(edges, edges[1:]) if lo < hi]


def _map_blocks(worker, args, trials, threads):
    """Run ``worker(*args, lo, hi)`` over contiguous trial blocks.

    With threads > 1 the blocks go to worker processes (trial results are
    keyed by index, so the split cannot change any output).  Returns the
    per-block results in block order.
    """
    if threads <= 1:
        return [worker(*args, 0, trials)]
    blocks = _trial_blocks(trials, threads)
    with ProcessPoolExecutor(max_workers=len(blocks)) as pool:
        futures = [pool.submit(worker, *args, lo, hi) for lo, hi in blocks]
        return [f.result() for f in futures]


def _padding_block(g, scheme, seed, path, keys, balls, lo, hi):
    rng = _rebuild_stream(seed, path)
    counts = [0] * len(keys)
    for t in range(lo, hi):
        part, _ = run_scheme(g, scheme, rng.split(t))
        a = part.assignment
        for i, (z, _) in enumerate(keys):
            if np.all(a[balls[i]] == a[z]):
                counts[i] += 1
    return counts


def _fraction_block(g, scheme, seed, path, lo, hi):
    m = g.edge_count
    rng = _rebuild_stream(seed, path)
    out = np.empty(hi - lo, dtype=np.float64)
    for t in range(lo, hi):
        part, _ = run_scheme(g, scheme, rng.split(t))
        out[t - lo] = part.cut_edge_count(g) / m if m else 0.0
    return out


def _rebuild_stream(seed, path):
    from .sampling import RandomStream

    return RandomStream(seed, path)


def estimate_padding_multi(g, scheme, z_set, gammas, trials, rng, threads=1):
    """Per (z, gamma): fraction of trials with ball(z, gamma*delta) inside P(z).

    Returns a dict keyed by (z, gamma).  Per-trial randomness is
    ``rng.split(trial)``, so the estimate is independent of evaluation
    order and of the worker count.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    zs = [int(z) for z in as_vertex_array(z_set, g.vertex_count)]
    gammas = [float(x) for x in gammas]
    if any(x < 0 for x in gammas):
        raise ValueError("gamma must be >= 0")
    keys = [(z, gamma) for z in zs for gamma in gammas]
    balls = [ball(g, [z], gamma * scheme.delta) for z, gamma in keys]
    partials = _map_blocks(
        _padding_block,
        (g, scheme, rng.master_seed, rng.stream_path, keys, balls),
        trials,
        threads,
    )
    counts = [sum(col) for col in zip(*partials)]
    return {
        k: PaddingEstimate(
            gamma=k[1],
            delta_param=scheme.delta,
            trials=trials,
            success_count=counts[i],
            point_estimate=counts[i] / trials,
            wilson_ci=wilson_interval(counts[i], trials),
        )
        for i, k in enumerate(keys)
    }


def estimate_padding(g, scheme, z_set, gamma, trials, rng, threads=1):
    """Single-gamma convenience wrapper: dict z -> PaddingEstimate."""
    full = estimate_padding_multi(
        g, scheme, z_set, [gamma], trials, rng, threads
    )
    return {z: est for (z, _), est in full.items()}


def estimate_cut_fraction(g, scheme, trials, rng, threads=1):
    """Mean and standard error of the inter-cluster edge fraction."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    partials = _map_blocks(
        _fraction_block,
        (g, scheme, rng.master_seed, rng.stream_path),
        trials,
        threads,
    )
    fractions = np.concatenate(partials)
    mean = float(fractions.mean())
    stderr = (
        float(fractions.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    )
    return mean, stderr


# ---------------------------------------------------------------------------
# trace replay

def _residual_distance_from(trace, z, mask, cutoff):
    one = np.asarray([z], dtype=np.int32)
    dist, _ = _run_dijkstra(trace.graph, one, mask, cutoff=_tol(cutoff))
    return dist


def count_threateners(trace, z, gamma, u):
    """Skeletons within (u + gamma) * delta of z in their residual graphs.

    Counted until z itself is removed.  The residual graph before each
    event is replayed from the removal prefix.
    """
    z = int(z)
    if not 0 <= z < trace.graph.vertex_count:
        raise ValueError("z outside the graph")
    thresh = (u + gamma) * trace.delta
    mask = np.ones(trace.graph.vertex_count, dtype=np.uint8)
    count = 0
    for ev in trace.events:
        if not mask[z]:
            break
        if ev.is_skeleton():
            if not np.all(mask[ev.buffer] == 1):
                raise TraceIntegrityError(
                    "event buffer overlaps earlier removals"
                )
            dist = _residual_distance_from(trace, z, mask, thresh)
            if dist_leq(float(np.min(dist[ev.skeleton])), thresh):
                count += 1
        mask[ev.buffer] = 0
    return count


def count_net_threateners(trace, z, gamma):
    """Net points within (1/2 + gamma) * delta of z in their residual graphs."""
    if trace.scheme != "weak":
        raise ValueError("net threateners only exist for weak traces")
    z = int(z)
    thresh = (0.5 + gamma) * trace.delta
    by_event = {}
    for rec in trace.net_points:
        by_event.setdefault(rec.event, []).append(rec.center)
    mask = np.ones(trace.graph.vertex_count, dtype=np.uint8)
    count = 0
    for i, ev in enumerate(trace.events):
        if not mask[z]:
            break
        centers = by_event.get(i, ())
        if centers:
            dist = _residual_distance_from(trace, z, mask, thresh)
            count += sum(1 for c in centers if dist_leq(float(dist[c]), thresh))
        mask[ev.buffer] = 0
    return count


def _cutting_sets(trace):
    """K_i sets of the trace's cutting process, in process order.

    For the weak scheme these are the net-point balls replayed in the
    residual graph their supernode was built in; for the other schemes the
    buffers themselves are the clusters being carved.
    """
    if trace.scheme == "weak":
        for rec in trace.net_points:
            ev = trace.events[rec.event]
            yield ball(
                trace.graph, [rec.center], rec.alpha * trace.delta, ev.component
            )
    else:
        for ev in trace.events:
            if ev.scope == "main":
                yield ev.buffer


@dataclass
class CutBoundReport:
    trials: int
    cut_count: int
    cut_frequency: float
    cut_stderr: float
    tau_hat: float
    tau_stderr: float
    shelter_factor: float  # exp(-2 b gamma / (u - l))
    bound: float
    passed: bool


def check_cut_bound(traces, z, gamma, l, u, b):
    """Compare the empirical cut frequency of ball(z, gamma*delta) with

        (1 - exp(-2*b*gamma/(u-l))) * (1 + tau_hat / (e^b - 1))

    where tau_hat is the measured mean threatener count.  ``traces`` may be
    any iterable (a generator keeps memory flat); all traces must come from
    the same cutting process (matching l, u, b and delta).
    """
    z = int(z)
    cut_flags = []
    taus = []
    b_mask = None
    for trace in traces:
        proc = trace.process
        if (
            abs(proc["l"] - l) > 1e-9
            or abs(proc["u"] - u) > 1e-9
            or abs(proc["b"] - b) > 1e-9
        ):
            raise ValueError(
                "skeleton-process parameters do not match the trace"
            )
        if b_mask is None:
            bz = ball(trace.graph, [z], gamma * trace.delta)
            b_mask = np.zeros(trace.graph.vertex_count, dtype=bool)
            b_mask[bz] = True
        hits = 0
        for kset in _cutting_sets(trace):
            if np.any(b_mask[np.asarray(kset, dtype=np.int64)]):
                hits += 1
                if hits >= 2:
                    break
        cut_flags.append(hits >= 2)
        taus.append(count_threateners(trace, z, gamma, u))
    trials = len(cut_flags)
    if trials == 0:
        raise ValueError("need at least one trace")
    cut_count = sum(cut_flags)
    freq = cut_count / trials
    freq_se = _frequency_stderr(cut_count, trials)
    taus = np.asarray(taus, dtype=np.float64)
    tau_hat = float(taus.mean())
    tau_se = (
        float(taus.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    )
    shelter = math.exp(-2.0 * b * gamma / (u - l))
    try:
        denom = math.exp(b) - 1.0
        tail = tau_hat / denom
    except OverflowError:
        tail = 0.0
    bound = (1.0 - shelter) * (1.0 + tail)
    return CutBoundReport(
        trials=trials,
        cut_count=cut_count,
        cut_frequency=freq,
        cut_stderr=freq_se,
        tau_hat=tau_hat,
        tau_stderr=tau_se,
        shelter_factor=shelter,
        bound=bound,
        passed=freq <= bound + 3.0 * freq_se,
    )


@dataclass
class TraceCheckReport:
    ok: bool
    violations: list = field(default_factory=list)
    events_checked: int = 0
    max_adjacent_supernodes: int = 0
    cone_checks: int = 0


def verify_trace_invariants(trace, r):
    """Replay a trace and check its structural invariants.

    Checks, per event: (a) supernodes adjacent to any residual component
    are pairwise adjacent (weak/strong traces), (b) the largest such
    adjacency count, reported against r, (c) each buffer replays exactly
    from (residual graph, skeleton, radius draw); plus (d) cone membership
    spot checks on strong/genus traces.  Violations name the event.
    """
    g = trace.graph
    n = g.vertex_count
    report = TraceCheckReport(ok=True)
    last_event_of = {}
    for i, ev in enumerate(trace.events):
        last_event_of[ev.supernode] = i
    sn_mask = {
        sid: mask_of(trace.supernode_members(sid), n).astype(bool)
        for sid in last_event_of
    }
    pair_cache = {}

    def pair_adjacent(a, b):
        key = (a, b) if a < b else (b, a)
        if key not in pair_cache:
            pair_cache[key] = sets_adjacent(g, sn_mask[a], sn_mask[b])
        return pair_cache[key]

    check_adjacency = trace.scheme in ("weak", "strong")
    eu, ev_arr, _ = g.edge_arrays()
    mask = np.ones(n, dtype=np.uint8)
    for i, ev in enumerate(trace.events):
        report.events_checked += 1
        if not np.all(mask[ev.skeleton] == 1):
            report.violations.append(f"event {i}: skeleton outside residual")
        else:
            redo = ball(g, ev.skeleton, ev.radius * trace.delta,
                        np.flatnonzero(mask))
            if set(redo.tolist()) != set(np.asarray(ev.buffer).tolist()):
                report.violations.append(
                    f"event {i}: buffer does not replay from skeleton and radius"
                )
        if check_adjacency:
            comp = np.full(n, -1, dtype=np.int32)
            _kernels.label_components(g._indptr, g._nbr, mask, comp)
            completed = [
                sid for sid, last in last_event_of.items() if last < i
            ]
            by_comp = {}
            for sid in completed:
                s = sn_mask[sid]
                touched = np.concatenate(
                    (comp[ev_arr[s[eu]]], comp[eu[s[ev_arr]]])
                )
                for c in np.unique(touched):
                    if c >= 0:
                        by_comp.setdefault(int(c), []).append(sid)
            for c, sids in by_comp.items():
                report.max_adjacent_supernodes = max(
                    report.max_adjacent_supernodes, len(sids)
                )
                for a, b in combinations(sids, 2):
                    if not pair_adjacent(a, b):
                        report.violations.append(
                            f"event {i}: supernodes {a} and {b} both touch a "
                            "component but are not adjacent"
                        )
        mask[ev.buffer] = 0
    if trace.scheme in ("strong", "genus"):
        report.cone_checks = _spot_check_cones(trace, report.violations)
    if (
        check_adjacency
        and r is not None
        and report.max_adjacent_supernodes > r
    ):
        report.violations.append(
            f"a component saw {report.max_adjacent_supernodes} supernodes, "
            f"more than r={r}"
        )
    report.ok = not report.violations
    return report


def _spot_check_cones(trace, violations, per_cone=6):
    """Membership closure checks on the recorded cones.

    Walking shortest-path parent chains in the residual buffer: chains from
    members toward the cone center must stay inside the cone, and chains
    from non-members toward the residual path must avoid the cone.
    """
    g = trace.graph
    by_event = {}
    for cone in trace.cones:
        by_event.setdefault(cone.parent_buffer, []).append(cone)
    checks = 0
    for idx, cones in by_event.items():
        ev = trace.events[idx]
        order = []
        seen = set()
        for path in ev.paths:
            for v in path:
                if v not in seen:
                    seen.add(v)
                    order.append(int(v))
        live = mask_of(ev.buffer, g.vertex_count)
        residual_path = order
        for cone in cones:
            members = set(np.asarray(cone.members).tolist())
            center = np.asarray([cone.center], dtype=np.int32)
            _, par_c = _run_dijkstra(g, center, live)
            src = np.asarray(sorted(residual_path), dtype=np.int32)
            _, par_p = _run_dijkstra(g, src, live)
            sample = sorted(members)[:per_cone]
            for v in sample:
                x = v
                while x >= 0:
                    if x not in members:
                        violations.append(
                            f"cone at {cone.center} (event {idx}): chain "
                            f"from {v} to the center leaves the cone at {x}"
                        )
                        break
                    x = int(par_c[x])
                checks += 1
            outside = [
                int(x)
                for x in np.flatnonzero(live)
                if int(x) not in members
            ][:per_cone]
            for v in outside:
                x = int(par_p[v])
                while x >= 0:
                    if x in members:
                        violations.append(
                            f"cone at {cone.center} (event {idx}): a shortest "
                            f"path from non-member {v} to the path crosses "
                            f"the cone at {x}"
                        )
                        break
                    x = int(par_p[x])
                checks += 1
            live[np.asarray(cone.members, dtype=np.int64)] = 0
            residual_path = [v for v in residual_path if live[v]]
    return checks


def max_adjacent_clusters(trace, z):
    """Largest number of earlier clusters adjacent to z's residual component."""
    g = trace.graph
    n = g.vertex_count
    z = int(z)
    mask = np.ones(n, dtype=np.uint8)
    cluster_masks = []
    best = 0
    for ev in trace.events:
        if not mask[z]:
            break
        comp = np.full(n, -1, dtype=np.int32)
        _kernels.label_components(g._indptr, g._nbr, mask, comp)
        comp_mask = comp == comp[z]
        count = sum(
            1 for cm in cluster_masks if sets_adjacent(g, cm, comp_mask)
        )
        best = max(best, count)
        cluster_masks.append(mask_of(ev.buffer, n).astype(bool))
        mask[ev.buffer] = 0
    return best


# ---------------------------------------------------------------------------
# potential drift

@dataclass(frozen=True)
class PotentialState:
    """Nondecreasing normalized distances x, at most s of them."""

    x: tuple
    s: int

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if self.s < 1:
            raise ValueError("s must be >= 1")
        if len(self.x) > self.s:
            raise ValueError("at most s coordinates allowed")
        if any(a > b for a, b in zip(self.x, self.x[1:])):
            raise ValueError("coordinates must be nondecreasing")


def potential(state):
    """Sum of exp(-(2s+1) * x_j) over the coordinates."""
    a = 2 * state.s + 1
    return float(sum(math.exp(-a * xj) for xj in state.x))


def potential_capped(state):
    """Variant that saturates at 2s once any coordinate is <= 0."""
    if any(xj <= 0 for xj in state.x):
        return float(2 * state.s)
    return potential(state)


def filter_subsequence(x, y):
    """Drop coordinates strictly larger than y, then append y."""
    x = [float(v) for v in x]
    if any(a > b for a, b in zip(x, x[1:])):
        raise ValueError("input must be nondecreasing")
    y = float(y)
    return [v for v in x if v <= y] + [y]


@dataclass
class DriftReport:
    mean: float
    stderr: float
    bound: float
    passed: bool


def drift_check(state, h, trials, rng):
    """Monte Carlo mean of potential(x filtered at h - Y) - potential(x)
    against the analytic lower bound s(e-2)exp(-(2s+1)h)/(1-exp(-2s)),
    with Y truncated-exponential on [0,1] at rate 2s.
    """
    if h < 0:
        raise ValueError("h must be >= 0")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    s = state.s
    a = 2 * s + 1
    uvals = rng.random_array(trials)
    yvals = h - (-np.log1p(-uvals * (1.0 - math.exp(-2.0 * s))) / (2.0 * s))
    x = np.asarray(state.x, dtype=np.float64)
    terms = np.exp(-a * x)
    prefix = np.concatenate(([0.0], np.cumsum(terms)))
    keep = np.searchsorted(x, yvals, side="right")
    phi_new = prefix[keep] + np.exp(-a * yvals)
    drift = phi_new - prefix[-1]
    mean = float(drift.mean())
    stderr = (
        float(drift.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    )
    bound = s * (math.e - 2.0) * math.exp(-a * h) / (1.0 - math.exp(-2.0 * s))
    return DriftReport(
        mean=mean, stderr=stderr, bound=bound, passed=mean >= bound - 3 * stderr
    )


DRIFT_GRID_S = (1, 2, 3, 5)
DRIFT_GRID_H = (0.0, 0.25, 0.5, 1.0)


def drift_grid_configs(rng):
    """The standard (s, h, x) verification grid with seeded random states."""
    configs = []
    for i, s in enumerate(DRIFT_GRID_S):
        for j, h in enumerate(DRIFT_GRID_H):
            sub = rng.split(i).split(j)
            length = sub.integers(0, s + 1)
            x = tuple(sorted(2.0 * sub.random() for _ in range(length)))
            configs.append((PotentialState(x, s), h))
    return configs
