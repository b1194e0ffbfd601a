"""Instance generators with known structure certificates.

Each family ships what the schemes need: k-trees carry their natural
width-k tree decomposition, grids/paths/cycles a planar rotation system,
toroidal grids the standard genus-1 rotation, complete graphs a one-bag
decomposition.  Generation is deterministic for a fixed (spec, stream).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .genus import RotationSystem
from .graph import Graph
from .treewidth import TreeDecomposition

FAMILIES = ("grid", "path", "cycle", "k_tree", "toroidal_grid", "complete")


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    size: tuple  # (rows, cols) for grids, (k, n) for k-trees, (n,) otherwise
    weights: str = "unit"  # "unit" or "uniform" (seeded, in [1, 2])

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.weights not in ("unit", "uniform"):
            raise ValueError(f"unknown weight mode {self.weights!r}")


def generate(spec, rng):
    """Build (graph, tree decomposition or None, rotation system or None)."""
    if spec.family == "grid":
        rows, cols = _two(spec.size, minimum=1)
        edges, rot = _grid_edges(rows, cols, wrap=False)
        td = None
    elif spec.family == "toroidal_grid":
        rows, cols = _two(spec.size, minimum=3)
        edges, rot = _grid_edges(rows, cols, wrap=True)
        td = None
    elif spec.family == "path":
        (n,) = _one(spec.size, minimum=1)
        edges = [(i, i + 1) for i in range(n - 1)]
        rot = [[v for v in (i - 1, i + 1) if 0 <= v < n] for i in range(n)]
        td = (
            TreeDecomposition([[0]], [])
            if n == 1
            else TreeDecomposition(
                [[i, i + 1] for i in range(n - 1)],
                [(i, i + 1) for i in range(n - 2)],
            )
        )
    elif spec.family == "cycle":
        (n,) = _one(spec.size, minimum=3)
        edges = [(i, (i + 1) % n) for i in range(n)]
        rot = [[(i - 1) % n, (i + 1) % n] for i in range(n)]
        td = TreeDecomposition(
            [[0, i, i + 1] for i in range(1, n - 1)],
            [(i, i + 1) for i in range(n - 3)],
        )
    elif spec.family == "k_tree":
        k, n = _two(spec.size, minimum=1)
        if n < k + 1:
            raise ValueError("k-tree needs n >= k + 1")
        edges, td = _k_tree(k, n, rng)
        rot = None
    elif spec.family == "complete":
        (n,) = _one(spec.size, minimum=1)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
        td = TreeDecomposition([list(range(n))], [])
        rot = None
    n_vertices = _vertex_count(spec)
    weighted = _weigh(edges, spec.weights, rng)
    g = Graph(n_vertices, weighted)
    rotation = RotationSystem(rot) if rot is not None else None
    return g, td, rotation


def _vertex_count(spec):
    if spec.family in ("grid", "toroidal_grid"):
        return spec.size[0] * spec.size[1]
    if spec.family == "k_tree":
        return spec.size[1]
    return spec.size[0]


def _one(size, minimum):
    if len(size) != 1 or size[0] < minimum:
        raise ValueError(f"size {size} invalid (need one value >= {minimum})")
    return (int(size[0]),)


def _two(size, minimum):
    if len(size) != 2 or min(size) < minimum:
        raise ValueError(f"size {size} invalid (need two values >= {minimum})")
    return int(size[0]), int(size[1])


def _weigh(edges, mode, rng):
    if mode == "unit":
        return [(u, v, 1.0) for u, v in edges]
    return [(u, v, 1.0 + rng.random()) for u, v in edges]


def _grid_edges(rows, cols, wrap):
    """Row-major grid; rotation order (right, down, left, up) per vertex."""

    def vid(i, j):
        return i * cols + j

    edges = []
    for i in range(rows):
        for j in range(cols):
            if wrap or j + 1 < cols:
                edges.append((vid(i, j), vid(i, (j + 1) % cols)))
            if wrap or i + 1 < rows:
                edges.append((vid(i, j), vid((i + 1) % rows, j)))
    rot = []
    for i in range(rows):
        for j in range(cols):
            around = []
            steps = (
                (0, 1),
                (1, 0),
                (0, -1),
                (-1, 0),
            )
            for di, dj in steps:
                ni, nj = i + di, j + dj
                if wrap:
                    around.append(vid(ni % rows, nj % cols))
                elif 0 <= ni < rows and 0 <= nj < cols:
                    around.append(vid(ni, nj))
            rot.append(around)
    return edges, rot


def _k_tree(k, n, rng):
    """Grow from K_{k+1} by attaching each new vertex to a random k-clique."""
    edges = [(u, v) for u, v in combinations(range(k + 1), 2)]
    bags = [list(range(k + 1))]
    tree_edges = []
    cliques = [(frozenset(c), 0) for c in combinations(range(k + 1), k)]
    for v in range(k + 1, n):
        clique, host = cliques[rng.integers(0, len(cliques))]
        bag_id = len(bags)
        bags.append(sorted(clique) + [v])
        tree_edges.append((host, bag_id))
        for q in sorted(clique):
            edges.append((q, v))
            cliques.append(((clique - {q}) | {v}, bag_id))
    return edges, TreeDecomposition(bags, tree_edges)
