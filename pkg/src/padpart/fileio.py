"""File formats: edge-list graphs, PACE-style tree decompositions,
rotation-system JSON.  Readers are strict and report offending line numbers;
write-then-read is an identity on every supported object.
"""

from __future__ import annotations

import json

from .errors import ParseError, ValidationError
from .genus import RotationSystem
from .graph import Graph
from .treewidth import TreeDecomposition


def write_graph(g, path):
    with open(path, "w") as fh:
        fh.write(f"p {g.vertex_count} {g.edge_count}\n")
        for u, v, w in g.edges:
            fh.write(f"{u} {v} {w!r}\n")


def read_graph(path):
    """Parse `p <n> <m>` followed by exactly m `<u> <v> <w>` lines."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError(1, "empty file, expected 'p <n> <m>' header")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "p":
        raise ParseError(1, f"bad header {lines[0]!r}, expected 'p <n> <m>'")
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError:
        raise ParseError(1, "header counts must be integers") from None
    if n < 0 or m < 0:
        raise ParseError(1, "header counts must be >= 0")
    edges = []
    seen = set()
    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            raise ParseError(line_no, "blank line inside edge list")
        parts = raw.split()
        if len(parts) != 3:
            raise ParseError(line_no, f"expected '<u> <v> <w>', got {raw!r}")
        try:
            u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError(line_no, f"bad edge line {raw!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(line_no, f"vertex id outside 0..{n - 1}")
        if u == v:
            raise ParseError(line_no, f"self-loop at {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(line_no, f"duplicate edge {key}")
        seen.add(key)
        if w < 0:
            raise ParseError(line_no, "negative edge weight")
        edges.append((u, v, w))
    if len(edges) != m:
        raise ParseError(
            len(lines), f"header declared {m} edges, found {len(edges)}"
        )
    return Graph(n, edges)


def write_td(td, n, path):
    """PACE 2017 style `.td` with 1-based bag and vertex ids."""
    k = len(td.bags)
    max_bag = max((len(b) for b in td.bags), default=0)
    with open(path, "w") as fh:
        fh.write(f"s td {k} {max_bag} {n}\n")
        for i, bag in enumerate(td.bags):
            verts = " ".join(str(v + 1) for v in bag)
            fh.write(f"b {i + 1} {verts}".rstrip() + "\n")
        for a, b in td.tree_edges:
            fh.write(f"{a + 1} {b + 1}\n")


def read_td(path):
    """Parse a `.td` file; vertex and bag ids convert to 0-based."""
    header = None
    bags = {}
    tree_edges = []
    with open(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            parts = line.split()
            if parts[0] == "s":
                if header is not None:
                    raise ParseError(line_no, "duplicate 's td' header")
                if len(parts) != 5 or parts[1] != "td":
                    raise ParseError(line_no, f"bad header {line!r}")
                try:
                    header = tuple(int(x) for x in parts[2:])
                except ValueError:
                    raise ParseError(line_no, "header values must be integers") from None
            elif parts[0] == "b":
                if header is None:
                    raise ParseError(line_no, "bag line before 's td' header")
                k, max_bag, n = header
                try:
                    bag_id = int(parts[1])
                    verts = [int(x) for x in parts[2:]]
                except (ValueError, IndexError):
                    raise ParseError(line_no, f"bad bag line {line!r}") from None
                if not 1 <= bag_id <= k:
                    raise ParseError(line_no, f"bag id {bag_id} outside 1..{k}")
                if bag_id in bags:
                    raise ParseError(line_no, f"duplicate bag {bag_id}")
                if len(verts) > max_bag:
                    raise ParseError(
                        line_no,
                        f"bag {bag_id} has {len(verts)} vertices, more than "
                        f"the declared maximum {max_bag}",
                    )
                if any(not 1 <= v <= n for v in verts):
                    raise ParseError(line_no, "bag vertex outside 1..n")
                bags[bag_id] = [v - 1 for v in verts]
            else:
                if header is None:
                    raise ParseError(line_no, "edge line before 's td' header")
                k = header[0]
                if len(parts) != 2:
                    raise ParseError(line_no, f"bad tree edge {line!r}")
                try:
                    a, b = int(parts[0]), int(parts[1])
                except ValueError:
                    raise ParseError(line_no, f"bad tree edge {line!r}") from None
                if not (1 <= a <= k and 1 <= b <= k):
                    raise ParseError(line_no, "tree edge references unknown bag")
                tree_edges.append((a - 1, b - 1))
    if header is None:
        raise ParseError(1, "missing 's td' header")
    k = header[0]
    if set(bags) != set(range(1, k + 1)):
        raise ParseError(0, f"expected bags 1..{k}, found {sorted(bags)}")
    return TreeDecomposition([bags[i] for i in range(1, k + 1)], tree_edges)


def write_rotation(rot, path):
    doc = {str(v): row for v, row in enumerate(rot.order)}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_rotation(path):
    """Load rotation JSON; checks that every edge direction has its reverse."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.lineno, exc.msg) from None
    if not isinstance(doc, dict):
        raise ValidationError("rotation file must be a JSON object")
    n = len(doc)
    order = []
    for v in range(n):
        key = str(v)
        if key not in doc:
            raise ValidationError(f"missing rotation for vertex {v}")
        row = doc[key]
        if not isinstance(row, list) or any(
            not isinstance(x, int) for x in row
        ):
            raise ValidationError(f"rotation of vertex {v} must be an id list")
        if any(not 0 <= x < n for x in row):
            raise ValidationError(f"rotation of vertex {v} names unknown vertex")
        if len(set(row)) != len(row):
            raise ValidationError(f"rotation of vertex {v} repeats a neighbor")
        order.append(row)
    for v, row in enumerate(order):
        for u in row:
            if v not in order[u]:
                raise ValidationError(
                    f"edge ({v},{u}) present at {v} but missing its reverse at {u}"
                )
    return RotationSystem(order)
