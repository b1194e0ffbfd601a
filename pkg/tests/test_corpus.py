import pytest

from padpart.corpus import GeneratorSpec, generate
from padpart.errors import ParseError, ValidationError
from padpart.fileio import (
    read_graph,
    read_rotation,
    read_td,
    write_graph,
    write_rotation,
    write_td,
)
from padpart.genus import genus_from_embedding, validate_rotation
from padpart.sampling import RandomStream
from padpart.treewidth import validate_tree_decomposition


def test_grid_2x2():
    g, td, rot = generate(GeneratorSpec("grid", (2, 2)), RandomStream(0))
    assert g.vertex_count == 4 and g.edge_count == 4
    assert td is None and rot is not None


def test_k_tree_width_certificate():
    g, td, _ = generate(GeneratorSpec("k_tree", (2, 10)), RandomStream(3))
    assert validate_tree_decomposition(g, td) == 2


@pytest.mark.parametrize("k,n", [(1, 30), (3, 40), (4, 60)])
def test_k_tree_widths(k, n):
    g, td, _ = generate(GeneratorSpec("k_tree", (k, n)), RandomStream(5))
    assert validate_tree_decomposition(g, td) == k
    assert g.edge_count == k * (k + 1) // 2 + k * (n - k - 1)


def test_toroidal_certificate():
    g, _, rot = generate(GeneratorSpec("toroidal_grid", (4, 4)), RandomStream(0))
    validate_rotation(g, rot)
    assert genus_from_embedding(g, rot) == 1


def test_all_certificates_validate():
    specs = [
        GeneratorSpec("grid", (4, 5)),
        GeneratorSpec("path", (9,)),
        GeneratorSpec("cycle", (8,)),
        GeneratorSpec("k_tree", (2, 20)),
        GeneratorSpec("toroidal_grid", (3, 4)),
        GeneratorSpec("complete", (6,)),
    ]
    for spec in specs:
        g, td, rot = generate(spec, RandomStream(7))
        if td is not None:
            validate_tree_decomposition(g, td)
        if rot is not None:
            validate_rotation(g, rot)
            if spec.family != "toroidal_grid":
                assert genus_from_embedding(g, rot) == 0


def test_generation_deterministic():
    a, td_a, _ = generate(GeneratorSpec("k_tree", (3, 25)), RandomStream(11))
    b, td_b, _ = generate(GeneratorSpec("k_tree", (3, 25)), RandomStream(11))
    assert a == b and td_a == td_b
    c, _, _ = generate(GeneratorSpec("k_tree", (3, 25)), RandomStream(12))
    assert a != c


def test_uniform_weights_seeded_range():
    g, _, _ = generate(
        GeneratorSpec("grid", (4, 4), weights="uniform"), RandomStream(9)
    )
    ws = [w for _, _, w in g.edges]
    assert all(1.0 <= w <= 2.0 for w in ws)
    assert len(set(ws)) > 1


def test_degenerate_sizes_rejected():
    for spec in (
        ("grid", (0, 3)),
        ("path", (0,)),
        ("cycle", (2,)),
        ("k_tree", (2, 2)),
        ("toroidal_grid", (2, 5)),
        ("complete", (0,)),
    ):
        with pytest.raises(ValueError):
            generate(GeneratorSpec(*spec), RandomStream(0))


def test_unknown_family_rejected():
    with pytest.raises(ValueError):
        GeneratorSpec("hypercube", (3,))


# --- file round trips -------------------------------------------------------

def test_graph_round_trip(tmp_path):
    g, _, _ = generate(
        GeneratorSpec("grid", (3, 4), weights="uniform"), RandomStream(2)
    )
    p = tmp_path / "g.gr"
    write_graph(g, p)
    assert read_graph(p) == g


def test_td_round_trip(tmp_path):
    g, td, _ = generate(GeneratorSpec("k_tree", (3, 15)), RandomStream(2))
    p = tmp_path / "g.td"
    write_td(td, g.vertex_count, p)
    assert read_td(p) == td


def test_rotation_round_trip(tmp_path):
    g, _, rot = generate(GeneratorSpec("toroidal_grid", (3, 3)), RandomStream(2))
    p = tmp_path / "g.rotation.json"
    write_rotation(rot, p)
    assert read_rotation(p) == rot


def test_graph_parse_errors(tmp_path):
    p = tmp_path / "bad.gr"
    p.write_text("q 3 1\n0 1 1.0\n")
    with pytest.raises(ParseError, match="line 1"):
        read_graph(p)
    p.write_text("p 3 2\n0 1 1.0\n0 1 2.0\n")
    with pytest.raises(ParseError, match="line 3.*duplicate"):
        read_graph(p)
    p.write_text("p 3 2\n0 1 1.0\n")
    with pytest.raises(ParseError, match="declared 2"):
        read_graph(p)
    p.write_text("p 2 1\n0 0 1.0\n")
    with pytest.raises(ParseError, match="self-loop"):
        read_graph(p)


def test_td_parse_errors(tmp_path):
    p = tmp_path / "bad.td"
    p.write_text("s td 1 2 3\nb 1 1 2 3\n")
    with pytest.raises(ParseError, match="more than the declared maximum"):
        read_td(p)
    p.write_text("c comment\nb 1 1\n")
    with pytest.raises(ParseError, match="before 's td'"):
        read_td(p)
    p.write_text("s td 2 2 2\nb 1 1 2\n")
    with pytest.raises(ParseError, match="expected bags"):
        read_td(p)
    p.write_text("s td 1 1 1\nb 1 1\n5 6\n")
    with pytest.raises(ParseError, match="unknown bag"):
        read_td(p)


def test_rotation_parse_errors(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"0": [1], "1": []}')
    with pytest.raises(ValidationError, match="missing its reverse"):
        read_rotation(p)
    p.write_text('{"0": [1]}')
    with pytest.raises(ValidationError, match="unknown vertex"):
        read_rotation(p)
    p.write_text("{not json")
    with pytest.raises(ParseError):
        read_rotation(p)
