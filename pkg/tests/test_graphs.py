import pytest

from netconc.graphs import (
    BlockStructure,
    Graph,
    ParseError,
    new_graph,
    parse_edge_list,
    serialize_edge_list,
)


def test_new_graph_empty_undirected():
    g = new_graph(3, False)
    assert g.n == 3 and g.edge_count == 0 and not g.directed


def test_new_graph_single_node_directed():
    g = new_graph(1, True)
    assert g.n == 1 and g.edge_count == 0 and g.directed


def test_new_graph_zero_nodes_rejected():
    with pytest.raises(ValueError):
        new_graph(0, False)


def test_with_edge_symmetry():
    g = new_graph(3).with_edge(0, 1)
    assert g.edge_count == 1
    assert g.has_edge(0, 1) and g.has_edge(1, 0)


def test_with_edge_idempotent():
    g = new_graph(3).with_edge(0, 1).with_edge(0, 1)
    assert g.edge_count == 1
    assert g.with_edge(0, 1, False).with_edge(0, 1, False).edge_count == 0


def test_self_loop_rejected():
    with pytest.raises(ValueError):
        new_graph(3).with_edge(1, 1)
    with pytest.raises(ValueError):
        Graph.from_edges(3, False, [(2, 2)])


def test_out_of_range_rejected():
    with pytest.raises(ValueError):
        new_graph(3).with_edge(0, 3)


def test_edge_count_after_k_inserts():
    g = new_graph(5)
    pairs = [(0, 1), (1, 2), (2, 3), (0, 4)]
    for (i, j) in pairs:
        g = g.with_edge(i, j)
    assert g.edge_count == len(pairs)


def test_adjacency_involution_undirected():
    g = Graph.from_edges(4, False, [(0, 1), (2, 3), (1, 3)])
    a = g.adjacency
    assert (a == a.T).all()


def test_parse_p3_undirected():
    g, blocks = parse_edge_list("directed 0\nnodes 3\nedges\n1 2\n2 3\n")
    assert not g.directed and g.n == 3 and g.edge_count == 2
    assert g.has_edge(1, 0) and blocks is None


def test_parse_directed_asymmetric():
    g, _ = parse_edge_list("directed 1\nnodes 3\nedges\n1 2\n2 3\n")
    assert g.directed and g.edge_count == 2
    assert g.has_edge(0, 1) and not g.has_edge(1, 0)


def test_parse_self_loop_reports_line():
    with pytest.raises(ParseError) as exc:
        parse_edge_list("directed 0\nnodes 3\nedges\n1 2\n1 1\n")
    assert exc.value.line_no == 5


def test_parse_duplicate_edge_error():
    with pytest.raises(ParseError):
        parse_edge_list("directed 0\nnodes 3\nedges\n1 2\n2 1\n")


def test_parse_out_of_range_error():
    with pytest.raises(ParseError):
        parse_edge_list("directed 0\nnodes 3\nedges\n1 4\n")


def test_parse_malformed_header():
    with pytest.raises(ParseError):
        parse_edge_list("nodes 3\nedges\n")


def test_parse_comments_ignored():
    g, _ = parse_edge_list("# hi\ndirected 0\nnodes 2\nedges\n# edge below\n1 2\n")
    assert g.edge_count == 1


def test_roundtrip_with_blocks():
    g = Graph.from_edges(4, True, [(0, 1), (2, 0), (3, 2)])
    blocks = BlockStructure.from_labels([0, 0, 1, 1])
    text = serialize_edge_list(g, blocks)
    g2, b2 = parse_edge_list(text)
    assert g2 == g
    assert b2.labels == blocks.labels


def test_block_structure_contiguity():
    with pytest.raises(ValueError):
        BlockStructure.from_labels([0, 2, 2])
    bl = BlockStructure.from_sizes([2, 3])
    assert bl.n_nodes == 5 and bl.n_blocks == 2
    assert list(bl.sizes) == [2, 3]
