"""Sum-network construction, min cuts, and the graph text format."""

from itertools import combinations

import pytest

from conftest import FIG4A_MATRIX, mat
from sumnet.network import (
    SumNetwork,
    build_sum_network,
    export_graph,
    import_graph,
    min_cut,
)


def cut_oracle(net: SumNetwork, source: str, terminal: str) -> int:
    """Exhaustive cut enumeration over all node bipartitions."""
    names = [n for n, _ in net.nodes]
    others = [n for n in names if n not in (source, terminal)]
    best = None
    for size in range(len(others) + 1):
        for extra in combinations(others, size):
            side = {source, *extra}
            value = sum(e.mult for e in net.edges if e.tail in side and e.head not in side)
            if best is None or value < best:
                best = value
    return best


def toposort_exists(net: SumNetwork) -> bool:
    indeg = {n: 0 for n, _ in net.nodes}
    for e in net.edges:
        indeg[e.head] += 1
    ready = [n for n, d in indeg.items() if d == 0]
    seen = 0
    while ready:
        u = ready.pop()
        seen += 1
        for e in net.edges:
            if e.tail == u:
                indeg[e.head] -= 1
                if indeg[e.head] == 0:
                    ready.append(e.head)
    return seen == len(net.nodes)


def test_k2_normal_shape():
    net = build_sum_network(mat([[1], [1]]))
    assert len(net.sources()) == 3
    assert len(net.terminals()) == 3
    assert len(net.bottlenecks) == 2
    assert len(net.nodes) == 2 * (2 + 1) + 2 * 2


def test_k2_transpose_shape():
    net = build_sum_network(mat([[1, 1]]))
    assert len(net.sources()) == 3
    assert len(net.terminals()) == 3
    assert len(net.bottlenecks) == 1


def test_fano_network_shape():
    from sumnet.incidence import fano

    net = build_sum_network(fano().matrix)
    assert len(net.sources()) == 14
    assert len(net.terminals()) == 14
    assert len(net.bottlenecks) == 7


def test_dag_and_source_terminal_degrees():
    net = build_sum_network(mat(FIG4A_MATRIX))
    assert toposort_exists(net)
    sources = set(net.sources())
    terminals = set(net.terminals())
    for e in net.edges:
        assert e.head not in sources
        assert e.tail not in terminals


def test_bottleneck_neighborhoods_follow_matrix():
    a = mat(FIG4A_MATRIX)
    net = build_sum_network(a)
    for i in range(1, a.rows + 1):
        into_tail = {e.tail for e in net.edges if e.head == f"tail_e{i}"}
        want = {f"s_p{i}"} | {
            f"s_B{j}" for j in range(1, a.cols + 1) if a.at(i - 1, j - 1)
        }
        assert into_tail == want
        out_of_head = {e.head for e in net.edges if e.tail == f"head_e{i}"}
        want = {f"t_p{i}"} | {
            f"t_B{j}" for j in range(1, a.cols + 1) if a.at(i - 1, j - 1)
        }
        assert out_of_head == want


def test_direct_edges_follow_matrix():
    a = mat(FIG4A_MATRIX)
    net = build_sum_network(a)
    # row terminal 1: direct from other row sources and zero-column sources
    into = {e.tail for e in net.edges if e.head == "t_p1" and e.tail.startswith("s")}
    assert into == {"s_p2", "s_p3", "s_p4", "s_B2", "s_B3"}
    # column terminal 1 (block {1,2}): zero rows 3,4 and the disjoint block C
    into = {e.tail for e in net.edges if e.head == "t_B1" and e.tail.startswith("s")}
    assert into == {"s_p3", "s_p4", "s_B3"}


def test_edge_count_formula():
    for rows in ([[1], [1]], FIG4A_MATRIX, [[1, 1, 0], [1, 0, 1], [0, 1, 1]]):
        a = mat(rows)
        net = build_sum_network(a)
        r, c = a.rows, a.cols
        nnz = a.nonzero_count()
        zeros = r * c - nnz
        disjoint_pairs = sum(
            1
            for j in range(c)
            for jp in range(c)
            if j != jp and all(a.at(i, j) * a.at(i, jp) == 0 for i in range(r))
        )
        expected = r + (r + nnz) + (r + nnz) + r * (r - 1) + 2 * zeros + disjoint_pairs
        assert len(net.edges) == expected


def test_rejects_bad_matrices():
    with pytest.raises(ValueError, match="0 or 1"):
        build_sum_network(mat([[2]]))
    with pytest.raises(ValueError, match="all zero"):
        build_sum_network(mat([[1, 0], [0, 0]]))
    with pytest.raises(ValueError, match="column 2"):
        build_sum_network(mat([[1, 0], [1, 0]]))
    with pytest.raises(ValueError):
        build_sum_network(mat([[1]]), alpha=0)


def test_alpha_lift_topology():
    a = mat(FIG4A_MATRIX)
    base = build_sum_network(a)
    lifted = build_sum_network(a, alpha=3)
    assert lifted.nodes == base.nodes
    assert [(e.tail, e.head, e.bottleneck) for e in lifted.edges] == [
        (e.tail, e.head, e.bottleneck) for e in base.edges
    ]
    assert all(e.mult == 3 for e in lifted.edges)


def test_min_cut_k2_against_oracle():
    net = build_sum_network(mat([[1], [1]]))
    assert min_cut(net, "s_p1", "t_p1") == cut_oracle(net, "s_p1", "t_p1") == 1
    assert min_cut(net, "s_B1", "t_B1") == cut_oracle(net, "s_B1", "t_B1") == 2
    assert min_cut(net, "s_p1", "t_B1") == cut_oracle(net, "s_p1", "t_B1") == 1


def test_min_cut_scales_with_alpha():
    a = mat([[1], [1]])
    base = build_sum_network(a)
    lifted = build_sum_network(a, alpha=2)
    for s in base.sources():
        for t in base.terminals():
            assert min_cut(lifted, s, t) == 2 * min_cut(base, s, t)


def test_min_cut_at_least_alpha_everywhere():
    for rows, alpha in ([[[1], [1]], 1], [FIG4A_MATRIX, 2]):
        net = build_sum_network(mat(rows), alpha=alpha)
        for s in net.sources():
            for t in net.terminals():
                assert min_cut(net, s, t) >= alpha


def test_min_cut_role_validation_and_disconnection():
    net = build_sum_network(mat([[1], [1]]))
    with pytest.raises(ValueError):
        min_cut(net, "t_p1", "t_p2")
    with pytest.raises(ValueError):
        min_cut(net, "s_p1", "s_p2")
    # a disconnected pair yields 0, not an error (severed by hand)
    pruned = SumNetwork(
        net.matrix,
        net.alpha,
        net.nodes,
        tuple(e for e in net.edges if not (e.tail == "s_p1" and e.head == "tail_e1")),
    )
    assert min_cut(pruned, "s_p1", "t_p1") == 0


def test_transpose_matrix_swaps_roles():
    a = mat(FIG4A_MATRIX)
    normal = build_sum_network(a)
    transposed = build_sum_network(a.transpose())
    assert len(transposed.bottlenecks) == a.cols
    assert len(normal.bottlenecks) == a.rows
    assert len(normal.sources()) == len(transposed.sources())


def test_graph_export_round_trip():
    for rows in ([[1], [1]], FIG4A_MATRIX):
        for alpha in (1, 2):
            net = build_sum_network(mat(rows), alpha=alpha)
            text = export_graph(net)
            back = import_graph(text)
            assert export_graph(back) == text
            assert back.matrix == net.matrix and back.alpha == net.alpha


def test_graph_export_marks_bottlenecks():
    net = build_sum_network(mat([[1], [1]]))
    text = export_graph(net)
    assert "bottleneck=1" in text and "bottleneck=2" in text
    assert text.count("->") == len(net.edges)


def test_import_rejects_tampered_text():
    net = build_sum_network(mat([[1], [1]]))
    lines = export_graph(net).splitlines()
    # drop a direct edge line
    dropped = [ln for ln in lines if "s_p2 -> t_p1" not in ln]
    with pytest.raises(ValueError, match="does not describe"):
        import_graph("\n".join(dropped))


def test_terminal_inputs_order():
    a = mat(FIG4A_MATRIX)
    net = build_sum_network(a)
    assert net.terminal_inputs("t_p1") == ["e1", "s_p2", "s_p3", "s_p4", "s_B2", "s_B3"]
    assert net.terminal_inputs("t_B1") == ["e1", "e2", "s_p3", "s_p4", "s_B3"]
    assert net.terminal_inputs("t_B5") == ["e1", "e3", "s_p2", "s_p4"]
    with pytest.raises(ValueError):
        net.terminal_inputs("s_p1")
