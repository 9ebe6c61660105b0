"""Sum-network construction and flow queries.

``build_sum_network`` turns an r x c (0,1)-matrix A into the directed
acyclic sum-network it prescribes: one unit-capacity bottleneck edge per
row, a source and a terminal per row and per column, and direct edges
that hand every terminal exactly the messages it cannot see through its
bottlenecks.  With ``alpha > 1`` the topology is unchanged and every edge
carries multiplicity alpha.

Node ids: ``s_p<i>``/``t_p<i>`` for row sources/terminals, ``s_B<j>``/
``t_B<j>`` for column ones, ``tail_e<i>``/``head_e<i>`` for the relay
endpoints of bottleneck ``e<i>``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .gf import IntMatrix


class Edge(NamedTuple):
    tail: str
    head: str
    mult: int
    bottleneck: int  # 1-based bottleneck index, or 0 for ordinary edges


def row_source(i: int) -> str:
    return f"s_p{i}"


def col_source(j: int) -> str:
    return f"s_B{j}"


def row_terminal(i: int) -> str:
    return f"t_p{i}"


def col_terminal(j: int) -> str:
    return f"t_B{j}"


def _columns_disjoint(a: IntMatrix, j: int, jp: int) -> bool:
    # Inner product of columns over the integers.
    return all(x * y == 0 for x, y in zip(a.col(j), a.col(jp)))


def row_terminal_inputs(a: IntMatrix, i: int) -> list[str]:
    """Canonical input order at t_p<i>: its bottleneck, then direct sources."""
    ins = [f"e{i}"]
    ins += [row_source(ip) for ip in range(1, a.rows + 1) if ip != i]
    ins += [col_source(j) for j in range(1, a.cols + 1) if a.at(i - 1, j - 1) == 0]
    return ins


def col_terminal_inputs(a: IntMatrix, j: int) -> list[str]:
    """Canonical input order at t_B<j>: incident bottlenecks, then direct sources."""
    ins = [f"e{i}" for i in range(1, a.rows + 1) if a.at(i - 1, j - 1) == 1]
    ins += [row_source(i) for i in range(1, a.rows + 1) if a.at(i - 1, j - 1) == 0]
    ins += [
        col_source(jp)
        for jp in range(1, a.cols + 1)
        if jp != j and _columns_disjoint(a, j - 1, jp - 1)
    ]
    return ins


@dataclass(frozen=True)
class SumNetwork:
    """The constructed DAG; immutable once built."""

    matrix: IntMatrix
    alpha: int
    nodes: tuple[tuple[str, str], ...]  # (node id, role) in canonical order
    edges: tuple[Edge, ...]

    @property
    def r(self) -> int:
        return self.matrix.rows

    @property
    def c(self) -> int:
        return self.matrix.cols

    @property
    def bottlenecks(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.bottleneck)

    def sources(self) -> list[str]:
        return [n for n, role in self.nodes if role == "source"]

    def terminals(self) -> list[str]:
        return [n for n, role in self.nodes if role == "terminal"]

    def role_of(self, node: str) -> str:
        for n, role in self.nodes:
            if n == node:
                return role
        raise KeyError(node)

    def terminal_inputs(self, terminal: str) -> list[str]:
        """Inputs feeding a terminal, in the fixed decoder order.

        Bottleneck bundles are named ``e<i>``; a direct edge is named by
        its source node.
        """
        if terminal.startswith("t_p"):
            return row_terminal_inputs(self.matrix, int(terminal[3:]))
        if terminal.startswith("t_B"):
            return col_terminal_inputs(self.matrix, int(terminal[3:]))
        raise ValueError(f"{terminal} is not a terminal")


def build_sum_network(a: IntMatrix, alpha: int = 1) -> SumNetwork:
    """Materialize the sum-network of a nonzero (0,1)-matrix.

    All-zero rows or columns are rejected: they would create a source and
    terminal pair with no bottleneck path, which none of the capacity
    results cover.
    """
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    if not a.is_zero_one():
        raise ValueError("matrix entries must be 0 or 1")
    if a.nonzero_count() == 0:
        raise ValueError("matrix must be nonzero")
    r, c = a.rows, a.cols
    for i in range(r):
        if all(x == 0 for x in a.row(i)):
            raise ValueError(f"row {i + 1} is all zero")
    for j in range(c):
        if all(x == 0 for x in a.col(j)):
            raise ValueError(f"column {j + 1} is all zero")

    nodes: list[tuple[str, str]] = []
    nodes += [(row_source(i), "source") for i in range(1, r + 1)]
    nodes += [(col_source(j), "source") for j in range(1, c + 1)]
    for i in range(1, r + 1):
        nodes.append((f"tail_e{i}", "relay"))
        nodes.append((f"head_e{i}", "relay"))
    nodes += [(row_terminal(i), "terminal") for i in range(1, r + 1)]
    nodes += [(col_terminal(j), "terminal") for j in range(1, c + 1)]

    edges: list[Edge] = []
    for i in range(1, r + 1):
        edges.append(Edge(f"tail_e{i}", f"head_e{i}", alpha, i))
    for i in range(1, r + 1):
        edges.append(Edge(row_source(i), f"tail_e{i}", alpha, 0))
        for j in range(1, c + 1):
            if a.at(i - 1, j - 1):
                edges.append(Edge(col_source(j), f"tail_e{i}", alpha, 0))
    for i in range(1, r + 1):
        edges.append(Edge(f"head_e{i}", row_terminal(i), alpha, 0))
        for j in range(1, c + 1):
            if a.at(i - 1, j - 1):
                edges.append(Edge(f"head_e{i}", col_terminal(j), alpha, 0))
    for i in range(1, r + 1):
        for ip in range(1, r + 1):
            if ip != i:
                edges.append(Edge(row_source(ip), row_terminal(i), alpha, 0))
        for j in range(1, c + 1):
            if a.at(i - 1, j - 1) == 0:
                edges.append(Edge(col_source(j), row_terminal(i), alpha, 0))
    for j in range(1, c + 1):
        for i in range(1, r + 1):
            if a.at(i - 1, j - 1) == 0:
                edges.append(Edge(row_source(i), col_terminal(j), alpha, 0))
        for jp in range(1, c + 1):
            if jp != j and _columns_disjoint(a, j - 1, jp - 1):
                edges.append(Edge(col_source(jp), col_terminal(j), alpha, 0))
        # Nonzero columns never pair with themselves.
        assert not _columns_disjoint(a, j - 1, j - 1)

    return SumNetwork(a, alpha, tuple(nodes), tuple(edges))


def min_cut(net: SumNetwork, source: str, terminal: str) -> int:
    """Value of the minimum edge cut (= max flow), counting multiplicities."""
    if net.role_of(source) != "source":
        raise ValueError(f"{source} is not a source")
    if net.role_of(terminal) != "terminal":
        raise ValueError(f"{terminal} is not a terminal")
    # Edmonds-Karp on the multigraph, multiplicities as capacities.
    index: dict[str, int] = {}
    for n, _ in net.nodes:
        index[n] = len(index)
    nv = len(index)
    adj: list[list[int]] = [[] for _ in range(nv)]
    to: list[int] = []
    cap: list[int] = []

    def add(u: int, v: int, c: int) -> None:
        adj[u].append(len(to))
        to.append(v)
        cap.append(c)
        adj[v].append(len(to))
        to.append(u)
        cap.append(0)

    for e in net.edges:
        add(index[e.tail], index[e.head], e.mult)
    s, t = index[source], index[terminal]
    flow = 0
    while True:
        parent = [-1] * nv
        parent[s] = -2
        queue = deque([s])
        while queue and parent[t] == -1:
            u = queue.popleft()
            for ei in adj[u]:
                v = to[ei]
                if parent[v] == -1 and cap[ei] > 0:
                    parent[v] = ei
                    queue.append(v)
        if parent[t] == -1:
            return flow
        push = None
        v = t
        while v != s:
            ei = parent[v]
            push = cap[ei] if push is None else min(push, cap[ei])
            v = to[ei ^ 1]
        v = t
        while v != s:
            ei = parent[v]
            cap[ei] -= push
            cap[ei ^ 1] += push
            v = to[ei ^ 1]
        flow += push


# ---------------------------------------------------------------------------
# graph text format (a fixed DOT subset; import accepts exactly what export
# emits and rebuilds the network from it)


def export_graph(net: SumNetwork) -> str:
    lines = ["digraph sum_network {"]
    lines.append(f"  graph [rows={net.r} cols={net.c} alpha={net.alpha}];")
    for n, role in net.nodes:
        lines.append(f"  {n} [role={role}];")
    for e in net.edges:
        attrs = f"mult={e.mult}"
        if e.bottleneck:
            attrs += f" bottleneck={e.bottleneck}"
        lines.append(f"  {e.tail} -> {e.head} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def import_graph(text: str) -> SumNetwork:
    """Parse the export format and rebuild the network it describes.

    The incidence pattern is recovered from the source-to-bottleneck edges;
    the network is rebuilt from it and must reproduce the listed node and
    edge sets exactly, which rejects files that do not describe a genuine
    construction output.
    """
    rows = cols = alpha = None
    listed_nodes: list[tuple[str, str]] = []
    listed_edges: list[Edge] = []
    for raw in text.splitlines():
        line = raw.strip()
        if line in ("digraph sum_network {", "}", ""):
            continue
        if line.startswith("graph ["):
            body = line[len("graph [") : line.index("]")]
            attrs = dict(kv.split("=") for kv in body.split())
            rows, cols, alpha = int(attrs["rows"]), int(attrs["cols"]), int(attrs["alpha"])
        elif "->" in line:
            left, right = line.split("->")
            tail = left.strip()
            head, _, attr = right.partition("[")
            body = attr[: attr.index("]")]
            attrs = dict(kv.split("=") for kv in body.split())
            listed_edges.append(
                Edge(tail, head.strip(), int(attrs["mult"]), int(attrs.get("bottleneck", 0)))
            )
        else:
            name, _, attr = line.partition("[")
            body = attr[: attr.index("]")]
            attrs = dict(kv.split("=") for kv in body.split())
            listed_nodes.append((name.strip(), attrs["role"]))
    if rows is None:
        raise ValueError("missing graph attribute line")
    entries = [0] * (rows * cols)
    for e in listed_edges:
        if e.head.startswith("tail_e") and e.tail.startswith("s_B"):
            i = int(e.head[len("tail_e") :])
            j = int(e.tail[len("s_B") :])
            entries[(i - 1) * cols + (j - 1)] = 1
    net = build_sum_network(IntMatrix(rows, cols, tuple(entries)), alpha)
    if list(net.nodes) != listed_nodes or list(net.edges) != listed_edges:
        raise ValueError("file does not describe a constructed sum-network")
    return net
