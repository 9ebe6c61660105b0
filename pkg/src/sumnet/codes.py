"""Linear network codes for constructed sum-networks.

Three constructions are implemented, each returning explicit encoder and
decoder matrices over GF(p):

* ``build_transfer_code`` -- the (r, r+c) vector code.  Each bottleneck
  carries the partial sum of its incident messages in its first r symbols
  and ferries uncoded pieces of the column messages in the remaining c,
  allocated by a nonnegative integral *transfer matrix* supported on A
  with row sums c and column sums r.  Applies when A^T A minus its
  support indicator is diagonal mod p with no zero diagonal entry.
* ``build_scalar_code`` -- the (1, 1) code, applicable when A^T A is
  congruent to its support indicator mod p.
* ``build_graph_transpose_code`` -- the (b', b'+v') code for the
  transposed network of an irregular graph, where P' collects vertices
  with degree not congruent to 1 and B' the edges meeting them.

``lift_code`` spreads a base code over alpha parallel edges per link,
multiplying the rate by alpha.

Transfer matrices come from an integral max-flow; ``transfer_feasible_bruteforce``
re-derives feasibility from the margin inequalities by direct enumeration
and exists purely as an independent cross-check.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .gf import IntMatrix, PrimeField
from .incidence import IncidenceStructure
from .network import col_terminal_inputs, col_source, row_source, row_terminal_inputs

__all__ = [
    "NetworkCode",
    "Decoder",
    "NoApplicableCode",
    "OverlapResidue",
    "overlap_residue",
    "find_transfer_matrix",
    "find_margin_matrix",
    "check_transfer_matrix",
    "transfer_feasible_bruteforce",
    "build_transfer_code",
    "build_scalar_code",
    "build_graph_transpose_code",
    "lift_code",
    "export_code",
    "import_code",
    "codes_equal",
]


class NoApplicableCode(Exception):
    """No construction in this package applies; the message names the failed condition."""


@dataclass(frozen=True, eq=False)
class Decoder:
    """A terminal's decoding map.

    ``inputs`` lists the incoming bundles in the network's fixed order:
    ``e<i>`` for bottlenecks, else the direct edge's source node.  The
    matrix has shape (m, alpha*n*len(inputs)) and acts on the
    concatenated bundle values.
    """

    inputs: tuple[str, ...]
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class NetworkCode:
    """An (m, n) linear code over GF(p) for the network of an r x c matrix.

    Encoders map the stacked message vector (row messages then column
    messages, m symbols each) to the alpha*n symbols of a bottleneck
    bundle; parallel edge l of a bundle carries rows [l*n, (l+1)*n).  A
    direct-edge bundle carries message slice [l*m/alpha, (l+1)*m/alpha)
    of its source in the leading slots of parallel edge l.
    """

    m: int
    n: int
    p: int
    alpha: int
    rows: int
    cols: int
    encoders: tuple[np.ndarray, ...]  # one (alpha*n, m*(rows+cols)) array per bottleneck
    decoders: dict[str, Decoder] = field(repr=False)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.m, self.n)

    def rate_label(self) -> str:
        return f"{self.m}/{self.n}"


def codes_equal(a: NetworkCode, b: NetworkCode) -> bool:
    if (a.m, a.n, a.p, a.alpha, a.rows, a.cols) != (b.m, b.n, b.p, b.alpha, b.rows, b.cols):
        return False
    if len(a.encoders) != len(b.encoders):
        return False
    if any(not np.array_equal(x, y) for x, y in zip(a.encoders, b.encoders)):
        return False
    if set(a.decoders) != set(b.decoders):
        return False
    for t, da in a.decoders.items():
        db = b.decoders[t]
        if da.inputs != db.inputs or not np.array_equal(da.matrix, db.matrix):
            return False
    return True


# ---------------------------------------------------------------------------
# overlap residue (encoder coefficient condition)


@dataclass(frozen=True)
class OverlapResidue:
    """A^T A minus its support indicator, reduced mod p.

    ``is_diagonal`` reports whether all off-diagonal residues vanish;
    ``diagonal`` holds the diagonal residues.  The transfer code needs a
    diagonal residue with every diagonal entry nonzero; the scalar code
    needs the residue to vanish entirely.
    """

    char: int
    is_diagonal: bool
    diagonal: tuple[int, ...]

    def all_nonzero(self) -> bool:
        return self.is_diagonal and all(x != 0 for x in self.diagonal)

    def is_zero(self) -> bool:
        return self.is_diagonal and all(x == 0 for x in self.diagonal)


def overlap_residue(a: IntMatrix, field: PrimeField) -> OverlapResidue:
    at = a.transpose()
    gram = at.mul(a)
    p = field.p
    diag = []
    off_ok = True
    for i in range(gram.rows):
        for j in range(gram.cols):
            x = gram.at(i, j)
            res = (x - (1 if x > 0 else 0)) % p
            if i == j:
                diag.append(res)
            elif res != 0:
                off_ok = False
    return OverlapResidue(p, off_ok, tuple(diag))


# ---------------------------------------------------------------------------
# transfer matrices


def find_margin_matrix(
    support: IntMatrix, row_total: int, col_total: int
) -> Optional[IntMatrix]:
    """Nonnegative integral matrix on the given support with prescribed margins.

    Every row must sum to ``row_total`` and every column to ``col_total``
    (so ``rows*row_total == cols*col_total`` is required).  Solved as an
    integral max-flow on the bipartite row/column graph, augmenting along
    BFS-shortest paths with rows and columns scanned in ascending order,
    so the result is deterministic.  Returns None when no such matrix
    exists.
    """
    r, c = support.rows, support.cols
    if r * row_total != c * col_total:
        return None
    # Nodes: 0 = source, 1..r rows, r+1..r+c columns, r+c+1 = sink.
    nv = r + c + 2
    src, snk = 0, r + c + 1
    adj: list[list[int]] = [[] for _ in range(nv)]
    to: list[int] = []
    cap: list[int] = []

    def add(u: int, v: int, c_: int) -> None:
        adj[u].append(len(to))
        to.append(v)
        cap.append(c_)
        adj[v].append(len(to))
        to.append(u)
        cap.append(0)

    inf = r * row_total + 1
    for i in range(r):
        add(src, 1 + i, row_total)
    arc_of: dict[tuple[int, int], int] = {}
    for i in range(r):
        for j in range(c):
            if support.at(i, j):
                arc_of[(i, j)] = len(to)
                add(1 + i, r + 1 + j, inf)
    for j in range(c):
        add(r + 1 + j, snk, col_total)

    flow = 0
    while True:
        parent = [-1] * nv
        parent[src] = -2
        queue = deque([src])
        while queue and parent[snk] == -1:
            u = queue.popleft()
            for ei in adj[u]:
                v = to[ei]
                if parent[v] == -1 and cap[ei] > 0:
                    parent[v] = ei
                    queue.append(v)
        if parent[snk] == -1:
            break
        push = None
        v = snk
        while v != src:
            ei = parent[v]
            push = cap[ei] if push is None else min(push, cap[ei])
            v = to[ei ^ 1]
        v = snk
        while v != src:
            ei = parent[v]
            cap[ei] -= push
            cap[ei ^ 1] += push
            v = to[ei ^ 1]
        flow += push
    if flow != r * row_total:
        return None
    entries = []
    for i in range(r):
        for j in range(c):
            ei = arc_of.get((i, j))
            entries.append(0 if ei is None else inf - cap[ei])
    return IntMatrix(r, c, tuple(entries))


def find_transfer_matrix(a: IntMatrix) -> Optional[IntMatrix]:
    """Transfer matrix for A: support inside A, row sums c, column sums r."""
    if not a.is_zero_one():
        raise ValueError("expected a (0,1)-matrix")
    return find_margin_matrix(a, a.cols, a.rows)


def check_transfer_matrix(
    d: IntMatrix, a: IntMatrix, row_total: Optional[int] = None, col_total: Optional[int] = None
) -> None:
    """Validate a transfer matrix against its support and margins; raise on failure."""
    if (d.rows, d.cols) != (a.rows, a.cols):
        raise ValueError("shape mismatch")
    row_total = a.cols if row_total is None else row_total
    col_total = a.rows if col_total is None else col_total
    for i in range(d.rows):
        for j in range(d.cols):
            x = d.at(i, j)
            if x < 0:
                raise ValueError(f"negative entry at ({i + 1},{j + 1})")
            if x and not a.at(i, j):
                raise ValueError(f"entry at ({i + 1},{j + 1}) outside the support")
    for i in range(d.rows):
        if sum(d.row(i)) != row_total:
            raise ValueError(f"row {i + 1} sums to {sum(d.row(i))}, want {row_total}")
    for j in range(d.cols):
        if sum(d.col(j)) != col_total:
            raise ValueError(f"column {j + 1} sums to {sum(d.col(j))}, want {col_total}")


def transfer_feasible_bruteforce(a: IntMatrix) -> bool:
    """Feasibility of the transfer matrix via the margin inequalities.

    With unlimited capacity on the support and zero off it, the inequality
    for a row set I and column set J is binding only when no support cell
    lies in I x J, where it reads (r-|I|)*c >= |J|*r.  For fixed I the
    largest such J is every column missing the support of I, and the
    right side grows with |J|, so checking that single J per I checks
    them all.  Enumeration oracle only; refuses beyond r+c = 24.
    """
    r, c = a.rows, a.cols
    if r + c > 24:
        raise ValueError(f"refusing enumeration: r+c = {r + c} exceeds 24")
    row_masks = []
    for i in range(r):
        mask = 0
        for j in range(c):
            if a.at(i, j):
                mask |= 1 << j
        row_masks.append(mask)
    for imask in range(1 << r):
        touched = 0
        size_i = 0
        for i in range(r):
            if imask >> i & 1:
                touched |= row_masks[i]
                size_i += 1
        free_cols = c - bin(touched).count("1")
        if (r - size_i) * c < free_cols * r:
            return False
    return True


# ---------------------------------------------------------------------------
# shared encoder/decoder assembly helpers


def _msg_offset(rows: int, m: int, label: str) -> int:
    """Column offset of a source's message block inside the stacked vector."""
    if label.startswith("s_p"):
        return (int(label[3:]) - 1) * m
    if label.startswith("s_B"):
        return (rows + int(label[3:]) - 1) * m
    raise ValueError(f"not a source label: {label}")


def _piece_layout(
    d: IntMatrix, row_ids: Sequence[int], col_ids: Sequence[int], base: int
):
    """Coordinate ranges of ferried pieces.

    For each column (in ``col_ids`` order) the message coordinates are
    split among its incident rows in ascending order; inside each row the
    pieces sit after the partial-sum block (offset ``base``) in ascending
    column order.  Returns ``(piece, slot)`` where ``piece[(i, j)]`` is
    the (start, length) range of the column-j message carried by row i
    and ``slot[(i, j)]`` the bundle component where it starts.
    """
    piece: dict[tuple[int, int], tuple[int, int]] = {}
    for cj, j in enumerate(col_ids):
        start = 0
        for ri, i in enumerate(row_ids):
            length = d.at(ri, cj)
            if length:
                piece[(i, j)] = (start, length)
                start += length
    slot: dict[tuple[int, int], int] = {}
    for ri, i in enumerate(row_ids):
        offset = base
        for cj, j in enumerate(col_ids):
            if (i, j) in piece:
                slot[(i, j)] = offset
                offset += piece[(i, j)][1]
    return piece, slot


def _partial_sum_rows(
    enc: np.ndarray, rows: int, m: int, self_label: str, incident: Sequence[str]
) -> None:
    """Write the partial-sum block (identity on each incident message)."""
    for label in (self_label, *incident):
        off = _msg_offset(rows, m, label)
        for k in range(m):
            enc[k, off + k] = 1


def _decoder_add_block(mat: np.ndarray, pos: int, width: int, col: int, m: int, coeff: int, p: int):
    for k in range(m):
        mat[k, pos * width + col + k] = (mat[k, pos * width + col + k] + coeff) % p


# ---------------------------------------------------------------------------
# the three constructions


def build_transfer_code(a: IntMatrix, field: PrimeField) -> NetworkCode:
    """The (r, r+c) partial-sum + piecewise-transfer code.

    Raises ``NoApplicableCode`` naming the failed condition: either the
    overlap residue is not diagonal with nonzero diagonal mod p, or no
    transfer matrix exists on the support of A.
    """
    r, c = a.rows, a.cols
    p = field.p
    residue = overlap_residue(a, field)
    if not residue.is_diagonal:
        raise NoApplicableCode(
            "encoder coefficient condition failed: overlap residue has a "
            f"nonzero off-diagonal entry mod {p}"
        )
    if not residue.all_nonzero():
        zeros = [j + 1 for j, x in enumerate(residue.diagonal) if x == 0]
        raise NoApplicableCode(
            "encoder coefficient condition failed: zero diagonal residue mod "
            f"{p} at column(s) {zeros}"
        )
    d = find_transfer_matrix(a)
    if d is None:
        raise NoApplicableCode(
            "no nonnegative integral transfer matrix with row sums "
            f"{c} and column sums {r} exists on the support of A"
        )
    check_transfer_matrix(d, a)
    m, n = r, r + c
    width = m * (r + c)
    piece, slot = _piece_layout(d, range(1, r + 1), range(1, c + 1), base=r)

    encoders = []
    for i in range(1, r + 1):
        enc = np.zeros((n, width), dtype=np.int64)
        incident = [col_source(j) for j in range(1, c + 1) if a.at(i - 1, j - 1)]
        _partial_sum_rows(enc, r, m, row_source(i), incident)
        used = 0
        for j in range(1, c + 1):
            if (i, j) in piece:
                start, length = piece[(i, j)]
                base = slot[(i, j)]
                off = _msg_offset(r, m, col_source(j))
                for k in range(length):
                    enc[base + k, off + start + k] = 1
                used += length
        assert used == c  # transfer row sums fill the extra components exactly
        encoders.append(enc)

    decoders: dict[str, Decoder] = {}
    for i in range(1, r + 1):
        inputs = row_terminal_inputs(a, i)
        mat = np.zeros((m, n * len(inputs)), dtype=np.int64)
        _decoder_add_block(mat, 0, n, 0, m, 1, p)  # partial sum off its bottleneck
        for pos in range(1, len(inputs)):
            _decoder_add_block(mat, pos, n, 0, m, 1, p)  # direct messages
        decoders[f"t_p{i}"] = Decoder(tuple(inputs), mat)
    for j in range(1, c + 1):
        inputs = col_terminal_inputs(a, j)
        mat = np.zeros((m, n * len(inputs)), dtype=np.int64)
        mu = residue.diagonal[j - 1]
        covered = 0
        for pos, label in enumerate(inputs):
            if label.startswith("e"):
                i = int(label[1:])
                _decoder_add_block(mat, pos, n, 0, m, 1, p)  # partial sums
                if (i, j) in piece:
                    start, length = piece[(i, j)]
                    base = slot[(i, j)]
                    for k in range(length):
                        mat[start + k, pos * n + base + k] = (-mu) % p
                    covered += length
            else:
                _decoder_add_block(mat, pos, n, 0, m, 1, p)
        assert covered == m  # the pieces of the column message partition [m]
        decoders[f"t_B{j}"] = Decoder(tuple(inputs), mat)

    return NetworkCode(m, n, p, 1, r, c, tuple(encoders), decoders)


def build_scalar_code(a: IntMatrix, field: PrimeField) -> NetworkCode:
    """The rate-1 scalar code, applicable when the overlap residue vanishes."""
    residue = overlap_residue(a, field)
    if not residue.is_zero():
        raise NoApplicableCode(
            "scalar code condition failed: A^T A is not congruent to its "
            f"support indicator mod {field.p}"
        )
    r, c = a.rows, a.cols
    p = field.p
    m = n = 1
    width = r + c
    encoders = []
    for i in range(1, r + 1):
        enc = np.zeros((1, width), dtype=np.int64)
        incident = [col_source(j) for j in range(1, c + 1) if a.at(i - 1, j - 1)]
        _partial_sum_rows(enc, r, 1, row_source(i), incident)
        encoders.append(enc)
    decoders: dict[str, Decoder] = {}
    for i in range(1, r + 1):
        inputs = row_terminal_inputs(a, i)
        mat = np.ones((1, len(inputs)), dtype=np.int64)
        decoders[f"t_p{i}"] = Decoder(tuple(inputs), mat)
    for j in range(1, c + 1):
        inputs = col_terminal_inputs(a, j)
        mat = np.ones((1, len(inputs)), dtype=np.int64)
        decoders[f"t_B{j}"] = Decoder(tuple(inputs), mat)
    return NetworkCode(m, n, p, 1, r, c, tuple(encoders), decoders)


def build_graph_transpose_code(
    graph: IncidenceStructure, field: PrimeField
) -> NetworkCode:
    """The (b', b'+v') code for the transposed network of a graph.

    Bottlenecks correspond to edges of the graph; every bottleneck carries
    the partial sum of its edge message and endpoint messages, and the
    bottlenecks of B' additionally ferry the messages of the P' vertices
    in pieces allocated by a margin matrix on the B' x P' submatrix.
    """
    from .bounds import graph_transpose_sets  # local import avoids a cycle

    p = field.p
    p_prime, b_prime = graph_transpose_sets(graph, field)
    if not p_prime:
        raise NoApplicableCode(
            f"every vertex degree is 1 mod {p}: the scalar code applies instead"
        )
    a = graph.matrix.transpose()  # rows = edges (blocks), cols = vertices
    r, c = a.rows, a.cols
    degs = [graph.point_degree(v) for v in range(1, graph.num_points + 1)]
    vprime, bprime = len(p_prime), len(b_prime)
    sub = a.submatrix([i - 1 for i in b_prime], [j - 1 for j in p_prime])
    d = find_margin_matrix(sub, vprime, bprime)
    if d is None:
        raise NoApplicableCode(
            f"no margin matrix with row sums {vprime} and column sums {bprime} "
            "exists on the B' x P' submatrix"
        )
    check_transfer_matrix(d, sub, row_total=vprime, col_total=bprime)
    m, n = bprime, bprime + vprime
    width = m * (r + c)
    piece, slot = _piece_layout(d, b_prime, p_prime, base=m)

    encoders = []
    for i in range(1, r + 1):
        enc = np.zeros((n, width), dtype=np.int64)
        incident = [col_source(j) for j in range(1, c + 1) if a.at(i - 1, j - 1)]
        _partial_sum_rows(enc, r, m, row_source(i), incident)
        for j in p_prime:
            if (i, j) in piece:
                start, length = piece[(i, j)]
                base = slot[(i, j)]
                off = _msg_offset(r, m, col_source(j))
                for k in range(length):
                    enc[base + k, off + start + k] = 1
        encoders.append(enc)

    decoders: dict[str, Decoder] = {}
    for i in range(1, r + 1):
        inputs = row_terminal_inputs(a, i)
        mat = np.zeros((m, n * len(inputs)), dtype=np.int64)
        for pos in range(len(inputs)):
            _decoder_add_block(mat, pos, n, 0, m, 1, p)
        decoders[f"t_p{i}"] = Decoder(tuple(inputs), mat)
    for j in range(1, c + 1):
        inputs = col_terminal_inputs(a, j)
        mat = np.zeros((m, n * len(inputs)), dtype=np.int64)
        correction = (1 - degs[j - 1]) % p  # cancels the extra (deg-1) copies
        covered = 0
        for pos, label in enumerate(inputs):
            _decoder_add_block(mat, pos, n, 0, m, 1, p)
            if label.startswith("e") and j in p_prime:
                i = int(label[1:])
                if (i, j) in piece:
                    start, length = piece[(i, j)]
                    base = slot[(i, j)]
                    for k in range(length):
                        mat[start + k, pos * n + base + k] = correction
                    covered += length
        if j in p_prime:
            assert covered == m
        else:
            assert degs[j - 1] % p == 1 % p  # partial sums already aligned
        decoders[f"t_B{j}"] = Decoder(tuple(inputs), mat)

    return NetworkCode(m, n, p, 1, r, c, tuple(encoders), decoders)


# ---------------------------------------------------------------------------
# alpha lift


def _interleave(mat: np.ndarray, row_unit: int, col_unit: int, alpha: int) -> np.ndarray:
    """Block-diagonal lift: copy l acts on round l of every block."""
    nr, nc = mat.shape
    rblocks, cblocks = nr // row_unit, nc // col_unit
    out = np.zeros((nr * alpha, nc * alpha), dtype=np.int64)
    for ell in range(alpha):
        for rb in range(rblocks):
            src_r = rb * row_unit
            dst_r = rb * row_unit * alpha + ell * row_unit
            for cb in range(cblocks):
                src_c = cb * col_unit
                dst_c = cb * col_unit * alpha + ell * col_unit
                out[dst_r : dst_r + row_unit, dst_c : dst_c + col_unit] = mat[
                    src_r : src_r + row_unit, src_c : src_c + col_unit
                ]
    return out


def lift_code(code: NetworkCode, alpha: int) -> NetworkCode:
    """Spread a base code over alpha parallel edges per link.

    The lifted code is (alpha*m, n): alpha independent rounds of the base
    code run side by side, with round l of every bundle riding parallel
    edge l.  For alpha = 1 this is the identity.
    """
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    if code.alpha != 1:
        raise ValueError("lift expects a base code built for alpha = 1")
    if alpha == 1:
        return code
    encoders = tuple(
        _interleave(enc, code.n, code.m, alpha) for enc in code.encoders
    )
    decoders = {
        t: Decoder(d.inputs, _interleave(d.matrix, code.m, code.n, alpha))
        for t, d in code.decoders.items()
    }
    return NetworkCode(
        code.m * alpha, code.n, code.p, alpha, code.rows, code.cols, encoders, decoders
    )


# ---------------------------------------------------------------------------
# code file format


def export_code(code: NetworkCode) -> str:
    lines = [
        "sumnet-code v1",
        f"m {code.m}",
        f"n {code.n}",
        f"p {code.p}",
        f"alpha {code.alpha}",
        f"rows {code.rows}",
        f"cols {code.cols}",
    ]
    for i, enc in enumerate(code.encoders, start=1):
        lines.append(f"encoder e{i}")
        for row in enc:
            lines.append(" ".join(str(int(x)) for x in row))
    for t in sorted(code.decoders):
        dec = code.decoders[t]
        lines.append(f"decoder {t}")
        lines.append("inputs " + " ".join(dec.inputs))
        for row in dec.matrix:
            lines.append(" ".join(str(int(x)) for x in row))
    lines.append("end")
    return "\n".join(lines) + "\n"


def import_code(text: str) -> NetworkCode:
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "sumnet-code v1":
        raise ValueError("not a code file")
    if lines[-1] != "end":
        raise ValueError("truncated code file")
    header: dict[str, int] = {}
    pos = 1
    for _ in range(6):
        key, val = lines[pos].split()
        header[key] = int(val)
        pos += 1
    m, n, p, alpha = header["m"], header["n"], header["p"], header["alpha"]
    rows, cols = header["rows"], header["cols"]
    width = m * (rows + cols)
    encoders = []
    for i in range(1, rows + 1):
        if lines[pos] != f"encoder e{i}":
            raise ValueError(f"expected encoder e{i} at line {pos + 1}")
        pos += 1
        mat = []
        for _ in range(alpha * n):
            mat.append([int(x) for x in lines[pos].split()])
            pos += 1
        arr = np.array(mat, dtype=np.int64)
        if arr.shape != (alpha * n, width):
            raise ValueError(f"encoder e{i} has shape {arr.shape}")
        encoders.append(arr)
    decoders: dict[str, Decoder] = {}
    while lines[pos] != "end":
        if not lines[pos].startswith("decoder "):
            raise ValueError(f"unexpected line {lines[pos]!r}")
        terminal = lines[pos].split()[1]
        pos += 1
        if not lines[pos].startswith("inputs "):
            raise ValueError("decoder without inputs line")
        inputs = tuple(lines[pos].split()[1:])
        pos += 1
        mat = []
        for _ in range(m):
            mat.append([int(x) for x in lines[pos].split()])
            pos += 1
        arr = np.array(mat, dtype=np.int64)
        if arr.shape != (m, alpha * n * len(inputs)):
            raise ValueError(f"decoder {terminal} has shape {arr.shape}")
        decoders[terminal] = Decoder(inputs, arr)
    return NetworkCode(m, n, p, alpha, rows, cols, tuple(encoders), decoders)
