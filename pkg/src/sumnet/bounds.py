"""Exact upper bounds on the computation capacity of a sum-network.

All bounds are driven by the rank over GF(p) of the square block matrix

    [ I_r  A               ]
    [ A^T  supp(A^T A)     ]

where supp(.) replaces every positive integer entry with 1.  The plain
rank bound is r / rank; the subset bound minimizes |S|/x_S over row
subsets S, where x_S is the rank of the rows indexed by S together with
the rows of every column whose support lies inside S.  The family bounds
are the closed forms these reduce to for graphs, 2-(v,k,1) designs,
general t-designs and subset-vs-block structures.

Row subsets and witness indices are reported 1-based; a column witness is
reported by its row index r+j inside the block matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from .gf import IntMatrix, PrimeField, _rank_rows_mod_p
from .incidence import IncidenceStructure, validate_design

FAMILY_KINDS = (
    "graph-normal",
    "graph-transpose",
    "bibd-normal",
    "bibd-transpose",
    "tdesign-transpose",
    "higher-normal",
    "higher-transpose",
)


@dataclass(frozen=True)
class BoundResult:
    """An upper bound plus the witness that certifies it."""

    bound: Fraction
    char: int
    via: str  # "rank", "subset", "subset-limited", or "family:<kind>"
    rank_defect: Optional[int] = None  # rank bound: rank - r
    subset: Optional[tuple[int, ...]] = None  # subset bound: minimizing S (1-based)
    closure: Optional[tuple[int, ...]] = None  # its dependent-column rows (1-based, offset r)
    x_s: Optional[int] = None
    applicable: bool = True  # family bounds: divisibility condition held
    note: str = ""

    def __str__(self) -> str:
        parts = [f"{self.via} {self.bound}"]
        if self.subset is not None:
            parts.append(f"(S={{{','.join(map(str, self.subset))}}})")
        if self.note:
            parts.append(f"[{self.note}]")
        return " ".join(parts)


def support_product(n1: IntMatrix, n2: IntMatrix) -> IntMatrix:
    """Entrywise indicator that the integer product n1 @ n2 is positive."""
    if not (n1.is_zero_one() and n2.is_zero_one()):
        raise ValueError("support product expects (0,1)-matrices")
    prod = n1.mul(n2)
    return IntMatrix(prod.rows, prod.cols, tuple(1 if x > 0 else 0 for x in prod.entries))


def bound_matrix(a: IntMatrix) -> IntMatrix:
    """The (r+c) x (r+c) block matrix [[I, A], [A^T, supp(A^T A)]]."""
    r, c = a.rows, a.cols
    at = a.transpose()
    supp = support_product(at, a)
    rows = []
    for i in range(r):
        rows.append([1 if j == i else 0 for j in range(r)] + list(a.row(i)))
    for j in range(c):
        rows.append(list(at.row(j)) + list(supp.row(j)))
    return IntMatrix.from_rows(rows)


def rank_bound(a: IntMatrix, field: PrimeField) -> BoundResult:
    """Upper bound r / rank(bound matrix) over GF(p); always at most 1."""
    r = a.rows
    m = bound_matrix(a)
    rank = _rank_rows_mod_p(m.to_lists(), field.p)
    assert rank >= r  # the identity block keeps the first r rows independent
    return BoundResult(
        bound=Fraction(r, rank), char=field.p, via="rank", rank_defect=rank - r
    )


def closure_columns(a: IntMatrix, subset: Iterable[int]) -> frozenset[int]:
    """Columns of A whose support lies inside the given row subset.

    ``subset`` holds 1-based row indices.  The result is reported as the
    corresponding bound-matrix row indices r+j (1-based), matching how the
    subset-bound witness is quoted.
    """
    rows = set(subset)
    if not rows <= set(range(1, a.rows + 1)):
        raise ValueError("subset must contain row indices in 1..r")
    out = []
    for j in range(a.cols):
        support = {i + 1 for i in range(a.rows) if a.at(i, j)}
        if support <= rows:
            out.append(a.rows + j + 1)
    return frozenset(out)


class SubsetSearchRefused(ValueError):
    """Raised when the exact subset enumeration would be too large."""


def _subset_value(m_rows: list[list[int]], a: IntMatrix, subset: tuple[int, ...], p: int):
    r = a.rows
    closure = sorted(closure_columns(a, subset))
    picked = [m_rows[i - 1] for i in subset] + [m_rows[i - 1] for i in closure]
    x_s = _rank_rows_mod_p(picked, p)
    return Fraction(len(subset), x_s), closure, x_s


def subset_bound(a: IntMatrix, field: PrimeField, exhaustive_limit: int = 20) -> BoundResult:
    """Exact minimum of |S|/x_S over all nonempty row subsets S.

    Ties are broken toward smaller |S|, then lexicographically smaller S,
    so the witness is deterministic.  Refuses to enumerate when r exceeds
    ``exhaustive_limit`` (2^r subsets); the rank bound is the S = all-rows
    term and remains available in that case.
    """
    r = a.rows
    if r > exhaustive_limit:
        raise SubsetSearchRefused(
            f"exact mode refused: r={r} exceeds the enumeration limit "
            f"{exhaustive_limit}"
        )
    m_rows = bound_matrix(a).to_lists()
    best: Optional[BoundResult] = None
    for size in range(1, r + 1):
        for subset in combinations(range(1, r + 1), size):
            value, closure, x_s = _subset_value(m_rows, a, subset, field.p)
            if best is None or value < best.bound:
                best = BoundResult(
                    bound=value,
                    char=field.p,
                    via="subset",
                    subset=subset,
                    closure=tuple(closure),
                    x_s=x_s,
                )
    assert best is not None
    return best


def subset_bound_limited(a: IntMatrix, field: PrimeField, max_size: int) -> BoundResult:
    """Minimum of |S|/x_S over subsets with |S| <= max_size only.

    This is an upper bound on the exact subset bound (every term is a
    valid capacity bound), labelled as a bounded search rather than the
    exact minimum.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    m_rows = bound_matrix(a).to_lists()
    best = None
    for size in range(1, min(max_size, a.rows) + 1):
        for subset in combinations(range(1, a.rows + 1), size):
            value, closure, x_s = _subset_value(m_rows, a, subset, field.p)
            if best is None or value < best.bound:
                best = BoundResult(
                    bound=value,
                    char=field.p,
                    via="subset-limited",
                    subset=subset,
                    closure=tuple(closure),
                    x_s=x_s,
                    note=f"search limited to |S|<={max_size}",
                )
    assert best is not None
    return best


def _inapplicable(kind: str, char: int, why: str) -> BoundResult:
    return BoundResult(
        bound=Fraction(1),
        char=char,
        via=f"family:{kind}",
        applicable=False,
        note=f"closed form inapplicable: {why}",
    )


def _graph_degrees(struct: IncidenceStructure) -> list[int]:
    if any(len(b) != 2 for b in struct.blocks):
        raise ValueError("not a graph: blocks must all have size 2")
    degs = [struct.point_degree(p) for p in range(1, struct.num_points + 1)]
    if any(d == 0 for d in degs):
        raise ValueError("graph has an isolated vertex")
    return degs


def graph_transpose_sets(
    struct: IncidenceStructure, field: PrimeField
) -> tuple[list[int], list[int]]:
    """The vertex set P' with degree-1 not divisible by ch, and B' = edges meeting it."""
    degs = _graph_degrees(struct)
    p_prime = [p for p in range(1, struct.num_points + 1) if (degs[p - 1] - 1) % field.p != 0]
    b_prime = sorted(
        {j + 1 for j, b in enumerate(struct.blocks) if any(p in b for p in p_prime)}
    )
    return p_prime, b_prime


def family_bound(struct: IncidenceStructure, kind: str, field: PrimeField) -> BoundResult:
    """Closed-form bound for a qualifying structure family.

    Returns the closed form when the family's divisibility condition holds
    over GF(p); otherwise a bound of 1 flagged inapplicable.  A structure
    that does not match the requested kind at all is rejected.
    """
    if kind not in FAMILY_KINDS:
        raise ValueError(f"unknown family kind {kind!r}")
    p = field.p
    v, b = struct.num_points, struct.num_blocks

    if kind == "graph-normal":
        _graph_degrees(struct)
        # supp(A^T A) - A^T A = -I for every simple graph: always applicable.
        return BoundResult(Fraction(v, v + b), p, f"family:{kind}")

    if kind == "graph-transpose":
        p_prime, b_prime = graph_transpose_sets(struct, field)
        if not p_prime:
            return _inapplicable(kind, p, "every vertex degree = 1 (mod ch)")
        return BoundResult(
            Fraction(len(b_prime), len(b_prime) + len(p_prime)),
            p,
            f"family:{kind}",
            note=f"P'={{{','.join(map(str, p_prime))}}}",
        )

    if kind in ("bibd-normal", "bibd-transpose"):
        params = validate_design(struct, 2)
        if params is None or params.lam != 1:
            raise ValueError("not a 2-(v,k,1) design")
        k = params.k
        if kind == "bibd-normal":
            if (k - 1) % p == 0:
                return _inapplicable(kind, p, f"ch divides k-1 = {k - 1}")
            return BoundResult(Fraction(v, v + b), p, f"family:{kind}")
        ratio = (v - k) // (k - 1)  # = rho - 1, always integral here
        if ratio % p == 0:
            return _inapplicable(kind, p, f"ch divides (v-k)/(k-1) = {ratio}")
        return BoundResult(Fraction(b, v + b), p, f"family:{kind}")

    if kind == "tdesign-transpose":
        params = validate_design(struct, 2)
        if params is None:
            raise ValueError("not a t-design with t >= 2")
        rho, b2 = params.rho, params.lam
        crit = ((rho - b2 + v * (b2 - 1)) % p) * pow((rho - b2) % p, v - 1, p) % p
        if crit == 0:
            return _inapplicable(
                kind, p, "ch divides [rho-b2+v(b2-1)](rho-b2)^(v-1)"
            )
        return BoundResult(Fraction(b, v + b), p, f"family:{kind}")

    # Subset-vs-block structures: row sums lam, column sums t+1, and the
    # closed forms require the two overlap identities to hold exactly.
    a = struct.matrix
    col_sums = {sum(a.col(j)) for j in range(a.cols)}
    row_sums = {sum(a.row(i)) for i in range(a.rows)}
    if len(col_sums) != 1 or len(row_sums) != 1:
        raise ValueError("not a higher incidence structure: sums not uniform")
    t = col_sums.pop() - 1
    lam = row_sums.pop()
    if t < 1 or lam < 2:
        raise ValueError("not a higher incidence structure")
    at = a.transpose()
    if kind == "higher-normal":
        gram = at.mul(a)
        expected = t
    else:
        gram = a.mul(at)
        expected = lam - 1
    supp = IntMatrix(
        gram.rows, gram.cols, tuple(1 if x > 0 else 0 for x in gram.entries)
    )
    for i in range(gram.rows):
        for j in range(gram.cols):
            want = expected + supp.at(i, j) if i == j else supp.at(i, j)
            if gram.at(i, j) != want:
                raise ValueError("overlap pattern does not match a higher incidence structure")
    if kind == "higher-normal":
        if t % p == 0:
            return _inapplicable(kind, p, f"ch divides t = {t}")
        return BoundResult(Fraction(v, v + b), p, f"family:{kind}")
    if (lam - 1) % p == 0:
        return _inapplicable(kind, p, f"ch divides lam-1 = {lam - 1}")
    return BoundResult(Fraction(b, v + b), p, f"family:{kind}")
