"""Exact arithmetic: prime fields and small integer matrices.

Nothing here uses floating point.  Matrices are desk-scale (tens of rows),
so arbitrary-precision Python integers with O(n^3) elimination are plenty.
Rank over GF(p) is the authoritative test everywhere; the exact integer
determinant is exposed for cross-checks only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def is_prime(n: int) -> bool:
    """Trial-division primality test (inputs are machine-word sized)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The prime field GF(p)."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    @classmethod
    def from_order(cls, q: int) -> "PrimeField":
        """Reduce a prime-power order q = p^k to GF(p).

        Every capacity statement computed by this package depends only on
        the characteristic, so an extension field is represented by its
        prime subfield.
        """
        if q < 2:
            raise ValueError(f"field order must be at least 2, got {q}")
        p = None
        d = 2
        while d * d <= q:
            if q % d == 0:
                p = d
                break
            d += 1
        if p is None:
            p = q
        rest = q
        while rest % p == 0:
            rest //= p
        if rest != 1:
            raise ValueError(f"{q} is not a prime power")
        return cls(p)

    def reduce(self, x: int) -> int:
        return x % self.p

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("no inverse of 0")
        return pow(x, -1, self.p)


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major entries."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entry count {len(self.entries)} does not match shape "
                f"{self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(int(x) for x in row)
        return cls(r, c, tuple(flat))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j :: self.cols] if self.cols else ()

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions disagree")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                cj = other.col(j)
                out.append(sum(a * b for a, b in zip(ri, cj)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def submatrix(self, row_idx: Iterable[int], col_idx: Iterable[int]) -> "IntMatrix":
        ri = list(row_idx)
        ci = list(col_idx)
        return IntMatrix(
            len(ri), len(ci), tuple(self.at(i, j) for i in ri for j in ci)
        )

    def is_zero_one(self) -> bool:
        return all(x in (0, 1) for x in self.entries)

    def nonzero_count(self) -> int:
        return sum(1 for x in self.entries if x != 0)

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))


def _rank_rows_mod_p(rows: list[list[int]], p: int) -> int:
    """Rank of a list of rows over GF(p).

    Deterministic Gaussian elimination: pivots are the first nonzero entry
    scanning columns left to right, rows top to bottom.
    """
    work = [[x % p for x in row] for row in rows]
    nrows = len(work)
    ncols = len(work[0]) if nrows else 0
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if work[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = pow(work[rank][col], -1, p)
        prow = [(x * inv) % p for x in work[rank]]
        work[rank] = prow
        for r in range(rank + 1, nrows):
            f = work[r][col]
            if f:
                work[r] = [(a - f * b) % p for a, b in zip(work[r], prow)]
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_mod_p(m: IntMatrix, field: PrimeField) -> int:
    """Rank of m with entries reduced mod the field characteristic."""
    return _rank_rows_mod_p(m.to_lists(), field.p)


def det_exact(m: IntMatrix) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError(f"determinant needs a square matrix, got {m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        return 1
    work = m.to_lists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if work[k][k] == 0:
            pivot = None
            for r in range(k + 1, n):
                if work[r][k] != 0:
                    pivot = r
                    break
            if pivot is None:
                return 0
            work[k], work[pivot] = work[pivot], work[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # Bareiss update: division is exact at every step.
                work[i][j] = (work[i][j] * work[k][k] - work[i][k] * work[k][j]) // prev
            work[i][k] = 0
        prev = work[k][k]
    return sign * work[n - 1][n - 1]
