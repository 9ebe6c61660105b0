"""Exact field and matrix arithmetic."""

import random
from fractions import Fraction

import pytest

from conftest import FANO_MATRIX, FIG3_TRANSPOSE_BOUND_MATRIX, mat, random_01_matrix
from sumnet.bounds import bound_matrix
from sumnet.gf import IntMatrix, PrimeField, det_exact, is_prime, rank_mod_p


def det_oracle(m: IntMatrix) -> int:
    """Independent determinant: plain Gaussian elimination over Fraction."""
    n = m.rows
    work = [[Fraction(x) for x in m.row(i)] for i in range(n)]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        det *= work[col][col]
        inv = 1 / work[col][col]
        for r in range(col + 1, n):
            if work[r][col]:
                f = work[r][col] * inv
                work[r] = [a - f * b for a, b in zip(work[r], work[col])]
    assert det.denominator == 1
    return int(det)


def test_is_prime():
    assert [p for p in range(2, 30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert not is_prime(1)
    assert not is_prime(0)


def test_prime_field_rejects_composites():
    PrimeField(2)
    PrimeField(65537)
    with pytest.raises(ValueError):
        PrimeField(6)
    with pytest.raises(ValueError):
        PrimeField(1)


def test_from_order_reduces_prime_powers():
    assert PrimeField.from_order(9).p == 3
    assert PrimeField.from_order(8).p == 2
    assert PrimeField.from_order(5).p == 5
    with pytest.raises(ValueError):
        PrimeField.from_order(12)
    with pytest.raises(ValueError):
        PrimeField.from_order(1)


def test_field_inverse():
    f = PrimeField(7)
    for x in range(1, 7):
        assert f.reduce(x * f.inv(x)) == 1
    with pytest.raises(ZeroDivisionError):
        f.inv(7)


def test_int_matrix_shape_checks():
    with pytest.raises(ValueError):
        IntMatrix(2, 2, (1, 2, 3))
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])


def test_int_matrix_ops():
    m = mat([[1, 2], [3, 4], [5, 6]])
    assert m.transpose().to_lists() == [[1, 3, 5], [2, 4, 6]]
    assert m.col(1) == (2, 4, 6)
    prod = m.transpose().mul(m)
    assert prod.to_lists() == [[35, 44], [44, 56]]
    assert m.submatrix([0, 2], [1]).to_lists() == [[2], [6]]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_rank_identity(p):
    assert rank_mod_p(IntMatrix.identity(5), PrimeField(p)) == 5


def test_rank_of_printed_transpose_bound_matrix():
    m = mat(FIG3_TRANSPOSE_BOUND_MATRIX)
    assert rank_mod_p(m, PrimeField(3)) == 5


def test_rank_fano_bound_matrix_char2():
    m = bound_matrix(mat(FANO_MATRIX))
    assert rank_mod_p(m, PrimeField(2)) == 7
    assert rank_mod_p(m, PrimeField(3)) == 14


def test_rank_invariant_under_permutation():
    rng = random.Random(7)
    for _ in range(30):
        m = random_01_matrix(rng, 6, 6)
        p = rng.choice([2, 3, 5])
        base = rank_mod_p(m, PrimeField(p))
        rows = m.to_lists()
        rng.shuffle(rows)
        cols = list(range(m.cols))
        rng.shuffle(cols)
        shuffled = [[row[j] for j in cols] for row in rows]
        assert rank_mod_p(mat(shuffled), PrimeField(p)) == base


def test_rank_bounds_and_embedded_identity():
    rng = random.Random(11)
    for _ in range(20):
        m = random_01_matrix(rng, 6, 6)
        p = rng.choice([2, 3, 5])
        assert rank_mod_p(m, PrimeField(p)) <= min(m.rows, m.cols)
    # a matrix carrying I_3 in its leading rows/columns has rank >= 3
    m = mat([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 0]])
    assert rank_mod_p(m, PrimeField(2)) >= 3


def test_det_exact_small_cases():
    assert det_exact(IntMatrix.identity(3)) == 1
    assert det_exact(mat([[1, 1], [1, 0]])) == -1
    with pytest.raises(ValueError):
        det_exact(mat([[1, 2, 3], [4, 5, 6]]))


def test_det_fano_bound_matrix():
    # Frozen via the Fraction-elimination oracle; even, consistent with the
    # GF(2) rank of 7 < 14.
    m = bound_matrix(mat(FANO_MATRIX))
    d = det_exact(m)
    assert d == det_oracle(m) == -128
    assert d % 2 == 0


def test_det_matches_oracle_and_rank_criterion():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 5)
        m = mat([[rng.randint(0, 1) for _ in range(n)] for _ in range(n)])
        d = det_exact(m)
        assert d == det_oracle(m)
        for p in (2, 3, 5):
            full = rank_mod_p(m, PrimeField(p)) == n
            assert full == (d % p != 0)
