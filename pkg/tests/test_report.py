"""Capacity tables and the dichotomy they exhibit."""

import json
import math
from fractions import Fraction

import pytest

from sumnet.gf import PrimeField
from sumnet.incidence import all_subsets_design, from_graph, steiner_triple
from sumnet.report import (
    RowSpec,
    capacity_table,
    generate_code,
    higher_family_capacity,
    render_table_jsonl,
    render_table_text,
)

K2 = from_graph(2, [(1, 2)])


def test_capacity_table_matched_rows():
    specs = [
        RowSpec("k2", K2, "graph", "normal", 2),
        RowSpec("k2", K2, "graph", "normal", 3),
        RowSpec("k2", K2, "graph", "transpose", 2),
    ]
    rows = capacity_table(specs)
    assert [r.matched for r in rows] == [True, True, True]
    assert rows[0].bound == Fraction(2, 3) and rows[0].rate_label == "2/3"
    assert rows[2].bound == 1 and rows[2].rate_via == "scalar"


def test_capacity_table_bound_only_row():
    base = all_subsets_design(4, 3)
    rows = capacity_table([RowSpec("2-(4,3,2)", base, "tdesign", "normal", 2)])
    (row,) = rows
    assert row.bound == Fraction(1, 2)
    assert row.rate is None and not row.matched
    assert row.note.startswith("bound only")


def test_matched_iff_rate_equals_bound():
    specs = [
        RowSpec("sts-7", steiner_triple(7), "bibd", "normal", p) for p in (2, 3)
    ]
    for row in capacity_table(specs):
        if row.rate is not None:
            assert row.matched == (row.rate == row.bound)


def test_steiner_dichotomy_and_monotone_gap():
    vs = (7, 9, 13, 15)
    specs = []
    for v in vs:
        struct = steiner_triple(v)
        specs.append(RowSpec(f"sts-{v}", struct, "bibd", "normal", 2))
        specs.append(RowSpec(f"sts-{v}", struct, "bibd", "normal", 3))
    rows = capacity_table(specs)
    gaps = []
    for v, (even_row, odd_row) in zip(vs, zip(rows[::2], rows[1::2])):
        assert even_row.matched and even_row.rate == 1
        assert odd_row.matched and odd_row.rate == Fraction(6, 5 + v)
        gaps.append(1 - Fraction(6, 5 + v))
    assert gaps == sorted(gaps)
    assert len(set(gaps)) == len(gaps)  # strictly increasing


def test_generate_code_dispatch():
    code, via = generate_code(K2, "graph", "normal", PrimeField(5))
    assert via == "transfer" and code.rate == Fraction(2, 3)
    code, via = generate_code(K2, "graph", "transpose", PrimeField(5))
    assert via == "scalar" and code.rate == 1
    fig4a = from_graph(4, [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)])
    code, via = generate_code(fig4a, "graph", "transpose", PrimeField(2))
    assert via == "graph-transpose" and code.rate == Fraction(2, 3)


def test_render_text_and_jsonl():
    rows = capacity_table([RowSpec("k2", K2, "graph", "normal", 2)])
    text = render_table_text(rows)
    assert text.splitlines()[0].startswith("structure")
    assert "2/3" in text
    record = json.loads(render_table_jsonl(rows).strip())
    assert record == {
        "structure": "k2",
        "kind": "normal",
        "char": 2,
        "bound": "2/3",
        "bound_via": "rank",
        "rate": "2/3",
        "rate_via": "transfer",
        "matched": True,
        "note": "",
    }


def test_higher_family_capacity_formula():
    lam, cap = higher_family_capacity(2)
    assert lam == math.factorial(3) ** 5 == 7776
    # oracle: block count of the qualifying design on any admissible v
    for t, v in ((2, 8), (3, 10)):
        lam, cap = higher_family_capacity(t)
        points = math.comb(v, t)
        blocks = lam * points // (t + 1)
        assert cap == Fraction(points, points + blocks)
    with pytest.raises(ValueError):
        higher_family_capacity(1)
