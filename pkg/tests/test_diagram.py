import json
from fractions import Fraction
from itertools import product

import pytest

from schurz.diagram import (
    DiagonalTableau,
    GeneralTableau,
    SkewDiagram,
    diagonal_profile,
    eval_ssyt_series,
    load_tableau,
    sequence_to_tableau,
    ssyt_partial_sum,
    tableau_to_sequence,
)
from schurz.errors import NotProperError, ShapeError
from schurz.notation import enumerate_H, format_sequence, parse_sequence


def test_worked_examples(worked):
    for text, t in worked.items():
        assert format_sequence(tableau_to_sequence(t)) == text
        assert sequence_to_tableau(parse_sequence(text)).rows() == t.rows()


def test_roundtrip_all_H():
    for s in enumerate_H(8):
        t = sequence_to_tableau(s)
        assert tableau_to_sequence(t) == s
        assert len(t.shape) == sum(s.column_sizes)
        assert sum(t.exponent(c) for c in t.shape.cells) == s.total_weight


def test_corners_match_admissibility():
    for s in enumerate_H(7):
        assert sequence_to_tableau(s).is_admissible()


def test_shape_validation():
    with pytest.raises(ShapeError):
        SkewDiagram({(1, 1), (1, 3)})  # gap in a row
    with pytest.raises(ShapeError):
        SkewDiagram({(1, 1), (3, 1)})  # missing row
    with pytest.raises(ShapeError):
        SkewDiagram({(1, 1), (2, 2)})  # disconnected
    with pytest.raises(ShapeError):
        SkewDiagram({(1, 1), (2, 1), (2, 2)})  # not skew


def test_not_diagonal_constant():
    t = GeneralTableau.from_cells({(1, 1): 2, (1, 2): 1, (2, 1): 1, (2, 2): 3})
    assert not t.is_diagonal_constant()
    with pytest.raises(ValueError):
        t.to_diagonal()


def test_profile_and_not_proper():
    prof = diagonal_profile(DiagonalTableau.from_rows([[2, 1], [1, 2]]))
    assert [d for d, _, _ in prof] == [1, 0, -1]
    with pytest.raises(NotProperError):
        sequence_to_tableau(parse_sequence("2(1"))


def test_json_roundtrip(tmp_path, worked):
    t = worked["2u4(2)3(2)1"]
    doc = t.to_json()
    path = tmp_path / "t.json"
    path.write_text(json.dumps(doc))
    assert load_tableau(str(path), diagonal=True).rows() == t.rows()
    assert load_tableau(json.dumps(doc)).rows() == t.rows()
    with pytest.raises(ValueError):
        load_tableau({"cells": [{"row": 1}]})


def _brute_ssyt(t: GeneralTableau, N):
    cells = sorted(t.shape.cells)
    total = Fraction(0)
    for vals in product(range(1, N + 1), repeat=len(cells)):
        m = dict(zip(cells, vals))
        if any((i, j + 1) in m and m[(i, j + 1)] < v for (i, j), v in m.items()):
            continue
        if any((i + 1, j) in m and m[(i + 1, j)] <= v for (i, j), v in m.items()):
            continue
        term = Fraction(1)
        for c, v in m.items():
            term /= v ** t.exponents[c]
        total += term
    return total


@pytest.mark.parametrize("rows", [[[2, 1], [1, 2]], [[1, 1, 2]], [[None, 1], [1, 2]], [[None, 2], [3, 1]]])
@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_ssyt_against_brute_force(rows, N):
    t = GeneralTableau.from_cells(
        {(i, j): k for i, row in enumerate(rows, 1) for j, k in enumerate(row, 1) if k is not None}
    )
    assert ssyt_partial_sum(t, N, "rational") == _brute_ssyt(t, N)


def test_square_n2_single_filling():
    t = DiagonalTableau.from_rows([[2, 1], [1, 2]])
    assert eval_ssyt_series(t, 2).value == Fraction(1, 8)


def test_general_tableau_series():
    # non-diagonal-constant shapes are only reachable through the oracle
    t = GeneralTableau.from_cells({(1, 1): 2, (1, 2): 3})
    assert eval_ssyt_series(t, 3).value == _brute_ssyt(t, 3)
