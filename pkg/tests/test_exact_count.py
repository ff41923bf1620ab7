"""Unit tests for the exact counting dynamic program and its oracles."""

import io

import pytest

from bipartitions.exact_count import (
    CellBudgetError,
    PartSet,
    Target,
    count_1d,
    count_naive,
    count_table,
    parts_in_box,
)

P1D = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


class TestCount1D:
    def test_known_values(self):
        assert [count_1d(n) for n in range(11)] == P1D
        assert count_1d(50) == 204226

    def test_domain(self):
        with pytest.raises(ValueError):
            count_1d(-1)


class TestTableBasics:
    def test_empty_partition(self):
        for ps in PartSet:
            assert count_table(ps, 0, 0).get(0, 0) == 1

    def test_strict_frozen_grid(self):
        t = count_table(PartSet.STRICT_POSITIVE, 6, 6)
        expected = [
            [1, 0, 0, 0, 0, 0, 0],
            [0, 1, 1, 1, 1, 1, 1],
            [0, 1, 2, 2, 3, 3, 4],
            [0, 1, 2, 4, 5, 7, 9],
            [0, 1, 3, 5, 9, 12, 17],
            [0, 1, 3, 7, 12, 20, 28],
            [0, 1, 4, 9, 17, 28, 45],
        ]
        assert [[t.get(a, b) for b in range(7)] for a in range(7)] == expected

    def test_nonzero_frozen_grid(self):
        t = count_table(PartSet.NONZERO_VECTORS, 4, 4)
        expected = [
            [1, 1, 2, 3, 5],
            [1, 2, 4, 7, 12],
            [2, 4, 9, 16, 29],
            [3, 7, 16, 31, 57],
            [5, 12, 29, 57, 109],
        ]
        assert [[t.get(a, b) for b in range(5)] for a in range(5)] == expected

    def test_nonzero_axis_rows_are_1d_partitions(self):
        t = count_table(PartSet.NONZERO_VECTORS, 0, 10)
        assert [t.get(0, b) for b in range(11)] == P1D

    def test_strict_thin_rows(self):
        # a single unit of the first coordinate forces one part (1, n)
        t = count_table(PartSet.STRICT_POSITIVE, 2, 12)
        assert all(t.get(1, n) == 1 for n in range(1, 13))
        # two units: either one part (2, n) or a split (1, a) + (1, n - a)
        assert all(t.get(2, n) == n // 2 + 1 for n in range(1, 13))

    def test_transpose_symmetry(self):
        for ps in PartSet:
            t = count_table(ps, 8, 8)
            for a in range(9):
                for b in range(9):
                    assert t.get(a, b) == t.get(b, a)

    def test_matches_naive_enumeration(self):
        for ps in PartSet:
            t = count_table(ps, 5, 5)
            for a in range(6):
                for b in range(6):
                    assert t.get(a, b) == count_naive(ps, Target(a, b))


class TestConvolutionIdentity:
    def test_nonzero_factorises(self):
        # allowing axis parts multiplies in an independent 1-D partition
        # in each coordinate, which is a double convolution of the tables
        n = 9
        strict = count_table(PartSet.STRICT_POSITIVE, n, n)
        nonzero = count_table(PartSet.NONZERO_VECTORS, n, n)
        p1 = [count_1d(k) for k in range(n + 1)]
        for n1 in range(n + 1):
            for n2 in range(n + 1):
                conv = sum(
                    strict.get(a, b) * p1[n1 - a] * p1[n2 - b]
                    for a in range(n1 + 1)
                    for b in range(n2 + 1)
                )
                assert conv == nonzero.get(n1, n2)


class TestPartsInBox:
    def test_strict(self):
        assert parts_in_box(PartSet.STRICT_POSITIVE, 2, 2) == [
            (1, 1), (1, 2), (2, 1), (2, 2),
        ]

    def test_nonzero_order(self):
        parts = parts_in_box(PartSet.NONZERO_VECTORS, 2, 2)
        assert parts == [(0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]


class TestBudgetAndValidation:
    def test_budget_exceeded(self):
        with pytest.raises(CellBudgetError):
            count_table(PartSet.STRICT_POSITIVE, 10, 10, cell_budget=50)

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("BIPART_CELL_BUDGET", "10")
        with pytest.raises(CellBudgetError):
            count_table(PartSet.STRICT_POSITIVE, 10, 10)
        monkeypatch.setenv("BIPART_CELL_BUDGET", "1000")
        assert count_table(PartSet.STRICT_POSITIVE, 10, 10).get(1, 1) == 1

    def test_negative_target(self):
        with pytest.raises(ValueError):
            Target(-1, 0)
        with pytest.raises(ValueError):
            count_table(PartSet.STRICT_POSITIVE, -1, 2)

    def test_part_set_names(self):
        assert PartSet.from_name("strict") is PartSet.STRICT_POSITIVE
        assert PartSet.from_name("nonzero") is PartSet.NONZERO_VECTORS
        with pytest.raises(ValueError):
            PartSet.from_name("all")

    def test_naive_limit(self):
        with pytest.raises(ValueError):
            count_naive(PartSet.STRICT_POSITIVE, Target(9, 1))


class TestCsv:
    def test_header_and_rows(self):
        buf = io.StringIO()
        count_table(PartSet.STRICT_POSITIVE, 1, 1).to_csv(buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "a,b,count"
        assert lines[1:] == ["0,0,1", "0,1,0", "1,0,0", "1,1,1"]
