"""Exact arbitrary-precision counting of bipartite partitions.

The main routine builds a dense table of counts p_X(a, b) for a <= n1,
b <= n2 by an unbounded-knapsack dynamic program over the parts inside the
bounding box, in a fixed deterministic order.  A recursive enumeration
oracle and a one-dimensional partition counter serve as independent ground
truth at small scale.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from operator import add
from typing import IO, Iterator


class PartSet(Enum):
    """Which lattice of parts is allowed.

    STRICT_POSITIVE: both components of every part are >= 1.
    NONZERO_VECTORS: parts may lie on the axes; only the zero vector is
    excluded (otherwise no vector would have finitely many partitions).
    """

    STRICT_POSITIVE = "strict"
    NONZERO_VECTORS = "nonzero"

    @classmethod
    def from_name(cls, name: str) -> "PartSet":
        for member in cls:
            if member.value == name:
                return member
        raise ValueError(f"unknown part set {name!r} (expected 'strict' or 'nonzero')")


@dataclass(frozen=True)
class Target:
    """A target vector (n1, n2); (0, 0) admits exactly the empty partition."""

    n1: int
    n2: int

    def __post_init__(self) -> None:
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError(f"target components must be non-negative, got {self}")


DEFAULT_CELL_BUDGET = 1 << 26


def _cell_budget() -> int:
    env = os.environ.get("BIPART_CELL_BUDGET")
    return int(env) if env else DEFAULT_CELL_BUDGET


class CellBudgetError(Exception):
    """Raised when a requested table would exceed the cell budget."""


@dataclass(frozen=True)
class CountTable:
    """Dense table of exact counts p_X(a, b) for a <= max1, b <= max2."""

    part_set: PartSet
    max1: int
    max2: int
    counts: tuple  # tuple of row tuples of int

    def get(self, a: int, b: int) -> int:
        return self.counts[a][b]

    def rows(self) -> Iterator[tuple[int, int, int]]:
        for a in range(self.max1 + 1):
            row = self.counts[a]
            for b in range(self.max2 + 1):
                yield a, b, row[b]

    def to_csv(self, stream: IO[str]) -> None:
        """Dump the table as `a,b,count` rows with a header line."""
        writer = csv.writer(stream)
        writer.writerow(["a", "b", "count"])
        for a, b, c in self.rows():
            writer.writerow([a, b, str(c)])


def parts_in_box(part_set: PartSet, n1: int, n2: int) -> list[tuple[int, int]]:
    """All parts of the given set fitting in the box, in DP order.

    Order is x1 ascending then x2 ascending, so for the nonzero set the
    vertical axis parts (0, x2) come first.
    """
    parts: list[tuple[int, int]] = []
    if part_set is PartSet.NONZERO_VECTORS:
        parts.extend((0, x2) for x2 in range(1, n2 + 1))
    for x1 in range(1, n1 + 1):
        if part_set is PartSet.NONZERO_VECTORS:
            parts.append((x1, 0))
        parts.extend((x1, x2) for x2 in range(1, n2 + 1))
    return parts


def count_table(
    part_set: PartSet, n1: int, n2: int, cell_budget: int | None = None
) -> CountTable:
    """Exact count table by unbounded-knapsack DP over the parts in the box."""
    if n1 < 0 or n2 < 0:
        raise ValueError("table bounds must be non-negative")
    budget = cell_budget if cell_budget is not None else _cell_budget()
    cells = (n1 + 1) * (n2 + 1)
    if cells > budget:
        raise CellBudgetError(
            f"table of {cells} cells exceeds the cell budget {budget}"
        )
    W = n2 + 1
    dp: list[list[int]] = [[0] * W for _ in range(n1 + 1)]
    dp[0][0] = 1

    if part_set is PartSet.NONZERO_VECTORS:
        # axis parts (0, x2): in-row update, increasing b for unbounded reuse
        for x2 in range(1, n2 + 1):
            for a in range(n1 + 1):
                row = dp[a]
                for b in range(x2, W):
                    row[b] += row[b - x2]

    for x1 in range(1, n1 + 1):
        if part_set is PartSet.NONZERO_VECTORS:
            # axis part (x1, 0): whole-row add from the already-updated row
            for a in range(x1, n1 + 1):
                dp[a] = list(map(add, dp[a], dp[a - x1]))
        for x2 in range(1, n2 + 1):
            # interior part (x1, x2): rows in increasing a so that the source
            # row a - x1 is already final for this part (unbounded knapsack)
            for a in range(x1, n1 + 1):
                src = dp[a - x1]
                dst = dp[a]
                dst[x2:] = map(add, dst[x2:], src[: W - x2])

    return CountTable(
        part_set=part_set,
        max1=n1,
        max2=n2,
        counts=tuple(tuple(row) for row in dp),
    )


NAIVE_LIMIT = 8


def count_naive(part_set: PartSet, target: Target) -> int:
    """Exhaustive multiset enumeration oracle, valid for n1, n2 <= 8."""
    if target.n1 > NAIVE_LIMIT or target.n2 > NAIVE_LIMIT:
        raise ValueError(
            f"naive oracle limited to targets <= {NAIVE_LIMIT}, got {target}"
        )
    parts = sorted(parts_in_box(part_set, target.n1, target.n2), reverse=True)

    @lru_cache(maxsize=None)
    def ways(i: int, r1: int, r2: int) -> int:
        if r1 == 0 and r2 == 0:
            return 1
        if i == len(parts):
            return 0
        x1, x2 = parts[i]
        total = ways(i + 1, r1, r2)  # skip this part
        if x1 <= r1 and x2 <= r2:
            total += ways(i, r1 - x1, r2 - x2)  # use one more copy
        return total

    result = ways(0, target.n1, target.n2)
    ways.cache_clear()
    return result


def count_1d(n: int) -> int:
    """Number of 1-D integer partitions p(n), by the Euler DP."""
    if n < 0:
        raise ValueError("count_1d requires n >= 0")
    dp = [0] * (n + 1)
    dp[0] = 1
    for k in range(1, n + 1):
        for t in range(k, n + 1):
            dp[t] += dp[t - k]
    return dp[n]
