"""
Smith normal form over ℤ for the sparse boundary matrices of bar and order complexes.

Boundary matrices are large and very sparse, and most of their invariant
factors are 1. ``smith_normal_form`` therefore first eliminates ±1 pivots
with sparse row and column operations, then hands the small residual to
sympy's dense Smith normal form and recombines the result into a divisibility
chain. All arithmetic uses Python integers (exact, unbounded).
"""

from __future__ import annotations

import dataclasses
import logging
from collections import defaultdict
from itertools import zip_longest
from math import prod
from typing import Dict, List, Optional, Sequence, Set, Tuple

from sympy import ZZ, factorint
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors, smith_normal_decomp

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class IntegerMatrix:
    """Sparse integer matrix stored by columns: columns[j] maps row index → nonzero entry."""
    rows: int
    cols: int
    columns: List[Dict[int, int]]

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, [{} for _ in range(cols)])

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntegerMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        columns: List[Dict[int, int]] = [{} for _ in range(cols)]
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError(f"Row {i} has {len(row)} entries, expected {cols}")
            for j, value in enumerate(row):
                if value:
                    columns[j][i] = int(value)
        return cls(rows, cols, columns)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def entry(self, i: int, j: int) -> int:
        return self.columns[j].get(i, 0)

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)

    def to_dense(self) -> List[List[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for j, column in enumerate(self.columns):
            for i, value in column.items():
                dense[i][j] = value
        return dense

    def transpose(self) -> "IntegerMatrix":
        columns: List[Dict[int, int]] = [{} for _ in range(self.rows)]
        for j, column in enumerate(self.columns):
            for i, value in column.items():
                columns[i][j] = value
        return IntegerMatrix(self.cols, self.rows, columns)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Shape mismatch {self.shape} @ {other.shape}")
        columns: List[Dict[int, int]] = []
        for column in other.columns:
            acc: Dict[int, int] = defaultdict(int)
            for k, b in column.items():
                for i, a in self.columns[k].items():
                    acc[i] += a * b
            columns.append({i: v for i, v in acc.items() if v})
        return IntegerMatrix(self.rows, other.cols, columns)

    def to_domain_matrix(self) -> DomainMatrix:
        return DomainMatrix([[ZZ(v) for v in row] for row in self.to_dense()], (self.rows, self.cols), ZZ)


@dataclasses.dataclass(frozen=True)
class SmithForm:
    """Nonzero invariant factors d_1 | d_2 | ⋯ and, on request, U, V with U·M·V diagonal."""
    shape: Tuple[int, int]
    factors: Tuple[int, ...]
    left: Optional[DomainMatrix] = None
    right: Optional[DomainMatrix] = None

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)


def invariant_chain(diagonal: Sequence[int]) -> List[int]:
    """
    Recombine arbitrary nonzero diagonal entries into invariant factors.

    Entries are split into prime powers and regrouped so that each factor
    divides the next; units become leading 1s. The result has one entry per
    nonzero input.
    """
    values = [abs(int(d)) for d in diagonal if d]
    prime_powers: Dict[int, List[int]] = defaultdict(list)
    for d in values:
        for p, e in factorint(d).items():
            prime_powers[int(p)].append(int(p) ** int(e))
    columns = [sorted(powers, reverse=True) for _, powers in sorted(prime_powers.items())]
    nontrivial = [prod(group) for group in zip_longest(*columns, fillvalue=1)]
    nontrivial.reverse()
    return [1] * (len(values) - len(nontrivial)) + nontrivial


def _find_unit_pivot(
    cols: Dict[int, Dict[int, int]],
    rows: Dict[int, Set[int]],
    window: int = 64,
) -> Optional[Tuple[int, int]]:
    """Cheapest ±1 entry by Markowitz cost among the first `window` candidates."""
    best = None
    best_cost = None
    examined = 0
    for j, column in cols.items():
        for i, value in column.items():
            if value not in (1, -1):
                continue
            cost = (len(column) - 1) * (len(rows[i]) - 1)
            if cost == 0:
                return i, j
            if best_cost is None or cost < best_cost:
                best, best_cost = (i, j), cost
            examined += 1
        if best is not None and examined >= window:
            break
    return best


def eliminate_unit_pivots(matrix: IntegerMatrix) -> Tuple[int, Dict[int, Dict[int, int]]]:
    """
    Remove ±1 pivots with unimodular operations.

    For a pivot (i, j) every other column is cleared in row i by column
    operations; row i then meets only column j, so both can be dropped and
    contribute one invariant factor 1.

    Returns:
        (number of unit pivots removed, residual columns keyed by original index)
    """
    cols = {j: dict(column) for j, column in enumerate(matrix.columns) if column}
    rows: Dict[int, Set[int]] = defaultdict(set)
    for j, column in cols.items():
        for i in column:
            rows[i].add(j)

    pivots = 0
    while True:
        pivot = _find_unit_pivot(cols, rows)
        if pivot is None:
            break
        i, j = pivot
        unit = cols[j][i]
        pivot_column = cols.pop(j)
        for r in pivot_column:
            rows[r].discard(j)
        for k in list(rows[i]):
            column = cols[k]
            factor = column[i] * unit
            for r, value in pivot_column.items():
                updated = column.get(r, 0) - factor * value
                if updated:
                    if r not in column:
                        rows[r].add(k)
                    column[r] = updated
                elif r in column:
                    del column[r]
                    rows[r].discard(k)
            if not column:
                del cols[k]
        rows.pop(i, None)
        pivots += 1
    return pivots, cols


def _residual_factors(cols: Dict[int, Dict[int, int]]) -> List[int]:
    if not cols:
        return []
    row_ids = sorted({i for column in cols.values() for i in column})
    row_pos = {i: p for p, i in enumerate(row_ids)}
    dense = [[ZZ(0)] * len(cols) for _ in row_ids]
    for q, j in enumerate(sorted(cols)):
        for i, value in cols[j].items():
            dense[row_pos[i]][q] = ZZ(value)
    logger.debug(f"Dense Smith normal form on {len(row_ids)}x{len(cols)} residual")
    residual = DomainMatrix(dense, (len(row_ids), len(cols)), ZZ)
    return [int(d) for d in invariant_factors(residual) if d]


def smith_normal_form(matrix: IntegerMatrix, transforms: bool = False) -> SmithForm:
    """Invariant factors of an integer matrix, optionally with unimodular transforms."""
    rows, cols = matrix.shape
    if transforms:
        return _smith_with_transforms(matrix)
    if rows == 0 or cols == 0 or matrix.is_zero():
        return SmithForm(shape=(rows, cols), factors=())

    pivots, residual = eliminate_unit_pivots(matrix)
    factors = invariant_chain([1] * pivots + _residual_factors(residual))
    return SmithForm(shape=(rows, cols), factors=tuple(factors))


def _smith_with_transforms(matrix: IntegerMatrix) -> SmithForm:
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return SmithForm(
            shape=(rows, cols),
            factors=(),
            left=DomainMatrix.eye(rows, ZZ),
            right=DomainMatrix.eye(cols, ZZ),
        )
    smf, s, t = smith_normal_decomp(matrix.to_domain_matrix())
    diagonal = smf.to_list()
    factors = tuple(abs(int(diagonal[k][k])) for k in range(min(rows, cols)) if diagonal[k][k])
    return SmithForm(shape=(rows, cols), factors=factors, left=s, right=t)
