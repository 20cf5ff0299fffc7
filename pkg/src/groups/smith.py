"""Exponent matrices, Smith normal form over Z and the abelianization of a presentation.

All arithmetic is on Python ints, so minors and transform entries never overflow.
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import List, Sequence, Tuple

from src.groups.presentations import Presentation
from src.utils.exceptions import InternalInconsistency, PreconditionViolated

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, 'entries', entries)
        if len(entries) != self.rows or any(len(row) != self.cols for row in entries):
            raise PreconditionViolated(f"entry grid does not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int = None) -> 'IntMatrix':
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> 'IntMatrix':
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.entries]

    def transpose(self) -> 'IntMatrix':
        return IntMatrix.from_rows([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
                                   self.rows)

    def __matmul__(self, other: 'IntMatrix') -> 'IntMatrix':
        if self.cols != other.rows:
            raise PreconditionViolated(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return IntMatrix.from_rows(
            [[sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols)) for j in range(other.cols)]
             for i in range(self.rows)], other.cols)

    def __sub__(self, other: 'IntMatrix') -> 'IntMatrix':
        return IntMatrix.from_rows([[x - y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)],
                                   self.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> List[List[int]]:
        return [[self.entries[i][j] for j in cols] for i in rows]

    def determinant(self) -> int:
        if self.rows != self.cols:
            raise PreconditionViolated("determinant of a non-square matrix")
        return bareiss_determinant(self.to_lists())


def bareiss_determinant(m: List[List[int]]) -> int:
    """Fraction-free elimination; every division is exact."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def exponent_matrix(p: Presentation) -> IntMatrix:
    """Row i, column j: exponent sum of generator j in relator i."""
    g = p.generator_count
    return IntMatrix.from_rows([r.exponent_vector(g) for r in p.relators], g)


@dataclass(frozen=True)
class SmithResult:
    diagonal: Tuple[int, ...]
    left: IntMatrix
    right: IntMatrix


def smith_normal_form(m: IntMatrix) -> SmithResult:
    """Diagonal d with left @ m @ right = diag(d), left and right unimodular, d[i] | d[i+1]."""
    r, c = m.rows, m.cols
    a = m.to_lists()
    left = IntMatrix.identity(r).to_lists()
    right = IntMatrix.identity(c).to_lists()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(target, source, q):
        # row[target] += q * row[source]
        a[target] = [x + q * y for x, y in zip(a[target], a[source])]
        left[target] = [x + q * y for x, y in zip(left[target], left[source])]

    def add_col(target, source, q):
        for row in a:
            row[target] += q * row[source]
        for row in right:
            row[target] += q * row[source]

    for t in range(min(r, c)):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, r) for j in range(t, c) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)

        while True:
            pivot = a[t][t]
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // pivot))
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // pivot))

            leftovers = [(abs(a[i][t]), i, 'row') for i in range(t + 1, r) if a[i][t]]
            leftovers += [(abs(a[t][j]), j, 'col') for j in range(t + 1, c) if a[t][j]]
            if leftovers:
                _, k, kind = min(leftovers)
                if kind == 'row':
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue

            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % pivot), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]

    diagonal = tuple(a[i][i] for i in range(min(r, c)))
    result = SmithResult(diagonal, IntMatrix.from_rows(left, r), IntMatrix.from_rows(right, c))
    _check_smith(m, result)
    return result


def _check_smith(m: IntMatrix, result: SmithResult) -> None:
    product = (result.left @ m @ result.right).entries
    for i in range(m.rows):
        for j in range(m.cols):
            expected = result.diagonal[i] if i == j else 0
            if product[i][j] != expected:
                raise InternalInconsistency(f"Smith transform check failed at ({i}, {j})")
    for x, y in zip(result.diagonal, result.diagonal[1:]):
        if x == 0 and y != 0 or x and y % x:
            raise InternalInconsistency(f"Smith diagonal {result.diagonal} is not a divisor chain")


@dataclass(frozen=True)
class AbelianizationReport:
    rank: int
    torsion: Tuple[int, ...]

    @property
    def is_infinite_cyclic(self) -> bool:
        return self.rank == 1 and not self.torsion

    def describe(self) -> str:
        parts = ['Z'] * self.rank + [f"Z/{n}" for n in self.torsion]
        return ' + '.join(parts) if parts else '0'


def invariants_of(m: IntMatrix) -> AbelianizationReport:
    """Cokernel of the row space: Z^cols / <rows of m>."""
    diagonal = smith_normal_form(m).diagonal
    nonzero = [d for d in diagonal if d]
    return AbelianizationReport(rank=m.cols - len(nonzero), torsion=tuple(d for d in nonzero if d > 1))


def abelianization(p: Presentation) -> AbelianizationReport:
    report = invariants_of(exponent_matrix(p))
    logger.debug(f"abelianization of {p.generator_names}: {report.describe()}")
    return report


def minors_criterion(m: IntMatrix) -> bool:
    """All g x g minors vanish and the (g-1) x (g-1) minors have highest common factor 1.

    g is the number of columns. Minors are evaluated by fraction-free
    elimination, independently of the Smith normal form.
    """
    g = m.cols
    if g < 1:
        raise PreconditionViolated("minors criterion needs at least one column")
    rows = range(m.rows)
    cols = range(g)
    for row_set in combinations(rows, g):
        if bareiss_determinant(m.submatrix(row_set, cols)):
            return False
    common = 0
    for row_set in combinations(rows, g - 1):
        for col_set in combinations(cols, g - 1):
            common = gcd(common, bareiss_determinant(m.submatrix(row_set, col_set)))
            if common == 1:
                return True
    return common == 1
