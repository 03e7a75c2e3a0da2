# exactlin.py
"""
Dense linear algebra over the rationals.

Gauss-Jordan elimination with fractions.Fraction entries; the pivot is the
first nonzero entry at or below the current row (arithmetic is exact, so no
magnitude pivoting).
"""
from collections import namedtuple
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Sequence, Tuple

from coalition_forge.core import DimensionMismatch

RationalVector = Tuple[Fraction, ...]


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: Tuple[Fraction, ...]  # row-major

    def __post_init__(self):
        entries = tuple(Fraction(x) for x in self.entries)
        if self.rows < 0 or self.cols < 0 or len(entries) != self.rows * self.cols:
            raise DimensionMismatch(f"{len(entries)} entries for a {self.rows}x{self.cols} matrix")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged rows")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RationalMatrix":
        return cls.from_rows(list(zip(*columns))) if columns else cls(0, 0, ())

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: Tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> RationalVector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> RationalVector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows,
                              tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def apply(self, x: Sequence) -> RationalVector:
        if len(x) != self.cols:
            raise DimensionMismatch(f"vector of length {len(x)} against {self.cols} columns")
        return tuple(sum((a * Fraction(b) for a, b in zip(self.row(i), x)), Fraction(0)) for i in range(self.rows))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = [other.column(j) for j in range(other.cols)]
        out = tuple(sum((a * b for a, b in zip(self.row(i), c)), Fraction(0))
                    for i in range(self.rows) for c in cols)
        return RationalMatrix(self.rows, other.cols, out)


class SolveStatus(Enum):
    UNIQUE = "unique"
    NONE = "none"
    INFINITE = "infinite"


# solution is None for NONE; for INFINITE it is the particular solution with free variables set to 0
SolveResult = namedtuple("SolveResult", ["status", "solution", "nullity"])


def _rref(rows: List[List[Fraction]], ncols: int) -> List[int]:
    """Reduce rows in place to reduced row echelon form over the first ncols columns; return pivot columns."""
    pivots: List[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        k = r
        while k < nrows and rows[k][c] == 0:
            k += 1
        if k == nrows:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        pivot_row = rows[r]
        inv = 1 / pivot_row[c]
        if inv != 1:
            rows[r] = pivot_row = [x * inv for x in pivot_row]
        for rp in range(nrows):
            if rp != r:
                f = rows[rp][c]
                if f != 0:
                    rows[rp] = [a - f * b for a, b in zip(rows[rp], pivot_row)]
        pivots.append(c)
        r += 1
    return pivots


def rank(m: RationalMatrix) -> int:
    return len(_rref(m.to_rows(), m.cols))


def solve(m: RationalMatrix, b: Sequence) -> SolveResult:
    if len(b) != m.rows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for {m.rows} rows")
    aug = [row + [Fraction(x)] for row, x in zip(m.to_rows(), b)]
    pivots = _rref(aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return SolveResult(SolveStatus.NONE, None, m.cols - len(pivots) + 1)
    x = [Fraction(0)] * m.cols
    for r, c in enumerate(pivots):
        x[c] = aug[r][m.cols]
    nullity = m.cols - len(pivots)
    status = SolveStatus.UNIQUE if nullity == 0 else SolveStatus.INFINITE
    return SolveResult(status, tuple(x), nullity)


def null_space(m: RationalMatrix) -> List[RationalVector]:
    """A basis of {x : m x = 0}, one vector per free column (that column set to 1)."""
    rows = m.to_rows()
    pivots = _rref(rows, m.cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        x = [Fraction(0)] * m.cols
        x[f] = Fraction(1)
        for r, c in enumerate(pivots):
            x[c] = -rows[r][f]
        basis.append(tuple(x))
    return basis


def is_invertible(m: RationalMatrix) -> bool:
    if not m.is_square:
        raise DimensionMismatch(f"{m.rows}x{m.cols} matrix is not square")
    return rank(m) == m.rows
