"""Exact linear algebra over the coefficient fields.

Vectors are sparse dicts (column index -> nonzero field element).  The
incremental :class:`Echelon` keeps a reduced row echelon basis, which makes
residuals canonical: reducing a vector against it returns the unique
representative supported on non-pivot columns.  Ranks over the rationals go
through fraction-free Bareiss elimination on cleared integer matrices.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional

from .fields import QQ, RationalField

Vector = Dict[int, object]


class Echelon:
    """Incremental reduced row echelon form over a field."""

    def __init__(self):
        self.rows: Dict[int, Vector] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def reduce(self, vec: Vector) -> Vector:
        """Return the canonical residual of ``vec`` modulo the row span."""
        out = {c: v for c, v in vec.items() if v}
        for col in sorted(out):
            if col not in out:
                continue
            row = self.rows.get(col)
            if row is None:
                continue
            factor = out[col]
            for c, v in row.items():
                cur = out.get(c)
                new = (cur - factor * v) if cur is not None else -factor * v
                if new:
                    out[c] = new
                else:
                    out.pop(c, None)
        return out

    def add(self, vec: Vector) -> bool:
        """Insert ``vec``; return True when it enlarged the span."""
        res = self.reduce(vec)
        if not res:
            return False
        pivot = min(res)
        inv_lead = res[pivot]
        row = {c: v / inv_lead for c, v in res.items()}
        # keep the basis fully reduced
        for pc, prow in self.rows.items():
            f = prow.get(pivot)
            if f:
                for c, v in row.items():
                    cur = prow.get(c)
                    new = (cur - f * v) if cur is not None else -f * v
                    if new:
                        prow[c] = new
                    else:
                        prow.pop(c, None)
        self.rows[pivot] = row
        return True

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)

    def basis_rows(self) -> List[Vector]:
        return [dict(self.rows[c]) for c in sorted(self.rows)]


def span_rank(vectors: Iterable[Vector]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def bareiss_rank(mat: List[List[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [row[:] for row in mat]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(row, nrows):
            if m[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        m[row], m[pivot_row] = m[pivot_row], m[row]
        piv = m[row][col]
        for r in range(row + 1, nrows):
            for c in range(col + 1, ncols):
                m[r][c] = (piv * m[r][c] - m[r][col] * m[row][c]) // prev
            m[r][col] = 0
        prev = piv
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


def _cleared_int_rows(rows: List[Vector], ncols: int) -> List[List[int]]:
    out = []
    for vec in rows:
        dens = [v.denominator for v in vec.values()]
        lcm = 1
        for d in dens:
            g = _gcd(lcm, d)
            lcm = lcm // g * d
        dense = [0] * ncols
        for c, v in vec.items():
            scaled = v * lcm
            dense[c] = scaled.numerator
        out.append(dense)
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def rank_over(field, rows: List[Vector], ncols: Optional[int] = None) -> int:
    """Rank of sparse rows; rationals go through fraction-free elimination."""
    rows = [r for r in rows if r]
    if not rows:
        return 0
    if isinstance(field, RationalField):
        n = ncols if ncols is not None else 1 + max(max(r) for r in rows)
        qrows = [{c: Fraction(v) for c, v in r.items()} for r in rows]
        return bareiss_rank(_cleared_int_rows(qrows, n))
    return span_rank(rows)


def project_columns(vec: Vector, cols: Iterable[int]) -> Vector:
    keep = set(cols)
    return {c: v for c, v in vec.items() if c in keep and v}


QQ_FIELD = QQ
