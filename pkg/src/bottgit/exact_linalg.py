"""Exact sparse linear algebra over the rationals.

Everything here is exact.  Matrices are stored as ``{(row, col): Fraction}``
with no explicit zeros; elimination runs on integer rows (denominators cleared
per row, content divided out after every update), which keeps coefficient
growth in check without ever touching floating point.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping


class DimensionError(ValueError):
    pass


def _frac(x):
    """Exact rational value; integral values are kept as plain ints (cheaper arithmetic)."""
    if type(x) is int:
        return x
    x = x if isinstance(x, Fraction) else Fraction(x)
    return x.numerator if x.denominator == 1 else x


class Vector:
    """Sparse rational vector of fixed length."""

    __slots__ = ("length", "entries")

    def __init__(self, length: int, entries: Mapping[int, object] | None = None):
        self.length = length
        clean = {}
        for i, v in (entries or {}).items():
            if not 0 <= i < length:
                raise IndexError(f"index {i} out of range for length {length}")
            v = _frac(v)
            if v:
                clean[i] = v
        self.entries = clean

    @classmethod
    def from_list(cls, values: Iterable) -> "Vector":
        values = list(values)
        return cls(len(values), dict(enumerate(values)))

    def to_list(self) -> list[Fraction]:
        out = [Fraction(0)] * self.length
        for i, v in self.entries.items():
            out[i] = v
        return out

    def __getitem__(self, i: int) -> Fraction:
        return self.entries.get(i, Fraction(0))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Vector)
            and self.length == other.length
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"Vector({self.length}, {self.entries})"

    def is_zero(self) -> bool:
        return not self.entries


class SparseMatrix:
    """Immutable sparse rational matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        if rows < 0 or cols < 0:
            raise DimensionError("negative matrix shape")
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            v = _frac(v)
            if v:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def from_dense(cls, data: list[list]) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        if any(len(r) != cols for r in data):
            raise DimensionError("ragged rows")
        return cls(rows, cols, {(i, j): v for i, r in enumerate(data) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @classmethod
    def from_columns(cls, rows: int, columns: list[Vector]) -> "SparseMatrix":
        entries = {}
        for j, col in enumerate(columns):
            if col.length != rows:
                raise DimensionError("column length mismatch")
            for i, v in col.entries.items():
                entries[(i, j)] = v
        return cls(rows, len(columns), entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def row_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def column(self, j: int) -> Vector:
        return Vector(self.rows, {r: v for (r, c), v in self.entries.items() if c == j})

    def __matmul__(self, other):
        if isinstance(other, Vector):
            if other.length != self.cols:
                raise DimensionError(f"cannot apply {self.shape} matrix to length {other.length}")
            acc: dict[int, Fraction] = {}
            for (r, c), v in self.entries.items():
                x = other.entries.get(c)
                if x:
                    acc[r] = acc.get(r, 0) + v * x
            return Vector(self.rows, acc)
        if isinstance(other, SparseMatrix):
            if other.rows != self.cols:
                raise DimensionError(f"shape mismatch {self.shape} @ {other.shape}")
            right = other.row_dicts()
            acc2: dict[tuple[int, int], Fraction] = {}
            for (r, k), v in self.entries.items():
                for c, w in right[k].items():
                    key = (r, c)
                    acc2[key] = acc2.get(key, 0) + v * w
            return SparseMatrix(self.rows, other.cols, acc2)
        return NotImplemented

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and self.shape == other.shape
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def is_zero(self) -> bool:
        return not self.entries

    def hstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if other.rows != self.rows:
            raise DimensionError("hstack row mismatch")
        entries = dict(self.entries)
        for (r, c), v in other.entries.items():
            entries[(r, c + self.cols)] = v
        return SparseMatrix(self.rows, self.cols + other.cols, entries)

    def block(self, row_range: range, col_range: range) -> "SparseMatrix":
        r0, c0 = row_range.start, col_range.start
        return SparseMatrix(
            len(row_range),
            len(col_range),
            {
                (r - r0, c - c0): v
                for (r, c), v in self.entries.items()
                if r in row_range and c in col_range
            },
        )


# -- elimination core ---------------------------------------------------------

def _integer_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    out = {c: int(v * den) for c, v in row.items() if v}
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def _combine(r: dict[int, int], p: dict[int, int], col: int) -> dict[int, int]:
    """Return a primitive multiple of ``p[col]*r - r[col]*p`` (kills ``col``)."""
    a = p[col]
    b = r[col]
    g = gcd(a, b)
    a //= g
    b //= g
    out = {c: a * v for c, v in r.items()}
    for c, v in p.items():
        w = out.get(c, 0) - b * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return _primitive(out)


class _Echelon:
    """Incremental fraction-free row echelon form.

    Pivot rows are stored in creation order.  A pivot row never contains the
    pivot column of an older pivot row, so reducing a new row against pivots in
    creation order removes each pivot column at most once.

    ``pivot="last"`` pivots on the highest column index present in the row;
    ``pivot="sparsest"`` on the structurally sparsest column (ties: lowest index).
    """

    def __init__(self, col_weight: Mapping[int, int] | None = None, pivot: str = "last"):
        if pivot not in ("last", "sparsest"):
            raise ValueError(f"unknown pivot strategy {pivot!r}")
        self.col_weight = col_weight or {}
        self.pivot = pivot
        self.pivot_of_col: dict[int, int] = {}
        self.pivot_cols: list[int] = []
        self.pivot_rows: list[dict[int, int]] = []

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        heap = [self.pivot_of_col[c] for c in row if c in self.pivot_of_col]
        heapq.heapify(heap)
        seen = set(heap)
        while heap:
            k = heapq.heappop(heap)
            c = self.pivot_cols[k]
            if c not in row:
                continue
            p = self.pivot_rows[k]
            row = _combine(row, p, c)
            for cc in p:
                kk = self.pivot_of_col.get(cc)
                if kk is not None and kk > k and kk not in seen and cc in row:
                    seen.add(kk)
                    heapq.heappush(heap, kk)
        return row

    def add(self, row: dict[int, int]) -> bool:
        row = self.reduce(row)
        if not row:
            return False
        if self.pivot == "last":
            col = max(row)
        else:
            weight = self.col_weight
            col = min(row, key=lambda c: (weight.get(c, 0), c))
        if row[col] < 0:
            row = {c: -v for c, v in row.items()}
        self.pivot_of_col[col] = len(self.pivot_rows)
        self.pivot_cols.append(col)
        self.pivot_rows.append(row)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def back_reduce(self) -> list[dict[int, int]]:
        """Rows with every other pivot column eliminated (reduced echelon form)."""
        reduced: list[dict[int, int] | None] = [None] * self.rank
        for k in range(self.rank - 1, -1, -1):
            row = self.pivot_rows[k]
            for cc in [c for c in row if self.pivot_of_col.get(c, k) > k]:
                if cc in row:
                    row = _combine(row, reduced[self.pivot_of_col[cc]], cc)
            reduced[k] = row
        return reduced  # type: ignore[return-value]


def _column_weights(rows: list[dict[int, int]]) -> dict[int, int]:
    weight: dict[int, int] = {}
    for r in rows:
        for c in r:
            weight[c] = weight.get(c, 0) + 1
    return weight


def _echelon_of(m: SparseMatrix, pivot: str = "last") -> _Echelon:
    rows = [_integer_row(r) for r in m.row_dicts() if r]
    ech = _Echelon(_column_weights(rows) if pivot == "sparsest" else None, pivot)
    for r in rows:
        ech.add(r)
    return ech


def rank(m: SparseMatrix, pivot: str = "last") -> int:
    """Rank of ``m`` over Q."""
    if not m.entries:
        return 0
    return _echelon_of(m, pivot).rank


def _kernel_columns(ech: _Echelon, ncols: int) -> tuple[list[int], list[dict[int, Fraction]]]:
    pivots = set(ech.pivot_cols)
    free = [c for c in range(ncols) if c not in pivots]
    columns: dict[int, dict[int, Fraction]] = {f: {f: Fraction(1)} for f in free}
    for k, row in enumerate(ech.back_reduce()):
        c = ech.pivot_cols[k]
        lead = row[c]
        for f, v in row.items():
            if f != c:
                columns[f][c] = Fraction(-v, lead)
    return free, [columns[f] for f in free]


def kernel_basis(m: SparseMatrix, pivot: str = "last") -> list[Vector]:
    """Basis of the right nullspace of ``m``.

    The basis is indexed by the free (non-pivot) columns: the vector for free
    column ``f`` has a 1 in position ``f`` and a 0 in every other free column.
    Vectors are returned in increasing order of their free column.
    """
    if not m.entries:
        return [Vector(m.cols, {c: 1}) for c in range(m.cols)]
    _, cols = _kernel_columns(_echelon_of(m, pivot), m.cols)
    return [Vector(m.cols, col) for col in cols]


def nullspace(m: SparseMatrix, pivot: str = "last") -> tuple[list[int], list[Vector]]:
    """``kernel_basis`` together with the free column of each vector."""
    if not m.entries:
        return list(range(m.cols)), kernel_basis(m)
    free, cols = _kernel_columns(_echelon_of(m, pivot), m.cols)
    return free, [Vector(m.cols, col) for col in cols]


def primitive_integer(v: Mapping[int, Fraction]) -> dict[int, int]:
    """Smallest integer multiple of ``v`` (positive scale) with coprime entries."""
    return _integer_row(v)


def in_image(m: SparseMatrix, v: Vector) -> bool:
    """True iff ``v`` lies in the column span of ``m``."""
    if v.length != m.rows:
        raise DimensionError(f"vector of length {v.length} vs matrix with {m.rows} rows")
    if v.is_zero():
        return True
    ech = _echelon_of(m.transpose())
    return not ech.reduce(_integer_row(v.entries))


def is_zero_product(a: SparseMatrix, b: SparseMatrix) -> bool:
    """Exact test of a @ b == 0 on integer matrices.

    Rows of ``a`` and columns of ``b`` are rescaled by nonzero integers first;
    that does not change whether the product vanishes.
    """
    if a.cols != b.rows:
        raise DimensionError(f"shape mismatch {a.shape} @ {b.shape}")
    left = [_integer_row(r) if r else r for r in a.row_dicts()]
    right_cols = [_integer_row(c) if c else c for c in b.transpose().row_dicts()]
    right: list[dict[int, int]] = [{} for _ in range(b.rows)]
    for c, col in enumerate(right_cols):
        for r, v in col.items():
            right[r][c] = v
    for row in left:
        if not row:
            continue
        acc: dict[int, int] = {}
        for k, v in row.items():
            for c, w in right[k].items():
                acc[c] = acc.get(c, 0) + v * w
        if any(acc.values()):
            return False
    return True
