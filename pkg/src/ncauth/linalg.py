"""Dense exact matrices over a Field.

Everything is desk-scale: matrices are tuples of tuples of field elements,
elimination is plain Gauss-Jordan with leftmost-nonzero pivoting (no
tie-breaking beyond row order), so reduced forms are deterministic.
"""

from __future__ import annotations

from .field import Fel, Field


class Matrix:
    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows, cols: int | None = None):
        data = tuple(tuple(field(v) for v in row) for row in rows)
        if data:
            width = len(data[0])
            if cols is not None and cols != width:
                raise ValueError(f"declared {cols} columns but rows have {width}")
            cols = width
            if any(len(r) != cols for r in data):
                raise ValueError("ragged rows")
        elif cols is None:
            raise ValueError("column count required for an empty matrix")
        self.field = field
        self.rows = len(data)
        self.cols = cols
        self.data = data

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, [[z] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    def row(self, i: int) -> tuple[Fel, ...]:
        return self.data[i]

    def column(self, j: int) -> tuple[Fel, ...]:
        return tuple(r[j] for r in self.data)

    def __getitem__(self, key) -> Fel:
        i, j = key
        return self.data[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over {self.field!r})"

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field:
            raise ValueError("mixed-field product")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        zero = self.field.zero
        out = []
        for i in range(self.rows):
            arow = self.data[i]
            orow = []
            for j in range(other.cols):
                acc = zero
                for t in range(self.cols):
                    a = arow[t]
                    if a:
                        acc = acc + a * other.data[t][j]
                orow.append(acc)
            out.append(orow)
        return Matrix(self.field, out, cols=other.cols)

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form and the pivot column indices."""
        m = [list(r) for r in self.data]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            hit = next((i for i in range(r, self.rows) if m[i][c]), None)
            if hit is None:
                continue
            m[r], m[hit] = m[hit], m[r]
            inv = m[r][c].inv()
            m[r] = [e * inv for e in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix(self.field, m, cols=self.cols), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])


def vstack(mats: list[Matrix]) -> Matrix:
    if not mats:
        raise ValueError("nothing to stack")
    field, cols = mats[0].field, mats[0].cols
    if any(m.field != field or m.cols != cols for m in mats):
        raise ValueError("vstack needs equal widths over one field")
    rows = [row for m in mats for row in m.data]
    return Matrix(field, rows, cols=cols)


def hstack(mats: list[Matrix]) -> Matrix:
    if not mats:
        raise ValueError("nothing to stack")
    field, height = mats[0].field, mats[0].rows
    if any(m.field != field or m.rows != height for m in mats):
        raise ValueError("hstack needs equal heights over one field")
    rows = [sum((m.data[i] for m in mats), ()) for i in range(height)]
    return Matrix(field, rows, cols=sum(m.cols for m in mats))


def vandermonde(field: Field, points, height: int) -> Matrix:
    """height x len(points) matrix whose column j is (1, x_j, ..., x_j^(height-1))."""
    pts = [field(p) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("evaluation points must be distinct")
    if height < 1:
        raise ValueError("height must be positive")
    cols = []
    for x in pts:
        col = [field.one]
        for _ in range(height - 1):
            col.append(col[-1] * x)
        cols.append(col)
    return Matrix(field, [[c[i] for c in cols] for i in range(height)], cols=len(pts))


def solve_count(coeff: Matrix, rhs: Matrix) -> tuple[bool, int]:
    """Consistency flag and the exact number of solutions of coeff @ X = rhs.

    rhs may hold several columns; they share the coefficient matrix, so the
    count multiplies across columns: (q^l)^((unknowns - rank) * rhs.cols).
    """
    if rhs.rows != coeff.rows or rhs.field != coeff.field:
        raise ValueError("rhs shape does not match the coefficient matrix")
    _, pivots = hstack([coeff, rhs]).rref()
    if any(p >= coeff.cols for p in pivots):
        return False, 0
    free = coeff.cols - len(pivots)
    return True, coeff.field.order ** (free * rhs.cols)


def solve(coeff: Matrix, rhs: Matrix) -> Matrix | None:
    """One particular solution of coeff @ X = rhs (free unknowns zero), or None."""
    if rhs.rows != coeff.rows or rhs.field != coeff.field:
        raise ValueError("rhs shape does not match the coefficient matrix")
    red, pivots = hstack([coeff, rhs]).rref()
    if any(p >= coeff.cols for p in pivots):
        return None
    zero = coeff.field.zero
    out = [[zero] * rhs.cols for _ in range(coeff.cols)]
    for r, p in enumerate(pivots):
        out[p] = list(red.data[r][coeff.cols :])
    return Matrix(coeff.field, out, cols=rhs.cols)
