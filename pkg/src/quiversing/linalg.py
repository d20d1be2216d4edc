"""Exact dense matrices and sparse rank computation over an exact field.

Everything here is exact: no rounding, no tolerances.  Row reduction
follows the usual reduced-row-echelon conventions (first nonzero column
becomes the next pivot), so pivot choices - and everything derived from
them: kernel bases, particular solutions, quotient coordinates,
complements - are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import QQ


class LinAlgError(ValueError):
    pass


def _rref_worker(work: list[list], ncols: int):
    """In-place RREF of a list-of-rows; returns the pivot column list."""
    pivots = []
    pr = 0
    nrows = len(work)
    for c in range(ncols):
        pivot_row = None
        for r in range(pr, nrows):
            if work[r][c]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        if pivot_row != pr:
            work[pr], work[pivot_row] = work[pivot_row], work[pr]
        row = work[pr]
        inv = row[c]
        row[c:] = [x / inv for x in row[c:]]
        for r in range(nrows):
            if r == pr:
                continue
            f = work[r][c]
            if f:
                other = work[r]
                other[c:] = [a - f * b for a, b in zip(other[c:], row[c:])]
        pivots.append(c)
        pr += 1
        if pr == nrows:
            break
    return pivots


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix; ``entries`` is a row-major tuple of tuples."""

    field: object
    rows: int
    cols: int
    entries: tuple

    @classmethod
    def from_rows(cls, field, data) -> "Matrix":
        data = [list(row) for row in data]
        rows = len(data)
        cols = len(data[0]) if rows else 0
        for row in data:
            if len(row) != cols:
                raise LinAlgError("ragged rows")
        ent = tuple(tuple(field.of(x) for x in row) for row in data)
        return cls(field, rows, cols, ent)

    @classmethod
    def from_cols(cls, field, columns, rows: int | None = None) -> "Matrix":
        columns = [list(c) for c in columns]
        if rows is None:
            if not columns:
                raise LinAlgError("from_cols with no columns needs an explicit row count")
            rows = len(columns[0])
        if not columns:
            return cls.zeros(field, rows, 0)
        return cls.from_rows(field, [[col[i] for col in columns] for i in range(rows)])

    @classmethod
    def zeros(cls, field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def column(cls, field, values) -> "Matrix":
        return cls.from_rows(field, [[v] for v in values])

    def entry(self, i: int, j: int):
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.entries)

    def _same_shape(self, other: "Matrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise LinAlgError(f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(a + b for a, b in zip(r1, r2))
                            for r1, r2 in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(a - b for a, b in zip(r1, r2))
                            for r1, r2 in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(-a for a in r) for r in self.entries))

    def scale(self, c) -> "Matrix":
        c = self.field.of(c)
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(c * a for a in r) for r in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinAlgError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        z = self.field.zero
        ocols = list(zip(*other.entries)) if other.entries else [()] * other.cols
        out = []
        for r in self.entries:
            out_row = []
            for c in range(other.cols):
                col = ocols[c] if ocols else ()
                s = z
                for a, b in zip(r, col):
                    if a and b:
                        s = s + a * b
                out_row.append(s)
            out.append(tuple(out_row))
        return Matrix(self.field, self.rows, other.cols, tuple(out))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else
                      tuple(() for _ in range(self.cols)))

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form and its pivot columns."""
        work = [list(r) for r in self.entries]
        pivots = _rref_worker(work, self.cols)
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(r) for r in work)), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "Matrix":
        """Columns form a basis of the null space {x : self @ x = 0}."""
        red, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        z, o = self.field.zero, self.field.one
        cols = []
        for fcol in free:
            vec = [z] * self.cols
            vec[fcol] = o
            for i, p in enumerate(pivots):
                vec[p] = -red.entry(i, fcol)
            cols.append(vec)
        return Matrix.from_cols(self.field, cols, rows=self.cols)

    def solve(self, rhs: "Matrix") -> "Matrix | None":
        """A particular solution X of self @ X = rhs (free variables zero), or None."""
        if rhs.rows != self.rows:
            raise LinAlgError(f"rhs has {rhs.rows} rows, expected {self.rows}")
        aug = [list(r) + list(b) for r, b in zip(self.entries, rhs.entries)]
        if not aug:
            aug = []
        pivots = _rref_worker(aug, self.cols + rhs.cols)
        if any(p >= self.cols for p in pivots):
            return None
        z = self.field.zero
        out = [[z] * rhs.cols for _ in range(self.cols)]
        for i, p in enumerate(pivots):
            for j in range(rhs.cols):
                out[p][j] = aug[i][self.cols + j]
        return Matrix.from_rows(self.field, out) if self.cols else Matrix.zeros(self.field, 0, rhs.cols)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise LinAlgError("only square matrices are invertible")
        n = self.rows
        aug = [list(r) + [self.field.one if i == j else self.field.zero for j in range(n)]
               for i, r in enumerate(self.entries)]
        pivots = _rref_worker(aug, 2 * n)
        if list(pivots) != list(range(n)):
            raise LinAlgError("matrix is singular")
        return Matrix.from_rows(self.field, [row[n:] for row in aug]) if n else Matrix.zeros(self.field, 0, 0)

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(self.field.to_str(x) for x in row) for row in self.entries) + "]"


def hstack(mats) -> Matrix:
    mats = list(mats)
    rows = mats[0].rows
    for m in mats:
        if m.rows != rows:
            raise LinAlgError("hstack: row counts differ")
    ent = tuple(tuple(x for m in mats for x in m.entries[i]) for i in range(rows))
    return Matrix(mats[0].field, rows, sum(m.cols for m in mats), ent)


def vstack(mats) -> Matrix:
    mats = list(mats)
    cols = mats[0].cols
    for m in mats:
        if m.cols != cols:
            raise LinAlgError("vstack: column counts differ")
    ent = tuple(row for m in mats for row in m.entries)
    return Matrix(mats[0].field, sum(m.rows for m in mats), cols, ent)


def block_matrix(grid) -> Matrix:
    """Assemble a matrix from a 2-d grid of blocks."""
    return vstack([hstack(row) for row in grid])


def block_diag(field, blocks) -> Matrix:
    blocks = list(blocks)
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    grid = []
    for i, b in enumerate(blocks):
        row = []
        for j, c in enumerate(blocks):
            row.append(b if i == j else Matrix.zeros(field, b.rows, c.cols))
        grid.append(row)
    return block_matrix(grid) if blocks else Matrix.zeros(field, rows, cols)


def complement_basis(sub: Matrix, ambient_dim: int) -> Matrix:
    """Columns extending the columns of ``sub`` to a basis of k^ambient_dim.

    Selection is deterministic: the first standard basis vectors not already
    in the span, in index order.  Raises if the columns of ``sub`` are
    dependent.
    """
    if sub.rows != ambient_dim:
        raise LinAlgError(f"sub lives in dimension {sub.rows}, expected {ambient_dim}")
    space = RowSpace(sub.field, ambient_dim)
    for j in range(sub.cols):
        if not space.insert(sub.col(j)):
            raise LinAlgError("columns of sub are dependent")
    z, o = sub.field.zero, sub.field.one
    chosen = []
    for j in range(ambient_dim):
        if space.dim == ambient_dim:
            break
        e = [z] * ambient_dim
        e[j] = o
        if space.insert(e):
            chosen.append(e)
    return Matrix.from_cols(sub.field, chosen, rows=ambient_dim)


class RowSpace:
    """A subspace of k^n kept in reduced echelon form.

    Supports canonical coset reduction: ``reduce(v)`` returns the unique
    representative of v modulo the space with zeros in all pivot
    coordinates.  That reduction is linear in v, which makes it usable both
    for quotient constructions and for canonical coset representatives.
    """

    def __init__(self, field, length: int, vectors=()) -> None:
        self.field = field
        self.length = length
        self.rows: list[list] = []
        self.pivots: list[int] = []
        for v in vectors:
            self.insert(v)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec) -> tuple:
        vec = list(vec)
        if len(vec) != self.length:
            raise LinAlgError("vector length mismatch")
        for row, p in zip(self.rows, self.pivots):
            f = vec[p]
            if f:
                for i in range(p, self.length):
                    if row[i]:
                        vec[i] = vec[i] - f * row[i]
        return tuple(vec)

    def contains(self, vec) -> bool:
        return not any(self.reduce(vec))

    def insert(self, vec) -> bool:
        """Add a vector to the space; True if it increased the dimension."""
        res = list(self.reduce(vec))
        p = next((i for i, x in enumerate(res) if x), None)
        if p is None:
            return False
        inv = res[p]
        res = [x / inv for x in res]
        for row in self.rows:
            f = row[p]
            if f:
                for i in range(p, self.length):
                    if res[i]:
                        row[i] = row[i] - f * res[i]
        at = next((k for k, q in enumerate(self.pivots) if q > p), len(self.pivots))
        self.rows.insert(at, res)
        self.pivots.insert(at, p)
        return True


def sparse_rank(rows, field) -> int:
    """Exact rank of a sparse matrix given as dicts {column: scalar}.

    Pivot selection favours sparse columns and short rows to limit fill-in;
    ties break on the smallest index, so the computation is deterministic.
    """
    rows = [dict(r) for r in rows if r]
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    rank = 0
    while col_rows:
        best_c, best_n = None, None
        for c, rs in col_rows.items():
            n = len(rs)
            if n and (best_n is None or n < best_n or (n == best_n and c < best_c)):
                best_c, best_n = c, n
                if n == 1:
                    break
        if best_c is None:
            break
        c = best_c
        rs = col_rows[c]
        pr = min(rs, key=lambda i: (len(rows[i]), i))
        prow = rows[pr]
        pval = prow[c]
        rank += 1
        for i in list(rs):
            if i == pr:
                continue
            r = rows[i]
            f = r[c] / pval
            for cc, v in prow.items():
                cur = r.get(cc)
                nv = (cur - f * v) if cur is not None else -f * v
                if nv:
                    if cur is None:
                        col_rows.setdefault(cc, set()).add(i)
                    r[cc] = nv
                elif cur is not None:
                    del r[cc]
                    col_rows[cc].discard(i)
        for cc in prow:
            s = col_rows.get(cc)
            if s is not None:
                s.discard(pr)
                if not s:
                    del col_rows[cc]
        rows[pr] = {}
    return rank


def span_dim(field, vectors, length: int) -> int:
    """Dimension of the span of the given vectors inside k^length."""
    return RowSpace(field, length, vectors).dim
