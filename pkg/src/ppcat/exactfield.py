"""Exact field arithmetic and dense linear algebra kernels.

Scalars are either `fractions.Fraction` (rationals) or `FpInt` (prime
fields); both support the arithmetic operators, truthiness as a zero
test, equality and hashing, so the matrix code below is field-agnostic.
All values are immutable after construction and every operation is pure.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, ParseError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FpInt:
    """An element of F_p.  Immutable; arithmetic stays inside one prime."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        object.__setattr__(self, "v", v % p)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("FpInt is immutable")

    def _lift(self, other) -> "FpInt":
        if isinstance(other, FpInt):
            if other.p != self.p:
                raise DomainError(f"mixed primes {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return FpInt(other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else FpInt(self.v + o.v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else FpInt(self.v - o.v, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else FpInt(o.v - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else FpInt(self.v * o.v, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpInt(self.v * pow(o.v, self.p - 2, self.p), self.p)

    def __neg__(self):
        return FpInt(-self.v, self.p)

    def __eq__(self, other):
        if isinstance(other, FpInt):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}"


class FieldSpec:
    """Base class for the two supported exact fields."""

    char: int

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def parse(self, token: str):
        """Parse a scalar token: an integer or `a/b`."""
        token = token.strip()
        try:
            if "/" in token:
                num, den = token.split("/")
                return self.from_int(int(num)) / self.from_int(int(den))
            return self.from_int(int(token))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad scalar token {token!r}") from exc

    def format(self, x) -> str:
        return str(x)


class Rationals(FieldSpec):
    char = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n: int):
        return Fraction(n)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField(FieldSpec):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise DomainError(f"{p} is not prime")
        self.p = p
        self.char = p

    def zero(self):
        return FpInt(0, self.p)

    def one(self):
        return FpInt(1, self.p)

    def from_int(self, n: int):
        return FpInt(n, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"F{self.p}"


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> FieldSpec:
    name = name.strip()
    if name in ("Q", "QQ", "rationals"):
        return QQ
    if name.startswith("F") and name[1:].isdigit():
        return GF(int(name[1:]))
    raise ParseError(f"unknown field {name!r} (use Q or F<p>)")


class Matrix:
    """Dense exact matrix over a FieldSpec.

    Stored row-major.  Treated as immutable: no method mutates `self`.
    Zero-row and zero-column shapes are legal everywhere.
    """

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: FieldSpec, rows: int, cols: int, data):
        if rows < 0 or cols < 0:
            raise DomainError("negative matrix dimension")
        if len(data) != rows or any(len(r) != cols for r in data):
            raise DomainError("matrix data does not match declared shape")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = [list(r) for r in data]

    # -- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        z = field.zero()
        return cls(field, rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero(), field.one()
        return cls(field, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def from_int_rows(cls, field: FieldSpec, rows) -> "Matrix":
        conv = field.from_int
        return cls.from_rows(field, [[conv(x) for x in r] for r in rows])

    @classmethod
    def column(cls, field: FieldSpec, entries) -> "Matrix":
        return cls(field, len(entries), 1, [[e] for e in entries])

    # -- basics -------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in row) for row in self.data)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def is_zero(self) -> bool:
        return all(not x for row in self.data for x in row)

    def copy_data(self):
        return [list(r) for r in self.data]

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            self.field,
            self.rows,
            self.cols,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            self.field,
            self.rows,
            self.cols,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
        )

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, [[-a for a in r] for r in self.data])

    def scale(self, c) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, [[c * a for a in r] for r in self.data])

    def __mul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DomainError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
        z = self.field.zero()
        out = [[z] * other.cols for _ in range(self.rows)]
        for i in range(self.rows):
            row = self.data[i]
            orow = out[i]
            for k in range(self.cols):
                a = row[k]
                if not a:
                    continue
                brow = other.data[k]
                for j in range(other.cols):
                    b = brow[j]
                    if b:
                        orow[j] = orow[j] + a * b
        return Matrix(self.field, self.rows, other.cols, out)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            self.cols,
            self.rows,
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def _same_shape(self, other: "Matrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise DomainError("shape mismatch")

    def col(self, j: int) -> "Matrix":
        return Matrix(self.field, self.rows, 1, [[self.data[i][j]] for i in range(self.rows)])

    def take_cols(self, js) -> "Matrix":
        return Matrix(self.field, self.rows, len(js), [[r[j] for j in js] for r in self.data])

    def take_rows(self, idx) -> "Matrix":
        return Matrix(self.field, len(idx), self.cols, [list(self.data[i]) for i in idx])

    def column_vector(self, j: int) -> list:
        return [self.data[i][j] for i in range(self.rows)]

    # -- elimination-based kernels -------------------------------------
    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form with the strictly increasing pivot list.

        Pivoting is deterministic (first nonzero entry top-down), so the
        output is reproducible bit for bit.
        """
        m = self.copy_data()
        rows, cols = self.rows, self.cols
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            pr = None
            for i in range(r, rows):
                if m[i][c]:
                    pr = i
                    break
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            pv = m[r][c]
            if pv != self.field.one():
                inv_row = m[r]
                m[r] = [x / pv for x in inv_row]
            for i in range(rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    ri, rr = m[i], m[r]
                    m[i] = [a - f * b for a, b in zip(ri, rr)]
            pivots.append(c)
            r += 1
            if r == rows:
                break
        return Matrix(self.field, rows, cols, m), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "Matrix":
        """Columns form a basis of the right null space (deterministic order)."""
        R, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        z, o = self.field.zero(), self.field.one()
        cols = []
        for fc in free:
            v = [z] * self.cols
            v[fc] = o
            for r, pc in enumerate(pivots):
                v[pc] = -R.data[r][fc]
            cols.append(v)
        return Matrix(self.field, self.cols, len(cols), [[col[i] for col in cols] for i in range(self.cols)])

    def solve(self, b: "Matrix") -> "Matrix | None":
        """A particular solution x of self*x = b, or None when inconsistent.

        Free variables are set to zero after row reduction, so the result
        is deterministic; when self has full column rank it is unique.
        """
        if b.rows != self.rows:
            raise DomainError("solve: right-hand side row count mismatch")
        aug = hstack([self, b])
        R, pivots = aug.rref()
        for p in pivots:
            if p >= self.cols:
                return None
        z = self.field.zero()
        out = [[z] * b.cols for _ in range(self.cols)]
        for r, pc in enumerate(pivots):
            for j in range(b.cols):
                out[pc][j] = R.data[r][self.cols + j]
        return Matrix(self.field, self.cols, b.cols, out)

    def inverse(self) -> "Matrix | None":
        if self.rows != self.cols:
            return None
        x = self.solve(Matrix.identity(self.field, self.rows))
        if x is None:
            return None
        return x if (self * x) == Matrix.identity(self.field, self.rows) else None

    def column_space_basis(self) -> "Matrix":
        """The subset of columns forming a basis of the column space,
        chosen greedily left to right (deterministic)."""
        _, pivots = self.rref()
        # pivots of self give independent-row info; for columns use transpose trick
        # Columns are independent exactly at pivot columns of self's rref.
        return self.take_cols(pivots)


def hstack(mats: list[Matrix]) -> Matrix:
    if not mats:
        raise DomainError("hstack of empty list")
    rows = mats[0].rows
    field = mats[0].field
    if any(m.rows != rows for m in mats):
        raise DomainError("hstack: row mismatch")
    data = [sum((list(m.data[i]) for m in mats), []) for i in range(rows)]
    return Matrix(field, rows, sum(m.cols for m in mats), data)


def vstack(mats: list[Matrix]) -> Matrix:
    if not mats:
        raise DomainError("vstack of empty list")
    cols = mats[0].cols
    field = mats[0].field
    if any(m.cols != cols for m in mats):
        raise DomainError("vstack: column mismatch")
    data = []
    for m in mats:
        data.extend([list(r) for r in m.data])
    return Matrix(field, sum(m.rows for m in mats), cols, data)


def block_diag(field: FieldSpec, mats: list[Matrix]) -> Matrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = Matrix.zeros(field, rows, cols).copy_data()
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            out[r0 + i][c0 : c0 + m.cols] = list(m.data[i])
        r0 += m.rows
        c0 += m.cols
    return Matrix(field, rows, cols, out)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; (i*b.rows+k, j*b.cols+l) entry is a[i,j]*b[k,l]."""
    z = a.field.zero()
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    out = [[z] * cols for _ in range(rows)]
    for i in range(a.rows):
        for j in range(a.cols):
            x = a.data[i][j]
            if not x:
                continue
            for k in range(b.rows):
                br = b.data[k]
                orow = out[i * b.rows + k]
                for l in range(b.cols):
                    if br[l]:
                        orow[j * b.cols + l] = x * br[l]
    return Matrix(a.field, rows, cols, out)


def span_contains(basis: Matrix, vectors: Matrix) -> bool:
    """Is every column of `vectors` in the column span of `basis`?  Exact."""
    if vectors.cols == 0:
        return True
    return basis.solve(vectors) is not None


def same_span(a: Matrix, b: Matrix) -> bool:
    return span_contains(a, b) and span_contains(b, a)


def extend_to_basis(inner: Matrix, outer: Matrix) -> Matrix:
    """Columns of `outer` (taken left to right) that extend the column span
    of `inner` to the span of [inner | outer]; deterministic."""
    current = inner
    picked = []
    for j in range(outer.cols):
        v = outer.col(j)
        if current.solve(v) is None:
            picked.append(j)
            current = hstack([current, v])
    return outer.take_cols(picked)
