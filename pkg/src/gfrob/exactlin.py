"""Exact dense linear algebra over the rationals or a prime field.

Scalars over Q are ``fractions.Fraction`` values; over F_p they are plain
ints in ``[0, p)``.  A :class:`Field` knows how to normalise, parse and print
its scalars, and every :class:`Matrix` carries its field so that mixed-field
arithmetic is refused instead of silently coerced.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import FieldMismatch, InvalidParams, ParseError, ShapeMismatch


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """p == 0 means Q, otherwise F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise InvalidParams(f"field characteristic {self.p} is not prime")

    @property
    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def __call__(self, x):
        """Coerce an int, Fraction or string to a scalar of this field."""
        if isinstance(x, str):
            return self.parse(x)
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def parse(self, s: str):
        try:
            q = Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad scalar {s!r}: {exc}") from None
        if self.p and q.denominator % self.p == 0:
            raise ParseError(f"scalar {s!r} has a denominator divisible by {self.p}")
        return self(q)

    def fmt(self, x) -> str:
        return str(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return 1 / x
        return pow(x, self.p - 2, self.p)

    def name(self) -> str:
        return "Q" if self.p == 0 else f"F{self.p}"

    def to_json(self):
        return "Q" if self.p == 0 else {"Fp": self.p}


QQ = Field(0)


def _check_field(a: "Matrix", b: "Matrix"):
    if a.field != b.field:
        raise FieldMismatch(f"cannot combine {a.field.name()} and {b.field.name()} matrices")


class Matrix:
    """Immutable dense matrix; ``rows`` is a tuple of row tuples."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows, ncols: int | None = None, _trusted=False):
        if _trusted:
            rows = tuple(rows)
        else:
            rows = tuple(tuple(field(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ShapeMismatch("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ShapeMismatch(f"ragged row of length {len(r)}, expected {ncols}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, k, v):
        raise AttributeError("Matrix is immutable")

    # constructors
    @classmethod
    def zeros(cls, field: Field, r: int, c: int) -> "Matrix":
        z = field.zero
        return cls(field, [(z,) * c for _ in range(r)], c, _trusted=True)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, [tuple(o if i == j else z for j in range(n)) for i in range(n)], n, _trusted=True)

    @classmethod
    def column(cls, field: Field, vec) -> "Matrix":
        return cls(field, [(field(x),) for x in vec], 1, _trusted=True)

    # basics
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.fmt(x) for x in r) for r in self.rows)
        return f"Matrix<{self.field.name()} {self.nrows}x{self.ncols}>[{body}]"

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and self == Matrix.identity(self.field, self.nrows)

    def col(self, j: int):
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.rows)) if self.nrows else [], self.nrows, _trusted=True) \
            if self.ncols else Matrix(self.field, [], self.nrows, _trusted=True)

    # arithmetic
    def __add__(self, other: "Matrix") -> "Matrix":
        _check_field(self, other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"add {self.shape} vs {other.shape}")
        p = self.field.p
        if p:
            rows = [tuple((a + b) % p for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)]
        else:
            rows = [tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)]
        return Matrix(self.field, rows, self.ncols, _trusted=True)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        p = self.field.p
        if p:
            rows = [tuple((c * a) % p for a in r) for r in self.rows]
        else:
            rows = [tuple(c * a for a in r) for r in self.rows]
        return Matrix(self.field, rows, self.ncols, _trusted=True)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        _check_field(self, other)
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"matmul {self.shape} @ {other.shape}")
        p = self.field.p
        z = self.field.zero
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a != 0]
            row = []
            for c in cols:
                s = z
                for k, a in nz:
                    b = c[k]
                    if b:
                        s += a * b
                row.append(s % p if p else s)
            out.append(tuple(row))
        return Matrix(self.field, out, other.ncols, _trusted=True)

    def apply(self, vec) -> tuple:
        """Matrix times a vector given as a sequence."""
        if len(vec) != self.ncols:
            raise ShapeMismatch(f"apply {self.shape} to vector of length {len(vec)}")
        p = self.field.p
        z = self.field.zero
        out = []
        for r in self.rows:
            s = z
            for a, b in zip(r, vec):
                if a and b:
                    s += a * b
            out.append(s % p if p else s)
        return tuple(out)

    def kron(self, other: "Matrix") -> "Matrix":
        _check_field(self, other)
        p = self.field.p
        rows = []
        for r in self.rows:
            for s in other.rows:
                row = []
                for a in r:
                    for b in s:
                        v = a * b
                        row.append(v % p if p else v)
                rows.append(tuple(row))
        return Matrix(self.field, rows, self.ncols * other.ncols, _trusted=True)

    def hstack(self, other: "Matrix") -> "Matrix":
        _check_field(self, other)
        if self.nrows != other.nrows:
            raise ShapeMismatch(f"hstack {self.shape} | {other.shape}")
        return Matrix(self.field, [r + s for r, s in zip(self.rows, other.rows)],
                      self.ncols + other.ncols, _trusted=True)

    def vstack(self, other: "Matrix") -> "Matrix":
        _check_field(self, other)
        if self.ncols != other.ncols:
            raise ShapeMismatch(f"vstack {self.shape} / {other.shape}")
        return Matrix(self.field, self.rows + other.rows, self.ncols, _trusted=True)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, [tuple(self.rows[i][j] for j in cols) for i in rows], len(cols), _trusted=True)

    def rank(self) -> int:
        return len(rref(self)[1])

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ShapeMismatch(f"inverse of non-square {self.shape}")
        n = self.nrows
        aug = self.hstack(Matrix.identity(self.field, n))
        r, piv = rref(aug)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return r.submatrix(range(n), range(n, 2 * n))

    def to_json(self):
        return [[self.field.fmt(x) for x in r] for r in self.rows]


def vstack_all(field: Field, mats: Sequence[Matrix], ncols: int) -> Matrix:
    rows = []
    for m in mats:
        if m.field != field:
            raise FieldMismatch("mixed fields in vstack")
        if m.ncols != ncols:
            raise ShapeMismatch(f"vstack width {m.ncols} != {ncols}")
        rows.extend(m.rows)
    return Matrix(field, rows, ncols, _trusted=True)


def block_diag(field: Field, mats: Sequence[Matrix]) -> Matrix:
    total_c = sum(m.ncols for m in mats)
    rows = []
    off = 0
    z = field.zero
    for m in mats:
        left = (z,) * off
        right = (z,) * (total_c - off - m.ncols)
        for r in m.rows:
            rows.append(left + r + right)
        off += m.ncols
    return Matrix(field, rows, total_c, _trusted=True)


# ---------------------------------------------------------------------------
# row reduction

def rref(m: Matrix, record: bool = False):
    """Reduced row-echelon form and pivot columns.

    With ``record=True`` also return the row operations, as tuples
    ``("swap", i, j)``, ``("scale", i, c)`` or ``("add", i, j, c)`` (row i += c*row j),
    in the order they were applied.
    """
    f = m.field
    p = f.p
    if p == 0 and not record:
        return _rref_rational(m)
    a = [list(r) for r in m.rows]
    nr, nc = m.nrows, m.ncols
    pivots = []
    ops = []
    row = 0
    for col in range(nc):
        if row >= nr:
            break
        sel = None
        for i in range(row, nr):
            if a[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        if sel != row:
            a[row], a[sel] = a[sel], a[row]
            if record:
                ops.append(("swap", row, sel))
        piv = a[row][col]
        if piv != f.one:
            c = f.inv(piv)
            a[row] = [(c * x) % p if p else c * x for x in a[row]]
            if record:
                ops.append(("scale", row, c))
        prow = a[row]
        nzc = [j for j in range(col, nc) if prow[j] != 0]
        for i in range(nr):
            if i != row and a[i][col] != 0:
                c = -a[i][col]
                ri = a[i]
                for j in nzc:
                    v = ri[j] + c * prow[j]
                    ri[j] = v % p if p else v
                if record:
                    ops.append(("add", i, row, c % p if p else c))
        pivots.append(col)
        row += 1
    out = Matrix(f, [tuple(r) for r in a], nc, _trusted=True)
    if record:
        return out, pivots, ops
    return out, pivots


def _primitive(row):
    g = 0
    for x in row:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                return row
    return [x // g for x in row] if g > 1 else row


def _rref_rational(m: Matrix):
    # fraction-free elimination on integer rows; the RREF is unique, so dividing
    # by the pivots at the end gives the same result as exact Fraction arithmetic
    nr, nc = m.nrows, m.ncols
    a = []
    for r in m.rows:
        den = 1
        for x in r:
            if x.denominator != 1:
                den = den * x.denominator // math.gcd(den, x.denominator)
        a.append(_primitive([int(x * den) for x in r]))
    pivots = []
    row = 0
    for col in range(nc):
        if row >= nr:
            break
        sel = next((i for i in range(row, nr) if a[i][col]), None)
        if sel is None:
            continue
        a[row], a[sel] = a[sel], a[row]
        prow = a[row]
        pv = prow[col]
        nzc = [j for j in range(col, nc) if prow[j]]
        for i in range(nr):
            c = a[i][col]
            if i != row and c:
                ri = [pv * x for x in a[i]]
                for j in nzc:
                    ri[j] -= c * prow[j]
                a[i] = _primitive(ri)
        pivots.append(col)
        row += 1
    out = []
    for i, r in enumerate(a):
        if i < len(pivots):
            pv = r[pivots[i]]
            out.append(tuple(Fraction(x, pv) for x in r))
        else:
            out.append(tuple(Fraction(0) for _ in r))
    return Matrix(m.field, out, nc, _trusted=True), pivots


def elementary(field: Field, n: int, op) -> Matrix:
    """Matrix of one recorded row operation acting on n rows."""
    e = [list(r) for r in Matrix.identity(field, n).rows]
    if op[0] == "swap":
        _, i, j = op
        e[i], e[j] = e[j], e[i]
    elif op[0] == "scale":
        _, i, c = op
        e[i][i] = field(c)
    elif op[0] == "add":
        _, i, j, c = op
        e[i][j] = field(c)
    else:
        raise ValueError(op)
    return Matrix(field, [tuple(r) for r in e], n, _trusted=True)


def kernel_basis(m: Matrix) -> Matrix:
    """Rows spanning {x : m x = 0}; one row per free column."""
    f = m.field
    r, piv = rref(m)
    pivset = set(piv)
    free = [j for j in range(m.ncols) if j not in pivset]
    z = f.zero
    p = f.p
    rows = []
    for j in free:
        v = [z] * m.ncols
        v[j] = f.one
        for i, pc in enumerate(piv):
            x = -r.rows[i][j]
            v[pc] = x % p if p else x
        rows.append(tuple(v))
    return Matrix(f, rows, m.ncols, _trusted=True)


def solve_linear(a: Matrix, b) -> tuple | None:
    """Some x with a x = b, or None if the system is inconsistent."""
    if len(b) != a.nrows:
        raise ShapeMismatch(f"rhs length {len(b)} != {a.nrows} rows")
    f = a.field
    aug = a.hstack(Matrix.column(f, b))
    r, piv = rref(aug)
    if piv and piv[-1] == a.ncols:
        return None
    x = [f.zero] * a.ncols
    for i, pc in enumerate(piv):
        x[pc] = r.rows[i][a.ncols]
    return tuple(x)


class Subspace:
    """A subspace of field^ambient_dim with an RREF basis (no zero rows)."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: Field, ambient_dim: int, vectors=()):
        if isinstance(vectors, Matrix):
            m = vectors
        else:
            m = Matrix(field, [tuple(v) for v in vectors], ambient_dim)
        if m.ncols != ambient_dim:
            raise ShapeMismatch(f"vectors of length {m.ncols} in ambient {ambient_dim}")
        r, piv = rref(m)
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = r.submatrix(range(len(piv)), range(ambient_dim))
        self.pivots = piv

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def coords(self, v) -> tuple | None:
        """Coordinates of v in the RREF basis, or None if v is not in the span."""
        c = tuple(v[j] for j in self.pivots)
        p = self.field.p
        w = list(v)
        for ci, row in zip(c, self.basis.rows):
            if ci:
                for j, x in enumerate(row):
                    if x:
                        y = w[j] - ci * x
                        w[j] = y % p if p else y
        if any(x != 0 for x in w):
            return None
        return c

    def contains(self, v) -> bool:
        return self.coords(v) is not None

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis.rows)

    def intersect(self, other: "Subspace") -> "Subspace":
        # x = a B1 = b B2  <=>  [a, b] in kernel of [B1; -B2]^T
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.field, self.ambient_dim)
        stacked = self.basis.vstack(-other.basis)
        k = kernel_basis(stacked.T)
        a = k.submatrix(range(k.nrows), range(self.dim))
        return Subspace(self.field, self.ambient_dim, a @ self.basis)


def quotient_map(ambient_dim: int, sub: Subspace):
    """Projection onto field^(n - dim sub) with kernel ``sub`` and a section.

    The quotient coordinates are the non-pivot coordinates of a vector after
    reducing it against the RREF basis of ``sub``.
    """
    if sub.ambient_dim != ambient_dim:
        raise ShapeMismatch(f"subspace ambient {sub.ambient_dim} != {ambient_dim}")
    f = sub.field
    p = f.p
    pivset = set(sub.pivots)
    free = [j for j in range(ambient_dim) if j not in pivset]
    z = f.zero
    proj = []
    for j in free:
        row = [z] * ambient_dim
        row[j] = f.one
        for i, pc in enumerate(sub.pivots):
            x = -sub.basis.rows[i][j]
            row[pc] = x % p if p else x
        proj.append(tuple(row))
    projection = Matrix(f, proj, ambient_dim, _trusted=True)
    sec = [[z] * len(free) for _ in range(ambient_dim)]
    for k, j in enumerate(free):
        sec[j][k] = f.one
    section = Matrix(f, [tuple(r) for r in sec], len(free), _trusted=True)
    return projection, section
