"""Exact scalars, matrices and linear algebra over the Gaussian rationals Q(i).

Nothing in here ever touches a float.  Vectors are plain tuples of
`GaussianRational`; matrices are `ExactMatrix`; subspaces are kept in
reduced row echelon form so that membership and coordinates are cheap.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, FormatError


def frac_str(x: Fraction) -> str:
    """Render a rational as the canonical "p/q" string (q > 0)."""
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text) -> Fraction:
    if isinstance(text, bool):
        raise FormatError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise FormatError(f"rationals must be strings like 'p/q', got {text!r}")
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"not a rational: {text!r}") from exc
    if "." in text or "e" in text.lower():
        raise FormatError(f"decimal notation is not exact input: {text!r}")
    return value


class GaussianRational:
    """The number re + im*i with re, im rational."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @staticmethod
    def coerce(x) -> "GaussianRational":
        if type(x) is GaussianRational:
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        if isinstance(x, complex):
            raise TypeError("floating point complex numbers are not exact")
        raise TypeError(f"cannot use {type(x).__name__} as a Gaussian rational")

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if type(other) is not GaussianRational:
            if isinstance(other, (int, Fraction)):
                return self.im == 0 and self.re == other
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational(a * c)
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def inverse(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(self.re / norm, -self.im / norm)

    def conjugate(self) -> "GaussianRational":
        if not self.im:
            return self
        return GaussianRational(self.re, -self.im)

    def to_json(self) -> list:
        return [frac_str(self.re), frac_str(self.im)]

    @staticmethod
    def from_json(data) -> "GaussianRational":
        if isinstance(data, list) and len(data) == 2:
            return GaussianRational(parse_frac(data[0]), parse_frac(data[1]))
        if isinstance(data, (str, int)) and not isinstance(data, bool):
            return GaussianRational(parse_frac(data))
        raise FormatError(f"expected [re, im] pair of fraction strings, got {data!r}")

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _coerce_or_none(x):
    if type(x) is GaussianRational:
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return GaussianRational(x)
    return None


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def gr(x) -> GaussianRational:
    return GaussianRational.coerce(x)


# ---------------------------------------------------------------------------
# matrices


class ExactMatrix:
    """Dense rows x cols matrix over Q(i), immutable, row-major."""

    __slots__ = ("rows", "cols", "entries", "_hash", "_row_nz")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(gr(x) for x in entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise DimensionError(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._hash = None
        self._row_nz = None

    @classmethod
    def _trusted(cls, rows: int, cols: int, entries) -> "ExactMatrix":
        """Skip coercion for entries already known to be Gaussian rationals."""
        m = object.__new__(cls)
        m.rows, m.cols, m.entries = rows, cols, tuple(entries)
        m._hash = None
        m._row_nz = None
        return m

    # construction helpers
    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return ExactMatrix(len(rows), ncols, [x for r in rows for x in r])

    @staticmethod
    def zero(rows: int, cols: int | None = None) -> "ExactMatrix":
        cols = rows if cols is None else cols
        return ExactMatrix(rows, cols, [ZERO] * (rows * cols))

    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        return ExactMatrix(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    @staticmethod
    def unit(n: int, i: int, j: int, cols: int | None = None) -> "ExactMatrix":
        """Matrix unit e_ij (0-based indices)."""
        cols = n if cols is None else cols
        entries = [ZERO] * (n * cols)
        entries[i * cols + j] = ONE
        return ExactMatrix(n, cols, entries)

    @staticmethod
    def diagonal(values: Sequence) -> "ExactMatrix":
        n = len(values)
        entries = [ZERO] * (n * n)
        for i, v in enumerate(values):
            entries[i * n + i] = gr(v)
        return ExactMatrix(n, n, entries)

    @staticmethod
    def from_sparse(rows: int, cols: int, items: dict) -> "ExactMatrix":
        entries = [ZERO] * (rows * cols)
        for (i, j), v in items.items():
            entries[i * cols + j] = gr(v)
        return ExactMatrix(rows, cols, entries)

    # access
    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def _nonzero_rows(self):
        if self._row_nz is None:
            c = self.cols
            e = self.entries
            self._row_nz = tuple(
                tuple((j, e[i * c + j]) for j in range(c) if e[i * c + j])
                for i in range(self.rows)
            )
        return self._row_nz

    # arithmetic
    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_shape(other)
        return ExactMatrix._trusted(self.rows, self.cols, [a + b if b else a for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_shape(other)
        return ExactMatrix._trusted(self.rows, self.cols, [a - b if b else a for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return ExactMatrix._trusted(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "ExactMatrix":
        c = gr(c)
        return ExactMatrix._trusted(self.rows, self.cols, [c * a if a else ZERO for a in self.entries])

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            return self.matmul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __matmul__(self, other):
        return self.matmul(other)

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        n, m = self.rows, other.cols
        out = [None] * (n * m)
        b_rows = other._nonzero_rows()
        for i, arow in enumerate(self._nonzero_rows()):
            acc = {}
            for k, a in arow:
                for j, b in b_rows[k]:
                    prod = a * b
                    if j in acc:
                        acc[j] = acc[j] + prod
                    else:
                        acc[j] = prod
            base = i * m
            for j in range(m):
                out[base + j] = acc.get(j, ZERO)
        return ExactMatrix._trusted(n, m, out)

    def adjoint(self) -> "ExactMatrix":
        r, c = self.rows, self.cols
        e = self.entries
        return ExactMatrix._trusted(c, r, [e[i * c + j].conjugate() for j in range(c) for i in range(r)])

    @property
    def H(self):
        return self.adjoint()

    def transpose(self) -> "ExactMatrix":
        r, c = self.rows, self.cols
        e = self.entries
        return ExactMatrix._trusted(c, r, [e[i * c + j] for j in range(c) for i in range(r)])

    def commutes_with(self, other: "ExactMatrix") -> bool:
        return self.matmul(other) == other.matmul(self)

    def apply(self, vector: Sequence) -> tuple:
        if len(vector) != self.cols:
            raise DimensionError("vector length does not match matrix")
        out = []
        for arow in self._nonzero_rows():
            acc = ZERO
            for k, a in arow:
                v = vector[k]
                if v:
                    acc = acc + a * v
            out.append(acc)
        return tuple(out)

    def flat(self) -> tuple:
        return self.entries

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    # comparison and identity
    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.entries))
        return self._hash

    def sort_key(self) -> tuple:
        """Canonical lexicographic key on the flattened entries."""
        return (self.rows, self.cols) + tuple(
            (x.re, x.im) for x in self.entries
        )

    # serialization
    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [x.to_json() for x in self.entries],
        }

    @staticmethod
    def from_json(data) -> "ExactMatrix":
        if not isinstance(data, dict) or not {"rows", "cols", "entries"} <= set(data):
            raise FormatError("matrix JSON needs rows, cols and entries")
        rows, cols = data["rows"], data["cols"]
        if not isinstance(rows, int) or not isinstance(cols, int):
            raise FormatError("rows and cols must be integers")
        entries = data["entries"]
        if not isinstance(entries, list) or len(entries) != rows * cols:
            raise FormatError(f"expected {rows * cols} entries")
        return ExactMatrix(rows, cols, [GaussianRational.from_json(x) for x in entries])

    def __repr__(self):
        return f"ExactMatrix({self.to_rows()!r})"


# ---------------------------------------------------------------------------
# vectors and subspaces


def vzero(n: int) -> tuple:
    return (ZERO,) * n


def vadd(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v) -> tuple:
    c = gr(c)
    if not c:
        return (ZERO,) * len(v)
    return tuple(c * a if a else ZERO for a in v)


def vconj(v) -> tuple:
    return tuple(a.conjugate() for a in v)


def vcombine(coeffs, vectors, n: int) -> tuple:
    """Linear combination sum c_i v_i of length-n vectors."""
    acc = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if not c:
            continue
        for k, a in enumerate(v):
            if a:
                acc[k] = acc[k] + c * a
    return tuple(acc)


def unit_vector(n: int, i: int) -> tuple:
    return tuple(ONE if k == i else ZERO for k in range(n))


def is_zero_vector(v) -> bool:
    return not any(v)


class Subspace:
    """A subspace of Q(i)^n kept as a fully reduced row echelon basis.

    The coordinates of a member v with respect to `basis` are simply the
    entries of v at the pivot columns, which keeps membership tests and
    coordinate extraction to one reduction pass.
    """

    __slots__ = ("n", "_rows", "_pivots", "_nz")

    def __init__(self, n: int, vectors: Iterable = ()):
        self.n = n
        self._rows: list = []
        self._pivots: list = []
        self._nz: list = []     # nonzero (column, entry) pairs of each row
        for v in vectors:
            self.add(v)

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def basis(self) -> tuple:
        return tuple(self._rows)

    @property
    def pivots(self) -> tuple:
        return tuple(self._pivots)

    def copy(self) -> "Subspace":
        s = Subspace(self.n)
        s._rows = list(self._rows)
        s._pivots = list(self._pivots)
        s._nz = list(self._nz)
        return s

    def _reduce(self, v) -> list:
        w = list(v)
        for nz, p in zip(self._nz, self._pivots):
            c = w[p]
            if c:
                for k, a in nz:
                    w[k] = w[k] - c * a
        return w

    def residual(self, v) -> tuple:
        if len(v) != self.n:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {self.n}")
        return tuple(self._reduce(v))

    def contains(self, v) -> bool:
        return not any(self.residual(v))

    __contains__ = contains

    def add(self, v) -> bool:
        """Extend the span by v; returns True when the dimension grew."""
        if len(v) != self.n:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {self.n}")
        w = self._reduce(v)
        p = next((k for k, a in enumerate(w) if a), None)
        if p is None:
            return False
        inv = w[p].inverse()
        w = [a * inv if a else ZERO for a in w]
        # clear the new pivot column from the existing rows
        w_nz = tuple((k, a) for k, a in enumerate(w) if a)
        for idx, row in enumerate(self._rows):
            c = row[p]
            if c:
                new = list(row)
                for k, b in w_nz:
                    new[k] = new[k] - c * b
                self._rows[idx] = tuple(new)
                self._nz[idx] = tuple((k, a) for k, a in enumerate(new) if a)
        pos = 0
        while pos < len(self._pivots) and self._pivots[pos] < p:
            pos += 1
        self._rows.insert(pos, tuple(w))
        self._pivots.insert(pos, p)
        self._nz.insert(pos, w_nz)
        return True

    def coordinates(self, v) -> tuple | None:
        """Coordinates of v in `basis`, or None when v is not in the span."""
        if not self.contains(v):
            return None
        return tuple(v[p] for p in self._pivots)

    def from_coordinates(self, coords) -> tuple:
        return vcombine(coords, self._rows, self.n)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self._rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self._pivots == other._pivots and self._rows == other._rows

    def __hash__(self):
        return hash((self.n, tuple(self._rows)))

    def sum(self, other: "Subspace") -> "Subspace":
        s = self.copy()
        for v in other._rows:
            s.add(v)
        return s

    def intersection(self, other: "Subspace") -> "Subspace":
        # solve sum a_i u_i = sum b_j w_j; the kernel gives the intersection
        cols = list(self._rows) + [tuple(-a for a in w) for w in other._rows]
        if not cols:
            return Subspace(self.n)
        kernel = nullspace_of_columns(cols, self.n)
        k = len(self._rows)
        return Subspace(self.n, [vcombine(z[:k], self._rows, self.n) for z in kernel])

    def __repr__(self):
        return f"Subspace(n={self.n}, dim={self.dim})"


def span(n: int, vectors: Iterable) -> Subspace:
    return Subspace(n, vectors)


def rank(vectors: Sequence, n: int | None = None) -> int:
    vectors = list(vectors)
    if not vectors:
        return 0
    return Subspace(n if n is not None else len(vectors[0]), vectors).dim


def rref(rows: Sequence, n: int) -> tuple:
    """Reduced row echelon basis of the row space, plus pivot columns."""
    s = Subspace(n, rows)
    return s.basis, s.pivots


def nullspace_of_columns(columns: Sequence, n: int) -> list:
    """Basis of {c : sum_i c_i columns[i] = 0}."""
    m = len(columns)
    # rows of the n x m matrix whose columns are `columns`
    rows = [tuple(columns[j][i] for j in range(m)) for i in range(n)]
    return nullspace(rows, m)


def nullspace(rows: Sequence, m: int) -> list:
    """Basis of {x in Q(i)^m : row . x = 0 for every row}."""
    basis, pivots = rref(rows, m)
    free = [j for j in range(m) if j not in set(pivots)]
    out = []
    for f in free:
        x = [ZERO] * m
        x[f] = ONE
        for row, p in zip(basis, pivots):
            c = row[f]
            if c:
                x[p] = -c
        out.append(tuple(x))
    return out


def solve(vectors: Sequence, target, n: int) -> tuple | None:
    """Coefficients c with sum c_i vectors[i] = target, or None.

    When the vectors are dependent an arbitrary solution is returned.
    """
    m = len(vectors)
    # augment: track combinations alongside reduction
    aug = []
    for i, v in enumerate(vectors):
        aug.append(tuple(v) + unit_vector(m, i))
    space = Subspace(n + m, aug)
    # reduce (target, 0): if the first n entries vanish, the tail holds -coeffs
    probe = space.residual(tuple(target) + vzero(m))
    if any(probe[:n]):
        return None
    return tuple(-a for a in probe[n:])


def matrix_rank(m: ExactMatrix) -> int:
    return rank([m.row(i) for i in range(m.rows)], m.cols)


def hermitian_signature(h: ExactMatrix) -> tuple:
    """(positive semidefinite?, rank) of a Hermitian matrix by exact LDL* elimination."""
    if not h.is_square() or h != h.adjoint():
        raise DimensionError("matrix is not Hermitian")
    n = h.rows
    a = h.to_rows()
    rank = 0
    for k in range(n):
        d = a[k][k]
        if d.im:
            raise DimensionError("matrix is not Hermitian")
        if d.re < 0:
            return False, None
        if d.re == 0:
            if any(a[k][j] for j in range(k + 1, n)):
                return False, None
            continue
        rank += 1
        inv = d.inverse()
        for i in range(k + 1, n):
            f = a[i][k]
            if not f:
                continue
            f = f * inv
            for j in range(k + 1, n):
                if a[k][j]:
                    a[i][j] = a[i][j] - f * a[k][j]
    return True, rank


def is_positive_definite(h: ExactMatrix) -> bool:
    psd, r = hermitian_signature(h)
    return psd and r == h.rows
