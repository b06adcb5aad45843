"""Dense square matrices over a ring context, plus the field-level linear
algebra needed by the witness constructions: exact kernels, inverses, and
the basis flag that triangularizes a nilpotent matrix.

Matrix entries are :class:`~tracezero.polynomials.Poly` values sharing one
context. Division never happens at the matrix level; operations that need
it (kernels, inverses, flags) require constant entries and work on the
underlying field scalars.
"""

from __future__ import annotations

from .errors import (
    ContextMismatch,
    FieldMismatch,
    MalformedInput,
    NonConstantEntries,
    NotNilpotent,
    ShapeMismatch,
    SingularBasis,
)
from .fields import Field
from .polynomials import Poly, RingCtx, poly_from_json, poly_from_text, poly_to_text


class Matrix:
    """Immutable-by-convention n x n matrix over a single ring context."""

    __slots__ = ("ctx", "n", "rows")

    def __init__(self, ctx: RingCtx, rows: list[list[Poly]]):
        self.ctx = ctx
        self.n = len(rows)
        self.rows = rows

    @staticmethod
    def from_rows(ctx: RingCtx, rows) -> Matrix:
        """Build from any square nest of entries; ints, field scalars and
        text forms coerce to polynomials in ``ctx``."""
        n = len(rows)
        if n == 0:
            raise ShapeMismatch("matrices must have at least one row")
        out = []
        for r in rows:
            r = list(r)
            if len(r) != n:
                raise ShapeMismatch(f"expected {n}x{n}, got a row of length {len(r)}")
            out.append([Matrix._coerce_entry(ctx, e) for e in r])
        return Matrix(ctx, out)

    @staticmethod
    def _coerce_entry(ctx: RingCtx, e) -> Poly:
        if isinstance(e, Poly):
            if e.ctx != ctx:
                raise ContextMismatch(f"entry context {e.ctx} differs from {ctx}")
            return e
        if isinstance(e, str):
            return poly_from_text(ctx, e)
        return ctx.constant(e)

    @staticmethod
    def zeros(ctx: RingCtx, n: int) -> Matrix:
        return Matrix(ctx, [[ctx.zero() for _ in range(n)] for _ in range(n)])

    @staticmethod
    def identity(ctx: RingCtx, n: int) -> Matrix:
        return Matrix(
            ctx,
            [[ctx.one() if i == j else ctx.zero() for j in range(n)] for i in range(n)],
        )

    def entry(self, i: int, j: int) -> Poly:
        return self.rows[i][j]

    def _check_compatible(self, other: Matrix):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected a Matrix, got {type(other).__name__}")
        if self.ctx != other.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
        if self.n != other.n:
            raise ShapeMismatch(f"{self.n}x{self.n} vs {other.n}x{other.n}")

    def __add__(self, other):
        self._check_compatible(other)
        return Matrix(self.ctx, [
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)
        ])

    def __sub__(self, other):
        self._check_compatible(other)
        return Matrix(self.ctx, [
            [a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)
        ])

    def __neg__(self):
        return Matrix(self.ctx, [[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        self._check_compatible(other)
        n = self.n
        cols = [[other.rows[k][j] for k in range(n)] for j in range(n)]
        out = []
        for i in range(n):
            row_i = self.rows[i]
            out_row = []
            for j in range(n):
                acc = self.ctx.zero()
                for a, b in zip(row_i, cols[j]):
                    if a.terms and b.terms:
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return Matrix(self.ctx, out)

    def scale(self, c) -> Matrix:
        return Matrix(self.ctx, [[e.scale(c) for e in r] for r in self.rows])

    def trace(self) -> Poly:
        acc = self.ctx.zero()
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def is_constant(self) -> bool:
        return all(e.is_constant() for r in self.rows for e in r)

    def constant_rows(self) -> list[list]:
        """Field scalars of a constant matrix; NonConstantEntries otherwise."""
        out = []
        for i, r in enumerate(self.rows):
            row = []
            for j, e in enumerate(r):
                if not e.is_constant():
                    raise NonConstantEntries(f"entry ({i+1},{j+1}) = {e} is not constant")
                row.append(e.constant_value())
            out.append(row)
        return out

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ctx == other.ctx and self.n == other.n and self.rows == other.rows

    def __repr__(self):
        body = "; ".join(", ".join(poly_to_text(e) for e in r) for r in self.rows)
        return f"[{body}]"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "ctx": self.ctx.to_json(),
            "entries": [[poly_to_text(e) for e in r] for r in self.rows],
        }

    @staticmethod
    def from_json(obj, ctx: RingCtx | None = None) -> Matrix:
        if not isinstance(obj, dict) or "entries" not in obj:
            raise MalformedInput(f"bad matrix object {obj!r}")
        if ctx is None:
            if "ctx" not in obj:
                raise MalformedInput("matrix object lacks a ring context")
            ctx = RingCtx.from_json(obj["ctx"])
        entries = obj["entries"]
        n = obj.get("n", len(entries))
        if not isinstance(entries, list) or len(entries) != n:
            raise MalformedInput(f"matrix body does not match n={n}")
        rows = []
        for r in entries:
            if not isinstance(r, list) or len(r) != n:
                raise MalformedInput(f"matrix body does not match n={n}")
            row = []
            for e in r:
                if isinstance(e, dict):
                    row.append(poly_from_json(ctx, e))
                elif isinstance(e, str):
                    row.append(poly_from_text(ctx, e))
                elif isinstance(e, int) and not isinstance(e, bool):
                    row.append(ctx.constant(e))
                else:
                    raise MalformedInput(f"bad matrix entry {e!r}")
            rows.append(row)
        return Matrix(ctx, rows)


def commutator(a: Matrix, b: Matrix) -> Matrix:
    """[a, b] = a b - b a."""
    return a * b - b * a


def trace(a: Matrix) -> Poly:
    return a.trace()


# -- exact linear algebra over the coefficient field ------------------------


def _rref(field: Field, rows: list[list], ncols: int):
    """Reduced row echelon form in place on a copy; returns (rows, pivots).

    Pivots are chosen greedily in column order, which keeps every
    downstream basis choice deterministic.
    """
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if not field.is_zero(m[i][c]):
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(v, inv) for v in m[r]]
        for i in range(len(m)):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _kernel(field: Field, rows: list[list], ncols: int) -> list[list]:
    """Basis of the right kernel, one vector per free column, ascending."""
    rref, pivots = _rref(field, rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [field.zero()] * ncols
        v[free] = field.one()
        for r, c in enumerate(pivots):
            v[c] = field.neg(rref[r][free])
        basis.append(v)
    return basis


def _invert(field: Field, rows: list[list]):
    """Inverse by Gauss-Jordan on [rows | I]; None when singular."""
    n = len(rows)
    aug = [list(r) + [field.one() if i == j else field.zero() for j in range(n)]
           for i, r in enumerate(rows)]
    reduced, pivots = _rref(field, aug, n)
    if len(pivots) != n:
        return None
    return [r[n:] for r in reduced]


def kernel_basis(a: Matrix) -> list[list]:
    """Kernel of a constant matrix as a list of field-scalar vectors."""
    return _kernel(a.ctx.field, a.constant_rows(), a.n)


class FlagBasis:
    """An invertible change of basis over a field, stored row-wise.

    ``conjugate(g, a)`` computes g a g^{-1}; invertibility is checked at
    construction and the inverse cached.
    """

    __slots__ = ("field", "n", "rows", "_inv_rows")

    def __init__(self, field: Field, rows: list[list]):
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise ShapeMismatch("flag basis must be square")
        rows = [[field.coerce(v) for v in r] for r in rows]
        inv = _invert(field, rows)
        if inv is None:
            raise SingularBasis("basis matrix is singular")
        self.field = field
        self.n = n
        self.rows = rows
        self._inv_rows = inv

    def inverse(self) -> FlagBasis:
        return FlagBasis(self.field, self._inv_rows)

    def as_matrix(self, ctx: RingCtx) -> Matrix:
        if ctx.field != self.field:
            raise FieldMismatch(f"basis over {self.field}, context over {ctx.field}")
        return Matrix.from_rows(ctx, [[ctx.constant(v) for v in r] for r in self.rows])

    def inverse_matrix(self, ctx: RingCtx) -> Matrix:
        if ctx.field != self.field:
            raise FieldMismatch(f"basis over {self.field}, context over {ctx.field}")
        return Matrix.from_rows(ctx, [[ctx.constant(v) for v in r] for r in self._inv_rows])

    def __repr__(self):
        return f"FlagBasis({self.rows!r})"


def conjugate(g: FlagBasis, a: Matrix) -> Matrix:
    """g a g^{-1}; the division lives entirely inside g's cached inverse."""
    if g.n != a.n:
        raise ShapeMismatch(f"basis is {g.n}x{g.n}, matrix is {a.n}x{a.n}")
    return g.as_matrix(a.ctx) * a * g.inverse_matrix(a.ctx)


def _is_strictly_upper(a: Matrix) -> bool:
    return all(
        a.rows[i][j].is_zero() for i in range(a.n) for j in range(a.n) if j <= i
    )


def nilpotent_flag(a: Matrix) -> FlagBasis:
    """A basis g with g a g^{-1} strictly upper triangular.

    Builds the kernel filtration ker a <= ker a^2 <= ... and refines it to
    a full basis: vectors of the i-th layer land inside the span of the
    earlier ones under a, which is exactly strict triangularity. Kernel
    complements are picked greedily in the deterministic order the kernel
    bases come in.
    """
    field = a.ctx.field
    F = a.constant_rows()
    n = a.n

    # nilpotency first, by repeated squaring past n
    S = F
    e = 1
    while e < n:
        S = _field_matmul(field, S, S)
        e *= 2
    if any(not field.is_zero(v) for r in S for v in r):
        raise NotNilpotent(f"a^{e} != 0 for the {n}x{n} input")

    chosen: list[list] = []
    span_rows: list[list] = []  # row-echelon view of the chosen vectors

    def try_add(v) -> bool:
        w = list(v)
        for row in span_rows:
            lead = next(i for i, x in enumerate(row) if not field.is_zero(x))
            if not field.is_zero(w[lead]):
                f = field.div(w[lead], row[lead])
                w = [field.sub(x, field.mul(f, y)) for x, y in zip(w, row)]
        if all(field.is_zero(x) for x in w):
            return False
        span_rows.append(w)
        span_rows.sort(
            key=lambda r: next(i for i, x in enumerate(r) if not field.is_zero(x))
        )
        chosen.append(list(v))
        return True

    power = F
    while len(chosen) < n:
        for v in _kernel(field, power, n):
            if len(chosen) == n:
                break
            try_add(v)
        power = _field_matmul(field, power, F)

    # columns of p are the flag-adapted basis; g is its inverse
    p_rows = [[chosen[j][i] for j in range(n)] for i in range(n)]
    p_inv = _invert(field, p_rows)
    if p_inv is None:
        raise SingularBasis("flag refinement produced a singular basis")
    g = FlagBasis(field, p_inv)

    conj = conjugate(g, a)
    if not _is_strictly_upper(conj):
        raise NotNilpotent("flag conjugation did not triangularize the input")
    return g


def _field_matmul(field: Field, a: list[list], b: list[list]) -> list[list]:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = field.zero()
            for k in range(n):
                acc = field.add(acc, field.mul(a[i][k], b[k][j]))
            row.append(acc)
        out.append(row)
    return out
