"""Exact integer and rational matrix algebra.

Matrices are plain row-major sequences of sequences. Rational routines accept
ints or ``Fraction`` entries and always compute with ``Fraction``; integer
routines require ``int`` entries. Nothing in here touches floating point.

Where a matrix may have zero rows the column count cannot be inferred, so the
relevant functions take an explicit ``ncols`` keyword.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple
Matrix = Sequence[Sequence]


def shape(m: Matrix, ncols: int | None = None) -> tuple[int, int]:
    rows = len(m)
    if rows:
        cols = len(m[0])
        if any(len(row) != cols for row in m):
            raise ValueError("ragged matrix")
        if ncols is not None and ncols != cols:
            raise ValueError(f"expected {ncols} columns, got {cols}")
        return rows, cols
    return 0, ncols or 0


def to_fractions(m: Matrix) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in m]


def transpose(m: Matrix, ncols: int | None = None) -> list[list]:
    rows, cols = shape(m, ncols)
    return [[m[i][j] for i in range(rows)] for j in range(cols)]


def matmul(a: Matrix, b: Matrix) -> list[list]:
    inner = len(b)
    if a and len(a[0]) != inner:
        raise ValueError("shape mismatch")
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def matvec(a: Matrix, v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def rref(m: Matrix, ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q.

    Returns the nonzero rows of the echelon form and the pivot column of each.
    Pivots are taken left to right and normalized to 1, so the result is
    unique for a given row space.
    """
    _, cols = shape(m, ncols)
    a = to_fractions(m)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def _integer_rows(m: Matrix) -> list[list[int]]:
    rows = []
    for row in m:
        if all(type(x) is int for x in row):
            rows.append(list(row))
            continue
        den = 1
        for x in row:
            if x:
                d = x.denominator
                if d != 1:
                    den = den * d // gcd(den, d)
        rows.append([0 if not x else x.numerator * (den // x.denominator) for x in row])
    return rows


def echelon_int(m: Matrix, ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form: independent integer rows spanning the row space, and pivots.

    Pivot columns agree with those of :func:`rref`. Rows are divided by their
    content as we go to keep the integers small.
    """
    _, cols = shape(m, ncols)
    a = [row for row in _integer_rows(m) if any(row)]
    rank = 0
    pivots: list[int] = []
    for c in range(cols):
        if rank == len(a):
            break
        p = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[rank], a[p] = a[p], a[rank]
        piv = a[rank]
        pc = piv[c]
        for i in range(rank + 1, len(a)):
            x = a[i][c]
            if x:
                row = [pc * u - x * v for u, v in zip(a[i], piv)]
                g = 0
                for u in row:
                    g = gcd(g, u)
                a[i] = [u // g for u in row] if g > 1 else row
        pivots.append(c)
        rank += 1
    return a[:rank], pivots


def rank_q(m: Matrix, ncols: int | None = None) -> int:
    """Rank of ``m`` over the rationals, computed fraction-free."""
    return len(echelon_int(m, ncols)[1])


def adjugate_int(m: Matrix) -> list[list[int]]:
    """Adjugate of a square integer matrix, so ``m * adj(m) = det(m) * I``."""
    n = len(m)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]
            adj[j][i] = (-1) ** (i + j) * det_int(minor)
    return adj


def kernel_basis_q(m: Matrix, ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel of ``m`` over Q.

    The vectors are returned as a list (the columns of the kernel matrix). The
    basis is put in reduced echelon form, so two matrices with the same kernel
    get the same answer.
    """
    _, cols = shape(m, ncols)
    red, pivots = rref(m, cols)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    canon, _ = rref(basis, cols)
    return [tuple(v) for v in canon]


def solve_q(a: Matrix, b: Sequence, ncols: int | None = None) -> tuple[Fraction, ...] | None:
    """One solution ``x`` of ``a x = b``, or None when the system is inconsistent."""
    rows, cols = shape(a, ncols)
    aug = [list(a[i]) + [b[i]] for i in range(rows)]
    red, pivots = rref(aug, cols + 1)
    if pivots and pivots[-1] == cols:
        return None
    x = [Fraction(0)] * cols
    for row, p in zip(red, pivots):
        x[p] = row[cols]
    return tuple(x)


def row_space_basis(m: Matrix, ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    return [tuple(r) for r in rref(m, ncols)[0]]


def primitive_integer(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector, same direction."""
    if all(type(x) is int for x in v):
        g = 0
        for x in v:
            g = gcd(g, x)
        if g == 0:
            raise ValueError("zero vector")
        return tuple(x // g for x in v)
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector")
    return tuple(x // g for x in ints)


def det_int(m: Matrix) -> int:
    """Determinant of a square integer matrix (Bareiss elimination)."""
    n = len(m)
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k]), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def null_vector_int(m: Matrix, ncols: int) -> tuple[int, ...]:
    """Primitive integer vector spanning the kernel of a rank ``ncols - 1`` matrix with ``ncols - 1`` rows.

    Entries are the signed maximal minors (a generalized cross product).
    """
    if len(m) != ncols - 1:
        raise ValueError("need exactly ncols - 1 rows")
    v = []
    for j in range(ncols):
        minor = [[row[c] for c in range(ncols) if c != j] for row in m]
        v.append((-1) ** j * det_int(minor))
    return primitive_integer(v)


def det_q(m: Matrix) -> Fraction:
    n = len(m)
    a = to_fractions(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


@dataclass(frozen=True)
class SnfResult:
    """``left * A * right`` is diagonal with entries ``diag``."""

    left: tuple[tuple[int, ...], ...]
    diag: tuple[int, ...]
    right: tuple[tuple[int, ...], ...]


def _require_int(m: Matrix) -> None:
    for row in m:
        for x in row:
            if isinstance(x, bool) or not isinstance(x, int):
                if isinstance(x, Fraction) and x.denominator == 1:
                    continue
                raise TypeError(f"integer matrix expected, got entry {x!r}")


def smith_normal_form(m: Matrix, ncols: int | None = None) -> SnfResult:
    """Smith normal form with unimodular transforms.

    Pivoting always picks the nonzero entry of smallest absolute value in the
    active submatrix, ties going to the lowest (row, col), so the transforms
    are reproducible. The diagonal has length ``min(rows, cols)``, trailing
    zeros included, and each entry divides the next.
    """
    _require_int(m)
    rows, cols = shape(m, ncols)
    a = [[int(x) for x in row] for row in m]
    left = identity(rows)
    right = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + f * y for x, y in zip(left[dst], left[src])]

    def add_col(src, dst, f):
        for row in a:
            row[dst] += f * row[src]
        for row in right:
            row[dst] += f * row[src]

    n = min(rows, cols)
    for t in range(n):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
            if any(a[i][t] for i in range(t + 1, rows)) or any(a[t][j] for j in range(t + 1, cols)):
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        if a[t][t] == 0:
            break
    diag = tuple(a[i][i] for i in range(n))
    return SnfResult(
        left=tuple(tuple(r) for r in left),
        diag=diag,
        right=tuple(tuple(r) for r in right),
    )


def _invariant_factors(orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors of the direct sum of cyclic groups of the given orders (> 0)."""
    k = len(orders)
    if not k:
        return ()
    diag = [[orders[i] if i == j else 0 for j in range(k)] for i in range(k)]
    return tuple(d for d in smith_normal_form(diag).diag if d > 1)


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group ``Z^free_rank + Z/t1 + ... + Z/tk``.

    ``torsion`` holds invariant factors, each at least 2 and dividing the next.
    Use :meth:`of` to build one from arbitrary cyclic orders.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        t = tuple(self.torsion)
        if any(x < 2 for x in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not an invariant factor chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def of(cls, free_rank: int = 0, cyclic: Sequence[int] = ()) -> "AbelianGroup":
        """Canonical form of ``Z^free_rank`` plus cyclic groups of the given orders.

        An order of 0 means a copy of Z; orders of 1 are dropped.
        """
        extra = sum(1 for c in cyclic if c == 0)
        finite = [abs(c) for c in cyclic if c not in (0, 1, -1)]
        return cls(free_rank + extra, _invariant_factors(finite))

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return cls.of(0, [n])

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.of(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def __mul__(self, k: int) -> "AbelianGroup":
        """Direct sum of ``k`` copies."""
        return AbelianGroup.of(self.free_rank * k, self.torsion * k)

    __rmul__ = __mul__

    def tensor_cyclic(self, n: int) -> "AbelianGroup":
        """``self (x) Z/n``; with ``n == 0`` this is ``self`` itself."""
        if n == 0:
            return self
        return AbelianGroup.of(0, [n] * self.free_rank + [gcd(t, n) for t in self.torsion])

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> "AbelianGroup":
        return cls.of(int(data.get("free_rank", 0)), [int(t) for t in data.get("torsion", [])])

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        i = 0
        while i < len(self.torsion):
            j = i
            while j < len(self.torsion) and self.torsion[j] == self.torsion[i]:
                j += 1
            k = j - i
            parts.append(f"(Z/{self.torsion[i]})" + (f"^{k}" if k > 1 else ""))
            i = j
        return " + ".join(parts) if parts else "0"


def cokernel_structure(m: Matrix, nrows: int | None = None, ncols: int | None = None) -> AbelianGroup:
    """Structure of ``Z^rows / (column span of m)``."""
    if nrows is not None and len(m) != nrows:
        if m:
            raise ValueError("row count mismatch")
        m = [[] for _ in range(nrows)]
    rows = len(m)
    if rows == 0:
        return AbelianGroup()
    snf = smith_normal_form(m, ncols)
    rank = sum(1 for d in snf.diag if d)
    return AbelianGroup(rows - rank, tuple(d for d in snf.diag if d > 1))


def integer_kernel_basis(m: Matrix, ncols: int) -> list[tuple[int, ...]]:
    """Z-basis of ``{x in Z^ncols : m x = 0}`` (a saturated lattice)."""
    if not m:
        return [tuple(r) for r in identity(ncols)]
    snf = smith_normal_form(m, ncols)
    rank = sum(1 for d in snf.diag if d)
    right = snf.right
    return [tuple(right[i][j] for i in range(ncols)) for j in range(rank, ncols)]
