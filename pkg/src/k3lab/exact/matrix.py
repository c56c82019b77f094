"""Exact dense matrices: determinants, ranks, Smith normal form, signatures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import SparsePoly, normalize_scalar


def _is_integer(x) -> bool:
    return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)


class ExactMatrix:
    """Rectangular matrix with entries in one exact domain."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        rows = [[normalize_scalar(x) if isinstance(x, int) else x for x in r] for r in rows]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", len(rows[0]) if rows else 0)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int) -> "ExactMatrix":
        return cls([[0] * n for _ in range(m)])

    @classmethod
    def block_diag(cls, *blocks: "ExactMatrix") -> "ExactMatrix":
        n = sum(b.nrows for b in blocks)
        out = [[Fraction(0)] * n for _ in range(n)]
        k = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    out[k + i][k + j] = b[i, j]
            k += b.nrows
        return cls(out)

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]]) -> "ExactMatrix":
        return cls([[Fraction(x) for x in row] for row in data])

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([list(c) for c in zip(*self.rows)]) if self.rows else self

    T = property(transpose)

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def is_integral(self) -> bool:
        return all(_is_integer(x) for r in self.rows for x in r)

    def int_rows(self) -> list[list[int]]:
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return [[int(x) for x in r] for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2)
        )

    def __hash__(self):
        return hash(tuple(tuple(str(x) for x in r) for r in self.rows))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        return ExactMatrix([[-a for a in r] for r in self.rows])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                total = Fraction(0)
                for a, b in zip(r, c):
                    if a and b:
                        total = total + a * b
                row.append(total)
            out.append(row)
        return ExactMatrix(out)

    def scale(self, c) -> "ExactMatrix":
        return ExactMatrix([[a * c for a in r] for r in self.rows])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def delete_columns(self, cols: Iterable[int]) -> "ExactMatrix":
        drop = set(cols)
        keep = [j for j in range(self.ncols) if j not in drop]
        return self.submatrix(range(self.nrows), keep)

    def map(self, fn) -> "ExactMatrix":
        return ExactMatrix([[fn(a) for a in r] for r in self.rows])

    def apply(self, vec: Sequence) -> list:
        return [sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self.rows]

    # determinants ---------------------------------------------------
    def det(self):
        return det_exact(self)

    def rank(self) -> int:
        return len(_row_echelon(self.rows)[1])

    def rank_mod(self, p: int) -> int:
        rows = [[_mod(x, p) for x in r] for r in self.rows]
        rank = 0
        ncols = self.ncols
        for col in range(ncols):
            piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            inv = pow(rows[rank][col], -1, p)
            for i in range(len(rows)):
                if i != rank and rows[i][col]:
                    f = rows[i][col] * inv % p
                    rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
            rank += 1
        return rank

    def inverse(self) -> "ExactMatrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        red, pivots = _row_echelon(aug, reduced=True, limit=n)
        if pivots != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return ExactMatrix([r[n:] for r in red[:n]])

    def nullspace(self) -> list[list]:
        """Basis of the right kernel (column vectors as lists)."""
        red, pivots = _row_echelon(self.rows, reduced=True)
        free = [j for j in range(self.ncols) if j not in pivots]
        basis = []
        for f in free:
            vec = [Fraction(0)] * self.ncols
            vec[f] = Fraction(1)
            for r, pc in enumerate(pivots):
                vec[pc] = -red[r][f]
            basis.append(vec)
        return basis

    def solve(self, rhs: Sequence) -> list | None:
        """One solution of ``self · x = rhs`` or ``None``."""
        aug = [list(r) + [b] for r, b in zip(self.rows, rhs)]
        red, pivots = _row_echelon(aug, reduced=True)
        if self.ncols in pivots:
            return None
        x = [Fraction(0)] * self.ncols
        for r, pc in enumerate(pivots):
            x[pc] = red[r][-1]
        return x

    def charpoly(self) -> list[Fraction]:
        return charpoly(self)

    def __repr__(self):
        return f"ExactMatrix({self.to_json()})"


def _mod(x, p: int) -> int:
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p) % p


def _row_echelon(rows, reduced: bool = False, limit: int | None = None):
    """Gauss-Jordan over a field; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0]) if limit is None else limit
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = Fraction(1) / rows[r][col]
        rows[r] = [normalize_scalar(a * inv) for a in rows[r]]
        targets = range(len(rows)) if reduced else range(r + 1, len(rows))
        for i in targets:
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [normalize_scalar(a - f * b) for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def det_exact(m: ExactMatrix):
    """Exact determinant: Bareiss on integers, Gauss on fields, Laplace on polynomials."""
    if not m.is_square():
        raise ValueError(f"determinant of non-square {m.shape} matrix")
    n = m.nrows
    if n == 0:
        return Fraction(1)
    entries = [x for r in m.rows for x in r]
    if any(isinstance(x, SparsePoly) for x in entries):
        return _laplace(m.rows)
    if all(_is_integer(x) for x in entries):
        return Fraction(_bareiss([[int(x) for x in r] for r in m.rows]))
    rows = [list(r) for r in m.rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if rows[i][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        p = rows[col][col]
        det = det * p
        inv = Fraction(1) / p
        for i in range(col + 1, n):
            if rows[i][col]:
                f = rows[i][col] * inv
                rows[i] = [normalize_scalar(a - f * b) for a, b in zip(rows[i], rows[col])]
    return normalize_scalar(det)


def _bareiss(a: list[list[int]]) -> int:
    n = len(a)
    a = [r[:] for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _laplace(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _laplace(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return Fraction(0) if total is None else total


def cofactor_det(m: ExactMatrix):
    """Plain cofactor expansion (used as an independent oracle)."""
    return _laplace([list(r) for r in m.rows])


# Smith normal form -------------------------------------------------

@dataclass(frozen=True)
class SNFResult:
    factors: tuple[int, ...]
    rank: int
    U: ExactMatrix
    V: ExactMatrix
    D: ExactMatrix

    def elementary_divisor_product(self) -> int:
        prod = 1
        for d in self.factors:
            prod *= d
        return prod

    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)


def smith_normal_form(m: ExactMatrix) -> SNFResult:
    """Smith form ``U·M·V = D`` with unimodular ``U``, ``V``.

    Pivots are chosen as the smallest non-zero absolute value in the active
    block, ties broken row-major, so the output is deterministic.
    """
    a = m.int_rows()
    nr, nc = m.nrows, m.ncols
    U = [[int(i == j) for j in range(nr)] for i in range(nr)]
    V = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, f):  # row dst += f * row src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, f):  # col dst += f * col src
        for r in a:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    k = 0
    while k < min(nr, nc):
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < best[0]):
                    best = (abs(a[i][j]), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(k, i)
        swap_cols(k, j)
        while True:
            done = True
            for i in range(k + 1, nr):
                if a[i][k]:
                    q = a[i][k] // a[k][k]
                    add_row(k, i, -q)
                    if a[i][k]:
                        done = False
            for j in range(k + 1, nc):
                if a[k][j]:
                    q = a[k][j] // a[k][k]
                    add_col(k, j, -q)
                    if a[k][j]:
                        done = False
            if not done:
                best = None
                for i in range(k, nr):
                    if a[i][k] and (best is None or abs(a[i][k]) < best[0]):
                        best = (abs(a[i][k]), i, "r")
                for j in range(k, nc):
                    if a[k][j] and (best is None or abs(a[k][j]) < best[0]):
                        best = (abs(a[k][j]), j, "c")
                if best[2] == "r":
                    swap_rows(k, best[1])
                else:
                    swap_cols(k, best[1])
                continue
            bad = next(
                ((i, j) for i in range(k + 1, nr) for j in range(k + 1, nc) if a[i][j] % a[k][k]),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], k, 1)
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            U[k] = [-x for x in U[k]]
        k += 1
    factors = tuple(a[i][i] for i in range(k))
    return SNFResult(factors, k, ExactMatrix(U), ExactMatrix(V), ExactMatrix(a))


def int_inverse(m: ExactMatrix) -> ExactMatrix:
    inv = m.inverse()
    if not inv.is_integral():
        raise ValueError("matrix is not unimodular")
    return inv


# characteristic polynomial and signature ------------------------------

def charpoly(m: ExactMatrix) -> list[Fraction]:
    """Coefficients of det(x·I − M), low to high, via Hessenberg reduction."""
    if not m.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = m.nrows
    h = [[Fraction(x) for x in r] for r in m.rows]
    for col in range(n - 2):
        piv = next((i for i in range(col + 1, n) if h[i][col]), None)
        if piv is None:
            continue
        if piv != col + 1:
            h[col + 1], h[piv] = h[piv], h[col + 1]
            for r in h:
                r[col + 1], r[piv] = r[piv], r[col + 1]
        pv = h[col + 1][col]
        for i in range(col + 2, n):
            if h[i][col]:
                f = h[i][col] / pv
                h[i] = [x - f * y for x, y in zip(h[i], h[col + 1])]
                for r in h:
                    r[col + 1] += f * r[i]
    # recurrence on leading principal blocks of the Hessenberg form
    polys: list[list[Fraction]] = [[Fraction(1)]]
    for k in range(1, n + 1):
        p = [Fraction(0)] + polys[k - 1]
        p = [c - h[k - 1][k - 1] * (polys[k - 1][i] if i < len(polys[k - 1]) else 0) for i, c in enumerate(p)]
        prod = Fraction(1)
        for i in range(1, k):
            prod *= h[k - i][k - i - 1]
            coef = prod * h[k - i - 1][k - 1]
            if coef:
                prev = polys[k - i - 1]
                for j, c in enumerate(prev):
                    p[j] -= coef * c
        polys.append(p)
    return polys[n]


def _sign_variations(coeffs: Sequence[Fraction]) -> int:
    signs = [c > 0 for c in coeffs if c]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def symmetric_signature(g: ExactMatrix) -> tuple[int, int, int]:
    """Inertia ``(n+, n-, n0)`` from Descartes' rule on the exact characteristic polynomial."""
    if not g.is_symmetric():
        raise ValueError("signature requires a symmetric matrix")
    cp = charpoly(g)
    zero = next(k for k, c in enumerate(cp) if c)
    reduced = cp[zero:]
    pos = _sign_variations(reduced)
    neg = _sign_variations([c if k % 2 == 0 else -c for k, c in enumerate(reduced)])
    return pos, neg, zero
