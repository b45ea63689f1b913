"""Exact rational dense linear algebra and integer-lattice Hermite normal form.

Everything here works on plain lists of gmpy2.mpq (or int) values; matrices
are lists of rows unless noted. Sizes are small (weight-space dimensions),
so cubic elimination is fine as long as the arithmetic stays exact.
"""

from __future__ import annotations

from gmpy2 import mpq

from .util import Rat


class SingularMatrix(ValueError):
    pass


def mat_vec_cols(cols: list[list[Rat]], x: list[Rat], nrows: int) -> list[Rat]:
    """y = M @ x with M given by columns; skips zero entries of x."""
    y = [mpq(0)] * nrows
    for j, xj in enumerate(x):
        if xj:
            col = cols[j]
            for i in range(nrows):
                if col[i]:
                    y[i] += xj * col[i]
    return y


def solve_multi(a: list[list[Rat]], rhs: list[list[Rat]]) -> list[list[Rat]]:
    """Solve A X = B exactly for square invertible A; rhs is a list of columns.

    Returns the solution columns. Raises SingularMatrix if A is singular.
    """
    n = len(a)
    m = len(rhs)
    aug = [[mpq(v) for v in a[i]] + [mpq(rhs[j][i]) for j in range(m)]
           for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        if piv != col:
            aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                arow, crow = aug[r], aug[col]
                for c in range(col, n + m):
                    arow[c] -= f * crow[c]
    return [[aug[i][n + j] for i in range(n)] for j in range(m)]


def solve(a: list[list[Rat]], b: list[Rat]) -> list[Rat]:
    return solve_multi(a, [list(b)])[0]


def det(a: list[list[Rat]]) -> Rat:
    n = len(a)
    m = [[mpq(v) for v in row] for row in a]
    sign = 1
    d = mpq(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return mpq(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        d *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return sign * d


def leading_principal_minors(a: list[list[Rat]]) -> list[Rat]:
    return [det([row[: k + 1] for row in a[: k + 1]]) for k in range(len(a))]


def psd_kernel_dim(a: list[list[Rat]]) -> tuple[bool, int]:
    """Exact positive-semidefiniteness test for a symmetric matrix.

    Symmetric elimination with diagonal pivoting: at each step pick a positive
    diagonal pivot; if none remains, the matrix is PSD iff the remaining block
    is identically zero (a zero diagonal with a nonzero off-diagonal entry
    gives a negative 2x2 principal minor). Returns (is_psd, kernel_dim).
    """
    n = len(a)
    m = [[mpq(v) for v in row] for row in a]
    active = list(range(n))
    rank = 0
    while active:
        piv = next((i for i in active if m[i][i] > 0), None)
        if piv is None:
            if any(m[i][i] < 0 for i in active):
                return False, 0
            for i in active:
                for j in active:
                    if m[i][j]:
                        return False, 0
            return True, len(active)
        rank += 1
        active.remove(piv)
        p = m[piv][piv]
        for i in active:
            if m[i][piv]:
                f = m[i][piv] / p
                for j in active:
                    m[i][j] -= f * m[piv][j]
    return True, 0


def hnf_columns(cols: list[list[int]], nrows: int) -> list[list[int]]:
    """Canonical column Hermite normal form of the integer column span.

    Pivots are positive, pivot rows strictly increase column by column, and
    entries of earlier columns in a pivot row are reduced into [0, pivot).
    Zero columns are dropped; the result's columns are a basis of the lattice
    generated by `cols`.
    """
    work = [list(c) for c in cols if any(c)]
    pivoted: list[list[int]] = []
    pivot_rows: list[int] = []
    for row in range(nrows):
        live = [c for c in work if c[row] != 0]
        if not live:
            continue
        # euclid the live columns down to a single nonzero entry in this row
        while len(live) > 1:
            live.sort(key=lambda c: abs(c[row]))
            small, big = live[0], live[1]
            f = big[row] // small[row]
            for i in range(nrows):
                big[i] -= f * small[i]
            live = [c for c in live if c[row] != 0]
        pivot = live[0]
        work.remove(pivot)
        if pivot[row] < 0:
            pivot = [-v for v in pivot]
        # clear this row in the not-yet-pivoted columns
        for c in work:
            if c[row]:
                f = c[row] // pivot[row]
                for i in range(nrows):
                    c[i] -= f * pivot[i]
        work = [c for c in work if any(c)]
        # canonical reduction of the already-placed columns at this row
        for c in pivoted:
            f = c[row] // pivot[row]
            if f:
                for i in range(nrows):
                    c[i] -= f * pivot[i]
        pivoted.append(pivot)
        pivot_rows.append(row)
    return pivoted


class RationalLattice:
    """A full-rank lattice in Q^dim given by rational generator vectors.

    Internally stored as an integer column HNF `hcols` over a common
    denominator `den`; the rational basis is hcols/den.
    """

    def __init__(self, dim: int, generators: list[list[Rat]]):
        self.dim = dim
        den = 1
        gens = [[mpq(v) for v in g] for g in generators]
        for g in gens:
            for v in g:
                d = v.denominator
                den = den * d // _gcd(den, d)
        self.den = den
        int_cols = [[int(v * den) for v in g] for g in gens]
        self.hcols = hnf_columns(int_cols, dim)
        self.rank = len(self.hcols)

    def basis_columns(self) -> list[list[Rat]]:
        return [[mpq(v, self.den) for v in c] for c in self.hcols]

    def solve(self, v: list[Rat]) -> list[Rat] | None:
        """Coordinates of v in the HNF basis, or None if v is outside the span."""
        u = [mpq(x) * self.den for x in v]
        x: list[Rat] = []
        # pivot row of column j is j when the lattice has full rank dim
        if self.rank != self.dim:
            return self._solve_general(u)
        for j in range(self.rank):
            s = u[j]
            for k in range(j):
                if self.hcols[k][j]:
                    s -= self.hcols[k][j] * x[k]
            x.append(s / self.hcols[j][j])
        return x

    def _solve_general(self, u: list[Rat]) -> list[Rat] | None:
        pivot_rows = []
        for c in self.hcols:
            pivot_rows.append(next(i for i in range(self.dim) if c[i]))
        x: list[Rat] = []
        for j, pr in enumerate(pivot_rows):
            s = u[pr]
            for k in range(j):
                if self.hcols[k][pr]:
                    s -= self.hcols[k][pr] * x[k]
            x.append(s / self.hcols[j][pr])
        # consistency on non-pivot rows
        for i in range(self.dim):
            s = sum((c[i] * x[j] for j, c in enumerate(self.hcols)), mpq(0))
            if s != u[i]:
                return None
        return x

    def contains(self, v: list[Rat]) -> bool:
        x = self.solve(v)
        return x is not None and all(xi.denominator == 1 for xi in x)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)
