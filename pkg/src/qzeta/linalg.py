"""Exact linear algebra over Z/p^N and Z.

Z/p^N has zero divisors, so solvability decisions use the Howell normal
form (echelon form closed under annihilator multiples); determinants of
matrices over rings with zero divisors use the division-free Berkowitz
algorithm.  Integer HNF supports the ideal lattices of the fields module.
"""

from __future__ import annotations

from math import gcd


def _val(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class HowellBasis:
    """Howell form of the row span of a matrix over Z/p^N.

    Rows are stored with their pivot columns; `express` reduces a vector
    against the basis and either returns the combination in terms of the
    ORIGINAL rows or None when the vector is provably outside the span.
    """

    def __init__(self, rows, p: int, n: int):
        self.p = p
        self.n = n
        self.mod = p**n
        self.ncols = len(rows[0]) if rows else 0
        self.nrows_in = len(rows)
        self._build([list(r) for r in rows])

    def _build(self, rows):
        p, mod, n = self.p, self.mod, self.n
        m = len(rows)
        trans = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        work = [(r, t) for r, t in zip(rows, trans)]
        basis = []  # (pivot_col, pivot_val v, row, tr)

        def reduce_against_basis(row, tr):
            for col, v, brow, btr in basis:
                c = row[col] % mod
                if c == 0:
                    continue
                q = c // p**v  # reduce to the canonical residue below p^v
                if q:
                    for j in range(self.ncols):
                        row[j] = (row[j] - q * brow[j]) % mod
                    for j in range(self.nrows_in):
                        tr[j] = (tr[j] - q * btr[j]) % mod
            return row, tr

        queue = list(work)
        while queue:
            row, tr = queue.pop()
            row = [x % mod for x in row]
            row, tr = reduce_against_basis(row, tr)
            # find leading column
            lead = None
            for j in range(self.ncols):
                if row[j] % mod:
                    lead = j
                    break
            if lead is None:
                continue
            v = _val(row[lead], p, n)
            u = row[lead] // p**v
            uinv = pow(u, -1, mod)
            row = [(x * uinv) % mod for x in row]
            tr = [(x * uinv) % mod for x in tr]
            # displace any existing basis row at this column with higher val
            clash = next((b for b in basis if b[0] == lead), None)
            if clash is not None and clash[1] > v:
                basis.remove(clash)
                queue.append((clash[2], clash[3]))
                clash = None
            if clash is not None:
                # same column, clash has smaller or equal valuation: eliminate
                q = (row[lead] // p ** clash[1]) % mod
                for j in range(self.ncols):
                    row[j] = (row[j] - q * clash[2][j]) % mod
                for j in range(self.nrows_in):
                    tr[j] = (tr[j] - q * clash[3][j]) % mod
                queue.append((row, tr))
                continue
            basis.append((lead, v, row, tr))
            basis.sort(key=lambda b: b[0])
            if v > 0:
                # annihilator closure: p^(n-v) * row has a later pivot
                k = p ** (n - v)
                arow = [(x * k) % mod for x in row]
                atr = [(x * k) % mod for x in tr]
                if any(arow):
                    queue.append((arow, atr))
        # final inter-reduction for canonical entries above pivots
        changed = True
        while changed:
            changed = False
            for i, (col, v, row, tr) in enumerate(basis):
                for col2, v2, brow, btr in basis:
                    if col2 <= col:
                        continue
                    c = row[col2] % mod
                    q = c // p**v2
                    if q:
                        for j in range(self.ncols):
                            row[j] = (row[j] - q * brow[j]) % mod
                        for j in range(self.nrows_in):
                            tr[j] = (tr[j] - q * btr[j]) % mod
                        changed = True
        self.basis = basis

    def express(self, vec):
        """Combination c over the original rows with sum(c_i row_i) = vec, or None."""
        p, mod = self.p, self.mod
        vec = [x % mod for x in vec]
        coeff = [0] * self.nrows_in
        for col, v, row, tr in self.basis:
            c = vec[col]
            if c == 0:
                continue
            if c % p**v:
                return None
            q = c // p**v
            for j in range(self.ncols):
                vec[j] = (vec[j] - q * row[j]) % mod
            for j in range(self.nrows_in):
                coeff[j] = (coeff[j] + q * tr[j]) % mod
        if any(vec):
            return None
        return coeff


def solve_linear_mod(matrix, rhs, p: int, n: int):
    """Solve matrix @ x = rhs over Z/p^n; return x or None if unsolvable.

    `matrix` is a list of rows; the solver works with the column span, so
    x_j are the coefficients of the columns.
    """
    ncols = len(matrix[0])
    cols = [[matrix[i][j] for i in range(len(matrix))] for j in range(ncols)]
    hb = HowellBasis(cols, p, n)
    return hb.express(rhs)


def berkowitz_det(rows, *, zero, one):
    """Division-free determinant (Berkowitz) over any commutative ring.

    Entries must support +, -, *.  Returns det of the square matrix.
    """
    n = len(rows)
    if n == 0:
        return one
    if n == 1:
        return rows[0][0]

    def dot(u, w):
        acc = None
        for a, b in zip(u, w):
            t = a * b
            acc = t if acc is None else acc + t
        return acc if acc is not None else zero

    # char polynomial coefficients, leading first; det = (-1)^n * p[n]
    poly = [one, zero - rows[0][0]]
    for r in range(1, n):
        M = [row[:r] for row in rows[:r]]
        R = rows[r][:r]
        C = [rows[i][r] for i in range(r)]
        d = rows[r][r]
        # sequence s_k: s_0 = -d, s_k = -(R M^(k-1) C) for k >= 1
        seq = [one, zero - d]
        v = C[:]
        for _ in range(r):
            seq.append(zero - dot(R, v))
            v = [dot(M[i], v) for i in range(r)]
        # new poly (length r+2) = Toeplitz(seq) applied to poly (length r+1)
        newpoly = []
        for i in range(r + 2):
            acc = None
            for j in range(r + 1):
                if 0 <= i - j <= r + 1 and (i - j) < len(seq):
                    t = seq[i - j] * poly[j]
                    acc = t if acc is None else acc + t
            newpoly.append(acc if acc is not None else zero)
        poly = newpoly
    det = poly[n]
    if n % 2 == 1:
        det = zero - det
    return det


def det_int(rows) -> int:
    """Exact integer determinant by fraction-free Bareiss elimination."""
    n = len(rows)
    a = [[int(x) for x in row] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hnf_rows(rows):
    """Row Hermite normal form of an integer matrix; returns nonzero rows.

    Upper-triangular-by-pivot, positive pivots, entries above a pivot reduced
    into [0, pivot).
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(work[0])
    out = []
    col = 0
    while col < ncols and work:
        pivots = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not pivots:
            col += 1
            continue
        # gcd all leading entries into one row by repeated combination
        while len(pivots) > 1:
            pivots.sort(key=lambda r: abs(r[col]))
            r0 = pivots[0]
            for r in pivots[1:]:
                q = r[col] // r0[col]
                for j in range(ncols):
                    r[j] -= q * r0[j]
            cleared = [r for r in pivots if r[col] == 0 and any(r)]
            rest.extend(cleared)
            pivots = [r for r in pivots if r[col] != 0]
        row = pivots[0]
        if row[col] < 0:
            row = [-x for x in row]
        out.append(row)
        work = rest
        col += 1
    # reduce entries above pivots
    for i in range(len(out) - 1, -1, -1):
        pcol = next(j for j in range(ncols) if out[i][j] != 0)
        for k in range(i):
            q = out[k][pcol] // out[i][pcol]
            if q:
                for j in range(ncols):
                    out[k][j] -= q * out[i][j]
    return out


def solve_integer(rows, rhs):
    """Solve rows^T-lattice membership: find integer x with x @ rows = rhs.

    Returns x or None.  Used for ideal-lattice membership tests.
    """
    m = len(rows)
    ncols = len(rows[0])
    # Gaussian elimination over Q with exact fractions
    from fractions import Fraction

    a = [[Fraction(rows[i][j]) for j in range(ncols)] for i in range(m)]
    b = [Fraction(x) for x in rhs]
    # solve a^T y = b in the least-squares-free sense: work column by column
    # build augmented system for x @ a = b  <=>  a^T x^T = b^T
    at = [[a[i][j] for i in range(m)] for j in range(ncols)]
    x = [Fraction(0)] * m
    pivots = []
    rowptr = 0
    for c in range(m):
        pr = next((r for r in range(rowptr, ncols) if at[r][c] != 0), None)
        if pr is None:
            continue
        at[rowptr], at[pr] = at[pr], at[rowptr]
        b[rowptr], b[pr] = b[pr], b[rowptr]
        pv = at[rowptr][c]
        at[rowptr] = [v / pv for v in at[rowptr]]
        b[rowptr] = b[rowptr] / pv
        for r in range(ncols):
            if r != rowptr and at[r][c] != 0:
                f = at[r][c]
                at[r] = [v - f * w for v, w in zip(at[r], at[rowptr])]
                b[r] = b[r] - f * b[rowptr]
        pivots.append((rowptr, c))
        rowptr += 1
    for r in range(rowptr, ncols):
        if b[r] != 0:
            return None
    for r, c in pivots:
        x[c] = b[r]
    if any(v.denominator != 1 for v in x):
        return None
    return [int(v) for v in x]
