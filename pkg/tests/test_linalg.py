import itertools
import random
from fractions import Fraction

from qzeta.linalg import HowellBasis, berkowitz_det, det_int, hnf_rows, solve_linear_mod, solve_integer


def brute_force_span(rows, mod):
    span = set()
    m = len(rows)
    for coeffs in itertools.product(range(mod), repeat=m):
        v = tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % mod for j in range(len(rows[0])))
        span.add(v)
    return span


def test_howell_membership_exhaustive_small():
    p, n = 3, 2
    mod = p**n
    rng = random.Random(7)
    for _ in range(25):
        rows = [[rng.randrange(mod) for _ in range(3)] for _ in range(2)]
        span = brute_force_span(rows, mod)
        hb = HowellBasis(rows, p, n)
        for vec in itertools.product(range(mod), repeat=3):
            c = hb.express(list(vec))
            if vec in span:
                assert c is not None
                got = tuple(sum(ci * rows[i][j] for i, ci in enumerate(c)) % mod for j in range(3))
                assert got == vec
            else:
                assert c is None


def test_solve_linear_mod_roundtrip():
    p, n = 3, 4
    mod = p**n
    rng = random.Random(8)
    for _ in range(50):
        m = rng.randint(2, 5)
        mat = [[rng.randrange(mod) for _ in range(m)] for _ in range(m)]
        x0 = [rng.randrange(mod) for _ in range(m)]
        rhs = [sum(mat[i][j] * x0[j] for j in range(m)) % mod for i in range(m)]
        x = solve_linear_mod(mat, rhs, p, n)
        assert x is not None
        got = [sum(mat[i][j] * x[j] for j in range(m)) % mod for i in range(m)]
        assert got == rhs


def test_solve_linear_mod_unsolvable():
    # image of multiplication by 3 mod 9 is 3Z/9
    assert solve_linear_mod([[3]], [1], 3, 2) is None
    assert solve_linear_mod([[3]], [6], 3, 2) == [2]


class Zm:
    """Tiny wrapper ring to exercise berkowitz_det with zero divisors."""

    def __init__(self, v, m):
        self.v = v % m
        self.m = m

    def __add__(self, o):
        return Zm(self.v + o.v, self.m)

    def __sub__(self, o):
        return Zm(self.v - o.v, self.m)

    def __mul__(self, o):
        return Zm(self.v * o.v, self.m)

    def __eq__(self, o):
        return self.m == o.m and self.v == o.v


def test_berkowitz_matches_integer_det():
    rng = random.Random(9)
    for _ in range(40):
        n = rng.randint(1, 5)
        m = 81
        a = [[rng.randrange(-20, 20) for _ in range(n)] for _ in range(n)]
        want = det_int(a) % m
        rows = [[Zm(x, m) for x in row] for row in a]
        got = berkowitz_det(rows, zero=Zm(0, m), one=Zm(1, m))
        assert got.v == want


def test_det_int_known():
    assert det_int([[1, 2], [3, 4]]) == -2
    assert det_int([[2, 0, 0], [0, 3, 0], [0, 0, 5]]) == 30
    assert det_int([[1, 1], [1, 1]]) == 0


def test_hnf_rows():
    h = hnf_rows([[2, 0], [0, 3], [1, 1]])
    # lattice spanned is all of Z^2 since det gcd is 1
    assert h == [[1, 0], [0, 1]]
    h2 = hnf_rows([[2, 0], [0, 2]])
    assert h2 == [[2, 0], [0, 2]]
    h3 = hnf_rows([[4, 2], [2, 4]])
    assert det_int(h3) == 12 or det_int(h3) == -12
    # membership sanity via solve_integer
    assert solve_integer(h3, [6, 6]) is not None
    assert solve_integer(h3, [1, 0]) is None


def test_howell_annihilator_closure():
    # row (3, 1) mod 9: the span contains (0, 3) = 3*(3,1) - (9,0); Howell
    # form must expose a pivot in column 2
    hb = HowellBasis([[3, 1]], 3, 2)
    assert hb.express([0, 3]) is not None
    assert hb.express([0, 1]) is None
