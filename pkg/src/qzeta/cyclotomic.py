"""Exact cyclotomic machinery over the rationals.

Polynomials are coefficient lists, constant term first.  Everything here is
exact: integer cyclotomic polynomials, minimal polynomials of 2cos(2*pi/m),
the field Q(zeta_m) with Fraction coordinates, and Sturm-sequence root
isolation used to certify real embeddings.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


# ---------------------------------------------------------------- polynomials

def poly_trim(a):
    while a and a[-1] == 0:
        a = a[:-1]
    return a


def poly_add(a, b):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_neg(a):
    return [-x for x in a]


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return poly_trim(out)


def poly_divmod_exact(a, b):
    """Division by monic-up-to-sign b with exact coefficients."""
    a = list(a)
    q = [0] * max(1, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and poly_trim(a):
        a = poly_trim(a)
        if len(a) < len(b):
            break
        shift = len(a) - len(b)
        c = a[-1]
        if isinstance(c, int) and isinstance(lead, int) and lead != 0 and c % lead == 0:
            f = c // lead
        else:
            f = Fraction(c, lead) if not isinstance(c, Fraction) else c / lead
        q[shift] = f
        for i, y in enumerate(b):
            a[shift + i] -= f * y
    return poly_trim(q), poly_trim(a)


def poly_eval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_derivative(a):
    return poly_trim([i * a[i] for i in range(1, len(a))])


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple:
    """Integer coefficients of the m-th cyclotomic polynomial."""
    if m == 1:
        return (-1, 1)
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            q, r = poly_divmod_exact(poly, list(cyclotomic_poly(d)))
            assert not r
            poly = q
    return tuple(int(c) for c in poly)


@lru_cache(maxsize=None)
def real_cyclotomic_poly(m: int) -> tuple:
    """Minimal polynomial of 2cos(2*pi/m) = zeta_m + zeta_m^(-1), for m >= 1.

    Computed by rewriting the (palindromic) cyclotomic polynomial in the
    variable z = x + 1/x via the Chebyshev-like basis x^k + x^(-k).
    """
    if m == 1:
        return (-2, 1)  # theta = 2
    if m == 2:
        return (2, 1)  # theta = -2
    phi = cyclotomic_poly(m)
    n = (len(phi) - 1) // 2
    # T~_k(z) = x^k + x^-k: T~_0 = 2, T~_1 = z, T~_k = z T~_{k-1} - T~_{k-2}
    tk = [(2,), (0, 1)]
    for _ in range(2, n + 1):
        tk.append(tuple(poly_add(poly_mul([0, 1], list(tk[-1])), poly_neg(list(tk[-2])))))
    out = [phi[n]]  # constant term c_n * 1
    out = list(out)
    for k in range(1, n + 1):
        out = poly_add(out, [phi[n + k] * c for c in tk[k]])
    assert out[-1] == 1
    return tuple(int(c) for c in out)


# ------------------------------------------------------------ root isolation

def sturm_chain(poly):
    chain = [list(map(Fraction, poly)), list(map(Fraction, poly_derivative(poly)))]
    while poly_trim(chain[-1]):
        _, r = poly_divmod_exact(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain, x):
    signs = []
    for p in chain:
        v = poly_eval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(chain, lo, hi):
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def isolate_real_roots(poly, lo=None, hi=None):
    """Disjoint rational intervals (a, b], one per real root of squarefree poly."""
    chain = sturm_chain(poly)
    if lo is None:
        bound = 1 + max(abs(Fraction(c, poly[-1])) for c in poly[:-1]) if len(poly) > 1 else 1
        lo, hi = -bound, bound
    lo, hi = Fraction(lo), Fraction(hi)
    out = []

    def rec(a, b):
        k = count_roots(chain, a, b)
        if k == 0:
            return
        if k == 1:
            out.append((a, b))
            return
        mid = (a + b) / 2
        while poly_eval(poly, mid) == 0:
            mid = (mid + b) / 2
        rec(a, mid)
        rec(mid, b)

    rec(lo, hi)
    out.sort()
    return out


def refine_root(poly, interval, width: Fraction):
    """Bisect until the enclosing interval is narrower than width."""
    a, b = Fraction(interval[0]), Fraction(interval[1])
    fa = poly_eval(poly, a)
    if fa == 0:  # roots never sit at our endpoints by construction, but be safe
        a -= width / 4
        fa = poly_eval(poly, a)
    while b - a > width:
        mid = (a + b) / 2
        fm = poly_eval(poly, mid)
        if fm == 0:
            a, b = mid - width / 4, mid + width / 4
            break
        if (fa > 0) == (fm > 0):
            a, fa = mid, fm
        else:
            b = mid
    return a, b


# --------------------------------------------------------- interval helpers

class Interval:
    """Closed rational interval used for certified embedding arithmetic."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        assert self.lo <= self.hi

    def __add__(self, o):
        o = o if isinstance(o, Interval) else Interval(o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, o):
        o = o if isinstance(o, Interval) else Interval(o)
        return self + (-o)

    def __rsub__(self, o):
        return Interval(o) - self

    def __mul__(self, o):
        o = o if isinstance(o, Interval) else Interval(o)
        vals = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return Interval(min(vals), max(vals))

    __rmul__ = __mul__

    def sign(self):
        """1, -1, or None when the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    @property
    def width(self):
        return self.hi - self.lo

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


def eval_poly_interval(poly, x: Interval) -> Interval:
    acc = Interval(0)
    for c in reversed(poly):
        acc = acc * x + Interval(c)
    return acc


# ----------------------------------------------------------------- Q(zeta_m)

class CycRat:
    """Element of Q(zeta_m) as a Fraction vector modulo the m-th cyclotomic."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs=()):
        self.m = m
        d = phi_degree(m)
        c = [Fraction(x) for x in coeffs]
        c += [Fraction(0)] * (d - len(c))
        if len(c) > d:
            c = _reduce_mod_cyclotomic(m, c)
        self.coeffs = tuple(c)

    @staticmethod
    def zero(m):
        return CycRat(m)

    @staticmethod
    def one(m):
        return CycRat(m, (1,))

    @staticmethod
    def rational(m, q):
        return CycRat(m, (Fraction(q),))

    @staticmethod
    def zeta(m, k=1):
        k %= m
        d = phi_degree(m)
        c = [Fraction(0)] * (k + 1)
        c[k] = Fraction(1)
        return CycRat(m, c) if k >= d else CycRat(m, tuple(c))

    def __add__(self, o):
        o = self._join(o)
        return CycRat(self.m, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycRat(self.m, [-a for a in self.coeffs])

    def __sub__(self, o):
        return self + (-self._join(o))

    def __rsub__(self, o):
        return self._join(o) - self

    def __mul__(self, o):
        o = self._join(o)
        prod = [Fraction(0)] * (2 * len(self.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycRat(self.m, _reduce_mod_cyclotomic(self.m, prod))

    __rmul__ = __mul__

    def __truediv__(self, q):
        """Division by a rational scalar only."""
        q = Fraction(q)
        return CycRat(self.m, [a / q for a in self.coeffs])

    def _join(self, o):
        if isinstance(o, CycRat):
            if o.m != self.m:
                raise ValueError("mixed cyclotomic fields")
            return o
        return CycRat.rational(self.m, o)

    def __eq__(self, o):
        o = self._join(o)
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.m, self.coeffs))

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"not a rational: {self}")
        return self.coeffs[0]

    def galois(self, g: int) -> "CycRat":
        """zeta -> zeta^g for g prime to m."""
        if gcd(g, self.m) != 1:
            raise ValueError("galois exponent must be prime to m")
        prod = [Fraction(0)] * (max((i * g) % self.m for i in range(len(self.coeffs))) + 1 or 1)
        for i, a in enumerate(self.coeffs):
            if a:
                k = (i * g) % self.m
                if k >= len(prod):
                    prod += [Fraction(0)] * (k + 1 - len(prod))
                prod[k] += a
        return CycRat(self.m, _reduce_mod_cyclotomic(self.m, prod))

    def __repr__(self):
        return f"CycRat(m={self.m}, {list(self.coeffs)})"


@lru_cache(maxsize=None)
def phi_degree(m: int) -> int:
    return len(cyclotomic_poly(m)) - 1


@lru_cache(maxsize=None)
def _power_reductions(m: int, upto: int):
    """x^k mod Phi_m for k = d .. upto, as Fraction tuples of length d."""
    d = phi_degree(m)
    phi = cyclotomic_poly(m)
    table = {}
    cur = [Fraction(-phi[i]) for i in range(d)]  # x^d = -(lower part), monic
    table[d] = tuple(cur)
    for k in range(d + 1, upto + 1):
        nxt = [Fraction(0)] + cur[:-1]
        top = cur[-1]
        if top:
            for i in range(d):
                nxt[i] += top * -phi[i]
        cur = nxt
        table[k] = tuple(cur)
    return table


def _reduce_mod_cyclotomic(m: int, coeffs):
    d = phi_degree(m)
    coeffs = list(coeffs)
    if len(coeffs) <= d:
        return coeffs + [Fraction(0)] * (d - len(coeffs))
    table = _power_reductions(m, len(coeffs) - 1)
    out = [Fraction(c) for c in coeffs[:d]]
    for k in range(d, len(coeffs)):
        c = coeffs[k]
        if c:
            red = table[k]
            for i in range(d):
                out[i] += c * red[i]
    return out
