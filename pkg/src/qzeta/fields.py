"""Totally real abelian number fields at desk scale.

Fields are monogenic with power basis 1, theta, ..., theta^(r-1); the stock
constructor takes theta = zeta_m + zeta_m^(-1).  All accept/reject decisions
(positivity, trace) are exact: traces are integers from Newton's identities
and positivity is certified by adaptive rational interval refinement of the
real embeddings.  Ideals are integer HNF lattices with Kummer-Dedekind
factorization above rational primes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .cyclotomic import (
    Interval,
    eval_poly_interval,
    isolate_real_roots,
    poly_add,
    poly_divmod_exact,
    poly_mul,
    poly_trim,
    real_cyclotomic_poly,
    refine_root,
)
from .errors import (
    DomainError,
    IndexObstruction,
    MissingOracleEntry,
    NotCoprime,
)
from .linalg import det_int, hnf_rows, solve_integer


class RealAbelianField:
    """Totally real field with a monogenic power basis."""

    def __init__(self, name: str, min_poly, conductor: int | None = None):
        self.name = name
        self.min_poly = tuple(int(c) for c in min_poly)
        assert self.min_poly[-1] == 1, "minimal polynomial must be monic"
        self.degree = len(self.min_poly) - 1
        self.conductor = conductor
        self._trace_powers = self._newton_power_sums()
        self._root_intervals = None
        self._kd_cache = {}
        self._ideal_power_cache = {}

    @staticmethod
    def rationals() -> "RealAbelianField":
        return RealAbelianField("Q", (-1, 1), conductor=1)

    @staticmethod
    def real_cyclotomic(m: int) -> "RealAbelianField":
        """The maximal real subfield of the m-th cyclotomic field."""
        if m in (1, 2):
            return RealAbelianField.rationals()
        poly = real_cyclotomic_poly(m)
        if len(poly) == 2:  # degree 1: still Q, theta rational
            return RealAbelianField.rationals()
        return RealAbelianField(f"Q(zeta_{m})+", poly, conductor=m)

    # ------------------------------------------------------------ elements

    def zero(self):
        return (0,) * self.degree

    def one(self):
        return self.from_int(1)

    def from_int(self, a: int):
        return (a,) + (0,) * (self.degree - 1)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def scale(self, a, m: int):
        return tuple(x * m for x in a)

    def mul(self, a, b):
        prod = poly_mul(list(a), list(b))
        _, rem = poly_divmod_exact(prod, list(self.min_poly))
        rem = list(rem) + [0] * (self.degree - len(rem))
        return tuple(int(c) for c in rem[: self.degree])

    def power_theta(self, k: int):
        x = self.one()
        th = self.theta()
        for _ in range(k):
            x = self.mul(x, th)
        return x

    def theta(self):
        if self.degree == 1:
            # theta is the rational root of the degree-1 minimal polynomial
            return (-self.min_poly[0],)
        return (0, 1) + (0,) * (self.degree - 2)

    def _newton_power_sums(self):
        """Traces of theta^k via Newton's identities, k = 0..2r."""
        r = self.degree
        # min_poly = x^r + c_{r-1} x^{r-1} + ... + c_0
        c = self.min_poly
        s = [r]
        for k in range(1, 2 * r + 1):
            # k <= r: s_k + sum_{i=1}^{k-1} c_{r-i} s_{k-i} + k c_{r-k} = 0
            # k >  r: s_k + sum_{i=1}^{r} c_{r-i} s_{k-i} = 0
            acc = 0
            for i in range(1, min(k, r)):
                acc += c[r - i] * s[k - i]
            if k <= r:
                acc += k * c[r - k]
            else:
                acc += c[0] * s[k - r]
            s.append(-acc)
        return s

    def trace(self, a) -> int:
        return sum(x * self._trace_powers[k] for k, x in enumerate(a))

    def trace_theta_power(self, k: int) -> int:
        return self._trace_powers[k]

    def norm(self, a) -> int:
        """Determinant of multiplication by a on the power basis."""
        rows = [list(self.mul(a, self.power_theta(k))) for k in range(self.degree)]
        return det_int(rows)

    def is_zero(self, a) -> bool:
        return all(x == 0 for x in a)

    # ---------------------------------------------------------- embeddings

    def root_intervals(self, width=Fraction(1, 2**20)):
        poly = list(self.min_poly)
        if self._root_intervals is None or self._root_intervals[0] > width:
            raw = isolate_real_roots(poly)
            if len(raw) != self.degree:
                raise DomainError("field is not totally real")
            refined = [refine_root(poly, iv, width) for iv in raw]
            self._root_intervals = (width, refined)
        return self._root_intervals[1]

    def embeddings(self, a, width=Fraction(1, 2**20)):
        return [eval_poly_interval(list(a), Interval(lo, hi)) for lo, hi in self.root_intervals(width)]

    def is_totally_positive(self, a) -> bool:
        """Certified sign decision; exact, never floating point."""
        if self.is_zero(a):
            return False
        width = Fraction(1, 2**12)
        for _ in range(12):
            signs = [iv.sign() for iv in self.embeddings(a, width)]
            if all(s == 1 for s in signs):
                return True
            if any(s == -1 for s in signs):
                return False
            width /= 2**8
        raise DomainError(f"could not certify sign of {a}")

    def automorphism_theta_images(self):
        """Exact images of theta under Gal(F/Q), via theta -> 2cos(2 pi a/m)."""
        if self.conductor is None:
            raise DomainError("automorphisms need conductor data")
        m = self.conductor
        if self.degree == 1:
            return {1: self.theta()}
        out = {}
        seen = set()
        for a in range(1, m):
            if gcd(a, m) != 1 or min(a, m - a) in seen:
                continue
            seen.add(min(a, m - a))
            out[min(a, m - a)] = self._chebyshev_eval(a)
        return out

    def _chebyshev_eval(self, a: int):
        """zeta^a + zeta^-a as a polynomial in theta: the Chebyshev-like T~_a."""
        two = self.from_int(2)
        if a % self.conductor == 0:
            return two
        t_prev, t_cur = two, self.theta()
        for _ in range(a - 1):
            t_prev, t_cur = t_cur, self.sub(self.mul(self.theta(), t_cur), t_prev)
        return t_cur

    def apply_automorphism(self, elem, theta_image):
        acc = self.from_int(elem[0])
        pw = self.one()
        for k in range(1, self.degree):
            pw = self.mul(pw, theta_image)
            acc = self.add(acc, self.scale(pw, elem[k]))
        return acc

    # -------------------------------------------- totally positive elements

    def enumerate_totally_positive(self, t: int):
        """All alpha in O_F, totally positive, with trace exactly t."""
        if t < 1:
            return []
        if self.degree == 1:
            return [(t,)] if self.trace((t,)) == t else []
        return [a for a in self._positivity_box(t) if self.trace(a) == t and self.is_totally_positive(a)]

    def totally_positive_up_to(self, tmax: int):
        """Dict trace -> sorted list of elements, for all traces <= tmax."""
        out = {t: [] for t in range(1, tmax + 1)}
        if self.degree == 1:
            for t in range(1, tmax + 1):
                out[t] = [(t,)]
            return out
        for a in self._positivity_box(tmax):
            t = self.trace(a)
            if 1 <= t <= tmax and self.is_totally_positive(a):
                out[t].append(a)
        for t in out:
            out[t].sort()
        return out

    def _positivity_box(self, t: int):
        """Candidate coordinate vectors with every embedding in (0, t) and
        trace in [1, t].

        Depth-first over coordinates a_(r-1)..a_0 with conservative pruning.
        Bounds use dyadic (scaled-integer) enclosures of the embeddings, so
        the pruning is exact-arithmetic and never excludes a true solution;
        final accept/reject stays with the exact trace and the certified
        positivity test.
        """
        import math

        r = self.degree
        S = 24  # dyadic scale: enclosures are multiples of 2^-S
        scale = 1 << S
        width = Fraction(1, scale)
        caps = self._coordinate_caps(t)
        s = self._trace_powers

        # dyadic enclosures of the embeddings of theta^k (outward rounded)
        pows = []
        for k in range(r):
            row = []
            for iv in self.embeddings(self.power_theta(k), width):
                lo = math.floor(iv.lo * scale) - 1
                hi = math.ceil(iv.hi * scale) + 1
                row.append((lo, hi))
            pows.append(row)

        # rest-slack per depth: bounds of sum_{j<k} a_j * theta^j over the caps
        rest = [[(0, 0)] * r]
        for k in range(1, r + 1):
            prev = rest[-1]
            row = []
            for i in range(r):
                lo, hi = pows[k - 1][i]
                m = caps[k - 1] * max(abs(lo), abs(hi))
                row.append((prev[i][0] - m, prev[i][1] + m))
            rest.append(row)
        rest_trace = [0]
        for k in range(1, r + 1):
            rest_trace.append(rest_trace[-1] + caps[k - 1] * abs(s[k - 1]))

        sols = []
        tscaled = t * scale

        def coord_range(partials, trace_part, k):
            lo_b, hi_b = -caps[k], caps[k]
            for i in range(r):
                plo, phi = partials[i]
                rlo, rhi = rest[k][i]
                clo, chi = pows[k][i]
                # need plo..phi + a*c + rest within (0, t*scale)
                if clo > 0:
                    lo = math.ceil(Fraction(-phi - rhi, clo))
                    hi = math.floor(Fraction(tscaled - plo - rlo, clo))
                elif chi < 0:
                    lo = math.ceil(Fraction(tscaled - plo - rlo, chi))
                    hi = math.floor(Fraction(-phi - rhi, chi))
                else:
                    continue
                lo_b = max(lo_b, lo)
                hi_b = min(hi_b, hi)
            # trace window [1, t]
            sk = s[k]
            rt = rest_trace[k]
            if sk > 0:
                lo_b = max(lo_b, math.ceil(Fraction(1 - trace_part - rt, sk)))
                hi_b = min(hi_b, math.floor(Fraction(t - trace_part + rt, sk)))
            elif sk < 0:
                lo_b = max(lo_b, math.ceil(Fraction(t - trace_part + rt, sk)))
                hi_b = min(hi_b, math.floor(Fraction(1 - trace_part - rt, sk)))
            return lo_b, hi_b

        # Fincke-Pohst budget: all totally positive alpha with trace <= t
        # satisfy sum_i sigma_i(alpha)^2 <= t^2, a quadratic form with the
        # integer Gram matrix tr(theta^(i+j)); exact rational Cholesky
        T = [[Fraction(s[i + j]) for j in range(r)] for i in range(r)]
        q = [row[:] for row in T]
        for k in range(r):
            for i in range(k + 1, r):
                q[i][k] = q[k][i]
                q[k][i] = q[k][i] / q[k][k]
            for i in range(k + 1, r):
                for j in range(i, r):
                    q[i][j] = q[i][j] - q[i][k] * q[k][j]
        budget = Fraction(t * t)

        def fp_range(i, u, remaining):
            """Integer range for x_i from q_ii (x_i + u)^2 <= remaining."""
            if remaining < 0:
                return 1, 0
            bound2 = remaining / q[i][i]
            # integer window around -u of half width sqrt(bound2)
            import math as _m

            approx = _m.isqrt(int(bound2)) + 2
            center = -u
            lo = _m.ceil(center - approx)
            hi = _m.floor(center + approx)
            while lo <= hi and q[i][i] * (lo + u) ** 2 > remaining:
                lo += 1
            while hi >= lo and q[i][i] * (hi + u) ** 2 > remaining:
                hi -= 1
            return lo, hi

        def rec2(k, partials, trace_part, coords, remaining):
            lo, hi = coord_range(partials, trace_part, k)
            u = sum(q[k][j] * coords[r - 1 - j] for j in range(k + 1, r))
            flo, fhi = fp_range(k, u, remaining)
            lo, hi = max(lo, flo), min(hi, fhi)
            if k == 0:
                for a0 in range(lo, hi + 1):
                    tr = trace_part + a0 * s[0]
                    if 1 <= tr <= t:
                        sols.append(tuple([a0] + list(reversed(coords))))
                return
            for ak in range(lo, hi + 1):
                coords.append(ak)
                if ak == 0:
                    newp = partials
                elif ak > 0:
                    newp = [(plo + ak * clo, phi + ak * chi)
                            for (plo, phi), (clo, chi) in zip(partials, pows[k])]
                else:
                    newp = [(plo + ak * chi, phi + ak * clo)
                            for (plo, phi), (clo, chi) in zip(partials, pows[k])]
                rec2(k - 1, newp, trace_part + ak * s[k],
                     coords, remaining - q[k][k] * (ak + u) ** 2)
                coords.pop()

        rec2(r - 1, [(0, 0)] * r, 0, [], budget)
        return sols

    def _coordinate_caps(self, t: int):
        """|a_k| bounds from the dual (trace) basis: a_k = Tr(alpha*dual_k)."""
        r = self.degree
        T = [[self._trace_powers[i + j] for j in range(r)] for i in range(r)]
        # invert T over Q
        inv = _invert_rational_matrix(T)
        width = Fraction(1, 2**24)
        caps = []
        import math

        for k in range(r):
            dual = inv[k]  # coordinates of the k-th dual basis vector
            embs = [eval_poly_interval([Fraction(c) for c in dual], Interval(lo, hi))
                    for lo, hi in self.root_intervals(width)]
            cap = sum(max(abs(e.lo), abs(e.hi)) for e in embs) * t
            caps.append(math.floor(cap) + 1)
        return caps

    def __repr__(self):
        return f"RealAbelianField({self.name}, degree={self.degree})"


def _invert_rational_matrix(T):
    n = len(T)
    a = [[Fraction(T[i][j]) for j in range(n)] + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


# --------------------------------------------------- polynomials mod ell

def _pmod_trim(f, ell):
    f = [c % ell for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod_mul(a, b, ell):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % ell
    return _pmod_trim(out, ell)


def _pmod_rem(a, f, ell):
    a = list(a)
    dn = len(f) - 1
    inv = pow(f[-1], -1, ell)
    while len(a) - 1 >= dn and _pmod_trim(a, ell):
        a = _pmod_trim(a, ell)
        if len(a) - 1 < dn:
            break
        c = a[-1] * inv % ell
        shift = len(a) - 1 - dn
        for i, y in enumerate(f):
            a[shift + i] = (a[shift + i] - c * y) % ell
    return _pmod_trim(a, ell)


def _pmod_gcd(a, b, ell):
    a, b = _pmod_trim(a, ell), _pmod_trim(b, ell)
    while b:
        a, b = b, _pmod_rem(a, b, ell)
    if a:
        inv = pow(a[-1], -1, ell)
        a = [c * inv % ell for c in a]
    return a


def _pmod_pow(base, e, f, ell):
    r = [1]
    b = _pmod_rem(base, f, ell)
    while e:
        if e & 1:
            r = _pmod_rem(_pmod_mul(r, b, ell), f, ell)
        b = _pmod_rem(_pmod_mul(b, b, ell), f, ell)
        e >>= 1
    return r


def _pmod_deriv(f, ell):
    return _pmod_trim([i * f[i] % ell for i in range(1, len(f))], ell)


def factor_mod_prime(poly, ell, seed=12345):
    """Factor a monic polynomial mod ell into (factor, multiplicity) pairs.

    Distinct-degree splitting plus Cantor-Zassenhaus, with a fixed RNG seed
    so results are deterministic.
    """
    rng = random.Random(seed + ell)
    f = _pmod_trim(list(poly), ell)
    inv = pow(f[-1], -1, ell)
    f = [c * inv % ell for c in f]
    out = {}

    def record(g, mult):
        key = tuple(g)
        out[key] = out.get(key, 0) + mult

    def squarefree_split(f, mult):
        if len(f) <= 1:
            return
        d = _pmod_deriv(f, ell)
        if not d:
            # f = g(x^ell): take ell-th root coefficientwise
            g = [f[i] for i in range(0, len(f), ell)]
            squarefree_split(g, mult * ell)
            return
        g = _pmod_gcd(f, d, ell)
        sqfree, _ = _pmod_divmod(f, g, ell)
        for h in distinct_degree(sqfree):
            record(h, mult)
        if len(g) > 1:
            squarefree_split(g, mult)

    def distinct_degree(f):
        factors = []
        d = 0
        x = [0, 1]
        while len(f) - 1 > 0:
            d += 1
            if 2 * d > len(f) - 1:
                factors.append(f)
                break
            xq = _pmod_pow(x, ell**d, f, ell)
            g = _pmod_gcd(_pmod_sub(xq, x, ell), f, ell)
            if len(g) > 1:
                factors.extend(equal_degree(g, d))
                f, _ = _pmod_divmod(f, g, ell)
        return factors

    def equal_degree(f, d):
        n = len(f) - 1
        if n == d:
            return [f]
        while True:
            r = [rng.randrange(ell) for _ in range(n)] + [1]
            if ell == 2:
                acc = r
                tr = list(r)
                for _ in range(d - 1):
                    acc = _pmod_rem(_pmod_mul(acc, acc, ell), f, ell)
                    tr = _pmod_add(tr, acc, ell)
                g = _pmod_gcd(tr, f, ell)
            else:
                e = (ell**d - 1) // 2
                g = _pmod_gcd(_pmod_sub(_pmod_pow(r, e, f, ell), [1], ell), f, ell)
            if 0 < len(g) - 1 < n:
                return equal_degree(g, d) + equal_degree(_pmod_divmod(f, g, ell)[0], d)

    squarefree_split(f, 1)
    return sorted((list(g), m) for g, m in out.items())


def _pmod_add(a, b, ell):
    n = max(len(a), len(b))
    return _pmod_trim([( (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % ell for i in range(n)], ell)


def _pmod_sub(a, b, ell):
    n = max(len(a), len(b))
    return _pmod_trim([( (a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % ell for i in range(n)], ell)


def _pmod_divmod(a, b, ell):
    a = list(a)
    q = [0] * max(1, len(a) - len(b) + 1)
    inv = pow(b[-1], -1, ell)
    while len(_pmod_trim(a, ell)) >= len(b):
        a = _pmod_trim(a, ell)
        c = a[-1] * inv % ell
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % ell
    return _pmod_trim(q, ell), _pmod_trim(a, ell)


def dedekind_index_check(field: RealAbelianField, ell: int) -> bool:
    """Dedekind's criterion: True when ell does not divide [O_F : Z[theta]]."""
    f = list(field.min_poly)
    facs = factor_mod_prime(f, ell)
    gbar = [1]
    for g, m in facs:
        gbar = _pmod_mul(gbar, g, ell)
    hbar, rem = _pmod_divmod(_pmod_trim(f, ell), gbar, ell)
    assert not rem
    # lift and form (g*h - f)/ell
    glift = [c % ell for c in gbar]
    hlift = [c % ell for c in hbar]
    gh = poly_mul(glift, hlift)
    diff = poly_add(gh, [-c for c in f])
    assert all(c % ell == 0 for c in diff)
    Fbar = _pmod_trim([c // ell for c in diff], ell)
    g1 = [1]
    for g, m in facs:
        if m > 1:
            g1 = _pmod_mul(g1, g, ell)
    d = _pmod_gcd(_pmod_gcd(Fbar, g1, ell), hbar if len(hbar) > 1 else [1], ell)
    # criterion: gcd(F, g1, h) = 1  (using the repeated part g1)
    return len(d) <= 1


# ------------------------------------------------------------------ ideals

@dataclass(frozen=True)
class IntegralIdeal:
    field: RealAbelianField
    basis: tuple  # HNF rows, each a coordinate tuple

    @staticmethod
    def from_elements(field: RealAbelianField, gens) -> "IntegralIdeal":
        rows = []
        for g in gens:
            for k in range(field.degree):
                rows.append(list(field.mul(g, field.power_theta(k))))
        h = hnf_rows(rows)
        if len(h) != field.degree:
            raise DomainError("ideal is not full rank (zero ideal?)")
        return IntegralIdeal(field, tuple(tuple(r) for r in h))

    @staticmethod
    def whole_ring(field: RealAbelianField) -> "IntegralIdeal":
        return IntegralIdeal.from_elements(field, [field.one()])

    @staticmethod
    def principal(field: RealAbelianField, alpha) -> "IntegralIdeal":
        return IntegralIdeal.from_elements(field, [alpha])

    @staticmethod
    def from_prime_factor(field: RealAbelianField, ell: int, gpoly) -> "IntegralIdeal":
        gtheta = _reduce_poly(field, gpoly)
        return IntegralIdeal.from_elements(field, [field.from_int(ell), gtheta])

    @property
    def norm(self) -> int:
        return abs(det_int([list(r) for r in self.basis]))

    def contains(self, elem) -> bool:
        return solve_integer([list(r) for r in self.basis], list(elem)) is not None

    def contains_ideal(self, other: "IntegralIdeal") -> bool:
        return all(self.contains(r) for r in other.basis)

    def __mul__(self, other: "IntegralIdeal") -> "IntegralIdeal":
        rows = []
        for a in self.basis:
            for b in other.basis:
                rows.append(list(self.field.mul(a, b)))
        h = hnf_rows(rows)
        return IntegralIdeal(self.field, tuple(tuple(r) for r in h))

    def __eq__(self, other):
        return isinstance(other, IntegralIdeal) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def is_whole_ring(self) -> bool:
        return self.norm == 1


def _reduce_poly(field: RealAbelianField, poly):
    _, rem = poly_divmod_exact(list(poly), list(field.min_poly))
    rem = list(rem) + [0] * (field.degree - len(rem))
    return tuple(int(c) for c in rem[: field.degree])


def prime_factorization(field: RealAbelianField, ell: int):
    """Kummer-Dedekind: prime ideals above ell as (ideal, residue_degree,
    ramification, gpoly), in the deterministic factor order."""
    if ell in field._kd_cache:
        return field._kd_cache[ell]
    if not dedekind_index_check(field, ell):
        raise IndexObstruction(f"{ell} divides the index; KD not applicable")
    facs = factor_mod_prime(field.min_poly, ell)
    out = []
    for g, e in facs:
        ideal = IntegralIdeal.from_prime_factor(field, ell, g)
        f = len(g) - 1
        assert ideal.norm == ell**f
        out.append((ideal, f, e, tuple(g)))
    field._kd_cache[ell] = out
    return out


def _ideal_power(field: RealAbelianField, key, ideal: IntegralIdeal, k: int) -> IntegralIdeal:
    cache = field._ideal_power_cache.setdefault(key, {0: IntegralIdeal.whole_ring(field), 1: ideal})
    if k in cache:
        return cache[k]
    kk = max(i for i in cache if i <= k)
    cur = cache[kk]
    for i in range(kk + 1, k + 1):
        cur = cur * ideal
        cache[i] = cur
    return cache[k]


def valuation_at_prime(field: RealAbelianField, alpha, ell: int, prime_index: int) -> int:
    """v_P(alpha) by containment in powers of P."""
    ideal, f, e, g = prime_factorization(field, ell)[prime_index]
    key = (ell, prime_index)
    pa = IntegralIdeal.principal(field, alpha)
    v = 0
    while True:
        pw = _ideal_power(field, key, ideal, v + 1)
        if pw.contains_ideal(pa):
            v += 1
        else:
            return v


def divisors_coprime_sigma(field: RealAbelianField, alpha, sigma_set):
    """All integral ideals containing (alpha) and coprime to sigma_set.

    Returns a list of records (ideal, norm, factorization) with the
    factorization a tuple of (ell, prime_index, exponent).
    """
    n = abs(field.norm(alpha))
    if n == 0:
        raise DomainError("alpha must be nonzero")
    support = []
    for ell in _factor_int(n):
        if ell in sigma_set:
            continue
        primes = prime_factorization(field, ell)
        for idx, (ideal, f, e, g) in enumerate(primes):
            v = valuation_at_prime(field, alpha, ell, idx)
            if v > 0:
                support.append((ell, idx, v, ideal, ell**f))
    records = []

    def rec(i, current_ideal, current_norm, fac):
        if i == len(support):
            records.append((current_ideal, current_norm, tuple(fac)))
            return
        ell, idx, vmax, ideal, pnorm = support[i]
        for e in range(vmax + 1):
            if e == 0:
                rec(i + 1, current_ideal, current_norm, fac)
            else:
                nxt = current_ideal * _ideal_power(field, (ell, idx), ideal, e)
                fac.append((ell, idx, e))
                rec(i + 1, nxt, current_norm * pnorm**e, fac)
                fac.pop()

    rec(0, IntegralIdeal.whole_ring(field), 1, [])
    records.sort(key=lambda r: (r[1], r[2]))
    return records


def _factor_int(n: int):
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -------------------------------------------------------------- providers

class ReciprocityProvider:
    """Source of Artin symbols valued in a finite quotient group."""

    def __init__(self, group):
        self.group = group

    def artin_prime(self, field, ell, prime_index) -> int:
        raise NotImplementedError

    def artin(self, field, factorization) -> int:
        g = self.group.e
        for ell, idx, e in factorization:
            s = self.artin_prime(field, ell, idx)
            g = self.group.table[g][self.group.power(s, e)]
        return g


class BuiltinCyclotomic(ReciprocityProvider):
    """Abelian-over-Q reciprocity: sigma_a = (N a mod M) via a labeling map.

    label_fn maps a residue prime to M to an element index of the quotient
    group, and must be a homomorphism on the residues it accepts.
    """

    def __init__(self, group, conductor: int, label_fn):
        super().__init__(group)
        self.conductor = conductor
        self.label_fn = label_fn

    def artin_prime(self, field, ell, prime_index) -> int:
        primes = prime_factorization(field, ell)
        ideal, f, e, g = primes[prime_index]
        n = ideal.norm
        if gcd(n, self.conductor) != 1:
            raise NotCoprime(f"norm {n} shares a factor with the conductor")
        return self.label_fn(n % self.conductor)

    def artin_ideal_norm(self, n: int) -> int:
        if gcd(n, self.conductor) != 1:
            raise NotCoprime(f"norm {n} shares a factor with the conductor")
        return self.label_fn(n % self.conductor)


class OracleTable(ReciprocityProvider):
    """Artin symbols for non-abelian-over-Q data, from an explicit table.

    Keys are (ell, prime_index) in the deterministic Kummer-Dedekind factor
    order; the header of the serialized form binds indices to factors.
    """

    def __init__(self, group, table: dict):
        super().__init__(group)
        self.table = dict(table)

    def artin_prime(self, field, ell, prime_index) -> int:
        key = (ell, prime_index)
        if key not in self.table:
            raise MissingOracleEntry(f"no symbol for prime {key}")
        return self.table[key]

    def write(self, path, field: RealAbelianField):
        with open(path, "w") as fh:
            fh.write("# oracle table: prime-ideal-label : group-element-index\n")
            fh.write(f"# field {field.name} degree {field.degree}\n")
            for ell in sorted({k[0] for k in self.table}):
                primes = prime_factorization(field, ell)
                binding = " | ".join(",".join(map(str, g)) for _, _, _, g in primes)
                fh.write(f"@ {ell} : {binding}\n")
            for (ell, idx) in sorted(self.table):
                fh.write(f"{ell}.{idx} : {self.table[(ell, idx)]}\n")

    @staticmethod
    def read(path, group, field: RealAbelianField) -> "OracleTable":
        table = {}
        bindings = {}
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if line.startswith("@"):
                    head, bind = line[1:].split(":", 1)
                    ell = int(head.strip())
                    bindings[ell] = [tuple(map(int, part.split(","))) for part in bind.strip().split("|")]
                    continue
                label, val = line.split(":")
                ell_s, idx_s = label.strip().split(".")
                table[(int(ell_s), int(idx_s))] = int(val)
        # validate bindings against the current KD order
        for ell, polys in bindings.items():
            primes = prime_factorization(field, ell)
            got = [g for _, _, _, g in primes]
            if [tuple(p) for p in got] != [tuple(p) for p in polys]:
                raise DomainError(f"oracle header for {ell} does not match KD factors")
        return OracleTable(group, table)


def check_provider_multiplicativity(provider, field, alphas, sigma_set, samples=20, seed=31):
    """sigma_(ab) = sigma_a sigma_b on sampled coprime divisor pairs."""
    rng = random.Random(seed)
    recs = []
    for alpha in alphas:
        recs.extend(divisors_coprime_sigma(field, alpha, sigma_set))
    recs = [r for r in recs if r[2]]
    for _ in range(samples):
        if len(recs) < 2:
            return True
        a = recs[rng.randrange(len(recs))]
        b = recs[rng.randrange(len(recs))]
        prod_fac = _merge_factorizations(a[2], b[2])
        lhs = provider.artin(field, prod_fac)
        rhs = provider.group.table[provider.artin(field, a[2])][provider.artin(field, b[2])]
        if lhs != rhs:
            return False
    return True


def _merge_factorizations(fa, fb):
    acc = {}
    for ell, idx, e in list(fa) + list(fb):
        acc[(ell, idx)] = acc.get((ell, idx), 0) + e
    return tuple((ell, idx, e) for (ell, idx), e in sorted(acc.items()))
