"""Exact arithmetic in Z/p^N with tracked precision.

A value with precision N is an integer known modulo p^N.  Arithmetic never
claims more precision than its inputs justify: addition and multiplication
take the minimum of the input precisions, division by a unit keeps it, and
division by p^k costs k digits.  On top of the plain scalars this module
provides Teichmuller lifts, truncated logarithm/exponential on 1 + pR,
p-th roots by digit lifting, and the degree p-1 ramified extension by a
primitive p-th root of unity.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import DenominatorDivisibleByP, DomainError, NoRoot, NotAUnit


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_odd_prime(p: int) -> None:
    if p == 2 or not _is_probable_prime(p):
        raise DomainError(f"p must be an odd prime, got {p}")


@dataclass(frozen=True)
class PadicNumber:
    """Integer mod p^precision with the guaranteed precision attached."""

    p: int
    value: int
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise DomainError("precision must be >= 1")
        object.__setattr__(self, "value", self.value % self.p**self.precision)

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def _join(self, other) -> "PadicNumber":
        if isinstance(other, int):
            return PadicNumber(self.p, other, self.precision)
        if not isinstance(other, PadicNumber) or other.p != self.p:
            raise DomainError("mixed primes in arithmetic")
        return other

    def reduce(self, precision: int) -> "PadicNumber":
        if precision > self.precision:
            raise DomainError("cannot increase precision")
        return PadicNumber(self.p, self.value, precision)

    def __add__(self, other):
        o = self._join(other)
        n = min(self.precision, o.precision)
        return PadicNumber(self.p, self.value + o.value, n)

    __radd__ = __add__

    def __neg__(self):
        return PadicNumber(self.p, -self.value, self.precision)

    def __sub__(self, other):
        return self + (-self._join(other))

    def __rsub__(self, other):
        return self._join(other) - self

    def __mul__(self, other):
        o = self._join(other)
        n = min(self.precision, o.precision)
        return PadicNumber(self.p, self.value * o.value, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return PadicNumber(self.p, pow(self.value, k, self.modulus), self.precision)

    def is_zero(self) -> bool:
        return self.value == 0

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def valuation(self) -> int:
        """v_p of the known value; a zero value only certifies >= precision."""
        if self.value == 0:
            return self.precision
        v = 0
        x = self.value
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def inverse(self) -> "PadicNumber":
        if not self.is_unit():
            raise NotAUnit(f"{self} is not a unit")
        return PadicNumber(self.p, pow(self.value, -1, self.modulus), self.precision)

    def shift_down(self, k: int) -> "PadicNumber":
        """Exact division by p^k; costs k digits of precision."""
        if k == 0:
            return self
        if self.value % self.p**k != 0:
            raise DomainError(f"{self} is not divisible by p^{k}")
        if self.precision - k < 1:
            raise DomainError("precision exhausted by division by p")
        return PadicNumber(self.p, self.value // self.p**k, self.precision - k)

    def __truediv__(self, other):
        o = self._join(other)
        k = o.valuation()
        if o.value == 0:
            raise NotAUnit("division by zero value")
        num = self if k == 0 else self.shift_down(k)
        return num * PadicNumber(o.p, o.value // o.p**k, o.precision - k if k else o.precision).inverse()

    def divide_int(self, m: int) -> "PadicNumber":
        """Exact division by a nonzero integer, splitting off its p-part."""
        if m == 0:
            raise DomainError("division by zero")
        sign = 1 if m > 0 else -1
        m = abs(m)
        k = 0
        while m % self.p == 0:
            m //= self.p
            k += 1
        out = self.shift_down(k) if k else self
        inv = pow(m, -1, out.modulus)
        return PadicNumber(self.p, sign * out.value * inv, out.precision)

    def congruent(self, other, digits: int | None = None) -> bool:
        o = self._join(other)
        n = min(self.precision, o.precision)
        if digits is not None:
            n = min(n, digits)
        return (self.value - o.value) % self.p**n == 0

    def to_token(self) -> str:
        return f"{self.p}^{self.precision}:{self.value}"

    @staticmethod
    def from_token(tok: str) -> "PadicNumber":
        head, val = tok.split(":")
        p, n = head.split("^")
        return PadicNumber(int(p), int(val), int(n))

    def __repr__(self):
        return f"PadicNumber({self.to_token()})"


def encode_rational(a: int, b: int, p: int, precision: int) -> PadicNumber:
    """The element x with b*x = a mod p^precision; b must be prime to p."""
    check_odd_prime(p)
    if b % p == 0:
        raise DenominatorDivisibleByP(f"p={p} divides denominator {b}")
    inv = pow(b % p**precision, -1, p**precision)
    return PadicNumber(p, a * inv, precision)


def from_fraction(q, p: int, precision: int) -> PadicNumber:
    """Encode a Fraction (or int) whose denominator is prime to p."""
    if isinstance(q, int):
        return PadicNumber(p, q, precision)
    return encode_rational(q.numerator, q.denominator, p, precision)


def teichmuller(x: PadicNumber) -> PadicNumber:
    """The unique (p-1)st root of unity congruent to x mod p."""
    if not x.is_unit():
        raise NotAUnit("teichmuller lift needs a unit")
    p, n = x.p, x.precision
    return PadicNumber(p, pow(x.value, p ** (n - 1), p**n), n)


def teichmuller_int(a: int, p: int, precision: int) -> int:
    return pow(a, p ** (precision - 1), p**precision)


def plog(u: PadicNumber) -> PadicNumber:
    """Truncated log on 1 + pR: sum of (-1)^(k+1) t^k / k until terms die."""
    p, n = u.p, u.precision
    if u.value % p != 1 % p or (u.value - 1) % p != 0:
        raise DomainError("plog needs u = 1 mod p")
    t = u.value - 1
    mod = p**n
    acc = 0
    tk = 1
    k = 0
    # valuation of t^k/k grows at least linearly; stop once k exceeds the
    # worst case k - log_p(k) >= n window
    while True:
        k += 1
        tk = tk * t  # exact integer power, only reduced after p-division
        if k > 1:
            tk %= p ** (n + k)  # enough headroom for the /k below
        term = tk
        kk = k
        while kk % p == 0:
            if term % p != 0:
                raise DomainError("internal: term not divisible")
            term //= p
            kk //= p
        term = term * pow(kk, -1, mod) % mod
        if k % 2 == 0:
            term = -term
        acc = (acc + term) % mod
        if k >= n and k - _floor_log(k, p) >= n:
            break
    return PadicNumber(p, acc, n)


def _floor_log(k: int, p: int) -> int:
    r = 0
    while p**(r + 1) <= k:
        r += 1
    return r


def pexp(t: PadicNumber) -> PadicNumber:
    """Truncated exponential on pR."""
    p, n = t.p, t.precision
    if t.value % p != 0:
        raise DomainError("pexp needs t = 0 mod p")
    mod = p**n
    acc = 1
    term_num = 1  # t^k carried exactly with headroom
    k = 0
    vfact = 0
    fact_unit = 1
    while True:
        k += 1
        term_num = term_num * t.value % p ** (n + 2 * k)
        kk = k
        while kk % p == 0:
            vfact += 1
            kk //= p
        fact_unit = fact_unit * kk % mod
        if term_num % p**vfact != 0:
            raise DomainError("internal: exp term not divisible")
        term = term_num // p**vfact * pow(fact_unit, -1, mod) % mod
        acc = (acc + term) % mod
        # v(t^k/k!) >= k - (k-1)/(p-1) >= n stops the loop
        if k - (k - 1) // (p - 1) - 1 >= n:
            break
    return PadicNumber(p, acc, n)


def hensel_proot(u: PadicNumber) -> PadicNumber:
    """Solve x^p = u with x in 1+pZ_p, by p-adic digit lifting.

    Needs u = 1 mod p^2; the root is unique mod p^(N-1) and is returned at
    precision N-1.
    """
    p, n = u.p, u.precision
    if (u.value - 1) % (p * p) != 0:
        raise NoRoot("u is not 1 mod p^2", certificate=(u.value - 1) % (p * p))
    if n < 2:
        raise DomainError("need precision >= 2 for a p-th root")
    x = 1
    # invariant: x^p = u mod p^(k+1), x determined mod p^k
    for k in range(1, n - 1):
        r = (u.value - pow(x, p, p ** (k + 2))) % p ** (k + 2)
        c = (r // p ** (k + 1)) % p
        x += c * p**k
    return PadicNumber(p, x, n - 1)


class ZetaExtNumber:
    """Element of (Z/p^N)[T]/Phi_p(T), the ramified extension by mu_p.

    Coefficients are plain integers mod p^N.  Precision is tracked in digits
    of the uniformizer pi = T - 1 (there are (p-1)N of them at level N), so
    the lossy steps of root extraction can be recorded exactly.
    """

    __slots__ = ("p", "coeffs", "pi_prec")

    def __init__(self, p: int, coeffs, pi_prec: int | None = None):
        self.p = p
        e = p - 1
        c = list(coeffs) + [0] * (e - len(coeffs))
        if pi_prec is None:
            pi_prec = e * _default_level(p, c)
        self.pi_prec = pi_prec
        n = self.level
        mod = p**n
        self.coeffs = tuple(x % mod for x in c[:e])

    @property
    def level(self) -> int:
        """Smallest N with the guaranteed pi-digits inside p^N."""
        e = self.p - 1
        return max(1, -(-self.pi_prec // e))

    @staticmethod
    def from_base(x: PadicNumber) -> "ZetaExtNumber":
        return ZetaExtNumber(x.p, (x.value,), (x.p - 1) * x.precision)

    @staticmethod
    def zeta_power(p: int, k: int, precision_level: int) -> "ZetaExtNumber":
        """T^k as an element, k taken mod p."""
        e = p - 1
        k %= p
        c = [0] * e
        if k < e:
            c[k] = 1
        else:  # T^(p-1) = -(1 + T + ... + T^(p-2))
            c = [-1] * e
        return ZetaExtNumber(p, c, e * precision_level)

    @staticmethod
    def one(p: int, precision_level: int) -> "ZetaExtNumber":
        return ZetaExtNumber.zeta_power(p, 0, precision_level)

    def _join(self, other) -> "ZetaExtNumber":
        if isinstance(other, int):
            return ZetaExtNumber(self.p, (other,), self.pi_prec)
        if isinstance(other, PadicNumber):
            return ZetaExtNumber(self.p, (other.value,),
                                 min(self.pi_prec, (self.p - 1) * other.precision))
        if not isinstance(other, ZetaExtNumber) or other.p != self.p:
            raise DomainError("mixed rings")
        return other

    def reduce_pi(self, pi_prec: int) -> "ZetaExtNumber":
        if pi_prec > self.pi_prec:
            raise DomainError("cannot increase precision")
        return ZetaExtNumber(self.p, self.coeffs, pi_prec)

    def __add__(self, other):
        o = self._join(other)
        n = min(self.pi_prec, o.pi_prec)
        return ZetaExtNumber(self.p, [a + b for a, b in zip(self.coeffs, o.coeffs)], n)

    __radd__ = __add__

    def __neg__(self):
        return ZetaExtNumber(self.p, [-a for a in self.coeffs], self.pi_prec)

    def __sub__(self, other):
        return self + (-self._join(other))

    def __rsub__(self, other):
        return self._join(other) - self

    def __mul__(self, other):
        o = self._join(other)
        n = min(self.pi_prec, o.pi_prec)
        p, e = self.p, self.p - 1
        conv = [0] * (2 * e - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        conv[i + j] += a * b
        # fold degrees >= e with T^(p-1) = -(1+...+T^(p-2))
        out = conv[:e]
        for d in range(2 * e - 2, e - 1, -1):
            a = conv[d]
            if a:
                rem = d - e  # T^d = T^(p-1) * T^(d-e+1)... handled stepwise
                # T^d = -(T^(d-e) + T^(d-e+1) + ... + T^(d-1)) after one fold
                for j in range(d - e, d):
                    if j < e:
                        out[j] -= a
                    else:
                        conv[j] -= a
        return ZetaExtNumber(p, out, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative powers unsupported; invert first")
        r = ZetaExtNumber.one(self.p, self.level).reduce_pi(self.pi_prec)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def galois(self, g: int) -> "ZetaExtNumber":
        """The substitution T -> T^g, g prime to p."""
        p, e = self.p, self.p - 1
        if g % p == 0:
            raise DomainError("galois exponent must be prime to p")
        out = [0] * e
        extra = 0
        for j, a in enumerate(self.coeffs):
            if not a:
                continue
            d = (j * g) % p
            if d < e:
                out[d] += a
            else:
                extra += a
        if extra:
            for j in range(e):
                out[j] -= extra
        return ZetaExtNumber(p, out, self.pi_prec)

    def is_zero(self) -> bool:
        n = self.level
        mod = self.p**n
        return all(c % mod == 0 for c in self.coeffs)

    def congruent(self, other, pi_digits: int | None = None) -> bool:
        o = self._join(other)
        m = min(self.pi_prec, o.pi_prec)
        if pi_digits is not None:
            m = min(m, pi_digits)
        return (self - o).pi_valuation() >= m

    def pi_valuation(self) -> int:
        """Largest m <= pi_prec with self in pi^m; pi = T - 1."""
        x = self
        v = 0
        while v < self.pi_prec:
            if not x._pi_divisible():
                return v
            x = x._pi_divide()
            v += 1
        return self.pi_prec

    def _eval_at_one_mod_p(self) -> int:
        return sum(self.coeffs) % self.p

    def _pi_divisible(self) -> bool:
        if self.is_zero():
            return True
        return self._eval_at_one_mod_p() == 0

    def _pi_divide(self) -> "ZetaExtNumber":
        """Exact division by pi = T - 1; costs one pi-digit."""
        p, e = self.p, self.p - 1
        n = self.level
        mod = p ** (n + 1)
        # solve (T-1) * q = self in Z[T]/Phi_p over Z/p^n, using that
        # Phi_p(T) = ((T-1+1)^p - 1)/(T-1) gives an explicit inverse; do it
        # by linear back-substitution on coefficients instead.
        # (T-1)(q_0 + ... + q_{e-1}T^{e-1}) =
        #   -q_0 - q_{e-1} + sum_{j=1}^{e-1} (q_{j-1} - q_j - q_{e-1}) T^j
        a = [c % mod for c in self.coeffs]
        # unknowns q_j; equations: -q0 - q_{e-1} = a0; q_{j-1} - q_j - q_{e-1} = a_j
        # with s := q_{e-1}: q_j = q_0 - (a_1+...+a_j) - j*s and q_0 = -a_0 - s,
        # and the consistency equation collapses to p*s = -(a_0+...+a_{e-1}).
        total = sum(a)
        if total % p != 0:
            raise DomainError("not divisible by pi")
        # total is only defined mod p^n; s is defined mod p^(n-1) in the worst
        # case, consistent with losing one pi-digit.
        s = (-total // p) % (p**n)
        q0 = (-a[0] - s) % (p**n)
        q = [q0]
        run = 0
        for j in range(1, e):
            run += a[j]
            q.append((q0 - run - j * s) % (p**n))
        return ZetaExtNumber(p, q, self.pi_prec - 1)

    def as_base(self, strict: bool = True) -> PadicNumber:
        """Return the base-ring value when all T-coefficients vanish."""
        p, e = self.p, self.p - 1
        n = max(1, self.pi_prec // e)
        mod = p**n
        if strict:
            for c in self.coeffs[1:]:
                if c % mod != 0:
                    raise DomainError("element is not in the base ring")
        return PadicNumber(p, self.coeffs[0], n)

    def is_base(self) -> bool:
        p, e = self.p, self.p - 1
        n = max(1, self.pi_prec // e)
        mod = p**n
        return all(c % mod == 0 for c in self.coeffs[1:])

    def norm_to_base(self) -> "ZetaExtNumber":
        """Product of all Galois conjugates T -> T^g, g = 1..p-1."""
        out = self
        for g in range(2, self.p):
            out = out * self.galois(g)
        return out

    def is_unit(self) -> bool:
        # unit iff the image in O/pi = F_p is nonzero
        return self._eval_at_one_mod_p() != 0

    def inverse(self) -> "ZetaExtNumber":
        if not self.is_unit():
            raise NotAUnit("not a unit in the ramified extension")
        # Newton iteration x -> x(2 - a x) starting from a residue inverse
        p = self.p
        n = self.level
        a1 = self._eval_at_one_mod_p()
        x = ZetaExtNumber(p, (pow(a1, -1, p),), self.pi_prec)
        steps = 0
        while steps < 2 * n + 4:
            err = ZetaExtNumber.one(p, n).reduce_pi(self.pi_prec) - self * x
            if err.is_zero():
                break
            x = x + x * err
            steps += 1
        return x

    def __eq__(self, other):
        if not isinstance(other, (ZetaExtNumber, PadicNumber, int)):
            return NotImplemented
        return self.congruent(other)

    def __hash__(self):
        raise TypeError("unhashable; compare with congruent()")

    def __repr__(self):
        return f"ZetaExtNumber(p={self.p}, {list(self.coeffs)}, pi_prec={self.pi_prec})"


def _default_level(p: int, coeffs) -> int:
    m = max((abs(c) for c in coeffs), default=1)
    n = 1
    while p**n <= m:
        n += 1
    return n


def ext_proot(u: ZetaExtNumber) -> ZetaExtNumber:
    """p-th root of u = 1 mod pi^(p+1) in the ramified extension.

    Digit lifting in the uniformizer pi = T-1; the root lies in 1 + pi^2 and
    the output carries p-1 fewer pi-digits (one base digit).
    """
    p = u.p
    e = p - 1
    one = ZetaExtNumber.one(p, u.level).reduce_pi(u.pi_prec)
    diff = u - one
    v = diff.pi_valuation()
    if v < p + 1 and v < u.pi_prec:
        raise NoRoot("u is not 1 mod pi^(p+1)", certificate=v)
    out_prec = u.pi_prec - e
    if out_prec <= 0:
        raise DomainError("pi-precision exhausted by p-th root")
    # Newton x <- x + (u - x^p)/p is self-correcting, so run it on raw
    # representatives at the full working level and stamp the honest
    # precision only on the result.
    work = e * u.level
    u_raw = ZetaExtNumber(p, u.coeffs, work)
    x = ZetaExtNumber.one(p, u.level)
    k = 2
    while k <= u.pi_prec + 2:
        r = u_raw - x**p
        if min(r.pi_valuation(), u.pi_prec) >= u.pi_prec:
            break
        if min(r.pi_valuation(), u.pi_prec) < min(u.pi_prec, e + k):
            raise NoRoot("digit lifting obstructed", certificate=r.pi_valuation())
        # divide by p exactly on coefficients (p ~ unit * pi^(p-1))
        if any(cc % p != 0 for cc in r.coeffs):
            raise NoRoot("digit lifting obstructed", certificate=k)
        t = ZetaExtNumber(p, [cc // p for cc in r.coeffs], work)
        x = x + t
        k += 1
    else:
        raise NoRoot("digit lifting did not converge", certificate=None)
    return x.reduce_pi(out_prec)
