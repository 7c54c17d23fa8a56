"""Truncated q-expansions indexed by totally positive field elements.

A series is (c0 + sum_mu c_mu q^mu) / den, where the indices mu run over
totally positive elements with trace at most the recorded bound, the
coefficients live in one group algebra at one precision, and den is a shared
denominator from the twist catalog.  The index monoid is trace-additive, so
a product of two series with bound B is again valid to bound B.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraElement, CatalogDen, GroupAlgebra, SFraction
from .errors import BetaNotSigmaSupported, DomainError, UnsupportedPair
from .fields import RealAbelianField, _factor_int


class IndexUniverse:
    """Totally positive elements of trace <= bound, shared per (field, bound)."""

    _cache = {}

    def __new__(cls, field: RealAbelianField, bound: int):
        key = (id(field), bound)
        for (fid, b), inst in cls._cache.items():
            if fid == id(field) and b >= bound:
                return inst
        inst = super().__new__(cls)
        inst.field = field
        inst.bound = bound
        inst.by_trace = field.totally_positive_up_to(bound)
        inst.members = {a: t for t in inst.by_trace for a in inst.by_trace[t]}
        cls._cache[key] = inst
        return inst

    def trace_of(self, idx):
        return self.members.get(idx)

    def indices_up_to(self, bound: int):
        out = []
        for t in range(1, bound + 1):
            out.extend(self.by_trace.get(t, []))
        return out


@dataclass(frozen=True)
class QExpansion:
    field: RealAbelianField
    bound: int
    c0: AlgebraElement
    coeffs: dict
    den: CatalogDen

    def __post_init__(self):
        clean = {k: v for k, v in self.coeffs.items() if not v.is_zero()}
        object.__setattr__(self, "coeffs", clean)

    # ------------------------------------------------------------- basics
    @property
    def alg(self) -> GroupAlgebra:
        return self.c0.alg

    @property
    def precision(self) -> int:
        return self.c0.precision

    @staticmethod
    def constant(field, bound, c0: AlgebraElement, den: CatalogDen | None = None) -> "QExpansion":
        return QExpansion(field, bound, c0, {}, den if den is not None else CatalogDen.one(c0.alg.group))

    @staticmethod
    def one(field, bound, alg: GroupAlgebra, precision: int) -> "QExpansion":
        return QExpansion.constant(field, bound, alg.one(precision))

    def coeff(self, idx) -> AlgebraElement:
        return self.coeffs.get(idx, self.alg.zero(self.precision))

    def constant_term(self) -> SFraction:
        return SFraction(self.c0, self.den)

    def universe(self) -> IndexUniverse:
        return IndexUniverse(self.field, self.bound)

    def _join(self, other) -> "QExpansion":
        if isinstance(other, QExpansion):
            if other.field is not self.field:
                raise DomainError("mixed index fields")
            return other
        if isinstance(other, AlgebraElement):
            return QExpansion.constant(self.field, self.bound, other)
        if isinstance(other, int):
            return QExpansion.constant(self.field, self.bound, self.alg.scalar(other, self.precision))
        raise DomainError(f"cannot combine QExpansion with {type(other)}")

    # ----------------------------------------------------------- ring ops
    def __add__(self, other):
        o = self._join(other)
        bound = min(self.bound, o.bound)
        if self.den == o.den:
            a, b, den = self, o, self.den
        else:
            a = self.scale_elem(o.den.as_element(self.alg, self.precision))
            b = o.scale_elem(self.den.as_element(self.alg, self.precision))
            den = self.den * o.den
        c0 = a.c0 + b.c0
        coeffs = dict(a.coeffs)
        for k, v in b.coeffs.items():
            coeffs[k] = coeffs.get(k, self.alg.zero(self.precision)) + v
        return QExpansion(self.field, bound, c0, coeffs, den)

    __radd__ = __add__

    def __neg__(self):
        return QExpansion(self.field, self.bound, -self.c0, {k: -v for k, v in self.coeffs.items()}, self.den)

    def __sub__(self, other):
        return self + (-self._join(other))

    def __rsub__(self, other):
        return self._join(other) - self

    def scale_elem(self, a: AlgebraElement) -> "QExpansion":
        """Multiply by a constant algebra element (no denominator change)."""
        return QExpansion(self.field, self.bound, self.c0 * a,
                          {k: v * a for k, v in self.coeffs.items()}, self.den)

    def __mul__(self, other):
        o = self._join(other)
        bound = min(self.bound, o.bound)
        uni = IndexUniverse(self.field, bound)
        c0 = self.c0 * o.c0
        out = {}
        zero = self.alg.zero(min(self.precision, o.precision))

        def put(idx, val):
            out[idx] = out.get(idx, zero) + val

        for k, v in self.coeffs.items():
            t = uni.trace_of(k)
            if t is not None and t <= bound:
                put(k, v * o.c0)
        for k, v in o.coeffs.items():
            t = uni.trace_of(k)
            if t is not None and t <= bound:
                put(k, self.c0 * v)
        for k1, v1 in self.coeffs.items():
            t1 = uni.trace_of(k1)
            if t1 is None:
                continue
            for k2, v2 in o.coeffs.items():
                t2 = uni.trace_of(k2)
                if t2 is None or t1 + t2 > bound:
                    continue
                idx = tuple(x + y for x, y in zip(k1, k2))
                put(idx, v1 * v2)
        return QExpansion(self.field, bound, c0, out, self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.invert_unit() ** (-k)
        r = QExpansion.one(self.field, self.bound, self.alg, self.precision)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def invert_unit(self) -> "QExpansion":
        """Inverse by coefficient recursion; c0 must invert constructively.

        For a series A/den the inverse is den * A^(-1), an integral series.
        """
        inv0 = self.c0.inverse()  # raises NotAUnit otherwise
        uni = self.universe()
        bc = {}
        for mu in uni.indices_up_to(self.bound):
            tmu = uni.trace_of(mu)
            acc = None
            for nu, av in self.coeffs.items():
                tnu = uni.trace_of(nu)
                if tnu is None or tnu > tmu:
                    continue
                rest = tuple(x - y for x, y in zip(mu, nu))
                if all(x == 0 for x in rest):
                    term = av * inv0
                else:
                    bv = bc.get(rest)
                    if bv is None:
                        continue  # zero or invalid index
                    term = av * bv
                acc = term if acc is None else acc + term
            if acc is None:
                continue
            bc[mu] = -(inv0 * acc)
        inv_series = QExpansion(self.field, self.bound, inv0, bc, CatalogDen.one(self.alg.group))
        if not self.den.is_one():
            inv_series = inv_series.scale_elem(self.den.as_element(self.alg, self.precision))
        return inv_series

    def divide(self, other: "QExpansion") -> "QExpansion":
        """self / other with structural cancellation of shared catalog factors."""
        o = self._join(other)
        common = _factor_gcd(self.den.factors, o.den.factors)
        a = QExpansion(self.field, self.bound, self.c0, self.coeffs,
                       CatalogDen(self.alg.group, _factor_sub(self.den.factors, common)))
        b = QExpansion(self.field, o.bound, o.c0, o.coeffs,
                       CatalogDen(self.alg.group, _factor_sub(o.den.factors, common)))
        return a * b.invert_unit()

    # ------------------------------------------------------------ operators
    def u_beta(self, beta, sigma_set=None) -> "QExpansion":
        """Hecke operator: c0 kept, mu-th coefficient becomes c(beta*mu).

        beta is a totally positive element (an int means a rational integer);
        when sigma_set is given, beta must be supported on those primes.
        """
        f = self.field
        beta_elem = f.from_int(beta) if isinstance(beta, int) else beta
        if sigma_set is not None:
            n = abs(f.norm(beta_elem))
            if any(ell not in sigma_set for ell in _factor_int(n)):
                raise BetaNotSigmaSupported(f"beta norm {n} uses primes outside sigma")
        if beta_elem == f.one():
            return self
        uni = self.universe()
        # output bound: the largest t such that every index of trace <= t
        # has beta*index of trace <= self.bound
        newbound = 0
        for t in range(1, self.bound + 1):
            if all(f.trace(f.mul(beta_elem, mu)) <= self.bound for mu in uni.by_trace.get(t, [])):
                newbound = t
            else:
                break
        if newbound == 0:
            raise DomainError("u_beta leaves no usable bound")
        out = {}
        for t in range(1, newbound + 1):
            for mu in uni.by_trace.get(t, []):
                v = self.coeffs.get(f.mul(beta_elem, mu))
                if v is not None:
                    out[mu] = v
        return QExpansion(self.field, newbound, self.c0, out, self.den)

    def restrict_to_rationals(self, target_field: RealAbelianField) -> "QExpansion":
        """Diagonal restriction: the q^n coefficient is the sum of c(mu) over
        the trace-n fiber; c0 unchanged.  Only K = Q is supported below F."""
        if target_field.degree != 1:
            raise UnsupportedPair("only restriction to Q is supported")
        if self.field.degree == 1:
            return self
        uni = self.universe()
        out = {}
        for mu, v in self.coeffs.items():
            t = uni.trace_of(mu)
            if t is None or t > self.bound:
                continue
            key = (t,)
            out[key] = out.get(key, self.alg.zero(self.precision)) + v
        return QExpansion(target_field, self.bound, self.c0, out, self.den)

    def map_group(self, fmap, target_group) -> "QExpansion":
        return QExpansion(
            self.field,
            self.bound,
            self.c0.map_group(fmap, target_group),
            {k: v.map_group(fmap, target_group) for k, v in self.coeffs.items()},
            self.den.map_group(fmap, target_group),
        )

    def map_coeffs(self, fn, den_fn=None) -> "QExpansion":
        """Apply fn to c0 and every coefficient; den transforms by den_fn."""
        den = den_fn(self.den) if den_fn is not None else self.den
        return QExpansion(self.field, self.bound, fn(self.c0), {k: fn(v) for k, v in self.coeffs.items()}, den)

    def permute_support(self, amap) -> "QExpansion":
        return self.map_coeffs(lambda x: x.permute(amap), den_fn=lambda d: CatalogDen(
            d.group, tuple((c, amap[g]) for c, g in d.factors)))

    def is_invariant(self, conj_maps, digits=None) -> bool:
        return all(self.permute_support(m).congruent(self, digits) for m in conj_maps)

    # --------------------------------------------------------- comparisons
    def congruent(self, other, digits: int | None = None) -> bool:
        o = self._join(other)
        bound = min(self.bound, o.bound)
        if self.den == o.den:
            a, b = self, o
        else:
            a = self.scale_elem(o.den.as_element(self.alg, self.precision))
            b = o.scale_elem(self.den.as_element(self.alg, self.precision))
        if not a.c0.congruent(b.c0, digits):
            return False
        uni = IndexUniverse(self.field, bound)
        keys = set()
        for k in list(a.coeffs) + list(b.coeffs):
            t = uni.trace_of(k)
            if t is not None and t <= bound:
                keys.add(k)
        return all(a.coeff(k).congruent(b.coeff(k), digits) for k in keys)

    def reduce(self, precision: int) -> "QExpansion":
        return self.map_coeffs(lambda x: x.reduce(precision))

    def reduce_bound(self, bound: int) -> "QExpansion":
        if bound > self.bound:
            raise DomainError("cannot increase the bound")
        uni = IndexUniverse(self.field, self.bound)
        coeffs = {k: v for k, v in self.coeffs.items()
                  if uni.trace_of(k) is not None and uni.trace_of(k) <= bound}
        return QExpansion(self.field, bound, self.c0, coeffs, self.den)

    # ------------------------------------------------- ring protocol (roots)
    def _require_integral(self):
        if not self.den.is_one():
            raise DomainError("operation needs an integral series")

    def one_like(self) -> "QExpansion":
        return QExpansion.one(self.field, self.bound, self.alg, self.precision)

    def ring_p(self) -> int:
        return self.alg.p

    def _raw(self, precision: int) -> "QExpansion":
        self._require_integral()
        return QExpansion(self.field, self.bound, self.c0._raw(precision),
                          {k: v._raw(precision) for k, v in self.coeffs.items()}, self.den)

    def divisible_by_p(self, k: int) -> bool:
        return self.c0.divisible_by_p(k) and all(v.divisible_by_p(k) for v in self.coeffs.values())

    def divp(self, k: int) -> "QExpansion":
        self._require_integral()
        return QExpansion(self.field, self.bound, self.c0.divp(k),
                          {key: v.divp(k) for key, v in self.coeffs.items()}, self.den)

    def divide_int(self, m: int) -> "QExpansion":
        self._require_integral()
        return QExpansion(self.field, self.bound, self.c0.divide_int(m),
                          {key: v.divide_int(m) for key, v in self.coeffs.items()}, self.den)

    def __repr__(self):
        return (f"QExpansion({self.field.name}, bound={self.bound}, "
                f"prec={self.precision}, terms={len(self.coeffs)}, den={len(self.den.factors)})")


def _factor_gcd(fa, fb):
    out = []
    fb_left = list(fb)
    for f in fa:
        if f in fb_left:
            out.append(f)
            fb_left.remove(f)
    return tuple(out)


def _factor_sub(fa, sub):
    left = list(fa)
    for f in sub:
        left.remove(f)
    return tuple(left)
