"""Group algebras over Z/p^N and the maps the tower pipeline needs.

Elements are sparse coefficient dicts over a FiniteGroup, with one shared
precision (p-digits).  Coefficients are plain ints, or tuples of length p-1
for the mu_p-extension scalars.  The lossy operations (division by p, p-th
roots) record their loss in the element precision.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, NoRoot, NotAUnit, NotGaloisStable
from .groups import Character, FiniteGroup
from .linalg import HowellBasis, berkowitz_det, solve_linear_mod
from .padic import PadicNumber, ZetaExtNumber


class GroupAlgebra:
    """Context object: (Z/p^N)[Q] or its mu_p-extension scalars."""

    def __init__(self, group: FiniteGroup, p: int, ext: bool = False):
        self.group = group
        self.p = p
        self.ext = ext

    def __eq__(self, other):
        return (
            isinstance(other, GroupAlgebra)
            and other.p == self.p
            and other.ext == self.ext
            and (other.group is self.group or other.group.table == self.group.table)
        )

    def __hash__(self):
        return hash((self.group.n, self.p, self.ext))

    # scalar helpers ----------------------------------------------------
    def s_zero(self):
        return (0,) * (self.p - 1) if self.ext else 0

    def s_one(self):
        if self.ext:
            return (1,) + (0,) * (self.p - 2)
        return 1

    def s_add(self, a, b, mod):
        if self.ext:
            return tuple((x + y) % mod for x, y in zip(a, b))
        return (a + b) % mod

    def s_neg(self, a, mod):
        if self.ext:
            return tuple((-x) % mod for x in a)
        return (-a) % mod

    def s_mul(self, a, b, mod):
        if not self.ext:
            return a * b % mod
        return _mul_mod_phi(a, b, self.p, mod)

    def s_int(self, m, mod):
        if self.ext:
            return (m % mod,) + (0,) * (self.p - 2)
        return m % mod

    def s_is_zero(self, a, mod):
        if self.ext:
            return all(x % mod == 0 for x in a)
        return a % mod == 0

    def s_reduce(self, a, mod):
        if self.ext:
            return tuple(x % mod for x in a)
        return a % mod

    # element constructors ----------------------------------------------
    def zero(self, precision: int) -> "AlgebraElement":
        return AlgebraElement(self, {}, precision)

    def one(self, precision: int) -> "AlgebraElement":
        return AlgebraElement(self, {self.group.e: self.s_one()}, precision)

    def basis(self, g: int, precision: int) -> "AlgebraElement":
        return AlgebraElement(self, {g: self.s_one()}, precision)

    def scalar(self, value: int, precision: int) -> "AlgebraElement":
        return AlgebraElement(self, {self.group.e: self.s_int(value, self.p**precision)}, precision)

    def element(self, coeffs: dict, precision: int) -> "AlgebraElement":
        return AlgebraElement(self, dict(coeffs), precision)

    def from_padic(self, x: PadicNumber, precision=None) -> "AlgebraElement":
        precision = precision if precision is not None else x.precision
        if precision > x.precision:
            raise DomainError("cannot increase precision")
        return self.scalar(x.value, precision)

    def to_ext(self) -> "GroupAlgebra":
        return GroupAlgebra(self.group, self.p, ext=True)

    def to_base(self) -> "GroupAlgebra":
        return GroupAlgebra(self.group, self.p, ext=False)


def _mul_mod_phi(a, b, p, mod):
    e = p - 1
    conv = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    conv[i + j] += x * y
    out = conv[:e]
    for d in range(2 * e - 2, e - 1, -1):
        c = conv[d]
        if c:
            for j in range(d - e, d):
                if j < e:
                    out[j] -= c
                else:
                    conv[j] -= c
    return tuple(x % mod for x in out)


@dataclass(frozen=True)
class AlgebraElement:
    """Sparse group-algebra element; all coefficients share one precision."""

    alg: GroupAlgebra
    coeffs: dict
    precision: int

    def __post_init__(self):
        mod = self.modulus
        clean = {}
        for g, v in self.coeffs.items():
            v = self.alg.s_reduce(v, mod)
            if not self.alg.s_is_zero(v, mod):
                clean[g] = v
        object.__setattr__(self, "coeffs", clean)

    @property
    def modulus(self) -> int:
        return self.alg.p**self.precision

    def coeff(self, g: int):
        return self.coeffs.get(g, self.alg.s_zero())

    def coeff_padic(self, g: int) -> PadicNumber:
        if self.alg.ext:
            raise DomainError("extension coefficients are not base scalars")
        return PadicNumber(self.alg.p, self.coeff(g), self.precision)

    def coeff_ext(self, g: int) -> ZetaExtNumber:
        v = self.coeff(g)
        if not self.alg.ext:
            v = (v,) + (0,) * (self.alg.p - 2)
        return ZetaExtNumber(self.alg.p, v, (self.alg.p - 1) * self.precision)

    # ------------------------------------------------------------- ring ops
    def _join(self, other) -> "AlgebraElement":
        if isinstance(other, int):
            return self.alg.scalar(other, self.precision)
        if isinstance(other, PadicNumber):
            return self.alg.from_padic(other, min(self.precision, other.precision))
        if not isinstance(other, AlgebraElement) or other.alg != self.alg:
            raise DomainError("mixed algebras")
        return other

    def __add__(self, other):
        o = self._join(other)
        n = min(self.precision, o.precision)
        mod = self.alg.p**n
        out = dict(self.coeffs)
        for g, v in o.coeffs.items():
            out[g] = self.alg.s_add(out.get(g, self.alg.s_zero()), v, mod)
        return AlgebraElement(self.alg, out, n)

    __radd__ = __add__

    def __neg__(self):
        mod = self.modulus
        return AlgebraElement(self.alg, {g: self.alg.s_neg(v, mod) for g, v in self.coeffs.items()}, self.precision)

    def __sub__(self, other):
        return self + (-self._join(other))

    def __rsub__(self, other):
        return self._join(other) - self

    def __mul__(self, other):
        o = self._join(other)
        n = min(self.precision, o.precision)
        mod = self.alg.p**n
        table = self.alg.group.table
        out = {}
        zero = self.alg.s_zero()
        for g, a in self.coeffs.items():
            row = table[g]
            for h, b in o.coeffs.items():
                k = row[h]
                out[k] = self.alg.s_add(out.get(k, zero), self.alg.s_mul(a, b, mod), mod)
        return AlgebraElement(self.alg, out, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        r = self.alg.one(self.precision)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def scale_int(self, m: int) -> "AlgebraElement":
        mod = self.modulus
        if self.alg.ext:
            return AlgebraElement(self.alg, {g: tuple(x * m % mod for x in v) for g, v in self.coeffs.items()}, self.precision)
        return AlgebraElement(self.alg, {g: v * m % mod for g, v in self.coeffs.items()}, self.precision)

    def is_zero(self) -> bool:
        return not self.coeffs

    def congruent(self, other, digits: int | None = None) -> bool:
        o = self._join(other)
        n = min(self.precision, o.precision)
        if digits is not None:
            n = min(n, digits)
        mod = self.alg.p**n
        d = self - o
        return all(self.alg.s_is_zero(v, mod) for v in d.coeffs.values())

    def reduce(self, precision: int) -> "AlgebraElement":
        if precision > self.precision:
            raise DomainError("cannot increase precision")
        return AlgebraElement(self.alg, self.coeffs, precision)

    def _raw(self, precision: int) -> "AlgebraElement":
        """Reinterpret the stored residues at a higher working precision.

        Digits above the true guarantee are junk; callers must only use this
        inside algorithms whose outputs provably ignore that junk.
        """
        return AlgebraElement(self.alg, self.coeffs, precision)

    def divp(self, k: int) -> "AlgebraElement":
        """Exact division by p^k; costs k digits."""
        if k == 0:
            return self
        p = self.alg.p
        pk = p**k
        out = {}
        for g, v in self.coeffs.items():
            if self.alg.ext:
                if any(x % pk for x in v):
                    raise DomainError("coefficient not divisible by p^k")
                out[g] = tuple(x // pk for x in v)
            else:
                if v % pk:
                    raise DomainError("coefficient not divisible by p^k")
                out[g] = v // pk
        if self.precision - k < 1:
            raise DomainError("precision exhausted")
        return AlgebraElement(self.alg, out, self.precision - k)

    def divisible_by_p(self, k: int) -> bool:
        pk = self.alg.p**min(k, self.precision)
        if self.alg.ext:
            return all(all(x % pk == 0 for x in v) for v in self.coeffs.values())
        return all(v % pk == 0 for v in self.coeffs.values())

    def divide_int(self, m: int) -> "AlgebraElement":
        """Exact division by a nonzero integer (unit part by inversion)."""
        p = self.alg.p
        sign = 1 if m > 0 else -1
        m = abs(m)
        k = 0
        while m % p == 0:
            m //= p
            k += 1
        x = self.divp(k) if k else self
        inv = sign * pow(m, -1, x.modulus)
        return x.scale_int(inv)

    def augmentation(self):
        mod = self.modulus
        acc = self.alg.s_zero()
        for v in self.coeffs.values():
            acc = self.alg.s_add(acc, v, mod)
        return acc

    # ------------------------------------------------------------ group maps
    def map_group(self, fmap, target_group: FiniteGroup) -> "AlgebraElement":
        """Induced map along a group homomorphism given as an index list."""
        tgt = GroupAlgebra(target_group, self.alg.p, self.alg.ext)
        mod = self.modulus
        out = {}
        zero = self.alg.s_zero()
        for g, v in self.coeffs.items():
            k = fmap[g]
            out[k] = self.alg.s_add(out.get(k, zero), v, mod)
        return AlgebraElement(tgt, out, self.precision)

    def permute(self, amap) -> "AlgebraElement":
        return AlgebraElement(self.alg, {amap[g]: v for g, v in self.coeffs.items()}, self.precision)

    def character_twist(self, chi: Character, k: int = 1) -> "AlgebraElement":
        """The ring map induced by g -> chi(g)^k g.

        Stays in the base algebra when chi has prime-to-p order (Teichmuller
        values); otherwise lands in the extension scalars.
        """
        p, n = self.alg.p, self.precision
        order = chi.order
        if order == 1 or k % order == 0:
            return self
        if (p - 1) % order == 0:
            # Teichmuller values: base-scalar twist
            vals = {}
            out = {}
            mod = self.modulus
            for g, v in self.coeffs.items():
                e = (chi.exps[g] * k) % chi.modulus
                if e not in vals:
                    vals[e] = _teich_value(chi, e, p, n)
                if self.alg.ext:
                    out[g] = self.alg.s_mul(v, (vals[e],) + (0,) * (p - 2), mod)
                else:
                    out[g] = self.alg.s_mul(v, vals[e], mod)
            return AlgebraElement(self.alg, out, n)
        # values need the mu_p extension
        ext = self.alg.to_ext()
        mod = self.modulus
        out = {}
        for g, v in self.coeffs.items():
            zv = embed_exponent(chi, (chi.exps[g] * k) % chi.modulus, p, n)
            vv = v if self.alg.ext else (v,) + (0,) * (p - 2)
            out[g] = _mul_mod_phi(vv, zv, p, mod)
        return AlgebraElement(ext, out, n)

    def to_ext_element(self) -> "AlgebraElement":
        if self.alg.ext:
            return self
        ext = self.alg.to_ext()
        return AlgebraElement(ext, {g: (v,) + (0,) * (self.alg.p - 2) for g, v in self.coeffs.items()}, self.precision)

    def descend_to_base(self, strict: bool = True) -> "AlgebraElement":
        """Inverse of to_ext_element when every coefficient is base."""
        if not self.alg.ext:
            return self
        mod = self.modulus
        out = {}
        for g, v in self.coeffs.items():
            if strict and any(x % mod for x in v[1:]):
                raise NotGaloisStable(f"coefficient at {g} has T-components")
            out[g] = v[0]
        return AlgebraElement(self.alg.to_base(), out, self.precision)

    def scalar_galois(self, gexp: int) -> "AlgebraElement":
        """Apply T -> T^gexp to every extension coefficient."""
        if not self.alg.ext:
            return self
        p = self.alg.p
        out = {}
        for g, v in self.coeffs.items():
            z = ZetaExtNumber(p, v, (p - 1) * self.precision).galois(gexp)
            out[g] = z.coeffs
        return AlgebraElement(self.alg, out, self.precision)

    # -------------------------------------------------------------- inverses
    def regular_matrix(self):
        """Matrix of right-multiplication by self on the standard basis.

        Column g holds the coefficients of [g] * self... laid out so that
        (M @ y)_h = sum_g y_g * coeff_of_h([g] * self); used for solving
        y * self = target with unknown y.
        """
        n = self.alg.group.n
        table = self.alg.group.table
        if self.alg.ext:
            raise DomainError("regular matrix only for base scalars")
        m = [[0] * n for _ in range(n)]
        for g in range(n):
            row = table[g]
            for h, v in self.coeffs.items():
                m[row[h]][g] = v
        return m

    def is_unit(self) -> bool:
        try:
            self.inverse()
            return True
        except NotAUnit:
            return False

    def inverse(self) -> "AlgebraElement":
        """Constructive inversion by solving x*y = 1 over Z/p^N."""
        if self.alg.ext:
            # reduce to base by Galois-norm trick is unnecessary in the
            # pipeline; refuse loudly instead of guessing
            raise DomainError("inversion of extension-scalar elements unsupported")
        n = self.alg.group.n
        rhs = [0] * n
        rhs[self.alg.group.e] = 1
        sol = solve_linear_mod(self.regular_matrix(), rhs, self.alg.p, self.precision)
        if sol is None:
            raise NotAUnit("element is not invertible at this precision")
        return AlgebraElement(self.alg, {g: sol[g] for g in range(n)}, self.precision)


def _teich_value(chi: Character, e: int, p: int, n: int) -> int:
    from .groups import embed_root_of_unity

    val = embed_root_of_unity(p, n, chi.modulus, e)
    if not val.is_base():
        raise DomainError("expected Teichmuller value")
    return val.as_base().value


def embed_exponent(chi: Character, e: int, p: int, n: int):
    from .groups import embed_root_of_unity

    return embed_root_of_unity(p, n, chi.modulus, e).coeffs


# -------------------------------------------------------------- sigma maps

def sigma_trace(x: AlgebraElement, conj_maps) -> AlgebraElement:
    """Sum of the conjugates of x over the given automorphism index maps."""
    out = x.alg.zero(x.precision)
    for amap in conj_maps:
        out = out + x.permute(amap)
    return out


def in_image_sigma(y: AlgebraElement, conj_maps):
    """Solve sigma(x) = y exactly over Z/p^N; (found, witness)."""
    alg = y.alg
    if alg.ext:
        raise DomainError("membership testing runs on base scalars")
    n = alg.group.n
    mod = y.modulus
    mat = [[0] * n for _ in range(n)]
    for g in range(n):
        for amap in conj_maps:
            mat[amap[g]][g] = (mat[amap[g]][g] + 1) % mod
    rhs = [y.coeff(g) for g in range(n)]
    sol = solve_linear_mod(mat, rhs, alg.p, y.precision)
    if sol is None:
        return False, None
    return True, AlgebraElement(alg, {g: sol[g] for g in range(n)}, y.precision)


# ------------------------------------------------------------------- norms

def module_decomposition(group: FiniteGroup, sub, transversal=None):
    """Coset data for R[group] as a free module over R[sub].

    Returns (subgrp, embed, reps, decomp) where decomp[g] = (j, s_index) with
    g = embed[s_index-in-subgrp] * reps[j] ... i.e. g = s * t_j, s in sub.
    """
    subgrp, embed = group.subgroup_group(sorted(sub))
    pos = {g: i for i, g in enumerate(embed)}
    # right transversal: sub * t
    seen = {}
    reps = []
    candidates = transversal if transversal is not None else range(group.n)
    for g in candidates:
        if g in seen:
            continue
        j = len(reps)
        reps.append(g)
        for s in embed:
            seen[group.table[s][g]] = j
    if len(reps) * len(embed) != group.n:
        raise DomainError("transversal does not cover the group")
    decomp = []
    for g in range(group.n):
        j = seen[g]
        s = group.table[g][group.inv[reps[j]]]
        decomp.append((j, pos[s]))
    return subgrp, embed, reps, decomp


def multiplication_module_matrix(x: AlgebraElement, sub, transversal=None):
    """Matrix of right multiplication by x on the free R[sub]-module R[G].

    Entry [j][k] lies in the subgroup algebra; t_k * x = sum_j m[j][k] t_j.
    """
    group = x.alg.group
    subgrp, embed, reps, decomp = module_decomposition(group, sub, transversal)
    salg = GroupAlgebra(subgrp, x.alg.p, x.alg.ext)
    m = [[dict() for _ in reps] for _ in reps]
    mod = x.modulus
    for k, t in enumerate(reps):
        row = group.table[t]
        for h, v in x.coeffs.items():
            g = row[h]
            j, s = decomp[g]
            cell = m[j][k]
            cell[s] = salg.s_add(cell.get(s, salg.s_zero()), v, mod)
    return (
        [[AlgebraElement(salg, cell, x.precision) for cell in rowm] for rowm in m],
        salg,
        embed,
        reps,
    )


def norm_map(x: AlgebraElement, sub, check_unit: bool = True, transversal=None):
    """Norm from R[G] to R[sub]: determinant of multiplication by x.

    Returns (value in the subgroup algebra, embed list).  The determinant is
    Berkowitz (division free); unit-ness of x is checked constructively.
    """
    if check_unit and not x.is_unit():
        raise NotAUnit("norm of a non-unit is outside the contract")
    m, salg, embed, _ = multiplication_module_matrix(x, sub, transversal)
    det = berkowitz_det(m, zero=salg.zero(x.precision), one=salg.one(x.precision))
    return det, embed


# ------------------------------------------------------- eta twist quotient

def twist_denominator(x: AlgebraElement, chi: Character, order: int) -> AlgebraElement:
    """prod_{k=0}^{order-1} of the chi^k-twists of x, descended to base.

    For order p twists the product is computed in the extension scalars and
    its Galois stability is verified before descending.
    """
    p = x.alg.p
    if (p - 1) % order == 0:
        acc = x.alg.one(x.precision)
        for k in range(order):
            acc = acc * x.character_twist(chi, k)
        return acc
    if order % p == 0 and order != p:
        raise DomainError("twist order must divide (p-1) or equal p")
    acc = x.to_ext_element().alg.one(x.precision)
    xe = x.to_ext_element()
    for k in range(order):
        acc = acc * xe.character_twist(chi, k)
    # verify Galois stability: T -> T^g fixes the product
    for g in range(2, p):
        if not acc.scalar_galois(g).congruent(acc):
            raise NotGaloisStable("twist denominator moved under T -> T^g")
    return acc.descend_to_base()


def eta(x: AlgebraElement, chi: Character) -> AlgebraElement:
    """x^e / prod_k chi^k-twist(x), e the order of chi (delta or p)."""
    order = chi.order
    if order == 1:
        return x.alg.one(x.precision)
    den = twist_denominator(x, chi, order)
    return (x**order) * den.inverse()


# ------------------------------------------- truncated log / exp / roots

def _floor_log(k: int, p: int) -> int:
    r = 0
    while p ** (r + 1) <= k:
        r += 1
    return r


def ring_plog(u):
    """Truncated log of u = 1 mod p in any of our precision-tracked rings.

    Works on AlgebraElement and QExpansion alike through the shared ring
    protocol (one_like, arithmetic, divide_int, _raw).
    """
    n = u.precision
    p = _ring_p(u)
    one = _ring_one_like(u)
    t = (u - one)
    if not t.divisible_by_p(1):
        raise DomainError("ring_plog needs u = 1 mod p")
    acc = None
    k = 0
    tk = one._raw(2 * n + 4)
    traw = t._raw(2 * n + 4)
    while True:
        k += 1
        tk = tk * traw
        term = tk.divide_int(k)._raw(2 * n + 4)
        if k % 2 == 0:
            term = -term
        acc = term if acc is None else acc + term
        if k >= n and k - _floor_log(k, p) >= n:
            break
    return acc.reduce(n)


def ring_pexp(t):
    """Truncated exponential of t = 0 mod p."""
    n = t.precision
    p = _ring_p(t)
    if not t.divisible_by_p(1):
        raise DomainError("ring_pexp needs t = 0 mod p")
    one = _ring_one_like(t)
    acc = one._raw(2 * n + 4)
    term = one._raw(2 * n + 4)
    traw = t._raw(2 * n + 4)
    k = 0
    while True:
        k += 1
        term = (term * traw).divide_int(k)._raw(2 * n + 4)
        acc = acc + term
        if k - (k - 1) // (p - 1) - 1 >= n:
            break
    return acc.reduce(n)


def ring_proot(u):
    """p-th root of u = 1 mod p^2 by digit lifting; costs one digit."""
    n = u.precision
    p = _ring_p(u)
    one = _ring_one_like(u)
    if n < 2:
        raise DomainError("need precision >= 2 for a p-th root")
    if not (u - one).divisible_by_p(2):
        raise NoRoot("u is not 1 mod p^2", certificate=(u - one).reduce(min(2, n)))
    x = one._raw(n)
    uraw = u._raw(n)
    for _ in range(n + 2):
        r = uraw - x**p
        if r.divisible_by_p(n):
            break
        x = x + r.divp(1)._raw(n)
    else:
        raise NoRoot("digit lifting did not converge", certificate=None)
    return x.reduce(n - 1)


def ring_root(u, e: int):
    """e-th root for e = (prime-to-p part) * p^k, attempted constructively.

    The prime-to-p part uses exp(log(u)/e'), which needs u = 1 mod p; the
    p-part needs u = 1 mod p^2 and costs one digit per p-th root.
    """
    p = _ring_p(u)
    k = 0
    while e % p == 0:
        e //= p
        k += 1
    x = u
    if e > 1:
        x = ring_pexp(ring_plog(x).divide_int(e))
    for _ in range(k):
        x = ring_proot(x)
    return x


def _ring_p(u):
    if isinstance(u, AlgebraElement):
        return u.alg.p
    return u.ring_p()


def _ring_one_like(u):
    if isinstance(u, AlgebraElement):
        return u.alg.one(u.precision)
    return u.one_like()


def root_in_algebra(u: AlgebraElement, e: int) -> AlgebraElement:
    """Spec-named wrapper: e-th root with e = (p-1)p^i-style exponents."""
    return ring_root(u, e)


# --------------------------------------------------------------- fractions

@dataclass(frozen=True)
class CatalogDen:
    """Denominator from the twist catalog: a product of (1 - c*[g]) factors.

    c is a positive integer unit mod p; powers of p never appear.  Factors
    are kept as a sorted tuple of (c, g) pairs so equality is structural.
    """

    group: FiniteGroup
    factors: tuple

    @staticmethod
    def one(group: FiniteGroup) -> "CatalogDen":
        return CatalogDen(group, ())

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    def is_one(self) -> bool:
        return not self.factors

    def __mul__(self, other: "CatalogDen") -> "CatalogDen":
        assert other.group is self.group or other.group.table == self.group.table
        return CatalogDen(self.group, self.factors + other.factors)

    def as_element(self, alg: GroupAlgebra, precision: int) -> AlgebraElement:
        acc = alg.one(precision)
        for c, g in self.factors:
            acc = acc * (alg.one(precision) - alg.basis(g, precision).scale_int(c))
        return acc

    def map_group(self, fmap, target_group: FiniteGroup) -> "CatalogDen":
        return CatalogDen(target_group, tuple((c, fmap[g]) for c, g in self.factors))

    def norm_factors(self, group_sub_data) -> "CatalogDen":
        """Norm to a subalgebra: each factor (1 - c[g]) has norm
        (1 - c^f [g^f])^(m/f) with f the order of g modulo the subgroup."""
        subgrp, embed, reps, decomp = group_sub_data
        pos = {g: i for i, g in enumerate(embed)}
        m = len(reps)
        out = []
        for c, g in self.factors:
            # order of g in the coset space: smallest f with g^f in sub
            f = 1
            x = g
            sset = set(embed)
            while x not in sset:
                x = self.group.table[x][g]
                f += 1
            count = m // f
            out.extend([(c**f, pos[x])] * count)
        return CatalogDen(subgrp, tuple(out))


@dataclass(frozen=True)
class SFraction:
    """num/den with den drawn from the twist-denominator catalog.

    Equality a/s = b/t means a*t = b*s exactly at the working precision.
    """

    num: AlgebraElement
    den: CatalogDen

    @staticmethod
    def integral(x: AlgebraElement) -> "SFraction":
        return SFraction(x, CatalogDen.one(x.alg.group))

    @property
    def precision(self) -> int:
        return self.num.precision

    def den_element(self) -> AlgebraElement:
        return self.den.as_element(self.num.alg, self.num.precision)

    def __add__(self, other):
        o = self._join(other)
        if o.den == self.den:
            return SFraction(self.num + o.num, self.den)
        return SFraction(self.num * o.den_element() + o.num * self.den_element(), self.den * o.den)

    def __sub__(self, other):
        o = self._join(other)
        return self + SFraction(-o.num, o.den)

    def __mul__(self, other):
        o = self._join(other)
        return SFraction(self.num * o.num, self.den * o.den)

    def _join(self, other) -> "SFraction":
        if isinstance(other, SFraction):
            return other
        if isinstance(other, AlgebraElement):
            return SFraction.integral(other)
        return SFraction.integral(self.num._join(other))

    def congruent(self, other, digits: int | None = None) -> bool:
        o = self._join(other)
        lhs = self.num * o.den_element()
        rhs = o.num * self.den_element()
        return lhs.congruent(rhs, digits)

    def map_group(self, fmap, target_group: FiniteGroup) -> "SFraction":
        return SFraction(self.num.map_group(fmap, target_group), self.den.map_group(fmap, target_group))

    def reduce(self, precision: int) -> "SFraction":
        return SFraction(self.num.reduce(precision), self.den)

    def as_integral(self) -> AlgebraElement:
        """Clear the denominator by constructive inversion (it must be a unit)."""
        if self.den.is_one():
            return self.num
        return self.num * self.den_element().inverse()
