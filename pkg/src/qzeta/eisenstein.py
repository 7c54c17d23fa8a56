"""Eisenstein q-expansions with p-adic zeta constant terms.

The non-constant coefficients are divisor sums of Artin symbols weighted by
inverse norms.  The constant term is assembled by exact character
interpolation: for every character of the Galois quotient, the target value
is the twisted Sigma-truncated L-value at 1-k for one large k (chosen so the
cyclotomic-character part is invisible at the working precision), computed
via generalized Bernoulli numbers in exact cyclotomic rationals, then
inverted over the character group.  Integrality is verified, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .algebra import AlgebraElement, CatalogDen, GroupAlgebra
from .cyclotomic import CycRat
from .errors import DomainError, InterpolationNotIntegral, NotCoprime
from .fields import RealAbelianField, divisors_coprime_sigma
from .groups import Character, FiniteGroup, abstract_characters, embed_root_of_unity
from .padic import PadicNumber, ZetaExtNumber, from_fraction
from .qexp import IndexUniverse, QExpansion


# ------------------------------------------------------- Bernoulli numbers

def bernoulli_numbers(n: int):
    """B_0..B_n as exact Fractions (recurrence oracle)."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += _binom(m + 1, k) * B[k]
        B.append(-acc / (m + 1))
    return B


def _binom(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def generalized_bernoulli(values, conductor: int, k: int):
    """B_{k,chi} from the generating identity, by exact series arithmetic.

    `values` is the length-`conductor` table chi(1..f) (index a-1), entries
    Fraction or CycRat; the identity sum_a chi(a) t e^{at}/(e^{ft}-1)
    = sum_k B_{k,chi} t^k / k! is evaluated with power series to order k.
    """
    f = conductor
    some = next((v for v in values if isinstance(v, CycRat)), None)
    if some is not None:
        zero = CycRat.zero(some.m)
        mk = lambda q: CycRat.rational(some.m, q)
    else:
        zero = Fraction(0)
        mk = Fraction
    fact = [1]
    for j in range(1, k + 3):
        fact.append(fact[-1] * j)
    # numerator: sum_a chi(a) e^{at} = sum_j (sum_a chi(a) a^j) / j! t^j
    # denominator: (e^{ft}-1)/t = sum_j f^(j+1)/(j+1)! t^j
    num = []
    den = []
    apow = [1] * f
    for j in range(k + 1):
        s = zero
        for a in range(1, f + 1):
            v = values[a - 1]
            if isinstance(v, CycRat) or v != 0:
                s = s + v * mk(Fraction(apow[a - 1], fact[j]))
        num.append(s)
        den.append(Fraction(f ** (j + 1), fact[j + 1]))
        for a in range(1, f + 1):
            apow[a - 1] *= a
    # series quotient q with q * den = num
    q = []
    for j in range(k + 1):
        acc = num[j]
        for i in range(j):
            acc = acc - q[i] * mk(den[j - i])
        q.append(acc * mk(Fraction(1, den[0])) if some is not None else acc / den[0])
    return q[k] * mk(fact[k])


def generalized_bernoulli_oracle(values, conductor: int, k: int):
    """Independent route: f^(k-1) sum_a chi(a) B_k(a/f) with Bernoulli
    polynomials from the recurrence."""
    f = conductor
    B = bernoulli_numbers(k)
    some = next((v for v in values if isinstance(v, CycRat)), None)
    zero = CycRat.zero(some.m) if some is not None else Fraction(0)
    acc = zero
    for a in range(1, f + 1):
        v = values[a - 1]
        if not isinstance(v, CycRat) and v == 0:
            continue
        # B_k(x) = sum_j C(k,j) B_j x^(k-j)
        bk = Fraction(0)
        for j in range(k + 1):
            bk += _binom(k, j) * B[j] * Fraction(a, f) ** (k - j)
        term = v * (bk if some is None else CycRat.rational(some.m, bk))
        acc = acc + term
    scale = Fraction(f) ** (k - 1)
    return acc * (scale if some is None else CycRat.rational(some.m, scale))


# ------------------------------------------------- Dirichlet character data

@dataclass(frozen=True)
class AbelianExtension:
    """Gal(K/Q) as an explicit quotient of (Z/M)^*, plus the subgroup
    Gal(K/F) for the totally real base F."""

    conductor: int
    big: FiniteGroup
    residue_to_index: dict
    sub_elems: frozenset  # Gal(K/F) inside big
    field: RealAbelianField

    def label(self, residue: int) -> int:
        r = residue % self.conductor
        if gcd(r, self.conductor) != 1:
            raise NotCoprime(f"residue {residue} not coprime to {self.conductor}")
        return self.residue_to_index[r]

    def subgroup_group(self):
        return self.big.subgroup_group(sorted(self.sub_elems))


def cyclotomic_extension(M: int, field: RealAbelianField, kernel_residues=(1,)) -> AbelianExtension:
    """Gal(K/Q) = (Z/M)^* / <kernel_residues>, with Gal(K/F) located via the
    field's conductor (residues that fix F = residues +-1 mod cond(F))."""
    residues = [a for a in range(1, M) if gcd(a, M) == 1]
    pos = {a: i for i, a in enumerate(residues)}
    table = [[pos[a * b % M] for b in residues] for a in residues]
    unit_group = FiniteGroup(table, name=f"(Z/{M})^*", verify=False)
    ker = unit_group.generated([pos[r % M] for r in kernel_residues])
    gal, proj = unit_group.quotient(ker, name=f"Gal(K{M})")
    label = {a: proj[pos[a]] for a in residues}
    condF = field.conductor or 1
    if condF > 1 and M % condF:
        raise DomainError("field conductor must divide the extension conductor")
    fix = frozenset(
        label[a] for a in residues
        if condF == 1 or a % condF in (1 % condF, (condF - 1) % condF)
    )
    return AbelianExtension(M, gal, label, fix, field)


def dirichlet_conductor_and_primitive(ext: AbelianExtension, chi: Character):
    """Conductor of chi-as-Dirichlet-character and its primitive value table
    (exponent form: a -> exponent, or None when gcd(a, f) > 1)."""
    M = ext.conductor
    for f in sorted(_divisors(M)):
        ok = True
        for a in range(1, M):
            if gcd(a, M) == 1 and a % f == 1 % f:
                if chi.exps[ext.label(a)] % chi.modulus:
                    ok = False
                    break
        if ok:
            exps = {}
            for b in range(1, f + 1):
                if gcd(b, f) != 1:
                    continue
                a = b
                while gcd(a, M) != 1:
                    a += f
                exps[b % f] = chi.exps[ext.label(a)]
            return f, exps
    raise DomainError("no conductor found (not a character?)")


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def sigma_l_value(ext: AbelianExtension, chi: Character, k: int, sigma_set, m_cyc: int) -> CycRat:
    """Sigma-truncated L(chi, 1-k) = -B_{k,chi*}/k * prod_{l in Sigma} Euler,
    exact in Q(zeta_m_cyc); chi is a character of Gal(K/Q)."""
    f, exps = dirichlet_conductor_and_primitive(ext, chi)
    scale = m_cyc // chi.modulus
    values = []
    for a in range(1, f + 1):
        if gcd(a, f) == 1:
            values.append(CycRat.zeta(m_cyc, exps[a % f] * scale))
        else:
            values.append(CycRat.zero(m_cyc))
    bk = generalized_bernoulli(values, f, k)
    out = bk * CycRat.rational(m_cyc, Fraction(-1, k))
    for ell in sorted(sigma_set):
        if f % ell == 0:
            continue  # chi(ell) = 0: Euler factor is 1
        val = CycRat.zeta(m_cyc, exps[ell % f] * scale)
        out = out * (CycRat.one(m_cyc) - val * CycRat.rational(m_cyc, ell ** (k - 1)))
    return out


# ------------------------------------------------------ zeta constant term

def zeta_constant_term(ext: AbelianExtension, sigma_set, p: int, precision: int,
                       twist_c: int, k: int | None = None):
    """The image of 2^(-r) zeta as num/den with den = 1 - c[sigma_c].

    Returns (num, den, subgroup_group, embed) with num an AlgebraElement over
    the subgroup group Gal(K/F) and den from the twist catalog.  Every
    character value is assembled exactly in Q(zeta) and the result must be a
    p-integral rational vector, else InterpolationNotIntegral.
    """
    if p not in sigma_set:
        raise DomainError("sigma must contain p")
    if k is None:
        k = (p - 1) * p ** (precision - 1)
    if k % ((p - 1) * p ** (precision - 1)):
        raise DomainError("k must kill kappa^k on the quotient at this precision")
    sub, embed = ext.subgroup_group()
    pos = {g: i for i, g in enumerate(embed)}
    if gcd(twist_c, ext.conductor * p) != 1:
        raise NotCoprime("twist must be a unit at the conductor and p")
    sigma_c_big = ext.label(twist_c)
    if sigma_c_big not in ext.sub_elems:
        raise DomainError("twist residue does not fix the base field")
    sigma_c = pos[sigma_c_big]

    chis_big = abstract_characters(ext.big)
    chis_sub = abstract_characters(sub)
    m_cyc = 1
    for ch in chis_big + chis_sub:
        m_cyc = m_cyc * ch.modulus // gcd(m_cyc, ch.modulus)
    m_cyc = m_cyc * 2 // gcd(m_cyc, 2)

    lvals = {}
    for psi in chis_big:
        lvals[psi.exps] = sigma_l_value(ext, psi, k, sigma_set, m_cyc)

    targets = []
    for chi in chis_sub:
        prod = CycRat.one(m_cyc)
        fiber = 0
        for psi in chis_big:
            # psi restricted to the subgroup must match chi (moduli aligned)
            if _same_character(psi, embed, chi):
                prod = prod * lvals[psi.exps] * CycRat.rational(m_cyc, Fraction(1, 2))
                fiber += 1
        assert fiber == ext.big.n // sub.n, "character fiber size mismatch"
        cz = chi.value_cyc(sigma_c, m_cyc)
        twist = CycRat.one(m_cyc) - cz * CycRat.rational(m_cyc, twist_c**k)
        targets.append(twist * prod)

    # Fourier inversion over the subgroup
    coeffs = {}
    for g in range(sub.n):
        acc = CycRat.zero(m_cyc)
        for chi, t in zip(chis_sub, targets):
            acc = acc + t * chi.value_cyc(sub.inv[g], m_cyc)
        acc = acc / sub.n
        if not acc.is_rational():
            raise InterpolationNotIntegral(f"coefficient at {g} is irrational: {acc}")
        q = acc.as_rational()
        if q.denominator % p == 0:
            raise InterpolationNotIntegral(f"coefficient at {g} is not p-integral: {q}")
        coeffs[g] = q

    alg = GroupAlgebra(sub, p)
    num = alg.element(
        {g: from_fraction(q, p, precision).value for g, q in coeffs.items()}, precision)
    den = CatalogDen(sub, ((twist_c, sigma_c),))
    return num, den, sub, embed


def _same_character(psi: Character, embed, chi: Character) -> bool:
    m = psi.modulus * chi.modulus // gcd(psi.modulus, chi.modulus)
    for i, g in enumerate(embed):
        if (psi.exps[g] * (m // psi.modulus) - chi.exps[i] * (m // chi.modulus)) % m:
            return False
    return True


def verify_zeta_by_characters(num: AlgebraElement, den: CatalogDen, ext: AbelianExtension,
                              sigma_set, p: int, precision: int, twist_c: int, k: int) -> bool:
    """Independent p-adic re-check: for every character chi of Gal(K/F),
    chi(num) = (1 - chi(sigma_c)c^k) * prod(1/2 L_Sigma) inside the ramified
    extension, comparing through the fixed root-of-unity embedding."""
    sub, embed = ext.subgroup_group()
    chis_sub = abstract_characters(sub)
    chis_big = abstract_characters(ext.big)
    m_cyc = 1
    for ch in chis_big + chis_sub:
        m_cyc = m_cyc * ch.modulus // gcd(m_cyc, ch.modulus)
    m_cyc = m_cyc * 2 // gcd(m_cyc, 2)
    pos = {g: i for i, g in enumerate(embed)}
    sigma_c = pos[ext.label(twist_c)]
    for chi in chis_sub:
        # chi(num) evaluated p-adically
        acc = ZetaExtNumber(p, (0,), (p - 1) * precision)
        for g, v in num.coeffs.items():
            acc = acc + chi.value_ext(g, p, precision) * ZetaExtNumber(p, (v,), (p - 1) * precision)
        # exact target, embedded
        prod = CycRat.one(m_cyc)
        for psi in chis_big:
            if _same_character(psi, embed, chi):
                prod = prod * sigma_l_value(ext, psi, k, sigma_set, m_cyc) * CycRat.rational(m_cyc, Fraction(1, 2))
        cz = chi.value_cyc(sigma_c, m_cyc)
        target = (CycRat.one(m_cyc) - cz * CycRat.rational(m_cyc, twist_c**k)) * prod
        if not acc.congruent(embed_cyclotomic(target, p, precision)):
            return False
    return True


def embed_cyclotomic(x: CycRat, p: int, precision: int) -> ZetaExtNumber:
    """Ring map Q(zeta_m)_(p-integral) -> (Z/p^N)[T]/Phi_p via the fixed
    embedding of the roots of unity (m | (p-1)p required)."""
    out = ZetaExtNumber(p, (0,), (p - 1) * precision)
    for k, c in enumerate(x.coeffs):
        if c == 0:
            continue
        if c.denominator % p == 0:
            raise DomainError("not p-integral")
        scal = from_fraction(c, p, precision).value
        z = embed_root_of_unity(p, precision, x.m, k)
        out = out + z * ZetaExtNumber(p, (scal,), (p - 1) * precision)
    return out


# ------------------------------------------------------- Eisenstein series

@dataclass(frozen=True)
class EisensteinSeries:
    """A Lambda-adic Eisenstein q-expansion at finite level.

    qexp holds the working series (coefficients in the Galois-quotient group
    algebra, shared twist denominator); raw holds, per index, the exact
    divisor data [(group element, norm)] that specialization needs.
    """

    qexp: QExpansion
    raw: dict
    ext: AbelianExtension | None
    sigma_set: frozenset
    provider: object

    @property
    def bound(self):
        return self.qexp.bound

    @property
    def precision(self):
        return self.qexp.precision


def dr_coefficients(field: RealAbelianField, provider, sigma_set, bound: int,
                    p: int, precision: int):
    """Divisor-sum coefficients: for each totally positive mu of trace <=
    bound, sum over ideals containing mu and coprime to Sigma of
    [sigma_a] / N(a).  Returns (coeff dict, raw dict)."""
    alg = GroupAlgebra(provider.group, p)
    uni = IndexUniverse(field, bound)
    coeffs = {}
    raw = {}
    mod = p**precision
    for mu in uni.indices_up_to(bound):
        recs = divisors_coprime_sigma(field, mu, sigma_set)
        entry = {}
        rawlist = []
        for ideal, norm, fac in recs:
            if norm % p == 0:
                raise DomainError("sigma must contain p so that norms are units")
            g = provider.artin(field, fac)
            entry[g] = (entry.get(g, 0) + pow(norm, -1, mod)) % mod
            rawlist.append((g, norm))
        coeffs[mu] = alg.element(entry, precision)
        raw[mu] = tuple(sorted(rawlist))
    return coeffs, raw


def build_abelian_eisenstein(ext: AbelianExtension, provider, sigma_set, bound: int,
                             p: int, precision: int, twist_c: int) -> EisensteinSeries:
    """The full series over F with constant term 2^(-r) zeta (twisted form)."""
    num, den, sub, embed = zeta_constant_term(ext, sigma_set, p, precision, twist_c)
    # provider must land in the same subgroup group
    coeffs, raw = dr_coefficients(ext.field, provider, sigma_set, bound, p, precision)
    alg = GroupAlgebra(provider.group, p)
    if provider.group.table != sub.table:
        raise DomainError("provider group does not match Gal(K/F)")
    den_elem = den.as_element(alg, precision)
    qcoeffs = {mu: v * den_elem for mu, v in coeffs.items()}
    q = QExpansion(ext.field, bound, num, qcoeffs, den)
    return EisensteinSeries(q, raw, ext, frozenset(sigma_set), provider)


def specialize(series: EisensteinSeries, chi: Character, k: int, p: int, precision: int):
    """Evaluation at chi kappa^k: the mu-th coefficient becomes
    sum chi(sigma_a) N(a)^(k-1), exactly; the constant term is recomputed
    from the L-value formula 2^(-r) L_Sigma(chi, 1-k).

    Returns (constant as an exact CycRat or None, dict index -> ZetaExtNumber).
    The constant is kept exact: it need not be p-integral (only the twisted
    representation stored in the series is).
    """
    if k < 1:
        raise DomainError("k must be a positive integer")
    out = {}
    for mu, rawlist in series.raw.items():
        acc = ZetaExtNumber(p, (0,), (p - 1) * precision)
        for g, norm in rawlist:
            term = chi.value_ext(g, p, precision) * ZetaExtNumber(
                p, (pow(norm, k - 1, p**precision),), (p - 1) * precision)
            acc = acc + term
        out[mu] = acc
    c0 = None
    if series.ext is not None:
        ext = series.ext
        sub, embed = ext.subgroup_group()
        chis_big = abstract_characters(ext.big)
        m_cyc = 1
        for ch in chis_big + [chi]:
            m_cyc = m_cyc * ch.modulus // gcd(m_cyc, ch.modulus)
        m_cyc = m_cyc * 2 // gcd(m_cyc, 2)
        c0 = CycRat.one(m_cyc)
        for psi in chis_big:
            if _same_character(psi, embed, chi):
                c0 = c0 * sigma_l_value(ext, psi, k, series.sigma_set, m_cyc) \
                    * CycRat.rational(m_cyc, Fraction(1, 2))
    return c0, out
