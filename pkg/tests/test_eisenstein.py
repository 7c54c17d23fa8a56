from fractions import Fraction

import pytest

from qzeta.cyclotomic import CycRat
from qzeta.eisenstein import (
    AbelianExtension,
    bernoulli_numbers,
    build_abelian_eisenstein,
    cyclotomic_extension,
    dirichlet_conductor_and_primitive,
    dr_coefficients,
    embed_cyclotomic,
    generalized_bernoulli,
    generalized_bernoulli_oracle,
    sigma_l_value,
    specialize,
    verify_zeta_by_characters,
    zeta_constant_term,
)
from qzeta.errors import InterpolationNotIntegral
from qzeta.fields import BuiltinCyclotomic, RealAbelianField
from qzeta.groups import abstract_characters
from qzeta.padic import PadicNumber, encode_rational


Q = RealAbelianField.rationals()


def qzeta9_extension():
    return cyclotomic_extension(9, Q)


def builtin_provider(ext):
    sub, embed = ext.subgroup_group()
    pos = {g: i for i, g in enumerate(embed)}
    return BuiltinCyclotomic(sub, ext.conductor, lambda n: pos[ext.label(n)])


def test_bernoulli_basic():
    B = bernoulli_numbers(12)
    assert B[2] == Fraction(1, 6)
    assert B[3] == 0
    assert B[12] == Fraction(-691, 2730)


def test_generalized_bernoulli_trivial():
    # chi trivial of conductor 1: B_{k,1} = B_k (with B_1 sign +1/2 for f=1)
    assert generalized_bernoulli([Fraction(1)], 1, 2) == Fraction(1, 6)
    assert generalized_bernoulli([Fraction(1)], 1, 3) == 0
    assert generalized_bernoulli([Fraction(1)], 1, 12) == Fraction(-691, 2730)


def test_generalized_bernoulli_odd_quadratic():
    # chi mod 4: chi(1) = 1, chi(3) = -1: B_{1,chi} = -1/2
    vals = [Fraction(1), Fraction(0), Fraction(-1), Fraction(0)]
    assert generalized_bernoulli(vals, 4, 1) == Fraction(-1, 2)
    # direct oracle sum: sum chi(a)(a/f - 1/2)
    direct = sum(v * (Fraction(a + 1, 4) - Fraction(1, 2)) for a, v in enumerate(vals))
    assert direct == Fraction(-1, 2)
    assert generalized_bernoulli_oracle(vals, 4, 1) == Fraction(-1, 2)


def test_generalized_bernoulli_series_vs_polynomial_oracle():
    # quadratic character mod 8 and a cubic character mod 9 at several k
    vals8 = [Fraction(1), 0, Fraction(-1), 0, Fraction(-1), 0, Fraction(1), 0]
    for k in (1, 2, 3, 4, 6):
        assert generalized_bernoulli(vals8, 8, k) == generalized_bernoulli_oracle(vals8, 8, k)
    m = 9
    z = CycRat.zeta(m, 3)  # primitive cube root
    vals9 = []
    # cubic character of (Z/9)^*: 2 is a generator; chi(2) = zeta_3
    dlog = {1: 0, 2: 1, 4: 2, 8: 3, 7: 4, 5: 5}
    for a in range(1, 10):
        if a % 3 == 0:
            vals9.append(CycRat.zero(m))
        else:
            vals9.append(CycRat.zeta(m, 3 * (dlog[a] % 3)))
    for k in (2, 4, 6):
        assert generalized_bernoulli(vals9, 9, k) == generalized_bernoulli_oracle(vals9, 9, k)


def test_dirichlet_conductor():
    ext = qzeta9_extension()
    chars = abstract_characters(ext.big)
    conds = sorted(dirichlet_conductor_and_primitive(ext, ch)[0] for ch in chars)
    # (Z/9)^*: trivial (1), quadratic (3)... the quadratic character of
    # conductor 3, two cubics (9), two sextics (9)
    assert conds == [1, 3, 9, 9, 9, 9]


def test_sigma_l_value_trivial_character():
    ext = qzeta9_extension()
    triv = next(ch for ch in abstract_characters(ext.big) if ch.is_trivial())
    # L_Sigma(triv, -1) = zeta(-1) * (1 - 3^1) = (-1/12)(-2) = 1/6
    v = sigma_l_value(ext, triv, 2, {3}, 6)
    assert v.as_rational() == Fraction(1, 6)


def test_dr_coefficients_examples():
    ext = qzeta9_extension()
    prov = builtin_provider(ext)
    coeffs, raw = dr_coefficients(Q, prov, {3}, 8, 3, 4)
    sub, embed = ext.subgroup_group()
    pos = {g: i for i, g in enumerate(embed)}
    e = sub.e
    # mu = 1: only the unit ideal: [e]
    assert coeffs[(1,)].coeffs == {e: 1}
    # mu = 2: [sigma_1] + [sigma_2]/2
    two = coeffs[(2,)]
    inv2 = pow(2, -1, 81)
    assert two.coeff(e) == 1
    assert two.coeff(pos[ext.label(2)]) == inv2
    # mu = 3: divisor 3 excluded: just [e]
    assert coeffs[(3,)].coeffs == {e: 1}


def test_zeta_constant_term_and_reverification():
    ext = qzeta9_extension()
    p, N, c = 3, 4, 2
    k = (p - 1) * p ** (N - 1)
    num, den, sub, embed = zeta_constant_term(ext, {3}, p, N, c)
    assert den.factors == ((2, {g: i for i, g in enumerate(embed)}[ext.label(2)]),)
    assert verify_zeta_by_characters(num, den, ext, {3}, p, N, c, k)


def test_zeta_kummer_stability():
    ext = qzeta9_extension()
    p, N, c = 3, 4, 2
    k1 = (p - 1) * p ** (N - 1)
    k2 = (p - 1) * p**N
    num1, _, _, _ = zeta_constant_term(ext, {3}, p, N, c, k=k1)
    num2, _, _, _ = zeta_constant_term(ext, {3}, p, N, c, k=k2)
    assert num1.congruent(num2)


def test_trivial_quotient_zeta_value():
    # K = Q itself (kernel = everything): value is (1 - c^k) * zeta_Sigma(1-k)/2
    ext = cyclotomic_extension(9, Q, kernel_residues=(2,))  # 2 generates all
    assert ext.big.n == 1
    p, N, c = 3, 3, 2
    k = (p - 1) * p ** (N - 1)
    num, den, sub, embed = zeta_constant_term(ext, {3}, p, N, c)
    triv = next(ch for ch in abstract_characters(ext.big) if ch.is_trivial())
    lval = sigma_l_value(ext, triv, k, {3}, 2).as_rational()
    expect = Fraction(1 - c**k, 2) * lval
    assert num.coeff(0) == encode_rational(expect.numerator, expect.denominator, p, N).value


def test_specialize_ac2_values():
    ext = qzeta9_extension()
    prov = builtin_provider(ext)
    series = build_abelian_eisenstein(ext, prov, {3}, 20, 3, 4, twist_c=2)
    sub, embed = ext.subgroup_group()
    triv = next(ch for ch in abstract_characters(sub) if ch.is_trivial())
    c0, coeffs = specialize(series, triv, 2, 3, 4)
    # c(n) = sum of divisors of n coprime to 3
    def divisor_sum(n):
        return sum(d for d in range(1, n + 1) if n % d == 0 and d % 3)

    for n in range(1, 21):
        got = coeffs[(n,)]
        assert got.is_base()
        assert got.as_base().value == divisor_sum(n) % 3**4, n
    # constant term: exactly 1/12 (2^-1 * (-1/12) * (1 - 3))
    assert c0.as_rational() == Fraction(1, 12)
    # spot checks: c(1)=1, c(2)=3, c(4)=7, c(6)=3
    assert coeffs[(1,)].as_base().value == 1
    assert coeffs[(2,)].as_base().value == 3
    assert coeffs[(4,)].as_base().value == 7
    assert coeffs[(6,)].as_base().value == 3


def test_specialize_nontrivial_character():
    ext = qzeta9_extension()
    prov = builtin_provider(ext)
    series = build_abelian_eisenstein(ext, prov, {3}, 12, 3, 3, twist_c=2)
    sub, embed = ext.subgroup_group()
    pos = {g: i for i, g in enumerate(embed)}
    chars = abstract_characters(sub)
    quad = next(ch for ch in chars if ch.order == 2)
    c0, coeffs = specialize(series, quad, 2, 3, 3)
    # independent divisor sum with the quadratic character chi(d) = (d|3)
    def chi_val(d):
        return 1 if d % 3 == 1 else -1

    for n in (1, 2, 4, 5, 7, 8, 10):
        expect = sum(chi_val(d) * d for d in range(1, n + 1) if n % d == 0 and d % 3)
        got = coeffs[(n,)]
        assert got.is_base()
        assert got.as_base().value == expect % 27, n
