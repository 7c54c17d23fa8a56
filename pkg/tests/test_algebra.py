import itertools
import random

import pytest

from qzeta import catalog
from qzeta.algebra import (
    AlgebraElement,
    CatalogDen,
    GroupAlgebra,
    SFraction,
    eta,
    in_image_sigma,
    norm_map,
    ring_pexp,
    ring_plog,
    ring_proot,
    root_in_algebra,
    sigma_trace,
    twist_denominator,
)
from qzeta.errors import NoRoot, NotAUnit
from qzeta.groups import characters
from qzeta.linalg import berkowitz_det
from qzeta.padic import PadicNumber, teichmuller_int


def A(group, p):
    return GroupAlgebra(group, p)


def random_element(alg, prec, rng, unit=False):
    mod = alg.p**prec
    while True:
        x = alg.element({g: rng.randrange(mod) for g in range(alg.group.n)}, prec)
        if not unit:
            return x
        if sum(x.coeffs.values()) % alg.p:  # aug != 0 mod p is enough for p-groups
            try:
                x.inverse()
                return x
            except NotAUnit:
                continue


def test_induced_map_examples():
    c9 = catalog.cyclic(9)
    alg = A(c9, 3)
    x = alg.element({0: 1, 1: 2, 4: 5}, 3)
    assert x.map_group(list(range(9)), c9).congruent(x)
    # trivial map: augmentation collapse
    triv = catalog.cyclic(1)
    y = x.map_group([0] * 9, triv)
    assert y.coeff(0) == (1 + 2 + 5) % 27
    # transfer C9 -> 3C9 is [g] -> [g^3]
    v = frozenset({0, 3, 6})
    vab, vproj, ver = c9.transfer(v)
    valg = A(vab, 3)
    z = alg.basis(1, 3).map_group(ver, vab)
    embed = sorted(v)
    pos = {g: i for i, g in enumerate(embed)}
    assert z.congruent(valg.basis(vproj[pos[3]], 3))


def test_induced_map_is_ring_hom():
    rng = random.Random(20)
    c9 = catalog.cyclic(9)
    c3 = catalog.cyclic(3)
    proj = [g % 3 for g in range(9)]
    alg = A(c9, 3)
    for _ in range(20):
        x, y = random_element(alg, 3, rng), random_element(alg, 3, rng)
        assert (x * y).map_group(proj, c3).congruent(x.map_group(proj, c3) * y.map_group(proj, c3))
        assert (x + y).map_group(proj, c3).congruent(x.map_group(proj, c3) + y.map_group(proj, c3))


def test_sigma_trace_examples():
    c3 = catalog.cyclic(3)
    alg = A(c3, 3)
    x = alg.element({0: 1, 1: 4, 2: 7}, 2)
    ident = list(range(3))
    # trivial action, three copies
    assert sigma_trace(x, [ident, ident, ident]).congruent(x.scale_int(3))
    # order-2 action by inversion: sigma([h]) = [h] + [h^2]
    invmap = [0, 2, 1]
    s = sigma_trace(alg.basis(1, 2), [ident, invmap])
    assert s.congruent(alg.basis(1, 2) + alg.basis(2, 2))
    # output is invariant under the action
    assert s.permute(invmap).congruent(s)


def test_in_image_sigma_roundtrip_and_obstruction():
    rng = random.Random(21)
    c3 = catalog.cyclic(3)
    alg = A(c3, 3)
    ident = list(range(3))
    maps = [ident, ident, ident]  # trivial action, index 3: sigma = 3*id
    for _ in range(20):
        x0 = random_element(alg, 4, rng)
        y = sigma_trace(x0, maps)
        ok, w = in_image_sigma(y, maps)
        assert ok and sigma_trace(w, maps).congruent(y)
    ok, _ = in_image_sigma(alg.one(4), maps)
    assert not ok  # 1 is not in 3*R


def test_in_image_sigma_exhaustive_brute_force():
    # (Z/9)[Z/3] with trivial action of index 3: enumerate the image of
    # sigma over all 9^3 elements and compare with the solver's verdicts
    c3 = catalog.cyclic(3)
    alg = A(c3, 3)
    ident = list(range(3))
    maps = [ident, ident, ident]
    image = set()
    for coeffs in itertools.product(range(9), repeat=3):
        image.add(tuple((3 * c) % 9 for c in coeffs))
    for coeffs in itertools.product(range(9), repeat=3):
        y = alg.element(dict(enumerate(coeffs)), 2)
        ok, w = in_image_sigma(y, maps)
        assert ok == (coeffs in image)
        if ok:
            assert sigma_trace(w, maps).congruent(y)


def test_nontrivial_action_membership():
    c3 = catalog.cyclic(3)
    alg = A(c3, 3)
    maps = [list(range(3)), [0, 2, 1]]  # order-2 inversion action
    rng = random.Random(22)
    for _ in range(20):
        x0 = random_element(alg, 3, rng)
        y = sigma_trace(x0, maps)
        ok, w = in_image_sigma(y, maps)
        assert ok and sigma_trace(w, maps).congruent(y)


def test_norm_map_scalar_and_companion():
    c9 = catalog.cyclic(9)
    alg = A(c9, 3)
    sub = frozenset({0, 3, 6})
    # scalar c: norm = c^m with m = index 3
    c = alg.scalar(5, 3)
    nval, embed = norm_map(c, sub)
    assert nval.congruent(nval.alg.scalar(pow(5, 3, 27), 3))
    # generator: norm([g]) = [g^p] via the companion determinant
    g1 = alg.basis(1, 3)
    nval, embed = norm_map(g1, sub)
    pos = {g: i for i, g in enumerate(embed)}
    assert nval.congruent(nval.alg.basis(pos[3], 3))


def test_norm_map_multiplicative_and_basis_independent():
    rng = random.Random(23)
    c9 = catalog.cyclic(9)
    alg = A(c9, 3)
    sub = frozenset({0, 3, 6})
    for _ in range(15):
        x = random_element(alg, 3, rng, unit=True)
        y = random_element(alg, 3, rng, unit=True)
        nx, _ = norm_map(x, sub)
        ny, _ = norm_map(y, sub)
        nxy, _ = norm_map(x * y, sub)
        assert nxy.congruent(nx * ny)
        # a different transversal gives the same norm
        alt = [rng.choice([0, 3, 6]) and 0 or t for t in (2, 1, 0, 3, 4, 5, 6, 7, 8)]
        n2, _ = norm_map(x, sub, transversal=list(rng.sample(range(9), 9)))
        assert n2.congruent(nx)


def test_norm_map_rejects_nonunit():
    c9 = catalog.cyclic(9)
    alg = A(c9, 3)
    with pytest.raises(NotAUnit):
        norm_map(alg.scalar(3, 2), frozenset({0, 3, 6}))


def test_eta_examples():
    # Q = C2 with the nontrivial (Teichmuller-valued) character, p = 3
    c2 = catalog.cyclic(2)
    alg = A(c2, 3)
    chars = characters(c2, 3, 4)
    om = next(c for c in chars if not c.is_trivial())
    # scalars map to 1
    assert eta(alg.scalar(7, 4), om).congruent(alg.one(4))
    # eta([g]) = omega(g)^{-1} [e]
    val = eta(alg.basis(1, 4), om)
    w = teichmuller_int(2, 3, 4)  # omega at the nontrivial element = -1
    winv = pow(w, -1, 81)
    assert val.congruent(alg.scalar(winv, 4))
    assert eta(alg.one(4), om).congruent(alg.one(4))


def test_eta_order_p_galois_checked():
    # Q = C3, order-3 character: denominator computed in the extension and
    # descended after the stability check
    c3 = catalog.cyclic(3)
    alg = A(c3, 3)
    chars = characters(c3, 3, 3)
    om = next(c for c in chars if c.order == 3)
    rng = random.Random(24)
    for _ in range(10):
        x = random_element(alg, 3, rng, unit=True)
        den = twist_denominator(x, om, 3)
        assert not den.alg.ext
        v = eta(x, om)
        assert eta(alg.one(3), om).congruent(alg.one(3))
        # eta is multiplicative
        y = random_element(alg, 3, rng, unit=True)
        assert eta(x * y, om).congruent(eta(x, om) * eta(y, om))


def test_ring_log_exp_roundtrip_on_algebra():
    c3 = catalog.cyclic(3)
    alg = A(c3, 3)
    rng = random.Random(25)
    for _ in range(30):
        w = alg.element({g: 3 * rng.randrange(27) for g in range(3)}, 4)
        u = alg.one(4) + w
        lg = ring_plog(u)
        assert lg.divisible_by_p(1)
        back = ring_pexp(lg)
        assert back.congruent(u)
        v = alg.one(4) + alg.element({g: 3 * rng.randrange(27) for g in range(3)}, 4)
        assert ring_plog(u * v).congruent(ring_plog(u) + ring_plog(v))


def test_root_in_algebra():
    c3 = catalog.cyclic(3)
    alg = A(c3, 3)
    # scalar example: 10 = 4^3 mod 27, e = 3
    u = alg.scalar(10, 3)
    r = root_in_algebra(u, 3)
    assert r.precision == 2 and r.congruent(alg.scalar(4, 2))
    # u = 1 for any e
    assert root_in_algebra(alg.one(4), 18).congruent(alg.one(4), digits=3)
    # round trip: x = 1 mod p^2, u = x^e, root recovers x at output precision
    rng = random.Random(26)
    for e in (3, 9, 2, 6):
        for _ in range(10):
            x = alg.one(5) + alg.element({g: 9 * rng.randrange(27) for g in range(3)}, 5)
            u = x**e
            r = root_in_algebra(u, e)
            assert r.congruent(x, digits=r.precision)


def test_root_certificate():
    c3 = catalog.cyclic(3)
    alg = A(c3, 3)
    with pytest.raises(NoRoot):
        ring_proot(alg.scalar(4, 3))  # 4 is not 1 mod 9


def test_sfraction_equality_and_arith():
    c6 = catalog.cyclic(6)
    alg = A(c6, 3)
    den = CatalogDen(c6, ((2, 1),))  # 1 - 2[g_1]
    num = alg.element({0: 5, 2: 3}, 3)
    f = SFraction(num, den)
    # f * den = num
    prod = f * SFraction.integral(den.as_element(alg, 3))
    assert prod.congruent(SFraction.integral(num))
    g = SFraction(num * alg.scalar(2, 3), den * den)
    h = f + f
    # h = 2 num/den; g = 2 num/den^2 * den... check cross multiplication law
    assert (f + f).congruent(SFraction(num.scale_int(2), den))
    assert not f.congruent(SFraction(num.scale_int(2), den))


def test_catalog_den_norm_orbit_formula_matches_det():
    # norm of (1 - c[g]) from (Z/27)[C9] down to the index-3 subalgebra,
    # computed by the orbit formula and by the Berkowitz determinant
    from qzeta.algebra import module_decomposition, multiplication_module_matrix

    c9 = catalog.cyclic(9)
    alg = A(c9, 3)
    sub = frozenset({0, 3, 6})
    for c, g in ((2, 1), (5, 2), (4, 3), (2, 0)):
        den = CatalogDen(c9, ((c, g),))
        data = module_decomposition(c9, sub)
        nf = den.norm_factors(data)
        elem = den.as_element(alg, 3)
        m, salg, embed, _ = multiplication_module_matrix(elem, sub)
        det = berkowitz_det(m, zero=salg.zero(3), one=salg.one(3))
        assert nf.as_element(salg, 3).congruent(det)


def test_sfraction_map_group():
    c9 = catalog.cyclic(9)
    c3 = catalog.cyclic(3)
    alg = A(c9, 3)
    proj = [g % 3 for g in range(9)]
    f = SFraction(alg.element({1: 4}, 3), CatalogDen(c9, ((2, 2),)))
    fm = f.map_group(proj, c3)
    assert fm.den.factors == ((2, 2),)
    assert fm.num.coeff(1) == 4
