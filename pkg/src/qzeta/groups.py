"""Finite groups, the H x| Gamma tower quotients, and abelian characters.

Groups are explicit multiplication tables over element indices 0..n-1,
verified on construction.  The tower G = H x| Gamma (H = Z_p^d with a
diagonal Gamma-action through integer exponents) is realized at finite level
as an explicit group with structured coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import DomainError, InconsistentLevel, NotAbelian, TooLarge
from .padic import ZetaExtNumber, check_odd_prime, teichmuller_int

SUBGROUP_ORDER_BOUND = 512


class FiniteGroup:
    """Explicit finite group: elements 0..n-1 plus a multiplication table."""

    def __init__(self, table, name="G", verify=True):
        self.table = [list(map(int, row)) for row in table]
        self.n = len(self.table)
        self.name = name
        if verify:
            self._verify()
        self.e = self._find_identity()
        self.inv = self._find_inverses()
        self._order_cache = {}

    def _verify(self):
        t = np.array(self.table, dtype=np.int32)
        n = self.n
        if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
            raise DomainError("malformed multiplication table")
        for a in range(n):
            if not np.array_equal(t[t[a], :], t[a][t]):
                raise DomainError(f"associativity fails at row {a}")

    def _find_identity(self):
        for e in range(self.n):
            if all(self.table[e][x] == x and self.table[x][e] == x for x in range(self.n)):
                return e
        raise DomainError("no identity element")

    def _find_inverses(self):
        inv = [None] * self.n
        for a in range(self.n):
            for b in range(self.n):
                if self.table[a][b] == self.e:
                    inv[a] = b
                    break
            if inv[a] is None:
                raise DomainError(f"element {a} has no inverse")
        return inv

    # ------------------------------------------------------------ basics

    def mul(self, a, b):
        return self.table[a][b]

    def conj(self, g, x):
        return self.table[self.table[g][x]][self.inv[g]]

    def power(self, a, k: int):
        if k < 0:
            return self.power(self.inv[a], -k)
        r = self.e
        b = a
        while k:
            if k & 1:
                r = self.table[r][b]
            b = self.table[b][b]
            k >>= 1
        return r

    def order_of(self, a):
        if a in self._order_cache:
            return self._order_cache[a]
        k, x = 1, a
        while x != self.e:
            x = self.table[x][a]
            k += 1
        self._order_cache[a] = k
        return k

    def is_abelian(self):
        return all(self.table[a][b] == self.table[b][a] for a in range(self.n) for b in range(a))

    def elements(self):
        return range(self.n)

    # -------------------------------------------------------- subgroups

    def generated(self, gens) -> frozenset:
        gens = [g for g in gens]
        seen = {self.e}
        seen.update(gens)
        frontier = list(seen)
        while frontier:
            nxt = []
            for s in frontier:
                row = self.table[s]
                for g in gens:
                    t = row[g]
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
            frontier = nxt
        return frozenset(seen)

    def cyclic_subgroups(self):
        out = {frozenset([self.e])}
        for a in range(self.n):
            out.add(self.generated([a]))
        return out

    def subgroups(self, bound: int = SUBGROUP_ORDER_BOUND):
        """All subgroups, as sorted tuples of element indices."""
        if self.n > bound:
            raise TooLarge(f"group order {self.n} exceeds bound {bound}")
        subs = set(self.cyclic_subgroups())
        while True:
            new = set()
            items = sorted(subs, key=_sub_key)
            for i, A in enumerate(items):
                for B in items[i + 1:]:
                    if A <= B or B <= A:
                        continue
                    j = self.generated(sorted(A | B))
                    if j not in subs:
                        new.add(j)
            if not new:
                break
            subs |= new
        return sorted(subs, key=_sub_key)

    def is_subgroup(self, elems) -> bool:
        s = set(elems)
        return self.e in s and all(self.table[a][b] in s for a in s for b in s)

    def is_normal(self, sub) -> bool:
        s = set(sub)
        return all(self.conj(g, x) in s for g in range(self.n) for x in s)

    # ------------------------------------------------- derived structures

    def subgroup_group(self, elems, name=None):
        """The subgroup as its own FiniteGroup plus the embedding index list."""
        embed = sorted(elems)
        pos = {g: i for i, g in enumerate(embed)}
        table = [[pos[self.table[a][b]] for b in embed] for a in embed]
        g = FiniteGroup(table, name=name or f"{self.name}|sub{len(embed)}", verify=False)
        return g, embed

    def quotient(self, normal, name=None):
        """Quotient by a normal subgroup: (group, projection list)."""
        ns = sorted(normal)
        if not self.is_normal(ns):
            raise DomainError("subgroup is not normal")
        coset_of = [None] * self.n
        reps = []
        for g in range(self.n):
            if coset_of[g] is None:
                idx = len(reps)
                reps.append(g)
                for h in ns:
                    coset_of[self.table[g][h]] = idx
        table = [[coset_of[self.table[a][b]] for b in reps] for a in reps]
        q = FiniteGroup(table, name=name or f"{self.name}/N{len(ns)}", verify=False)
        return q, coset_of

    def commutator_subgroup(self) -> frozenset:
        gens = set()
        for a in range(self.n):
            for b in range(a):
                c = self.table[self.table[a][b]][self.table[self.inv[a]][self.inv[b]]]
                if c != self.e:
                    gens.add(c)
        return self.generated(sorted(gens))

    def abelianization(self):
        return self.quotient(self.commutator_subgroup(), name=f"{self.name}^ab")

    def left_transversal(self, sub):
        """Deterministic left coset representatives of sub."""
        s = set(sub)
        seen = set()
        reps = []
        for g in range(self.n):
            if g in seen:
                continue
            reps.append(g)
            seen.update(self.table[g][h] for h in s)
        return reps

    def transfer(self, sub, transversal=None):
        """Transfer map self^ab -> V^ab for V = sub.

        Returns (Vab, vproj, ver) with ver a list: element of self -> index in
        Vab; Vab is the abelianization of the subgroup group of V.
        """
        vgrp, embed = self.subgroup_group(sub)
        pos = {g: i for i, g in enumerate(embed)}
        vab, vproj = vgrp.abelianization()
        reps = transversal if transversal is not None else self.left_transversal(sub)
        sset = set(sub)
        rep_index = {}
        for i, t in enumerate(reps):
            for h in sset:
                rep_index[self.table[t][h]] = i
        ver = []
        for g in range(self.n):
            acc = vab.e
            for t in reps:
                gt = self.table[g][t]
                i = rep_index[gt]
                v = self.table[self.inv[reps[i]]][gt]
                acc = vab.table[acc][vproj[pos[v]]]
            ver.append(acc)
        return vab, vproj, ver

    def hom_is_valid(self, other, fmap) -> bool:
        return all(
            fmap[self.table[a][b]] == other.table[fmap[a]][fmap[b]]
            for a in range(self.n)
            for b in range(self.n)
        )

    def direct_product(self, other, name=None):
        # index = a1*n2 + a2
        n2 = other.n
        table = [[0] * (self.n * n2) for _ in range(self.n * n2)]
        for a1 in range(self.n):
            for a2 in range(n2):
                for b1 in range(self.n):
                    for b2 in range(n2):
                        table[a1 * n2 + a2][b1 * n2 + b2] = self.table[a1][b1] * n2 + other.table[a2][b2]
        return FiniteGroup(table, name=name or f"{self.name}x{other.name}", verify=False)

    def __repr__(self):
        return f"FiniteGroup({self.name}, n={self.n})"


def _sub_key(s):
    return (len(s), tuple(sorted(s)))


# ------------------------------------------------------------------ Moebius

def moebius(group: FiniteGroup, sub, lattice=None) -> int:
    """mu of a subgroup: 1 on the trivial group, and the recursion
    sum over all subgroups of Q of mu = 0 for nontrivial Q."""
    if lattice is None:
        lattice = group.subgroups()
    memo = {}

    def mu(q):
        if len(q) == 1:
            return 1
        q = frozenset(q)
        if q in memo:
            return memo[q]
        total = 0
        for s in lattice:
            if len(s) < len(q) and s < q:
                total += mu(s)
        memo[q] = -total
        return memo[q]

    return mu(frozenset(sub))


def moebius_table(group: FiniteGroup, lattice=None):
    """mu for every subgroup in the lattice, computed bottom-up."""
    if lattice is None:
        lattice = group.subgroups()
    mu = {}
    for q in lattice:  # sorted by size already
        if len(q) == 1:
            mu[q] = 1
            continue
        mu[q] = -sum(mu[s] for s in lattice if len(s) < len(q) and s < q)
    return mu


def moebius_table_by_inversion(group: FiniteGroup, lattice=None):
    """Independent route: invert the lattice zeta matrix over the rationals."""
    if lattice is None:
        lattice = group.subgroups()
    k = len(lattice)
    zeta = [[1 if lattice[i] <= lattice[j] else 0 for j in range(k)] for i in range(k)]
    # solve zeta^T x = e_0 (delta at the trivial subgroup): mu(S) column
    # actually: sum_{S <= Q} mu(S) = [Q trivial] means zeta^T mu = delta
    rhs = [Fraction(1 if j == 0 else 0) for j in range(k)]
    a = [[Fraction(zeta[i][j]) for i in range(k)] for j in range(k)]  # transpose
    x = [Fraction(0)] * k
    # gaussian elimination (upper triangular by size ordering)
    for col in range(k):
        piv = next(r for r in range(col, k) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        rhs[col] = rhs[col] / pv
        for r in range(k):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
                rhs[r] = rhs[r] - f * rhs[col]
    for i in range(k):
        x[i] = rhs[i]
    out = {}
    for i, s in enumerate(lattice):
        assert x[i].denominator == 1
        out[s] = int(x[i])
    return out


# ------------------------------------------------------------ abelian basis

def abelian_basis(group: FiniteGroup):
    """Generators [(g_i, n_i)] with the group the direct sum of the <g_i>."""
    if not group.is_abelian():
        raise NotAbelian(f"{group.name} is not abelian")
    n = group.n
    if n == 1:
        return []
    primes = _prime_factors(n)
    basis = []
    for ell in primes:
        elems = [g for g in range(n) if _is_prime_power_order(group.order_of(g), ell)]
        basis.extend(_primary_basis(group, frozenset(elems), ell))
    return basis


def _is_prime_power_order(k, ell):
    while k % ell == 0:
        k //= ell
    return k == 1


def _prime_factors(n):
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


def _primary_basis(group: FiniteGroup, elems: frozenset, ell: int):
    """Basis of the ell-primary subgroup, by max-order splitting."""
    sub = sorted(elems)
    if len(sub) == 1:
        return []
    pg, embed = group.subgroup_group(sub)
    basis_local = _pgroup_basis(pg, ell)
    return [(embed[g], order) for g, order in basis_local]


def _pgroup_basis(pg: FiniteGroup, ell: int):
    if pg.n == 1:
        return []
    g = max(range(pg.n), key=pg.order_of)
    m = pg.order_of(g)
    cyc = pg.generated([g])
    if len(cyc) == pg.n:
        return [(g, m)]
    q, proj = pg.quotient(cyc)
    qbasis = _pgroup_basis(q, ell)
    out = [(g, m)]
    glog = {pg.power(g, k): k for k in range(m)}
    for qb, qorder in qbasis:
        y = next(x for x in range(pg.n) if proj[x] == qb)
        # adjust y by a power of g so that its order equals its quotient order
        w = pg.power(y, qorder)
        t = glog[w]
        assert t % qorder == 0
        y = pg.table[y][pg.power(g, (-(t // qorder)) % m)]
        assert pg.order_of(y) == qorder
        out.append((y, qorder))
    return out


def element_coordinates(group: FiniteGroup, basis):
    """coords[g] = exponent tuple over the basis (direct-sum decomposition)."""
    coords = {group.e: tuple(0 for _ in basis)}
    for i, (b, order) in enumerate(basis):
        current = list(coords.items())
        for g, c in current:
            x = g
            for k in range(1, order):
                x = group.table[x][b]
                cc = list(c)
                cc[i] = k
                coords[x] = tuple(cc)
    if len(coords) != group.n:
        raise DomainError("basis does not span the group")
    return coords


# ---------------------------------------------------------------- characters

def smallest_primitive_root(p: int) -> int:
    phi = p - 1
    factors = _prime_factors(phi)
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    raise DomainError("no primitive root (p not prime?)")


@dataclass(frozen=True)
class Character:
    """Character of a finite abelian group, stored in exponent form.

    chi(g) = zeta^exps[g] for zeta the fixed primitive root of unity of
    order `modulus` (the group exponent); values are realized p-adically via
    Teichmuller lifts and the ramified mu_p extension.
    """

    group: FiniteGroup = field(compare=False)
    modulus: int
    exps: tuple

    @property
    def order(self) -> int:
        if all(e == 0 for e in self.exps):
            return 1
        g = self.modulus
        for e in self.exps:
            g = gcd(g, e)
        return self.modulus // g

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exps)

    def exponent_at(self, g: int) -> int:
        return self.exps[g]

    def value_cyc(self, g: int, m: int):
        from .cyclotomic import CycRat

        if m % self.modulus:
            raise DomainError("ambient cyclotomic order must be a multiple")
        return CycRat.zeta(m, self.exps[g] * (m // self.modulus))

    def value_ext(self, g: int, p: int, precision: int) -> ZetaExtNumber:
        return embed_root_of_unity(p, precision, self.modulus, self.exps[g])

    def pointwise_mul(self, other: "Character") -> "Character":
        assert other.modulus == self.modulus
        return Character(self.group, self.modulus,
                         tuple((a + b) % self.modulus for a, b in zip(self.exps, other.exps)))

    def compose(self, fmap, source: FiniteGroup) -> "Character":
        """chi o f for a homomorphism f: source -> self.group (index list)."""
        return Character(source, self.modulus, tuple(self.exps[fmap[g]] for g in source.elements()))


def embed_root_of_unity(p: int, precision: int, m: int, k: int) -> ZetaExtNumber:
    """Image of zeta_m^k under the fixed embedding into (Z/p^N)[T]/Phi_p.

    Requires m | (p-1)p.  The prime-to-p part maps to the Teichmuller root
    omega(g)^((p-1)/a) for g the smallest primitive root mod p; the p-part
    maps to T.
    """
    a = m
    eps = 0
    if a % p == 0:
        a //= p
        eps = 1
    if a % p == 0 or (p - 1) % a:
        raise DomainError(f"order {m} roots of unity are not available for p={p}")
    k %= m
    # CRT split of the exponent: zeta_m = zeta_a^A * zeta_{p^eps}^B with
    # A = inv(m/a) mod a, B = inv(m/p^eps) mod p^eps
    out = ZetaExtNumber.one(p, precision)
    if a > 1:
        g = smallest_primitive_root(p)
        za = teichmuller_int(pow(g, (p - 1) // a, p), p, precision)
        A = pow(m // a, -1, a)
        out = out * ZetaExtNumber(p, (pow(za, (k * A) % a, p**precision),), (p - 1) * precision)
    if eps:
        B = pow(m // p, -1, p)
        out = out * ZetaExtNumber.zeta_power(p, (k * B) % p, precision)
    return out


def abstract_characters(group: FiniteGroup):
    """All characters of an abelian group in exponent form (abstract values)."""
    if not group.is_abelian():
        raise NotAbelian(f"{group.name} is not abelian")
    basis = abelian_basis(group)
    m0 = 1
    for _, order in basis:
        m0 = m0 * order // gcd(m0, order)
    coords = element_coordinates(group, basis)
    out = []
    ranges = [order for _, order in basis]
    for t in _tuples(ranges):
        exps = [0] * group.n
        for g in range(group.n):
            c = coords[g]
            exps[g] = sum(t[i] * c[i] * (m0 // ranges[i]) for i in range(len(ranges))) % m0 if m0 > 1 else 0
        out.append(Character(group, max(m0, 1), tuple(exps)))
    return out


def characters(group: FiniteGroup, p: int, precision: int):
    """All characters of an abelian group, with p-adically realizable values.

    The group exponent must divide (p-1)p, the orders realizable inside the
    single ramified extension by mu_p.
    """
    out = abstract_characters(group)
    m0 = out[0].modulus if out else 1
    pp = (p - 1) * p
    if m0 > 1 and pp % m0:
        raise DomainError(
            f"group exponent {m0} not supported: needs roots of unity beyond mu_(p-1)p")
    return out


def _tuples(ranges):
    if not ranges:
        yield ()
        return
    for rest in _tuples(ranges[1:]):
        for k in range(ranges[0]):
            yield (k,) + rest


# ------------------------------------------------------------------- tower

@dataclass(frozen=True)
class TowerSpec:
    """The group G = H x| Gamma: H = Z_p^d, Gamma acting diagonally.

    Gamma is the order-delta subgroup of the Teichmuller units times 1+pZ_p;
    gamma acts on coordinate j of H as multiplication by gamma^(e_j).
    """

    p: int
    d: int
    exponents: tuple
    delta: int
    sigma: frozenset

    def __post_init__(self):
        check_odd_prime(self.p)
        if self.d < 0 or len(self.exponents) != self.d:
            raise DomainError("exponent list must have length d")
        if self.delta < 1 or (self.p - 1) % self.delta:
            raise DomainError("delta must divide p-1")
        if self.p not in self.sigma:
            raise DomainError("the ramified set must contain p")
        object.__setattr__(self, "sigma", frozenset(self.sigma))


@dataclass(frozen=True)
class Level:
    """Finite-level truncation: H mod p^n_h, Gamma mod Gamma_(n_gamma),
    coefficients mod p^precision, q-expansions to trace bound."""

    n_h: int
    n_gamma: int
    precision: int
    bound: int

    def __post_init__(self):
        if min(self.n_h, self.n_gamma, self.precision, self.bound) < 1:
            raise DomainError("level components must be positive")


class TowerQuotient:
    """The finite group (Z/p^n_h)^d x| (Gamma_i/Gamma_n_gamma), with
    structured coordinates (h-vector, gamma-unit)."""

    def __init__(self, spec: TowerSpec, i: int, level: Level):
        p = spec.p
        if i < 0:
            raise DomainError("subgroup index must be >= 0")
        if i >= 1 and level.n_gamma < i:
            raise InconsistentLevel(f"n_gamma={level.n_gamma} < i={i}")
        for e in spec.exponents:
            if e != 0 and level.n_gamma + _vp(abs(e), p) < level.n_h:
                raise InconsistentLevel(
                    "Gamma truncation acts nontrivially on the H truncation")
        self.spec = spec
        self.i = i
        self.level = level
        self.p = p
        self.mh = p**level.n_h
        self.mg = p**level.n_gamma
        self.gammas = self._gamma_part(i)
        self.gamma_index = {g: k for k, g in enumerate(self.gammas)}
        self.hsize = self.mh**spec.d
        n = self.hsize * len(self.gammas)
        table = [[0] * n for _ in range(n)]
        for a in range(n):
            h1, g1 = self.decode(a)
            act = [pow(g1, e, self.mh) for e in spec.exponents]
            for b in range(n):
                h2, g2 = self.decode(b)
                h = tuple((h1[j] + act[j] * h2[j]) % self.mh for j in range(spec.d))
                table[a][b] = self.encode(h, g1 * g2 % self.mg)
        self.group = FiniteGroup(table, name=f"G_{i}@H{level.n_h},C{level.n_gamma}")

    def _gamma_part(self, i):
        p, spec, level = self.p, self.spec, self.level
        if i >= level.n_gamma:
            return [1]
        if i >= 1:
            g = pow(1 + p**i, 1, self.mg)
            out = set()
            x = 1
            while x not in out:
                out.add(x)
                x = x * g % self.mg
            return sorted(out)
        # i = 0: mu_delta (Teichmuller) times 1+pZ
        w = teichmuller_int(pow(smallest_primitive_root(p), (p - 1) // spec.delta, p), p, level.n_gamma)
        out = set()
        for k in range(spec.delta):
            base = pow(w, k, self.mg)
            x = base
            g = (1 + p) % self.mg
            for _ in range(p ** (level.n_gamma - 1)):
                out.add(x)
                x = x * g % self.mg
        return sorted(out)

    def encode(self, h, gamma) -> int:
        idx = 0
        for hj in h:
            idx = idx * self.mh + (hj % self.mh)
        return idx * len(self.gammas) + self.gamma_index[gamma % self.mg]

    def decode(self, idx: int):
        gi = idx % len(self.gammas)
        idx //= len(self.gammas)
        h = []
        for _ in range(self.spec.d):
            h.append(idx % self.mh)
            idx //= self.mh
        return tuple(reversed(h)), self.gammas[gi]

    def subgroup_level(self, j: int) -> frozenset:
        """The image of G_j in this quotient (j >= i)."""
        if j < self.i:
            raise DomainError("G_j is larger than this quotient")
        gam = set(self._gamma_part(j))
        return frozenset(
            g for g in range(self.group.n) if self.decode(g)[1] in gam
        )

    def h_subgroup(self) -> frozenset:
        return frozenset(g for g in range(self.group.n) if self.decode(g)[1] == 1)

    def commutator_closed_form(self) -> frozenset:
        """[G_i, G_i] = sum_j (gamma_i^(e_j) - 1) H_j at this level."""
        p, spec, level = self.p, self.spec, self.level
        if self.i >= level.n_gamma:
            gens_gamma = []
        elif self.i >= 1:
            gens_gamma = [1 + p**self.i]
        else:
            w = teichmuller_int(
                pow(smallest_primitive_root(p), (p - 1) // spec.delta, p), p, level.n_gamma)
            gens_gamma = [w * (1 + p) % self.mg] if spec.delta > 1 else [(1 + p) % self.mg]
        gens = []
        for gam in gens_gamma:
            for j, e in enumerate(spec.exponents):
                c = (pow(gam, e, self.mh) - 1) % self.mh
                if c:
                    h = [0] * spec.d
                    h[j] = c
                    gens.append(self.encode(tuple(h), 1))
        return self.group.generated(gens)

    def conjugation_action_of_big_group(self, big: "TowerQuotient"):
        """Automorphisms of this quotient indexed by cosets of G_i in G.

        Returns a deterministic list of index maps (one per coset of the
        image of G_i in the level-0 group `big`).
        """
        sub = frozenset(
            g for g in range(big.group.n)
            if big.decode(g)[1] in set(big._gamma_part(self.i))
        )
        reps = big.group.left_transversal(sub)
        maps = []
        for r in reps:
            h0, g0 = big.decode(r)
            amap = []
            for x in range(self.group.n):
                h, gam = self.decode(x)
                hh = tuple(
                    (pow(g0, e, self.mh) * h[j] + (1 - pow(gam, e, self.mh)) * h0[j]) % self.mh
                    for j, e in enumerate(self.spec.exponents)
                )
                amap.append(self.encode(hh, gam))
            maps.append(amap)
        return maps


def _vp(x: int, p: int) -> int:
    v = 0
    while x and x % p == 0:
        x //= p
        v += 1
    return v


def finite_quotient(spec: TowerSpec, i: int, level: Level) -> TowerQuotient:
    return TowerQuotient(spec, i, level)
