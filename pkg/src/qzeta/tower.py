"""The tower at finite level: groups, maps, fields, providers, and the
Eisenstein family E_i.

Everything group-theoretic is computed inside the single level-0 quotient
("big"); subgroups, abelianizations, transfers, norms and projections are
identified through big-element labels, so the maps between levels compose
exactly.

Arithmetic realization: the Gamma-part of the tower is the honest abelian
tower (the real cyclic field of conductor `delta_conductor` times the
cyclotomic Z_p-tower), so the fields F_i are maximal real cyclotomic
subfields and the splitting data of rational primes is honest.  The H-part
Frobenius data is synthetic: one seeded element x_ell per prime, whose
Gamma-part is the honest image of ell.  Symbols are the orbit Frobenii
g x_ell^f g^(-1), which makes the whole family multiplicative, equivariant,
and transfer-compatible by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd

from .algebra import AlgebraElement, CatalogDen, GroupAlgebra, multiplication_module_matrix
from .eisenstein import AbelianExtension, EisensteinSeries, cyclotomic_extension, \
    dr_coefficients, zeta_constant_term
from .errors import DataUnavailable, DomainError, InconsistentLevel
from .fields import OracleTable, RealAbelianField, prime_factorization
from .groups import Character, FiniteGroup, Level, TowerSpec, abstract_characters, \
    finite_quotient, smallest_primitive_root, teichmuller_int
from .linalg import berkowitz_det
from .qexp import QExpansion


def _lcm(a, b):
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class TowerConfig:
    spec: TowerSpec
    level: Level
    delta_conductor: int
    twist_c: int
    imax: int
    seed: int = 7

    def __post_init__(self):
        f = RealAbelianField.real_cyclotomic(self.delta_conductor)
        if f.degree != self.spec.delta:
            raise DomainError(
                f"delta field of conductor {self.delta_conductor} has degree {f.degree}, not delta")


class TowerArithmetic:
    """All finite-level data for one tower configuration."""

    def __init__(self, cfg: TowerConfig):
        self.cfg = cfg
        self.spec = cfg.spec
        self.level = cfg.level
        self.p = cfg.spec.p
        self.precision = cfg.level.precision
        if cfg.imax >= 1 and cfg.level.n_gamma < cfg.imax + 1:
            raise InconsistentLevel("need n_gamma >= imax + 1 for the order-p twists")
        self.big = finite_quotient(self.spec, 0, self.level)
        self.G = self.big.group
        self._labels = {}
        self._sub = {}
        self._comm = {}
        self._ab = {}
        self._fields = {}
        self._gamma_of_residue_cache = {}
        self._x_ell = {}
        self._provider_tables = {}
        self._validate_twist()

    # ------------------------------------------------------------- groups

    def subgroup_labels(self, i: int) -> frozenset:
        if i not in self._labels:
            self._labels[i] = self.big.subgroup_level(i)
        return self._labels[i]

    def subgroup_group(self, i: int):
        """(group, embed) for the image of G_i in big."""
        if i not in self._sub:
            self._sub[i] = self.G.subgroup_group(sorted(self.subgroup_labels(i)),
                                                 name=f"S_{i}")
        return self._sub[i]

    def commutator_labels(self, j: int) -> frozenset:
        """[G_j, G_j] at this level, as big labels (generic, cross-checked
        against the closed form)."""
        if j not in self._comm:
            sub, embed = self.subgroup_group(j)
            comm = sub.commutator_subgroup()
            labels = frozenset(embed[x] for x in comm)
            tq = finite_quotient(self.spec, j, self.level) if j > 0 else self.big
            closed = tq.commutator_closed_form()
            closed_labels = frozenset(
                self.big.encode(*tq.decode(x)) for x in closed)
            assert labels == closed_labels, f"commutator closed form mismatch at {j}"
            self._comm[j] = labels
        return self._comm[j]

    def ab_quotient(self, i: int):
        """G_i^ab at this level: (group, map big-label -> ab index)."""
        if i not in self._ab:
            sub, embed = self.subgroup_group(i)
            pos = {g: k for k, g in enumerate(embed)}
            comm = self.commutator_labels(i)
            abgrp, proj = sub.quotient(frozenset(pos[g] for g in comm), name=f"G_{i}^ab")
            label_map = {g: proj[pos[g]] for g in embed}
            self._ab[i] = (abgrp, label_map)
        return self._ab[i]

    def algebra(self, i: int) -> GroupAlgebra:
        return GroupAlgebra(self.ab_quotient(i)[0], self.p)

    # maps -----------------------------------------------------------------

    def ver_map(self, i: int, j: int):
        """Transfer G_i^ab -> G_j^ab (i <= j, so G_j is the subgroup), as an
        index list on the level-i abelianization."""
        if j < i:
            raise DomainError("transfer goes down the tower (into subgroups)")
        sub_i, embed_i = self.subgroup_group(i)
        labels_j = self.subgroup_labels(j)
        pos_i = {g: k for k, g in enumerate(embed_i)}
        v_positions = frozenset(pos_i[g] for g in labels_j)
        vab, vproj, ver = sub_i.transfer(v_positions)
        # identify vab with the canonical ab_j through big labels
        vsub, vembed = sub_i.subgroup_group(sorted(v_positions))
        ab_j, label_j = self.ab_quotient(j)
        ident = {}
        for kk, vpos in enumerate(vembed):
            big_label = embed_i[vpos]
            ident_key = vproj[kk]
            ident.setdefault(ident_key, label_j[big_label])
        # transfer as a map on ab_i (it kills commutators)
        ab_i, label_i = self.ab_quotient(i)
        out = [None] * ab_i.n
        for k, g in enumerate(embed_i):
            out_idx = ident[ver[k]]
            cur = out[label_i[g]]
            assert cur is None or cur == out_idx, "transfer not constant on commutator cosets"
            out[label_i[g]] = out_idx
        return out

    def iota_map(self, j: int, i: int):
        """Inclusion-induced map G_j^ab -> G_i^ab for i <= j (G_j inside G_i)."""
        if i > j:
            raise DomainError("iota goes up the tower")
        ab_j, label_j = self.ab_quotient(j)
        ab_i, label_i = self.ab_quotient(i)
        out = [None] * ab_j.n
        for g in self.subgroup_labels(j):
            out[label_j[g]] = label_i[g]
        return out

    def quotient_ij(self, i: int, j: int):
        """G_i/[G_j,G_j] for j <= i: (group, map big-label -> index)."""
        sub_i, embed_i = self.subgroup_group(i)
        pos_i = {g: k for k, g in enumerate(embed_i)}
        comm_j = self.commutator_labels(j)
        q, proj = sub_i.quotient(frozenset(pos_i[g] for g in comm_j), name=f"G_{i}/[G_{j}]'")
        label_map = {g: proj[pos_i[g]] for g in embed_i}
        return q, label_map

    def pi_map(self, i: int, j: int):
        """Projection G_i^ab -> G_i/[G_j,G_j] (j <= i) as an index list."""
        ab_i, label_i = self.ab_quotient(i)
        q, label_q = self.quotient_ij(i, j)
        out = [None] * ab_i.n
        for g in self.subgroup_labels(i):
            out[label_i[g]] = label_q[g]
        return out, q

    def norm_target_subgroup(self, i: int, j: int):
        """The image of G_i inside G_j^ab (j <= i), plus the identification
        of its subgroup group with G_i/[G_j,G_j]."""
        ab_j, label_j = self.ab_quotient(j)
        t_elems = sorted({label_j[g] for g in self.subgroup_labels(i)})
        q, label_q = self.quotient_ij(i, j)
        # pick per ab_j-element a preimage inside S_i
        pre = {}
        for g in sorted(self.subgroup_labels(i)):
            pre.setdefault(label_j[g], g)
        ident = [label_q[pre[t]] for t in t_elems]
        return frozenset(t_elems), ident, q

    def sigma_maps(self, i: int):
        """Conjugation automorphisms of G_i^ab, one per coset of G_i in G."""
        sub_labels = self.subgroup_labels(i)
        reps = self.G.left_transversal(sub_labels)
        ab_i, label_i = self.ab_quotient(i)
        pre = {}
        for g in sorted(sub_labels):
            pre.setdefault(label_i[g], g)
        maps = []
        for r in reps:
            amap = [label_i[self.G.conj(r, pre[a])] for a in range(ab_i.n)]
            maps.append(amap)
        return maps

    def omega_character(self, i: int, variant: int = 1) -> Character:
        """An order-p character of G_i^ab inflated from Gamma_i (i >= 1), or
        the order-delta character inflated from Gamma when i = 0."""
        ab_i, label_i = self.ab_quotient(i)
        p = self.p
        if i == 0:
            delta = self.spec.delta
            if delta == 1:
                return Character(ab_i, 1, tuple(0 for _ in range(ab_i.n)))
            w = teichmuller_int(pow(smallest_primitive_root(p), (p - 1) // delta, p),
                                p, self.level.n_gamma)
            mg = p**self.level.n_gamma
            # dlog of the Teichmuller component of gamma
            wpows = {pow(w, k, mg): k for k in range(delta)}
            exps = [None] * ab_i.n
            for g in sorted(self.subgroup_labels(0)):
                h, gam = self.big.decode(g)
                teich = teichmuller_int(gam, p, self.level.n_gamma)
                e = (wpows[teich] * variant) % delta
                cur = exps[label_i[g]]
                assert cur is None or cur == e
                exps[label_i[g]] = e
            return Character(ab_i, delta, tuple(exps))
        if self.level.n_gamma < i + 1:
            raise InconsistentLevel("no order-p character of Gamma_i at this level")
        mg = p**self.level.n_gamma
        gen = (1 + p**i) % mg
        dlog = {}
        x = 1
        t = 0
        while x not in dlog:
            dlog[x] = t
            x = x * gen % mg
            t += 1
        # Gamma_i at this level is cyclic of p-power order, so t -> t mod p
        # defines an order-p character gen^t -> zeta_p^t
        exps = [None] * ab_i.n
        for g in sorted(self.subgroup_labels(i)):
            _, gam = self.big.decode(g)
            e = (dlog[gam] * variant) % p
            cur = exps[label_i[g]]
            if cur is not None and cur != e:
                raise DomainError("order-p character not well defined on the quotient")
            exps[label_i[g]] = e
        return Character(ab_i, p, tuple(exps))

    # ------------------------------------------------------------ arithmetic

    def field(self, i: int) -> RealAbelianField:
        if i not in self._fields:
            p = self.p
            if i == 0:
                m = 1
            else:
                # p-part: the layer fixed by (1+p^i), of conductor p^i (i >= 2)
                p_part = p**i if i >= 2 else 1
                m = _lcm(self.delta_part_conductor(), p_part)
            self._fields[i] = RealAbelianField.real_cyclotomic(m)
        return self._fields[i]

    def delta_part_conductor(self) -> int:
        return self.cfg.delta_conductor if self.spec.delta > 1 else 1

    def abelian_conductor(self) -> int:
        return _lcm(self.delta_part_conductor(), self.p**self.level.n_gamma)

    def gamma_of_residue(self, a: int) -> int:
        """The honest Gamma-level image of a residue prime to the abelian
        conductor: delta-part through the real cyclic field's character,
        p-part through <a> = a/omega(a) mod p^n_gamma."""
        key = a % self.abelian_conductor()
        if key in self._gamma_of_residue_cache:
            return self._gamma_of_residue_cache[key]
        p, ng = self.p, self.level.n_gamma
        mg = p**ng
        if a % p == 0:
            raise DomainError("residue not prime to p")
        one_unit = a * pow(teichmuller_int(a, p, ng), -1, mg) % mg
        gamma = one_unit
        delta = self.spec.delta
        if delta > 1:
            mdelta = self.delta_part_conductor()
            j = self._delta_character_dlog(a % mdelta)
            w = teichmuller_int(pow(smallest_primitive_root(p), (p - 1) // delta, p), p, ng)
            gamma = gamma * pow(w, j, mg) % mg
        self._gamma_of_residue_cache[key] = gamma
        return gamma

    def _delta_character_dlog(self, a: int):
        """Discrete log of the delta-field character at the residue a."""
        mdelta = self.delta_part_conductor()
        delta = self.spec.delta
        if delta == 1 or mdelta == 1:
            return 0
        # Gal(Q(zeta_mdelta)+/Q) residues mod +-1; find the cyclic structure
        residues = sorted({min(x % mdelta, (-x) % mdelta) for x in range(1, mdelta)
                           if gcd(x, mdelta) == 1})
        # build the quotient group of order delta and a generator dlog
        reps = []
        seen = set()
        for x in range(1, mdelta):
            if gcd(x, mdelta) != 1:
                continue
            key = min(x, mdelta - x)
            if key not in seen:
                seen.add(key)
                reps.append(key)
        # multiplication on representatives
        def norm_rep(x):
            x %= mdelta
            return min(x, mdelta - x)

        gen = None
        for cand in reps:
            x = cand
            order = 1
            while norm_rep(x) != 1:
                x = norm_rep(x * cand)
                order += 1
                if order > delta:
                    break
            if order == delta:
                gen = cand
                break
        if gen is None:
            raise DomainError("delta field is not cyclic of order delta?")
        table = {1: 0}
        x = gen
        k = 1
        while norm_rep(x) != 1:
            table[norm_rep(x)] = k
            x = norm_rep(x * gen)
            k += 1
        return table[norm_rep(a)]

    def _validate_twist(self):
        c = self.cfg.twist_c
        p = self.p
        if gcd(c, p * self.abelian_conductor()) != 1:
            raise DomainError("twist must be coprime to p and the conductor")
        if any(c % ell == 0 for ell in self.spec.sigma):
            raise DomainError("twist must be coprime to sigma")
        if c % p == 1:
            raise DomainError("twist must not be 1 mod p (denominator would be degenerate)")
        gam = self.gamma_of_residue(c)
        # sigma_c must land inside every G_i used, i.e. in the Gamma_imax part
        gammas_ok = set(self.big._gamma_part(max(self.cfg.imax, 1)))
        if gam not in gammas_ok:
            raise DomainError(
                f"twist {c}: gamma-part {gam} is not in Gamma_{self.cfg.imax} at this level")

    # synthetic Frobenius data -------------------------------------------

    def x_ell(self, ell: int) -> int:
        """The seeded Frobenius lift for a rational prime outside Sigma."""
        if ell in self._x_ell:
            return self._x_ell[ell]
        if ell in self.spec.sigma:
            raise DomainError("no Frobenius at ramified primes")
        gamma = self.gamma_of_residue(ell)
        if self.cfg.twist_c % ell == 0:
            # primes of the twist ideal carry no H-part, so the twist symbol
            # is inflated from the Gamma-part at every level
            h = tuple(0 for _ in range(self.spec.d))
        else:
            rng = random.Random((self.cfg.seed, ell))
            h = tuple(rng.randrange(self.big.mh) for _ in range(self.spec.d))
        x = self.big.encode(h, gamma)
        self._x_ell[ell] = x
        return x

    def provider(self, i: int) -> "TowerProvider":
        return TowerProvider(self, i)

    def sigma_c_symbol(self, i: int) -> int:
        """Artin symbol of the twist ideal (c) at level i, as an ab_i index."""
        prov = self.provider(i)
        field = self.field(i)
        from .fields import divisors_coprime_sigma

        c = self.cfg.twist_c
        recs = divisors_coprime_sigma(field, field.from_int(c), self.spec.sigma)
        principal = [r for r in recs if r[1] == abs(field.norm(field.from_int(c)))]
        assert principal, "the principal ideal (c) must be among its own divisors"
        return prov.artin(field, principal[0][2])

    # Eisenstein family ----------------------------------------------------

    def abelian_extension(self, i: int) -> AbelianExtension:
        """Gal(K_ab/Q) for the honest abelian part of the tower: the quotient
        of (Z/M)^* by the residues with trivial Gamma-image."""
        M = self.abelian_conductor()
        # gamma_of_residue carries both the delta-part (Teichmuller power)
        # and the 1+pZ_p part, so its kernel is exactly Gal(Q(zeta_M)/K_ab)
        ker = tuple(a for a in range(1, M)
                    if gcd(a, M) == 1 and self.gamma_of_residue(a) == 1)
        return cyclotomic_extension(M, self.field(i), kernel_residues=ker or (1,))

    def build_level_series(self, i: int, bound: int) -> EisensteinSeries:
        """E(K_i/F_i) at finite level over the field F_i, coefficients in the
        level-i abelianization (constant term inflated from the Gamma-part)."""
        p, N = self.p, self.precision
        ext = self.abelian_extension(i)
        num, den, subgrp, embed = zeta_constant_term(
            ext, self.spec.sigma, p, N, self.cfg.twist_c)
        # inflate the constant term into ab_i
        infl = self._inflation_map(ext, subgrp, embed, i)
        ab_i, _ = self.ab_quotient(i)
        num_i = num.map_group(infl, ab_i)
        den_i = den.map_group(infl, ab_i)
        # the provider's sigma_c must agree with the inflated abelian one
        assert den_i.factors == ((self.cfg.twist_c, self.sigma_c_symbol(i)),), \
            "twist symbol mismatch between provider and abelian data"
        prov = self.provider(i)
        coeffs, raw = dr_coefficients(self.field(i), prov, self.spec.sigma, bound, p, N)
        alg = self.algebra(i)
        den_elem = den_i.as_element(alg, N)
        qcoeffs = {mu: v * den_elem for mu, v in coeffs.items()}
        q = QExpansion(self.field(i), bound, num_i, qcoeffs, den_i)
        return EisensteinSeries(q, raw, ext, frozenset(self.spec.sigma), prov)

    def _inflation_map(self, ext: AbelianExtension, subgrp, embed, i: int):
        """Index map Gal(K_ab/F_i) -> G_i^ab through gamma coordinates."""
        ab_i, label_i = self.ab_quotient(i)
        out = [None] * subgrp.n
        M = ext.conductor
        pos = {g: k for k, g in enumerate(embed)}
        for a in range(1, M):
            if gcd(a, M) != 1:
                continue
            big_idx = ext.label(a)
            if big_idx not in ext.sub_elems:
                continue
            sub_idx = pos[big_idx]
            gamma = self.gamma_of_residue(a)
            glabel = self.big.encode(tuple(0 for _ in range(self.spec.d)), gamma)
            tgt = label_i[glabel]
            if out[sub_idx] is None:
                out[sub_idx] = tgt
            elif out[sub_idx] != tgt:
                raise DomainError("inflation map not well defined")
        if any(v is None for v in out):
            raise DomainError("inflation map incomplete")
        return out

    def build_E(self, i: int, bound_out: int) -> QExpansion:
        """E_i: the restriction to Q of E(K_i/F_i), then U_(delta p^i)."""
        beta = self.spec.delta * self.p**i
        series = self.build_level_series(i, bound_out * beta)
        q = series.qexp
        if self.field(i).degree > 1:
            q = q.restrict_to_rationals(self.field(0))
        return q.u_beta(beta, sigma_set=self.spec.sigma) if beta > 1 else q


class TowerProvider:
    """Artin symbols at one tower level, from the synthetic Frobenius data."""

    def __init__(self, tower: TowerArithmetic, i: int):
        self.tower = tower
        self.i = i
        ab_i, _ = tower.ab_quotient(i)
        self.group = ab_i
        self._cache = {}

    def artin_prime(self, field, ell, prime_index) -> int:
        key = (ell, prime_index)
        if key not in self._cache:
            self._assign_prime_symbols(field, ell)
        return self._cache[key]

    def artin(self, field, factorization) -> int:
        g = self.group.e
        for ell, idx, e in factorization:
            s = self.artin_prime(field, ell, idx)
            g = self.group.table[g][self.group.power(s, e)]
        return g

    def _assign_prime_symbols(self, field, ell):
        """Match Kummer-Dedekind factors to Frobenius-orbit symbols.

        The base prime (the factor containing the theta-image of the deepest
        base chain) goes to the identity coset; the others are translates by
        the honest Galois action.
        """
        tower = self.tower
        big = tower.big
        x = tower.x_ell(ell)
        sub_labels = tower.subgroup_labels(self.i)
        ab_i, label_i = tower.ab_quotient(self.i)
        primes = prime_factorization(field, ell)
        f_deg = len(primes[0][3]) - 1
        assert all(len(g) - 1 == f_deg for _, _, _, g in primes), \
            "abelian field must have uniform residue degrees"
        # residue degree must equal the orbit size of x on the cosets of S_i,
        # i.e. the smallest power landing in S_i
        xf = x
        f_check = 1
        while xf not in sub_labels:
            xf = big.group.table[xf][x]
            f_check += 1
        assert f_check == f_deg, \
            f"orbit size {f_check} does not match residue degree {f_deg} at {ell}"
        if field.degree == 1:
            self._cache[(ell, 0)] = label_i[xf]
            return
        # match KD factors to cosets: the base factor sits at the identity
        # coset; tau_a moves it to the coset of the gamma-image of a
        base_poly = primes[0][3]
        assignments = {}
        for a, theta_img in field.automorphism_theta_images().items():
            moved = _move_factor(field, base_poly, theta_img, ell, primes)
            gamma_a = tower.gamma_of_residue(a)
            glabel = big.encode(tuple(0 for _ in range(tower.spec.d)), gamma_a)
            sym = big.group.conj(glabel, xf)
            assert sym in sub_labels
            val = label_i[sym]
            if moved in assignments:
                assert assignments[moved] == val, "inconsistent symbol assignment"
            assignments[moved] = val
        for idx in range(len(primes)):
            self._cache[(ell, idx)] = assignments[idx]

    def write_table(self, path, field, primes_needed):
        table = {}
        for ell in primes_needed:
            for idx in range(len(prime_factorization(field, ell))):
                table[(ell, idx)] = self.artin_prime(field, ell, idx)
        OracleTable(self.group, table).write(path, field)
        return table


def _move_factor(field, gpoly, theta_img, ell, primes):
    """Index of the KD factor containing tau(g(theta)) for tau: theta -> img."""
    from .fields import _pmod_rem, _pmod_trim

    pw = field.one()
    acc = field.from_int(gpoly[0])
    for k in range(1, len(gpoly)):
        pw = field.mul(pw, theta_img)
        acc = field.add(acc, field.scale(pw, gpoly[k]))
    poly = _pmod_trim([c % ell for c in acc], ell)
    if poly:
        for idx, (_, _, _, fac) in enumerate(primes):
            if not _pmod_rem(poly, list(fac), ell):
                return idx
    # lattice membership fallback (e.g. when the image is 0 mod ell)
    for idx, (ideal, _, _, _) in enumerate(primes):
        if ideal.contains(acc):
            return idx
    raise DomainError("moved factor not found")
