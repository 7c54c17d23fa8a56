"""Builtin group constructions and the multiplication-table catalog format.

Catalog files are line oriented: one group per line,

    name ; order ; r00 r01 ... r0(n-1) r10 ... r(n-1)(n-1)

with the table flattened row-major.  Blank lines and lines starting with #
are skipped.
"""

from __future__ import annotations

import itertools

from .errors import DomainError
from .groups import FiniteGroup


def cyclic(n: int) -> FiniteGroup:
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, name=f"C{n}", verify=False)


def abelian(orders) -> FiniteGroup:
    g = cyclic(orders[0])
    for m in orders[1:]:
        g = g.direct_product(cyclic(m))
    g.name = "x".join(f"C{m}" for m in orders)
    return g


def dihedral(n: int) -> FiniteGroup:
    """Order 2n: elements (r, s) = rotation r, flip s."""
    def mul(a, b):
        r1, s1 = a
        r2, s2 = b
        if s1 == 0:
            return ((r1 + r2) % n, s2)
        return ((r1 - r2) % n, 1 - s2)

    return from_mult(_pairs(n, 2), mul, name=f"D{n}")


def dicyclic(n: int) -> FiniteGroup:
    """Order 4n: <a, b | a^(2n)=1, b^2 = a^n, bab^-1 = a^-1>."""
    def mul(x, y):
        i1, j1 = x
        i2, j2 = y
        if j1 == 0:
            i, j = i1 + i2, j2
        else:
            i, j = i1 - i2, 1 - j2
            if j2 == 1:  # b*b = a^n
                i += n
        return (i % (2 * n), j % 2)

    return from_mult(_pairs(2 * n, 2), mul, name=f"Dic{n}" if n != 2 else "Q8")


def heisenberg(p: int) -> FiniteGroup:
    """Order p^3, exponent p for odd p: upper unitriangular 3x3 mod p."""
    elems = list(itertools.product(range(p), repeat=3))

    def mul(x, y):
        a, b, c = x
        d, e, f = y
        return ((a + d) % p, (b + e) % p, (c + f + a * e) % p)

    return from_mult(elems, mul, name=f"Heis{p**3}")


def modular_p3(p: int) -> FiniteGroup:
    """Order p^3, exponent p^2: Z/p^2 x| Z/p with 1+p action."""
    elems = list(itertools.product(range(p * p), range(p)))

    def mul(x, y):
        a, b = x
        c, d = y
        return ((a + pow(1 + p, b, p * p) * c) % (p * p), (b + d) % p)

    return from_mult(elems, mul, name=f"Mod{p**3}")


def symmetric(n: int) -> FiniteGroup:
    perms = sorted(itertools.permutations(range(n)))
    return _perm_group(perms, name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    perms = sorted(s for s in itertools.permutations(range(n)) if _parity(s) == 0)
    return _perm_group(perms, name=f"A{n}")


def _parity(perm):
    inv = sum(1 for i in range(len(perm)) for j in range(i) if perm[j] > perm[i])
    return inv % 2


def _perm_group(perms, name):
    index = {s: i for i, s in enumerate(perms)}

    def mul(s, t):
        return tuple(s[t[i]] for i in range(len(s)))

    table = [[index[mul(s, t)] for t in perms] for s in perms]
    return FiniteGroup(table, name=name, verify=False)


def _pairs(n, m):
    return [(a, b) for a in range(n) for b in range(m)]


def from_mult(elems, mul, name="G") -> FiniteGroup:
    index = {x: i for i, x in enumerate(elems)}
    table = [[index[mul(a, b)] for b in elems] for a in elems]
    return FiniteGroup(table, name=name)


def builtin_catalog():
    """The shipped verification catalog for the group-congruence check."""
    groups = []
    # cyclic prime powers for p in {3, 5}
    for n in (3, 9, 27, 81, 5, 25, 125):
        groups.append(cyclic(n))
    # elementary abelian p^2 and p^3
    groups.append(abelian([3, 3]))
    groups.append(abelian([3, 3, 3]))
    groups.append(abelian([5, 5]))
    groups.append(abelian([5, 5, 5]))
    # nonabelian order 6 and order 27
    groups.append(dihedral(3))
    groups.append(heisenberg(3))
    groups.append(modular_p3(3))
    # a spread of groups of order <= 60
    for n in (1, 2, 4, 6, 8, 10, 12, 15, 16, 18, 20, 21, 24, 30, 36, 40, 48, 60):
        groups.append(cyclic(n))
    groups.append(abelian([2, 2]))
    groups.append(abelian([2, 4]))
    groups.append(abelian([2, 2, 2]))
    groups.append(abelian([2, 6]))
    groups.append(abelian([4, 4]))
    groups.append(abelian([3, 9]))
    groups.append(abelian([2, 2, 3]))
    for n in (4, 5, 6, 7, 8, 9, 10, 12, 15):
        groups.append(dihedral(n))
    groups.append(dicyclic(2))   # Q8
    groups.append(dicyclic(3))   # order 12
    groups.append(dicyclic(4))   # order 16
    groups.append(alternating(4))
    groups.append(symmetric(4))
    groups.append(alternating(5))
    return groups


def write_catalog(path, groups):
    with open(path, "w") as fh:
        fh.write("# group catalog: name ; order ; row-major multiplication table\n")
        for g in groups:
            flat = " ".join(str(x) for row in g.table for x in row)
            fh.write(f"{g.name} ; {g.n} ; {flat}\n")


def read_catalog(path):
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, order, flat = (part.strip() for part in line.split(";", 2))
            n = int(order)
            vals = list(map(int, flat.split()))
            if len(vals) != n * n:
                raise DomainError(f"catalog line for {name}: expected {n*n} entries")
            table = [vals[i * n:(i + 1) * n] for i in range(n)]
            out.append(FiniteGroup(table, name=name))
    return out
