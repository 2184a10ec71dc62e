#!/usr/bin/env python3
"""
Finite Groups and Character Tables

Concrete finite groups given by an element list and a multiplication rule, their
conjugacy classes and power maps, character tables by the Dixon-Schneider method
over a prime field, and the character bookkeeping needed for the G648 cover:
restriction to subgroups, regularity checks, nonnegative decompositions, and
selection of characters by their values on named classes.

    G648 = C3 x (SL(2,3) x| (Z/3)^2),  elements (c, m, v),
    (c1, m1, v1) * (c2, m2, v2) = (c1 + c2, m1 m2, v1 + m1 v2)

Classes are ordered by (element order, class size, smallest member) and are
identified by fingerprint (order, size, power-map images), never by labels
imported from elsewhere.

Usage:
    python3 grouprep.py classes [--group g648]
    python3 grouprep.py table [--group g648] [--dixon-prime Q] [--out table.csv]
"""

import argparse
import csv
import io
import json
import re
import sys
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, isqrt
from pathlib import Path
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from errors import (
    AmbiguousClassError,
    ArityMismatchError,
    InconsistentDataError,
    NotASubgroupError,
    ParseError,
)
from exact import GF, CyclotomicElement, cyclotomic_field
from linalg import eigenspace, identity, restrict_to_subspace, transpose

MAX_CLASSES = 64
FIXTURES_DIR = Path(__file__).resolve().parent.parent / 'fixtures'
PRINTED_TABLE = FIXTURES_DIR / 'g648_printed_table.csv'


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, isqrt(n) + 1))


def _prime_factors(n: int) -> List[int]:
    return [p for p in range(2, n + 1) if n % p == 0 and _is_prime(p)]


# ──────────────────────────────────────────────────────────────────
# Groups
# ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ConjugacyClass:
    index: int
    representative: int
    members: Tuple[int, ...]
    order: int

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ClassFingerprint:
    """(order, size, per prime p | |G|: (order, size, fixed) of the class of g^p)."""
    order: int
    size: int
    powers: Tuple[Tuple[int, int, int, bool], ...]

    @property
    def fixed_by(self) -> Tuple[int, ...]:
        return tuple(p for p, _, _, fixed in self.powers if fixed)

    def __str__(self):
        pm = ' '.join(f"{p}->{o}/{s}{'*' if f else ''}" for p, o, s, f in self.powers)
        return f"order {self.order}, size {self.size}, powers [{pm}]"


class Group:
    """Finite group on an explicit element list with a full multiplication table.

    Elements are referred to by their index in `elements`. Subgroups are Groups
    of their own that remember their parent and the embedding of their indices.
    """

    def __init__(self, name: str, elements: Sequence[Hashable],
                 mul: Optional[Callable] = None, table: Optional[List[List[int]]] = None):
        self.name = name
        self.elements = list(elements)
        self.index: Dict[Hashable, int] = {g: i for i, g in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise InconsistentDataError(f"{name}: element list has duplicates")
        if table is None:
            try:
                table = [[self.index[mul(a, b)] for b in self.elements] for a in self.elements]
            except KeyError as e:
                raise InconsistentDataError(f"{name}: product {e} leaves the element list")
        self.table = table
        n = len(self.elements)
        self.identity = next(i for i in range(n) if table[i][i] == i)
        self.inverses = [row.index(self.identity) for row in table]
        self.orders = [self._element_order(i) for i in range(n)]
        self.parent: Optional['Group'] = None
        self.embedding: Optional[List[int]] = None
        self._selectors: Dict[str, Callable] = {}
        self._named: Dict[str, 'Group'] = {}
        self._classes: Optional[List[ConjugacyClass]] = None
        self._class_of: Optional[List[int]] = None
        self._tables: Dict[int, 'CharacterTable'] = {}

    def __repr__(self):
        return f"Group({self.name}, order {self.order})"

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        k %= self.orders[a]
        r = self.identity
        for _ in range(k):
            r = self.table[r][a]
        return r

    def _element_order(self, a: int) -> int:
        r, k = a, 1
        while r != self.identity:
            r = self.table[r][a]
            k += 1
        return k

    @property
    def exponent(self) -> int:
        e = 1
        for o in set(self.orders):
            e = e * o // gcd(e, o)
        return e

    def conjugate(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.table[self.table[g][x]][self.inverses[g]]

    def check_associativity(self, rng, trials: int = 200) -> bool:
        t = self.table
        n = self.order
        for _ in range(trials):
            a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if t[t[a][b]][c] != t[a][t[b][c]]:
                return False
        return True

    # -- subgroups ----------------------------------------------------

    def subgroup(self, indices, name: str) -> 'Group':
        emb = sorted(set(indices))
        local = {g: i for i, g in enumerate(emb)}
        if self.identity not in local:
            raise NotASubgroupError(f"{name} does not contain the identity")
        try:
            table = [[local[self.table[x][y]] for y in emb] for x in emb]
        except KeyError:
            raise NotASubgroupError(f"{name} is not closed under multiplication")
        sub = Group(name, [self.elements[i] for i in emb], table=table)
        sub.parent = self
        sub.embedding = emb
        return sub

    def is_normal(self, sub: 'Group') -> bool:
        if sub.parent is not self:
            raise NotASubgroupError(f"{sub.name} is not a subgroup of {self.name}")
        members = set(sub.embedding)
        return all(self.conjugate(g, h) in members
                   for g in range(self.order) for h in sub.embedding)

    def add_selector(self, name: str, predicate: Callable[[Hashable], bool]):
        self._selectors[name] = predicate

    @property
    def selectors(self) -> List[str]:
        return list(self._selectors)

    def named_subgroup(self, name: str) -> 'Group':
        if name not in self._named:
            if name not in self._selectors:
                raise KeyError(f"{self.name} has no subgroup selector {name!r}")
            pred = self._selectors[name]
            idx = [i for i, g in enumerate(self.elements) if pred(g)]
            self._named[name] = self.subgroup(idx, name)
        return self._named[name]

    # -- classes ------------------------------------------------------

    @property
    def classes(self) -> List[ConjugacyClass]:
        if self._classes is None:
            self._compute_classes()
        return self._classes

    @property
    def class_of(self) -> List[int]:
        if self._class_of is None:
            self._compute_classes()
        return self._class_of

    def _compute_classes(self):
        n = self.order
        seen = [False] * n
        raw = []
        for x in range(n):
            if seen[x]:
                continue
            members = sorted({self.conjugate(g, x) for g in range(n)})
            for y in members:
                seen[y] = True
            raw.append(members)
        raw.sort(key=lambda m: (self.orders[m[0]], len(m), m[0]))
        classes = []
        class_of = [0] * n
        for k, members in enumerate(raw):
            classes.append(ConjugacyClass(k, members[0], tuple(members), self.orders[members[0]]))
            for y in members:
                class_of[y] = k
        self._classes, self._class_of = classes, class_of

    @property
    def class_names(self) -> List[str]:
        names, seen = [], Counter()
        for c in self.classes:
            k = seen[c.order]
            seen[c.order] += 1
            suffix = ''
            while True:
                suffix = chr(ord('a') + k % 26) + suffix
                k = k // 26 - 1
                if k < 0:
                    break
            names.append(f"{c.order}{suffix}")
        return names

    def power_map(self, p: int) -> List[int]:
        return [self.class_of[self.power(c.representative, p)] for c in self.classes]

    def inverse_classes(self) -> List[int]:
        return [self.class_of[self.inverses[c.representative]] for c in self.classes]


def conjugacy_classes(group: Group) -> List[ConjugacyClass]:
    return group.classes


def class_fingerprint(group: Group, j: int) -> ClassFingerprint:
    c = group.classes[j]
    powers = []
    for p in _prime_factors(group.order):
        k = group.power_map(p)[j]
        img = group.classes[k]
        powers.append((p, img.order, img.size, k == j))
    return ClassFingerprint(c.order, c.size, tuple(powers))


def find_class(group: Group, order: int, size: int, fixed_by: Sequence[int] = ()) -> int:
    """Index of the unique class with this order and size whose p-th powers stay
    in the class for every p in fixed_by."""
    maps = {p: group.power_map(p) for p in fixed_by}
    hits = [c.index for c in group.classes
            if c.order == order and c.size == size
            and all(maps[p][c.index] == c.index for p in fixed_by)]
    if not hits:
        raise InconsistentDataError(
            f"no class of order {order} and size {size} fixed by {list(fixed_by)} in {group.name}")
    if len(hits) > 1:
        cands = [(j, str(class_fingerprint(group, j))) for j in hits]
        raise AmbiguousClassError(
            f"{len(hits)} classes of order {order} and size {size} in {group.name}", cands)
    return hits[0]


# ──────────────────────────────────────────────────────────────────
# Concrete groups
# ──────────────────────────────────────────────────────────────────

_I2 = ((1, 0), (0, 1))


def _mat_mul3(a, b):
    return (((a[0][0] * b[0][0] + a[0][1] * b[1][0]) % 3, (a[0][0] * b[0][1] + a[0][1] * b[1][1]) % 3),
            ((a[1][0] * b[0][0] + a[1][1] * b[1][0]) % 3, (a[1][0] * b[0][1] + a[1][1] * b[1][1]) % 3))


def _mat_order(m) -> int:
    r, k = m, 1
    while r != _I2:
        r = _mat_mul3(r, m)
        k += 1
    return k


SL2_3 = tuple(((a, b), (c, d)) for a, b, c, d in product(range(3), repeat=4)
              if (a * d - b * c) % 3 == 1)
# The normal 2-Sylow subgroup of SL(2,3): all elements of order dividing 4.
Q8_MATRICES = frozenset(m for m in SL2_3 if 4 % _mat_order(m) == 0)


def cyclic(n: int) -> Group:
    return Group(f"C{n}", range(n), lambda a, b: (a + b) % n)


def sl23() -> Group:
    return Group("SL(2,3)", SL2_3, _mat_mul3)


def q8() -> Group:
    s = sl23()
    return s.subgroup([s.index[m] for m in Q8_MATRICES], "Q8")


def _g648_mul(x, y):
    c1, m1, v1 = x
    c2, m2, v2 = y
    return ((c1 + c2) % 3, _mat_mul3(m1, m2),
            ((v1[0] + m1[0][0] * v2[0] + m1[0][1] * v2[1]) % 3,
             (v1[1] + m1[1][0] * v2[0] + m1[1][1] * v2[1]) % 3))


@lru_cache(maxsize=None)
def build_g648() -> Group:
    """C3 x (SL(2,3) x| (Z/3)^2) with its designated subgroups.

    Selectors: G72 = {(0, m, v) : m in Q8} (normal), G72hat = {(c, m, 0)}
    (not normal), sylow3 (upper unitriangular m), center = {(c, I, 0)},
    translations = {(0, I, v)}.
    """
    elements = [(c, m, v) for c in range(3) for m in SL2_3 for v in product(range(3), repeat=2)]
    g = Group("G648", elements, _g648_mul)
    g.add_selector('G72', lambda e: e[0] == 0 and e[1] in Q8_MATRICES)
    g.add_selector('G72hat', lambda e: e[2] == (0, 0))
    g.add_selector('sylow3', lambda e: e[1][0][0] == 1 and e[1][1][0] == 0 and e[1][1][1] == 1)
    g.add_selector('center', lambda e: e[1] == _I2 and e[2] == (0, 0))
    g.add_selector('translations', lambda e: e[0] == 0 and e[1] == _I2)
    return g


GROUPS = {
    'g648': build_g648,
    'sl23': sl23,
    'q8': q8,
    'c3': lambda: cyclic(3),
}


def group_by_name(name: str) -> Group:
    key = name.lower()
    if key in GROUPS:
        return GROUPS[key]()
    m = re.match(r'^c(\d+)$', key)
    if m:
        return cyclic(int(m.group(1)))
    g648 = build_g648()
    if name in g648.selectors:
        return g648.named_subgroup(name)
    raise KeyError(f"unknown group {name!r}")


# ──────────────────────────────────────────────────────────────────
# Class functions
# ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ClassFunction:
    """Values on the classes of `group`, in class order."""
    group: Group
    values: Tuple[CyclotomicElement, ...]

    def __post_init__(self):
        if len(self.values) != len(self.group.classes):
            raise ArityMismatchError(
                f"{len(self.values)} values for {len(self.group.classes)} classes of {self.group.name}")

    @property
    def degree(self):
        return self.values[0]

    def _check(self, other: 'ClassFunction'):
        if other.group is not self.group:
            raise ArityMismatchError(f"class functions on {self.group.name} and {other.group.name}")

    def __add__(self, other: 'ClassFunction') -> 'ClassFunction':
        self._check(other)
        return ClassFunction(self.group, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: 'ClassFunction') -> 'ClassFunction':
        self._check(other)
        return ClassFunction(self.group, tuple(a - b for a, b in zip(self.values, other.values)))

    def __mul__(self, k: int) -> 'ClassFunction':
        return ClassFunction(self.group, tuple(a * k for a in self.values))

    __rmul__ = __mul__

    def conj(self) -> 'ClassFunction':
        return ClassFunction(self.group, tuple(a.conj() for a in self.values))


def _constant_function(group: Group, first: int, rest: int) -> ClassFunction:
    field_ = cyclotomic_field(group.exponent)
    vals = [field_.element([first])] + [field_.element([rest])] * (len(group.classes) - 1)
    return ClassFunction(group, tuple(vals))


def trivial_character(group: Group) -> ClassFunction:
    return _constant_function(group, 1, 1)


def regular_character(group: Group) -> ClassFunction:
    return _constant_function(group, group.order, 0)


def inner_product(chi: ClassFunction, psi: ClassFunction):
    """(1/|G|) sum_C |C| chi(C) conj(psi(C)); a Fraction when rational."""
    chi._check(psi)
    g = chi.group
    acc = cyclotomic_field(g.exponent).zero()
    for c, a, b in zip(g.classes, chi.values, psi.values):
        acc = acc + a * b.conj() * c.size
    acc = acc / g.order
    return acc.as_fraction() if acc.is_rational() else acc


def multiplicity(chi: ClassFunction, psi: ClassFunction) -> int:
    v = inner_product(chi, psi)
    if not isinstance(v, Fraction) or v.denominator != 1 or v < 0:
        raise InconsistentDataError(f"inner product {v} is not a multiplicity")
    return int(v)


def restrict_character(chi: ClassFunction, sub: Group) -> ClassFunction:
    g = chi.group
    if sub.parent is not g:
        raise NotASubgroupError(f"{sub.name} is not a subgroup of {g.name}")
    vals = tuple(chi.values[g.class_of[sub.embedding[c.representative]]] for c in sub.classes)
    return ClassFunction(sub, vals)


def is_regular_character(f: ClassFunction) -> bool:
    if f.values[0] != f.group.order:
        return False
    return all(v.is_zero() for v in f.values[1:])


# ──────────────────────────────────────────────────────────────────
# Dixon-Schneider
# ──────────────────────────────────────────────────────────────────

def admissible_dixon_prime(group: Group) -> int:
    """Smallest prime q = 1 mod exponent(G) with q > 2*sqrt(|G|)."""
    e = group.exponent
    q = e + 1
    while not (_is_prime(q) and q * q > 4 * group.order):
        q += e
    return q


def _check_dixon_prime(group: Group, q: int):
    if not _is_prime(q):
        raise ValueError(f"Dixon prime {q} is not prime")
    if (q - 1) % group.exponent:
        raise ValueError(f"Dixon prime {q} is not 1 mod the exponent {group.exponent}")
    if q * q <= 4 * group.order:
        raise ValueError(f"Dixon prime {q} is not above 2*sqrt({group.order})")


def class_matrices(group: Group) -> List[List[List[int]]]:
    """M_j[k][l] = #{x in C_j : x^-1 z_l in C_k} for a fixed z_l in C_l."""
    classes = group.classes
    r = len(classes)
    cls, t, inv = group.class_of, group.table, group.inverses
    mats = []
    for cj in classes:
        m = [[0] * r for _ in range(r)]
        for l, cl in enumerate(classes):
            z = cl.representative
            for x in cj.members:
                m[cls[t[inv[x]][z]]][l] += 1
        mats.append(m)
    return mats


def _split(ring, mt, basis):
    local = restrict_to_subspace(ring, mt, basis)
    lt = transpose(local)
    pieces, found = [], 0
    for lam in range(ring.prime):
        vecs = eigenspace(ring, lt, lam)
        if vecs:
            pieces.append([[sum(c[i] * basis[i][k] for i in range(len(basis))) % ring.prime
                            for k in range(len(basis[0]))] for c in vecs])
            found += len(vecs)
            if found == len(basis):
                return pieces
    raise InconsistentDataError("class matrix is not diagonalisable over the Dixon field")


def _common_eigenvectors(mats, q: int) -> List[List[int]]:
    ring = GF(q)
    r = len(mats)
    spaces = [identity(ring, r)]
    for m in mats[1:]:
        if all(len(s) == 1 for s in spaces):
            break
        mt = transpose([[x % q for x in row] for row in m])
        nxt = []
        for basis in spaces:
            if len(basis) == 1:
                nxt.append(basis)
            else:
                nxt.extend(_split(ring, mt, basis))
        spaces = nxt
    if any(len(s) > 1 for s in spaces):
        raise InconsistentDataError("class matrices do not separate the characters")
    return [s[0] for s in spaces]


def _primitive_root_of_unity(q: int, e: int) -> int:
    factors = _prime_factors(q - 1)
    g = next(g for g in range(2, q) if all(pow(g, (q - 1) // p, q) != 1 for p in factors))
    return pow(g, (q - 1) // e, q)


def character_table_dixon(group: Group, dixon_prime: Optional[int] = None,
                          verify: bool = True) -> 'CharacterTable':
    """Irreducible characters via common eigenvectors of the class matrices mod q.

    Class-function values mod q are lifted to Q(zeta_e), e = exponent(G), from
    the eigenvalue multiplicities of each element's cyclic subgroup. With
    verify=True the row orthogonality relations are checked exactly.
    """
    q = dixon_prime or admissible_dixon_prime(group)
    if q in group._tables:
        return group._tables[q]
    _check_dixon_prime(group, q)
    classes = group.classes
    r = len(classes)
    if r > MAX_CLASSES:
        raise ValueError(f"{group.name} has {r} classes, cap is {MAX_CLASSES}")
    n = group.order
    sizes = [c.size for c in classes]
    inv_cls = group.inverse_classes()

    residues = []
    for v in _common_eigenvectors(class_matrices(group), q):
        w0 = pow(v[0], -1, q)
        omega = [x * w0 % q for x in v]
        s = sum(omega[j] * omega[inv_cls[j]] * pow(sizes[j], -1, q) for j in range(r)) % q
        d2 = n * pow(s, -1, q) % q
        d = next((d for d in range(1, isqrt(n) + 1) if n % d == 0 and d * d % q == d2), None)
        if d is None:
            raise InconsistentDataError(f"no degree d with d^2 = {d2} mod {q}")
        residues.append((d, [d * omega[j] * pow(sizes[j], -1, q) % q for j in range(r)]))

    e_g = group.exponent
    field_ = cyclotomic_field(e_g)
    z = _primitive_root_of_unity(q, e_g)
    power_classes = [[group.class_of[group.power(c.representative, l)] for l in range(c.order)]
                     for c in classes]
    rows = []
    for d, res in residues:
        row = []
        for j, c in enumerate(classes):
            e = c.order
            step = e_g // e
            ze = pow(z, step, q)
            inv_e = pow(e, -1, q)
            value = field_.zero()
            for k in range(e):
                m = inv_e * sum(res[power_classes[j][l]] * pow(ze, (-k * l) % e, q)
                                for l in range(e)) % q
                if m > d:
                    raise InconsistentDataError(
                        f"eigenvalue multiplicity {m} exceeds degree {d} on class {j}")
                if m:
                    value = value + field_.root_of_unity(k * step) * m
            row.append(value)
        rows.append(row)

    def key(row):
        trivial = all(v == 1 for v in row)
        return (row[0].coords[0], not trivial, [v.coords for v in row])

    rows.sort(key=key)
    table = CharacterTable(group, rows, q)
    if verify and table.row_orthogonality_defects():
        raise InconsistentDataError(f"{group.name}: computed table fails row orthogonality")
    group._tables[q] = table
    return table


@dataclass
class CharacterTable:
    group: Group
    values: List[List[CyclotomicElement]]
    dixon_prime: int

    def __len__(self):
        return len(self.values)

    @property
    def classes(self) -> List[ConjugacyClass]:
        return self.group.classes

    @property
    def conductor(self) -> int:
        return self.group.exponent

    @property
    def degrees(self) -> List[int]:
        return [int(row[0].as_fraction()) for row in self.values]

    @property
    def trivial_index(self) -> int:
        return next(i for i, row in enumerate(self.values) if all(v == 1 for v in row))

    def power_maps(self) -> Dict[int, List[int]]:
        return {p: self.group.power_map(p) for p in _prime_factors(self.group.order)}

    def character(self, i: int) -> ClassFunction:
        return ClassFunction(self.group, tuple(self.values[i]))

    def characters(self) -> List[ClassFunction]:
        return [self.character(i) for i in range(len(self))]

    def combination(self, multiplicities: Sequence[int]) -> ClassFunction:
        acc = _constant_function(self.group, 0, 0)
        for i, m in enumerate(multiplicities):
            if m:
                acc = acc + self.character(i) * m
        return acc

    def row_orthogonality_defects(self) -> List[Tuple[int, int]]:
        sizes = [c.size for c in self.classes]
        conj = [[v.conj() for v in row] for row in self.values]
        bad = []
        for i, row in enumerate(self.values):
            for j in range(i, len(self.values)):
                s = sum((a * b * k for a, b, k in zip(row, conj[j], sizes)),
                        cyclotomic_field(self.conductor).zero())
                if s != (self.group.order if i == j else 0):
                    bad.append((i, j))
        return bad

    def column_orthogonality_defects(self) -> List[Tuple[int, int]]:
        cols = list(zip(*self.values))
        bad = []
        for a, ca in enumerate(cols):
            centraliser = self.group.order // self.classes[a].size
            for b in range(a, len(cols)):
                s = sum((x * y.conj() for x, y in zip(ca, cols[b])),
                        cyclotomic_field(self.conductor).zero())
                if s != (centraliser if a == b else 0):
                    bad.append((a, b))
        return bad

    def to_data(self) -> 'TableData':
        return TableData(
            row_labels=[f"chi_{i + 1}" for i in range(len(self))],
            class_names=self.group.class_names,
            class_orders=[c.order for c in self.classes],
            class_sizes=[c.size for c in self.classes],
            values=[list(row) for row in self.values],
            conductor=self.conductor,
        )


# ──────────────────────────────────────────────────────────────────
# Decomposition and selection
# ──────────────────────────────────────────────────────────────────

def decompose_regular_restrictions(table: CharacterTable, subgroups: Sequence[Group],
                                   limit: Optional[int] = None) -> List[Tuple[int, ...]]:
    """All m >= 0 with (sum m_i chi_i + 1)|_H regular for every H in subgroups.

    Each H contributes one linear constraint per irreducible psi of H:
    sum_i m_i <chi_i|_H, psi> = psi(1) - [psi trivial].
    """
    if len({sub.order for sub in subgroups}) > 1:
        # a regular restriction fixes the total degree at |H| - 1
        return []
    n = len(table)
    coeffs: List[List[int]] = []
    targets: List[int] = []
    chars = table.characters()
    for sub in subgroups:
        sub_table = character_table_dixon(sub)
        restricted = [restrict_character(chi, sub) for chi in chars]
        for k, psi in enumerate(sub_table.characters()):
            coeffs.append([multiplicity(res, psi) for res in restricted])
            targets.append(sub_table.degrees[k] - (1 if k == sub_table.trivial_index else 0))

    ncons = len(targets)
    bounds = []
    for i in range(n):
        caps = [targets[c] // coeffs[c][i] for c in range(ncons) if coeffs[c][i]]
        if not caps:
            raise InconsistentDataError(f"character {i + 1} restricts to zero")
        bounds.append(min(caps))
    later = [[any(coeffs[c][k] for k in range(i, n)) for i in range(n + 1)] for c in range(ncons)]

    solutions: List[Tuple[int, ...]] = []
    chosen = [0] * n

    def search(i: int, remaining: List[int]) -> bool:
        if i == n:
            if not any(remaining):
                solutions.append(tuple(chosen))
                return limit is not None and len(solutions) >= limit
            return False
        for c in range(ncons):
            if remaining[c] and not later[c][i]:
                return False
        hi = min([bounds[i]] + [remaining[c] // coeffs[c][i] for c in range(ncons) if coeffs[c][i]])
        for m in range(hi + 1):
            chosen[i] = m
            nxt = [remaining[c] - m * coeffs[c][i] for c in range(ncons)]
            if search(i + 1, nxt):
                return True
        chosen[i] = 0
        return False

    search(0, list(targets))
    return solutions


def decompose_71(table: CharacterTable) -> List[int]:
    """The unique multiplicity vector making (sum + trivial) regular on G72 and G72hat."""
    g = table.group
    try:
        subs = [g.named_subgroup('G72'), g.named_subgroup('G72hat')]
    except KeyError as e:
        raise InconsistentDataError(f"{g.name} lacks the order-72 subgroups: {e}")
    sols = decompose_regular_restrictions(table, subs, limit=2)
    if len(sols) != 1:
        raise InconsistentDataError(
            f"expected exactly one decomposition, found {'none' if not sols else 'several'}")
    return list(sols[0])


def total_degree(table: CharacterTable, multiplicities: Sequence[int]) -> int:
    return sum(m * d for m, d in zip(multiplicities, table.degrees))


@dataclass(frozen=True)
class ClassCondition:
    """Names a class by order, size and the primes whose power map fixes it.

    value=None asks for invariance (chi(C) = chi(1)); otherwise chi(C) = value.
    """
    order: int
    size: int
    fixed_by: Tuple[int, ...] = ()
    value: Optional[int] = None


def select_characters_by_class_conditions(table: CharacterTable,
                                          conditions: Sequence[ClassCondition],
                                          among: Optional[Sequence[int]] = None) -> List[int]:
    idx = list(range(len(table))) if among is None else list(among)
    for cond in conditions:
        j = find_class(table.group, cond.order, cond.size, cond.fixed_by)
        idx = [i for i in idx
               if table.values[i][j] == (table.values[i][0] if cond.value is None else cond.value)]
    return idx


# ──────────────────────────────────────────────────────────────────
# Table data, CSV and matching
# ──────────────────────────────────────────────────────────────────

@dataclass
class TableData:
    """A character table detached from any group (computed or printed)."""
    row_labels: List[str]
    class_names: List[str]
    class_orders: List[int]
    values: List[List[CyclotomicElement]]
    conductor: int
    class_sizes: Optional[List[int]] = None

    @property
    def degrees(self) -> List[int]:
        return [int(row[0].as_fraction()) for row in self.values]

    def centraliser_orders(self) -> List[int]:
        out = []
        for col in zip(*self.values):
            s = sum((v.abs2() for v in col), cyclotomic_field(self.conductor).zero())
            out.append(int(s.as_fraction()))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# conductor {self.conductor}; w = exp(2*pi*i/{self.conductor})\n")
        w = csv.writer(buf, lineterminator='\n')
        w.writerow(['class'] + self.class_names)
        w.writerow(['order'] + self.class_orders)
        if self.class_sizes:
            w.writerow(['size'] + self.class_sizes)
        for label, row in zip(self.row_labels, self.values):
            w.writerow([label] + [str(v) for v in row])
        return buf.getvalue()


_CONDUCTOR_RE = re.compile(r'conductor\s+(\d+)')


def read_table_csv(text: str) -> TableData:
    conductor = None
    rows: List[Tuple[int, List[str]]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if line.startswith('#'):
            m = _CONDUCTOR_RE.search(line)
            if m and conductor is None:
                conductor = int(m.group(1))
            continue
        rows.append((lineno, next(csv.reader([line]))))
    if conductor is None:
        raise ParseError("missing '# conductor N' header")
    field_ = cyclotomic_field(conductor)
    meta: Dict[str, List[str]] = {}
    labels, values = [], []
    width = None
    for lineno, cells in rows:
        head, rest = cells[0].strip(), [c.strip() for c in cells[1:]]
        if width is None:
            width = len(rest)
        elif len(rest) != width:
            raise ParseError(f"expected {width} entries, got {len(rest)}", line=lineno)
        if head in ('class', 'order', 'size'):
            meta[head] = rest
            continue
        try:
            values.append([field_.parse(c) for c in rest])
        except ParseError as e:
            raise ParseError(str(e), line=lineno)
        labels.append(head)
    if 'class' not in meta:
        raise ParseError("missing 'class' row")
    orders = [int(x) for x in meta['order']] if 'order' in meta else \
        [int(re.match(r'\d+', name).group()) for name in meta['class']]
    sizes = [int(x) for x in meta['size']] if 'size' in meta else None
    return TableData(labels, meta['class'], orders, values, conductor, sizes)


def load_table(path) -> TableData:
    return read_table_csv(Path(path).read_text())


def load_printed_table(path=None) -> TableData:
    """The G648 table as printed, rows chi_1..chi_30 in print order."""
    return load_table(path or PRINTED_TABLE)


@dataclass
class TableMatch:
    rows: List[int]
    columns: List[int]
    conjugated: bool


def _keys(data: TableData, n: int, conjugate: bool) -> List[List[tuple]]:
    out = []
    for row in data.values:
        out.append([(v.conj() if conjugate else v).lift(n).coords for v in row])
    return out


def match_tables(a: TableData, b: TableData, allow_conjugate: bool = True) -> Optional[TableMatch]:
    """Row and column bijections with b[rows[i]][columns[j]] = a[i][j].

    Columns may only pair with columns of the same element order and centraliser
    order. With allow_conjugate, b may also be replaced by its complex conjugate
    (w <-> w^2 on the cube roots of unity).
    """
    if len(a.values) != len(b.values) or len(a.class_names) != len(b.class_names):
        return None
    n = a.conductor * b.conductor // gcd(a.conductor, b.conductor)
    ka = _keys(a, n, False)
    a_inv = list(zip(a.class_orders, a.centraliser_orders()))
    b_inv = list(zip(b.class_orders, b.centraliser_orders()))
    for conjugated in ([False, True] if allow_conjugate else [False]):
        kb = _keys(b, n, conjugated)
        found = _match(ka, kb, a_inv, b_inv)
        if found:
            return TableMatch(found[0], found[1], conjugated)
    return None


def _match(ka, kb, a_inv, b_inv):
    r, c = len(ka), len(ka[0])

    def col_sig(k, inv, j):
        return inv[j], tuple(sorted(k[i][j] for i in range(r)))

    sa = [col_sig(ka, a_inv, j) for j in range(c)]
    sb = [col_sig(kb, b_inv, j) for j in range(c)]
    if sorted(sa) != sorted(sb):
        return None
    candidates = {j: [k for k in range(c) if sb[k] == sa[j]] for j in range(c)}
    seq = sorted(range(c), key=lambda j: (len(candidates[j]), j))
    cols = [None] * c
    used = [False] * c

    def search(step: int, marks_a: List[tuple], marks_b: List[tuple]) -> bool:
        if step == c:
            return True
        ja = seq[step]
        for jb in candidates[ja]:
            if used[jb]:
                continue
            na = [m + (ka[i][ja],) for i, m in enumerate(marks_a)]
            nb = [m + (kb[i][jb],) for i, m in enumerate(marks_b)]
            if Counter(na) != Counter(nb):
                continue
            cols[ja], used[jb] = jb, True
            if search(step + 1, na, nb):
                return True
            cols[ja], used[jb] = None, False
        return False

    if not search(0, [()] * r, [()] * r):
        return None
    rows = []
    taken = set()
    for i in range(r):
        target = [ka[i][j] for j in range(c)]
        k = next(k for k in range(r) if k not in taken and [kb[k][cols[j]] for j in range(c)] == target)
        taken.add(k)
        rows.append(k)
    return rows, cols


# ──────────────────────────────────────────────────────────────────
# CLI
# ──────────────────────────────────────────────────────────────────

def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Conjugacy classes and character tables")
    sub = parser.add_subparsers(dest='command', required=True)
    p_cls = sub.add_parser('classes', help='List conjugacy classes with fingerprints')
    p_cls.add_argument('--group', default='g648')
    p_cls.add_argument('--json', action='store_true')
    p_tab = sub.add_parser('table', help='Compute the character table')
    p_tab.add_argument('--group', default='g648')
    p_tab.add_argument('--dixon-prime', type=int)
    p_tab.add_argument('--out')
    args = parser.parse_args(argv)

    try:
        group = group_by_name(args.group)
    except KeyError as e:
        print(f"✗ {e}", file=sys.stderr)
        return 2

    if args.command == 'classes':
        rows = [{'name': name, 'size': c.size, 'order': c.order,
                 'fingerprint': str(class_fingerprint(group, c.index))}
                for name, c in zip(group.class_names, group.classes)]
        if args.json:
            print(json.dumps(rows, indent=2))
        else:
            for row in rows:
                print(f"{row['name']:>5}  {row['fingerprint']}")
        return 0

    print(f"→ Dixon-Schneider on {group.name} ({len(group.classes)} classes)", file=sys.stderr)
    table = character_table_dixon(group, args.dixon_prime)
    text = table.to_data().to_csv()
    if args.out:
        Path(args.out).write_text(text)
        print(f"✓ Wrote {args.out}", file=sys.stderr)
    else:
        print(text, end='')
    return 0


if __name__ == '__main__':
    sys.exit(main())
