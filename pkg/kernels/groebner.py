#!/usr/bin/env python3
"""
Groebner Bases and Hilbert Data

Buchberger's algorithm (normal selection, Gebauer-Moeller pair elimination)
returning the reduced basis, normal forms against a basis, and the Hilbert
series / Hilbert polynomial of a homogeneous quotient computed from its
leading-term ideal.

Over QQ the S-pair reductions run on primitive integer polynomials; the
result is converted back to monic rational generators at the end.
"""

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from errors import ArityMismatchError, DegreeCapExceededError, NotAFieldError
from exact import Ring, format_upoly, upoly_divmod, upoly_mul, upoly_trim
from mpoly import (
    GREVLEX,
    LEX,
    IdealBasis,
    Monomial,
    Poly,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
    monomials_of_degree,
    order_key,
)


def _heap_key(order: str):
    """Key whose ascending order is the descending monomial order."""
    if order == GREVLEX:
        return lambda e: (-sum(e), tuple(reversed(e)))
    if order == LEX:
        return lambda e: tuple(-x for x in e)
    raise ValueError(f"unknown monomial order {order!r}")


# ──────────────────────────────────────────────────────────────────
# Internal polynomial records
# ──────────────────────────────────────────────────────────────────

class _GPoly:
    """Mutable-free working copy: term dict plus cached leading data."""

    __slots__ = ('terms', 'lm', 'lc')

    def __init__(self, terms: Dict[Monomial, object], key):
        self.terms = terms
        self.lm = max(terms, key=key)
        self.lc = terms[self.lm]


class _Arith:
    """Coefficient policy: monic over a field, primitive integers over QQ."""

    def __init__(self, ring: Ring, order: str):
        self.ring = ring
        self.fraction_free = ring.kind == 'QQ'
        self.key = order_key(order)
        self.heap_key = _heap_key(order)

    def normalize(self, terms: Dict[Monomial, object]) -> Optional[_GPoly]:
        if not terms:
            return None
        if self.fraction_free:
            den = 1
            for c in terms.values():
                den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
            ints = {m: int(Fraction(c) * den) for m, c in terms.items()}
            g = 0
            for c in ints.values():
                g = gcd(g, c)
            lm = max(ints, key=self.key)
            if ints[lm] < 0:
                g = -g
            return _GPoly({m: c // g for m, c in ints.items()}, self.key)
        ring = self.ring
        lm = max(terms, key=self.key)
        inv = ring.inv(terms[lm])
        return _GPoly({m: ring.reduce(c * inv) for m, c in terms.items()}, self.key)

    def reduce(self, terms: Dict[Monomial, object], basis: Sequence[_GPoly],
               cancel=None) -> Dict[Monomial, object]:
        """Full reduction of `terms` by `basis`; returns the remainder terms."""
        ring = self.ring
        work = dict(terms)
        heap = [(self.heap_key(m), m) for m in work]
        heapq.heapify(heap)
        rem: Dict[Monomial, object] = {}
        while heap:
            _, m = heapq.heappop(heap)
            if m not in work:
                continue
            c = work.pop(m)
            g = next((g for g in basis if monomial_divides(g.lm, m)), None)
            if g is None:
                rem[m] = c
                continue
            if cancel is not None:
                cancel()
            q = monomial_div(m, g.lm)
            if self.fraction_free:
                d = gcd(c, g.lc)
                a, b = c // d, g.lc // d
                if b != 1:
                    for k in work:
                        work[k] *= b
                    for k in rem:
                        rem[k] *= b
                factor = a
            else:
                factor = c
            for gm, gc in g.terms.items():
                if gm == g.lm:
                    continue
                mm = monomial_mul(gm, q)
                v = work.get(mm, 0) - factor * gc
                if not self.fraction_free:
                    v = ring.reduce(v)
                if v == 0:
                    work.pop(mm, None)
                else:
                    if mm not in work:
                        heapq.heappush(heap, (self.heap_key(mm), mm))
                    work[mm] = v
        if self.fraction_free and rem:
            g = 0
            for v in rem.values():
                g = gcd(g, v)
            rem = {m: v // g for m, v in rem.items()}
        return rem

    def spoly(self, f: _GPoly, g: _GPoly) -> Dict[Monomial, object]:
        lcm = monomial_lcm(f.lm, g.lm)
        qf, qg = monomial_div(lcm, f.lm), monomial_div(lcm, g.lm)
        if self.fraction_free:
            d = gcd(f.lc, g.lc)
            cf, cg = g.lc // d, f.lc // d
        else:
            cf, cg = 1, 1
        out: Dict[Monomial, object] = {}
        for m, c in f.terms.items():
            out[monomial_mul(m, qf)] = c * cf
        for m, c in g.terms.items():
            mm = monomial_mul(m, qg)
            v = out.get(mm, 0) - c * cg
            if not self.fraction_free:
                v = self.ring.reduce(v)
            if v == 0:
                out.pop(mm, None)
            else:
                out[mm] = v
        return out

    def to_poly(self, g: _GPoly, nvars: int, order: str) -> Poly:
        ring = self.ring
        if self.fraction_free:
            return Poly(ring, nvars, {m: Fraction(c, g.lc) for m, c in g.terms.items()}, order)
        return Poly(ring, nvars, g.terms, order)


# ──────────────────────────────────────────────────────────────────
# Buchberger
# ──────────────────────────────────────────────────────────────────

def _update(lms: List[Monomial], pairs: Set[Tuple[int, int]], lmf: Monomial,
            key) -> Set[Tuple[int, int]]:
    """Gebauer-Moeller update when a polynomial with leading monomial lmf joins the basis."""
    new = len(lms)
    kept = {p for p in pairs
            if not monomial_divides(lmf, monomial_lcm(lms[p[0]], lms[p[1]]))
            or monomial_lcm(lms[p[0]], lms[p[1]]) == monomial_lcm(lms[p[0]], lmf)
            or monomial_lcm(lms[p[0]], lms[p[1]]) == monomial_lcm(lms[p[1]], lmf)}
    by_lcm: Dict[Monomial, List[int]] = {}
    for i, lm in enumerate(lms):
        by_lcm.setdefault(monomial_lcm(lm, lmf), []).append(i)
    minimal: List[Monomial] = []
    for lcm in sorted(by_lcm, key=key):
        if all(not monomial_divides(other, lcm) for other in minimal):
            minimal.append(lcm)
    fresh = set()
    for lcm in minimal:
        members = by_lcm[lcm]
        if not any(monomial_lcm(lms[i], lmf) == monomial_mul(lms[i], lmf) for i in members):
            fresh.add((min(members), new))
    return kept | fresh


@dataclass
class GroebnerBasis:
    ideal: IdealBasis
    order: str
    reduced: bool = True

    @property
    def polys(self) -> List[Poly]:
        return self.ideal.generators

    @property
    def ring(self) -> Ring:
        return self.ideal.ring

    @property
    def nvars(self) -> int:
        return self.ideal.nvars

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading_monomial() for g in self.polys]

    def contains(self, f: Poly) -> bool:
        return normal_form(f, self).is_zero()

    def __len__(self):
        return len(self.polys)


def buchberger(ideal: IdealBasis, order: Optional[str] = None,
               degree_cap: Optional[int] = None, cancel=None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal for the given term order."""
    ring = ideal.ring
    if not ring.is_field:
        raise NotAFieldError(f"Groebner bases need a field, got {ring.tag}")
    order = order or ideal.order
    arith = _Arith(ring, order)
    key = arith.key

    basis: List[_GPoly] = []
    lms: List[Monomial] = []
    pairs: Set[Tuple[int, int]] = set()

    def add(g: _GPoly):
        nonlocal pairs
        pairs = _update(lms, pairs, g.lm, key)
        basis.append(g)
        lms.append(g.lm)

    for f in ideal.generators:
        g = arith.normalize(dict(f.terms()))
        if g is not None:
            add(g)

    while pairs:
        i, j = min(pairs, key=lambda p: (key(monomial_lcm(lms[p[0]], lms[p[1]])), p[1], p[0]))
        pairs.remove((i, j))
        lcm = monomial_lcm(lms[i], lms[j])
        if degree_cap is not None and sum(lcm) > degree_cap:
            raise DegreeCapExceededError(
                f"S-pair of degree {sum(lcm)} exceeds cap {degree_cap}")
        r = arith.reduce(arith.spoly(basis[i], basis[j]), basis, cancel)
        g = arith.normalize(r)
        if g is not None:
            add(g)

    # minimalize
    minimal: List[_GPoly] = []
    for g in sorted(basis, key=lambda h: key(h.lm)):
        if all(not monomial_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    # interreduce; leading terms survive because the basis is minimal
    reduced = [arith.normalize(arith.reduce(dict(g.terms), minimal[:idx] + minimal[idx + 1:]))
               for idx, g in enumerate(minimal)]
    reduced.sort(key=lambda h: key(h.lm))
    polys = [arith.to_poly(g, ideal.nvars, order) for g in reduced]
    return GroebnerBasis(IdealBasis(ring, ideal.nvars, polys, order), order, reduced=True)


def normal_form(f: Poly, gb: GroebnerBasis) -> Poly:
    """Remainder of f on division by the basis; no term is divisible by a leading term."""
    if f.nvars != gb.nvars:
        raise ArityMismatchError(f"arity {f.nvars} vs basis arity {gb.nvars}")
    if f.ring != gb.ring:
        raise ValueError(f"ring {f.ring.tag} vs basis ring {gb.ring.tag}")
    if f.order != gb.order:
        raise ValueError(f"order {f.order} vs basis order {gb.order}")
    ring = gb.ring
    # basis polynomials are monic, so plain field reduction suffices
    arith = _Arith(ring, gb.order)
    arith.fraction_free = False
    records = [_GPoly(dict(g.terms()), arith.key) for g in gb.polys]
    rem = arith.reduce(dict(f.terms()), records)
    return Poly(ring, f.nvars, rem, f.order)


def is_groebner(gb: GroebnerBasis) -> bool:
    """All S-polynomials reduce to zero."""
    ring = gb.ring
    arith = _Arith(ring, gb.order)
    arith.fraction_free = False
    records = [_GPoly(dict(g.terms()), arith.key) for g in gb.polys if not g.is_zero()]
    records = [arith.normalize(r.terms) for r in records]
    for i in range(len(records)):
        for j in range(i + 1, len(records)):
            if arith.reduce(arith.spoly(records[i], records[j]), records):
                return False
    return True


# ──────────────────────────────────────────────────────────────────
# Hilbert series of monomial ideals
# ──────────────────────────────────────────────────────────────────

def minimal_monomial_generators(monos: Sequence[Monomial]) -> Tuple[Monomial, ...]:
    uniq = sorted(set(monos), key=lambda m: (sum(m), m))
    out: List[Monomial] = []
    for m in uniq:
        if not any(monomial_divides(g, m) for g in out):
            out.append(m)
    return tuple(sorted(out))


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


@lru_cache(maxsize=100000)
def _numerator(gens: FrozenSet[Monomial]) -> Tuple[int, ...]:
    """K-polynomial numerator N(t) with HS(S/I) = N(t)/(1-t)^n, by pivoting on a variable."""
    gens_l = sorted(gens)
    if not gens_l:
        return (1,)
    if all(_coprime(a, b) for i, a in enumerate(gens_l) for b in gens_l[i + 1:]):
        poly: List[int] = [1]
        for g in gens_l:
            factor = [1] + [0] * (sum(g) - 1) + [-1]
            poly = upoly_mul(poly, factor)
        return tuple(poly)
    n = len(gens_l[0])
    counts = [sum(1 for g in gens_l if g[v]) for v in range(n)]
    pivot = max(range(n), key=lambda v: (counts[v], -v))
    x = tuple(int(v == pivot) for v in range(n))
    with_x = minimal_monomial_generators(gens_l + [x])
    colon = minimal_monomial_generators(
        [tuple(e - (1 if v == pivot and e > 0 else 0) for v, e in enumerate(g)) for g in gens_l])
    a = list(_numerator(frozenset(with_x)))
    b = [0] + list(_numerator(frozenset(colon)))
    size = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size)]
    return tuple(upoly_trim(out))


@dataclass
class HilbertData:
    numerator: List[int]
    denominator_exponent: int
    reduced_numerator: List[int]
    dimension: int
    polynomial: List[Fraction]
    regularity_index: int

    def series_coefficient(self, m: int) -> int:
        """dim of the degree-m piece of the quotient."""
        if m < 0:
            return 0
        d = self.dimension
        if d == 0:
            return self.reduced_numerator[m] if m < len(self.reduced_numerator) else 0
        return sum(q * comb(m - i + d - 1, d - 1)
                   for i, q in enumerate(self.reduced_numerator) if m - i >= 0)

    def polynomial_value(self, m: int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.polynomial):
            acc = acc * m + c
        return acc

    @property
    def degree(self) -> int:
        """Degree of the projective scheme (sum of reduced numerator coefficients)."""
        return sum(self.reduced_numerator)

    def format_polynomial(self, var: str = 'm') -> str:
        return format_upoly(self.polynomial, var)

    def format_numerator(self, var: str = 't') -> str:
        return format_upoly(self.numerator, var)

    def to_json(self) -> dict:
        return {
            'numerator': self.numerator,
            'denominator_exponent': self.denominator_exponent,
            'dimension': self.dimension,
            'polynomial': [str(c) for c in self.polynomial],
            'polynomial_text': self.format_polynomial(),
            'regularity_index': self.regularity_index,
            'degree': self.degree,
        }


def hilbert_from_numerator(numerator: Sequence[int], nvars: int) -> HilbertData:
    """Hilbert data of a series numerator(t)/(1-t)^nvars."""
    num = upoly_trim([int(c) for c in numerator])
    q: List = list(num)
    d = nvars
    while d > 0 and q and sum(q) == 0:
        quo, rem = upoly_divmod(q, [1, -1])
        assert not rem
        q = [int(c) for c in quo]
        d -= 1
    if not q:
        d = 0
    if d == 0:
        poly: List[Fraction] = []
    else:
        poly = []
        for i, qi in enumerate(q):
            if qi == 0:
                continue
            # C(m - i + d - 1, d - 1) as a polynomial in m
            term: List = [Fraction(1)]
            for j in range(1, d):
                term = upoly_mul(term, [Fraction(j - i), Fraction(1)])
            scale = Fraction(qi, factorial(d - 1))
            poly = [Fraction(c) for c in
                    _add_lists(poly, [c * scale for c in term])]
        poly = upoly_trim(poly)
    data = HilbertData(
        numerator=num,
        denominator_exponent=nvars,
        reduced_numerator=[int(c) for c in q],
        dimension=d,
        polynomial=poly,
        regularity_index=0,
    )
    last_bad = -1
    for m in range(0, len(q) + 1):
        if data.series_coefficient(m) != data.polynomial_value(m):
            last_bad = m
    data.regularity_index = last_bad + 1
    return data


def _add_lists(a: Sequence, b: Sequence) -> List:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def hilbert(gb: GroebnerBasis) -> HilbertData:
    """Hilbert series and polynomial of S/I from the leading-term ideal of a reduced basis."""
    if not all(g.is_homogeneous() for g in gb.polys):
        raise ValueError("Hilbert data needs a homogeneous ideal")
    gens = minimal_monomial_generators(gb.leading_monomials())
    if any(sum(g) == 0 for g in gens):
        return hilbert_from_numerator([], gb.nvars)
    return hilbert_from_numerator(_numerator(frozenset(gens)), gb.nvars)


def hilbert_function(gb: GroebnerBasis, m: int) -> int:
    return hilbert(gb).series_coefficient(m)


def count_standard_monomials(lms: Sequence[Monomial], nvars: int, m: int) -> int:
    """Brute force: monomials of degree m not divisible by any leading monomial."""
    return sum(1 for e in monomials_of_degree(nvars, m)
               if not any(monomial_divides(g, e) for g in lms))
