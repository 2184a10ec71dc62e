#!/usr/bin/env python3
"""
Multivariate Polynomials and Homogeneous Ideals

Sparse multivariate polynomials over any Ring from exact.py, with dense exponent
tuples of fixed arity, graded-reverse-lexicographic (default) or lexicographic
term order, partial derivatives, evaluation, Jacobian minors and linear changes
of coordinates.

Ideal file format (shared by groebner, lift and verify):

    # comment
    ring QQ vars 3 order grevlex
    x0^2 - x1*x2
    3/2*x0*x1 + (1 + s2)*x2^2

Usage:
    python3 mpoly.py show fixtures/twisted_cubic.ideal
    python3 mpoly.py minors fixtures/conic_gf7.ideal --size 1
"""

import argparse
import hashlib
import itertools
import json
import re
import sys
from functools import lru_cache
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from errors import ArityMismatchError, ParseError, SingularMatrixError
from exact import (
    Residue,
    Ring,
    cyclotomic_field,
    nf_embed_mod_pk,
    number_field_ring,
    split_top_level_terms,
    zmod,
)
import linalg

Monomial = Tuple[int, ...]

GREVLEX = 'grevlex'
LEX = 'lex'
ORDERS = (GREVLEX, LEX)


def _grevlex_key(e: Monomial):
    return (sum(e), tuple(-x for x in reversed(e)))


def _lex_key(e: Monomial):
    return e


def order_key(order: str) -> Callable[[Monomial], tuple]:
    """Sort key: larger key means larger monomial."""
    if order == GREVLEX:
        return _grevlex_key
    if order == LEX:
        return _lex_key
    raise ValueError(f"unknown monomial order {order!r}")


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, degree: int, order: str = GREVLEX) -> Tuple[Monomial, ...]:
    """All exponent vectors of the given total degree, largest first."""
    if degree < 0:
        return ()
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=order_key(order), reverse=True)
    return tuple(out)


# ──────────────────────────────────────────────────────────────────
# Poly
# ──────────────────────────────────────────────────────────────────

class Poly:
    """Immutable polynomial: ring, arity, term order and a monomial -> coefficient map."""

    __slots__ = ('ring', 'nvars', 'order', '_terms', '_sorted')

    def __init__(self, ring: Ring, nvars: int, terms=None, order: str = GREVLEX,
                 _trusted: bool = False):
        order_key(order)
        self.ring = ring
        self.nvars = nvars
        self.order = order
        self._sorted = None
        if _trusted:
            self._terms = terms
            return
        clean: Dict[Monomial, object] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for mono, c in items:
            mono = tuple(int(x) for x in mono)
            if len(mono) != nvars:
                raise ArityMismatchError(f"monomial {mono} has arity {len(mono)}, expected {nvars}")
            if any(x < 0 for x in mono):
                raise ValueError(f"negative exponent in {mono}")
            c = ring.coerce(c)
            if mono in clean:
                c = ring.reduce(clean[mono] + c)
            clean[mono] = c
        self._terms = {m: c for m, c in clean.items() if not ring.is_zero(c)}

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, ring: Ring, nvars: int, order: str = GREVLEX) -> 'Poly':
        return cls(ring, nvars, {}, order)

    @classmethod
    def constant(cls, ring: Ring, nvars: int, c, order: str = GREVLEX) -> 'Poly':
        return cls(ring, nvars, {(0,) * nvars: c}, order)

    @classmethod
    def variable(cls, ring: Ring, nvars: int, i: int, order: str = GREVLEX) -> 'Poly':
        if not 0 <= i < nvars:
            raise ArityMismatchError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls(ring, nvars, {tuple(e): 1}, order)

    def _new(self, terms: Dict[Monomial, object]) -> 'Poly':
        return Poly(self.ring, self.nvars, terms, self.order, _trusted=True)

    # -- inspection ---------------------------------------------------

    def terms(self) -> List[Tuple[Monomial, object]]:
        """(monomial, coefficient) pairs, largest monomial first."""
        if self._sorted is None:
            key = order_key(self.order)
            self._sorted = sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)
        return self._sorted

    def coefficient(self, mono: Monomial):
        return self._terms.get(tuple(mono), self.ring.zero)

    def monomials(self) -> List[Monomial]:
        return [m for m, _ in self.terms()]

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms()[0][0]

    def leading_coefficient(self):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms()[0][1]

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    def with_order(self, order: str) -> 'Poly':
        return Poly(self.ring, self.nvars, self._terms, order, _trusted=True)

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: 'Poly'):
        if other.nvars != self.nvars:
            raise ArityMismatchError(f"arity {self.nvars} vs {other.nvars}")
        if other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring.tag} vs {other.ring.tag}")

    def _lift(self, other) -> 'Poly':
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.constant(self.ring, self.nvars, other, self.order)

    def __add__(self, other):
        other = self._lift(other)
        ring = self.ring
        out = dict(self._terms)
        for m, c in other._terms.items():
            if m in out:
                s = ring.reduce(out[m] + c)
                if ring.is_zero(s):
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: self.ring.reduce(-c) for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> 'Poly':
        ring = self.ring
        c = ring.coerce(c)
        if ring.is_zero(c):
            return self._new({})
        out = {}
        for m, x in self._terms.items():
            v = ring.reduce(x * c)
            if not ring.is_zero(v):
                out[m] = v
        return self._new(out)

    def mul_term(self, mono: Monomial, c) -> 'Poly':
        """self * c * x^mono."""
        scaled = self.scale(c)
        return self._new({monomial_mul(m, mono): x for m, x in scaled._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        ring = self.ring
        out: Dict[Monomial, object] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = monomial_mul(m1, m2)
                v = c1 * c2
                out[m] = out[m] + v if m in out else v
        return self._new({m: ring.reduce(c) for m, c in out.items()
                          if not ring.is_zero(ring.reduce(c))})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> 'Poly':
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.ring, self.nvars, 1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return (self.nvars == other.nvars and self.ring == other.ring
                    and self._terms == other._terms)
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.nvars, frozenset(self._terms.items())))

    # -- calculus and evaluation ---------------------------------------

    def derivative(self, i: int) -> 'Poly':
        if not 0 <= i < self.nvars:
            raise ArityMismatchError(f"variable index {i} out of range")
        ring = self.ring
        out = {}
        for m, c in self._terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                v = ring.reduce(c * m[i])
                if not ring.is_zero(v):
                    out[tuple(e)] = v
        return self._new(out)

    def evaluate(self, point: Sequence):
        """Exact value at a point with coordinates in the coefficient ring."""
        if len(point) != self.nvars:
            raise ArityMismatchError(f"point has {len(point)} coordinates, expected {self.nvars}")
        ring = self.ring
        pt = [ring.coerce(x) for x in point]
        maxdeg = [max((m[i] for m in self._terms), default=0) for i in range(self.nvars)]
        powers = []
        for x, d in zip(pt, maxdeg):
            row = [ring.one]
            for _ in range(d):
                row.append(ring.reduce(row[-1] * x))
            powers.append(row)
        acc = ring.zero
        for m, c in self._terms.items():
            v = c
            for i, e in enumerate(m):
                if e:
                    v = v * powers[i][e]
            acc = ring.reduce(acc + v)
        return acc

    def substitute(self, images: Sequence['Poly']) -> 'Poly':
        """Replace x_i by images[i] (all over the same ring)."""
        if len(images) != self.nvars:
            raise ArityMismatchError(f"{len(images)} images for {self.nvars} variables")
        target = images[0] if images else self
        acc = Poly.zero(self.ring, target.nvars, self.order)
        cache: Dict[Tuple[int, int], Poly] = {}
        for m, c in self._terms.items():
            term = Poly.constant(self.ring, target.nvars, c, self.order)
            for i, e in enumerate(m):
                if e:
                    if (i, e) not in cache:
                        cache[(i, e)] = images[i] ** e
                    term = term * cache[(i, e)]
            acc = acc + term
        return acc

    def map_coefficients(self, ring: Ring, fn: Callable) -> 'Poly':
        return Poly(ring, self.nvars, {m: fn(c) for m, c in self._terms.items()}, self.order)

    # -- text ---------------------------------------------------------

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        names = names or [f"x{i}" for i in range(self.nvars)]
        if not self._terms:
            return '0'
        out = ''
        for idx, (m, c) in enumerate(self.terms()):
            mono = '*'.join(names[i] if e == 1 else f"{names[i]}^{e}"
                            for i, e in enumerate(m) if e)
            cs = self.ring.format_coeff(c)
            neg = cs.startswith('-')
            mag = cs[1:] if neg else cs
            if mono:
                body = mono if mag == '1' else f"{mag}*{mono}"
            else:
                body = mag
            if idx == 0:
                out = ('-' if neg else '') + body
            else:
                out += (' - ' if neg else ' + ') + body
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Poly({self.ring.tag}, {self.format()})"

    @classmethod
    def parse(cls, text: str, ring: Ring, nvars: int, order: str = GREVLEX,
              names: Optional[Sequence[str]] = None) -> 'Poly':
        names = list(names or [f"x{i}" for i in range(nvars)])
        index = {n: i for i, n in enumerate(names)}
        terms: Dict[Monomial, object] = {}
        pieces = split_top_level_terms(text)
        if not pieces:
            raise ParseError(f"empty polynomial {text!r}")
        for piece in pieces:
            sign = 1
            if piece.startswith('-'):
                sign, piece = -1, piece[1:]
            e = [0] * nvars
            coef = ring.one
            for factor in _split_factors(piece):
                base, _, power = factor.partition('^')
                if base in index:
                    if power and not power.isdigit():
                        raise ParseError(f"bad exponent in {factor!r}")
                    e[index[base]] += int(power or 1)
                elif power and not base.startswith('('):
                    raise ParseError(f"unknown variable {base!r} in {text!r}")
                else:
                    try:
                        coef = ring.reduce(coef * ring.parse_coeff(factor))
                    except (ParseError, ValueError) as exc:
                        raise ParseError(f"bad coefficient {factor!r}: {exc}")
            if sign < 0:
                coef = -coef
            m = tuple(e)
            terms[m] = terms[m] + coef if m in terms else coef
        return cls(ring, nvars, terms, order)


def _split_factors(term: str) -> List[str]:
    out, depth, cur = [], 0, ''
    for ch in term:
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        if ch == '*' and depth == 0:
            if cur:
                out.append(cur)
            cur = ''
            continue
        cur += ch
    if cur:
        out.append(cur)
    return out


# ──────────────────────────────────────────────────────────────────
# Ideals
# ──────────────────────────────────────────────────────────────────

_HEADER_RE = re.compile(r'^ring\s+(\S+)\s+vars\s+(\d+)(?:\s+order\s+(\w+))?\s*$')


class IdealBasis:
    """Homogeneous generators sharing ring and arity."""

    def __init__(self, ring: Ring, nvars: int, generators: Iterable[Poly],
                 order: str = GREVLEX):
        order_key(order)
        gens = []
        for i, g in enumerate(generators):
            if g.nvars != nvars:
                raise ArityMismatchError(f"generator {i} has arity {g.nvars}, expected {nvars}")
            if g.ring != ring:
                raise ValueError(f"generator {i} is over {g.ring.tag}, expected {ring.tag}")
            if not g.is_homogeneous():
                raise ValueError(f"generator {i} is not homogeneous: {g}")
            gens.append(g.with_order(order) if g.order != order else g)
        self.ring = ring
        self.nvars = nvars
        self.order = order
        self.generators: List[Poly] = gens

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def degrees(self) -> List[int]:
        return [g.total_degree() for g in self.generators]

    def nonzero(self) -> 'IdealBasis':
        return IdealBasis(self.ring, self.nvars, [g for g in self.generators if not g.is_zero()],
                          self.order)

    def extend(self, extra: Iterable[Poly]) -> 'IdealBasis':
        return IdealBasis(self.ring, self.nvars, list(self.generators) + list(extra), self.order)

    def with_order(self, order: str) -> 'IdealBasis':
        return IdealBasis(self.ring, self.nvars, self.generators, order)

    def to_text(self) -> str:
        lines = [f"ring {self.ring.tag} vars {self.nvars} order {self.order}"]
        lines += [g.format() for g in self.generators]
        return '\n'.join(lines) + '\n'

    def digest(self) -> str:
        """Content fingerprint of the canonical text form."""
        return hashlib.sha256(self.to_text().encode('utf-8')).hexdigest()[:12]

    def __eq__(self, other):
        return (isinstance(other, IdealBasis) and self.ring == other.ring
                and self.nvars == other.nvars and self.generators == other.generators)

    def __repr__(self):
        return f"IdealBasis({self.ring.tag}, vars={self.nvars}, {len(self.generators)} generators)"


def parse_ideal(text: str) -> IdealBasis:
    header = None
    gens_src: List[Tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if header is None:
            m = _HEADER_RE.match(line)
            if not m:
                raise ParseError("expected 'ring <tag> vars <n> order <o>' header", line=lineno)
            try:
                ring = Ring.parse_tag(m.group(1))
            except ParseError as exc:
                raise ParseError(str(exc), line=lineno)
            header = (ring, int(m.group(2)), m.group(3) or GREVLEX)
            if header[2] not in ORDERS:
                raise ParseError(f"unknown monomial order {header[2]!r}", line=lineno)
            continue
        gens_src.append((lineno, line))
    if header is None:
        raise ParseError("missing ideal header")
    ring, nvars, order = header
    gens = []
    for lineno, line in gens_src:
        try:
            g = Poly.parse(line, ring, nvars, order)
        except ParseError as exc:
            raise ParseError(str(exc), line=lineno)
        except (ValueError, ArithmeticError) as exc:
            raise ParseError(str(exc), line=lineno)
        if not g.is_homogeneous():
            raise ParseError(f"generator is not homogeneous: {line}", line=lineno)
        gens.append(g)
    return IdealBasis(ring, nvars, gens, order)


def load_ideal(path) -> IdealBasis:
    return parse_ideal(Path(path).read_text(encoding='utf-8'))


def dump_ideal(ideal: IdealBasis, path) -> None:
    Path(path).write_text(ideal.to_text(), encoding='utf-8')


# ──────────────────────────────────────────────────────────────────
# Jacobian machinery
# ──────────────────────────────────────────────────────────────────

def jacobian_matrix(ideal: IdealBasis) -> List[List[Poly]]:
    return [[g.derivative(j) for j in range(ideal.nvars)] for g in ideal.generators]


def all_minor_selections(ideal: IdealBasis, size: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    rows = range(len(ideal.generators))
    cols = range(ideal.nvars)
    return [(r, c) for r in itertools.combinations(rows, size)
            for c in itertools.combinations(cols, size)]


def poly_determinant(entries: List[List[Poly]]) -> Poly:
    """Laplace expansion along rows, memoised on the remaining column set."""
    n = len(entries)
    if n == 0:
        raise ValueError("empty determinant")
    memo: Dict[Tuple[int, frozenset], Poly] = {}

    def det(row: int, cols: frozenset) -> Poly:
        if row == n - 1:
            (c,) = cols
            return entries[row][c]
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = None
        for pos, c in enumerate(sorted(cols)):
            a = entries[row][c]
            if a.is_zero():
                continue
            sub = det(row + 1, cols - {c})
            term = a * sub
            if pos % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            acc = entries[row][0] - entries[row][0]
        memo[key] = acc
        return acc

    return det(0, frozenset(range(n)))


def jacobian_minors(ideal: IdealBasis, size: int,
                    selection: Sequence[Tuple[Sequence[int], Sequence[int]]]) -> List[Poly]:
    """Determinants of the selected size x size submatrices of the Jacobian."""
    ngens, nvars = len(ideal.generators), ideal.nvars
    if size < 1 or size > min(ngens, nvars):
        raise ValueError(f"minor size {size} out of range for {ngens}x{nvars} Jacobian")
    jac = None
    out = []
    for rows, cols in selection:
        rows, cols = tuple(rows), tuple(cols)
        if len(rows) != size or len(cols) != size:
            raise ValueError(f"selection {rows}/{cols} does not have size {size}")
        if len(set(rows)) != size or len(set(cols)) != size:
            raise ValueError(f"selection {rows}/{cols} repeats an index")
        if any(not 0 <= r < ngens for r in rows) or any(not 0 <= c < nvars for c in cols):
            raise ValueError(f"selection {rows}/{cols} out of range")
        if jac is None:
            jac = jacobian_matrix(ideal)
        out.append(poly_determinant([[jac[r][c] for c in cols] for r in rows]))
    return out


# ──────────────────────────────────────────────────────────────────
# Coordinate changes and reductions
# ──────────────────────────────────────────────────────────────────

def _is_invertible(ring: Ring, m: List[List]) -> bool:
    if ring.kind == 'ZMOD':
        det = linalg.bareiss_determinant(m)
        return det % ring.prime != 0
    return not ring.is_zero(linalg.determinant(ring, m))


def linear_change_of_coordinates(ideal: IdealBasis, matrix: Sequence[Sequence]) -> IdealBasis:
    """Substitute x_i -> sum_j M[i][j] x_j in every generator."""
    ring, n = ideal.ring, ideal.nvars
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise ArityMismatchError(f"coordinate change must be {n}x{n}")
    m = linalg.coerce_matrix(ring, matrix)
    if not _is_invertible(ring, m):
        raise SingularMatrixError("coordinate change matrix is singular")
    xs = [Poly.variable(ring, n, j, ideal.order) for j in range(n)]
    images = []
    for i in range(n):
        img = Poly.zero(ring, n, ideal.order)
        for j in range(n):
            if not ring.is_zero(m[i][j]):
                img = img + xs[j].scale(m[i][j])
        images.append(img)
    return IdealBasis(ring, n, [g.substitute(images) for g in ideal.generators], ideal.order)


def reduce_mod_p(ideal: IdealBasis, p: int, root: Optional[Residue] = None,
                 exponent: int = 1) -> IdealBasis:
    """Image of the ideal in (Z/p^k)[x]; number-field coefficients need a root."""
    target = zmod(p, exponent)
    src = ideal.ring
    if src.kind == 'ZMOD':
        if src.prime != p or src.exponent < exponent:
            raise ValueError(f"cannot reduce {src.tag} to {target.tag}")
        fn = lambda c: c % target.modulus
    elif src.kind in ('NF', 'CYC'):
        fn = lambda c: nf_embed_mod_pk(c, p, exponent, root).value
    else:
        fn = lambda c: Residue.from_rational(c, p, exponent).value
    return IdealBasis(target, ideal.nvars,
                      [g.map_coefficients(target, fn) for g in ideal.generators], ideal.order)


def two_torsion_cuts(nvars: int = 10, indices: Tuple[int, int, int] = (1, 4, 7)) -> List[Poly]:
    """The linear forms x_a + w^j x_b + w^2j x_c, j = 0, 1, 2, over Q(zeta3)."""
    if max(indices) >= nvars:
        raise ArityMismatchError(f"indices {indices} out of range for {nvars} variables")
    field = cyclotomic_field(3)
    ring = number_field_ring(field)
    a, b, c = indices
    cuts = []
    for j in range(3):
        terms = {}
        for idx, power in ((a, 0), (b, j), (c, 2 * j)):
            e = [0] * nvars
            e[idx] = 1
            terms[tuple(e)] = field.root_of_unity(power)
        cuts.append(Poly(ring, nvars, terms))
    return cuts


# ──────────────────────────────────────────────────────────────────
# CLI
# ──────────────────────────────────────────────────────────────────

def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Inspect ideal files")
    sub = parser.add_subparsers(dest='command', required=True)

    p_show = sub.add_parser('show', help='Parse an ideal file and print its canonical form')
    p_show.add_argument('ideal')

    p_min = sub.add_parser('minors', help='Print all Jacobian minors of a given size')
    p_min.add_argument('ideal')
    p_min.add_argument('--size', type=int, default=1)
    p_min.add_argument('--json', action='store_true')

    args = parser.parse_args(argv)
    try:
        ideal = load_ideal(args.ideal)
    except FileNotFoundError:
        print(f"✗ Not found: {args.ideal}", file=sys.stderr)
        return 2
    except ParseError as e:
        print(f"✗ {args.ideal}: {e}", file=sys.stderr)
        return 1

    if args.command == 'show':
        print(ideal.to_text(), end='')
        print(f"✓ {len(ideal)} generators, digest {ideal.digest()}", file=sys.stderr)
        return 0

    minors = jacobian_minors(ideal, args.size, all_minor_selections(ideal, args.size))
    if args.json:
        print(json.dumps([m.format() for m in minors], indent=2))
    else:
        for m in minors:
            print(m.format())
    return 0


if __name__ == '__main__':
    sys.exit(main())
