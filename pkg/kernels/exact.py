#!/usr/bin/env python3
"""
Exact Arithmetic Tower

Arbitrary-precision integers and rationals, residues modulo p^k, number fields
given by a primitive element, and cyclotomic fields. Every coefficient ring used
by the polynomial scripts is one of the closed set of Ring kinds defined here:

    ZZ      python int
    QQ      fractions.Fraction
    ZMOD    python int reduced into [0, p^k)
    NF      NumberFieldElement
    CYC     CyclotomicElement

All values are immutable; every function is pure.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

from errors import (
    BadPrimeError,
    InsufficientPrecisionError,
    LiftObstructedError,
    ModulusMismatchError,
    NotAFieldError,
    ParseError,
)


Rational = Union[int, Fraction]


# ──────────────────────────────────────────────────────────────────
# Univariate polynomials (coefficient lists, low degree first)
# ──────────────────────────────────────────────────────────────────

def upoly_trim(a: Sequence) -> List:
    out = list(a)
    while out and out[-1] == 0:
        out.pop()
    return out


def upoly_add(a: Sequence, b: Sequence) -> List:
    n = max(len(a), len(b))
    return upoly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                       for i in range(n)])


def upoly_sub(a: Sequence, b: Sequence) -> List:
    return upoly_add(a, [-c for c in b])


def upoly_mul(a: Sequence, b: Sequence) -> List:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return upoly_trim(out)


def upoly_divmod(a: Sequence, b: Sequence) -> Tuple[List[Fraction], List[Fraction]]:
    """Quotient and remainder over QQ."""
    b = upoly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in upoly_trim(a)]
    quo = [Fraction(0)] * max(len(rem) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    while len(rem) >= len(b):
        shift = len(rem) - len(b)
        c = rem[-1] / lead
        quo[shift] = c
        for j, y in enumerate(b):
            rem[shift + j] -= c * y
        rem = upoly_trim(rem)
    return upoly_trim(quo), rem


def upoly_gcd(a: Sequence, b: Sequence) -> List[Fraction]:
    """Monic gcd over QQ."""
    a = [Fraction(c) for c in upoly_trim(a)]
    b = [Fraction(c) for c in upoly_trim(b)]
    while b:
        _, r = upoly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def upoly_derivative(a: Sequence) -> List:
    return upoly_trim([i * a[i] for i in range(1, len(a))])


def upoly_eval(a: Sequence, x):
    """Horner evaluation; x may be any ring element supporting + and *."""
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def upoly_is_squarefree(a: Sequence) -> bool:
    return len(upoly_gcd(a, upoly_derivative(a))) <= 1


def upoly_content(a: Sequence[int]) -> int:
    g = 0
    for c in a:
        g = gcd(g, int(c))
    return g


def upoly_primitive(a: Sequence[int]) -> List[int]:
    """Content 1, positive leading coefficient."""
    a = upoly_trim([int(c) for c in a])
    if not a:
        return []
    g = upoly_content(a)
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def format_upoly(a: Sequence, var: str = 'x') -> str:
    """Human form, highest degree first: 3*x^6 - 4*x^3 + 2."""
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        sign = '-' if c < 0 else '+'
        parts.append((sign, body))
    if not parts:
        return '0'
    first_sign, first = parts[0]
    out = ('-' if first_sign == '-' else '') + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# ──────────────────────────────────────────────────────────────────
# Residues modulo p^k
# ──────────────────────────────────────────────────────────────────

_RESIDUE_RE = re.compile(r'^\s*(-?\d+)\s+mod\s+(\d+)\s*\^\s*(\d+)\s*$')


@dataclass(frozen=True)
class Residue:
    prime: int
    exponent: int
    value: int

    def __post_init__(self):
        if self.prime < 2:
            raise ValueError(f"prime must be >= 2, got {self.prime}")
        if self.exponent < 1:
            raise ValueError(f"exponent must be >= 1, got {self.exponent}")
        object.__setattr__(self, 'value', int(self.value) % (self.prime ** self.exponent))

    @property
    def modulus(self) -> int:
        return self.prime ** self.exponent

    @classmethod
    def from_rational(cls, q: Rational, prime: int, exponent: int) -> 'Residue':
        """Embed a rational whose denominator is a p-unit."""
        q = Fraction(q)
        if q.denominator % prime == 0:
            raise BadPrimeError(f"denominator {q.denominator} divisible by {prime}")
        m = prime ** exponent
        return cls(prime, exponent, q.numerator * pow(q.denominator, -1, m))

    @classmethod
    def parse(cls, text: str) -> 'Residue':
        m = _RESIDUE_RE.match(text)
        if not m:
            raise ParseError(f"expected 'v mod p^k', got {text!r}")
        return cls(int(m.group(2)), int(m.group(3)), int(m.group(1)))

    def _other(self, other) -> 'Residue':
        if isinstance(other, Residue):
            if (other.prime, other.exponent) != (self.prime, self.exponent):
                raise ModulusMismatchError(
                    f"{self.prime}^{self.exponent} vs {other.prime}^{other.exponent}")
            return other
        if isinstance(other, (int, Fraction)):
            return Residue.from_rational(other, self.prime, self.exponent)
        return NotImplemented

    def _make(self, value: int) -> 'Residue':
        return Residue(self.prime, self.exponent, value)

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._make(self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._make(self.value - o.value)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._make(o.value - self.value)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._make(self.value * o.value)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.value)

    def is_unit(self) -> bool:
        return self.value % self.prime != 0

    def inverse(self) -> 'Residue':
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        return self._make(pow(self.value, -1, self.modulus))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return self._make(pow(self.value, n, self.modulus))

    def truncate(self, exponent: int) -> 'Residue':
        """Exact reduction to a smaller exponent."""
        if exponent > self.exponent:
            raise InsufficientPrecisionError(
                f"cannot raise precision from {self.exponent} to {exponent}")
        return Residue(self.prime, exponent, self.value)

    def centered(self) -> int:
        """Representative in (-m/2, m/2]."""
        m = self.modulus
        return self.value - m if self.value > m // 2 else self.value

    def __str__(self) -> str:
        return f"{self.value} mod {self.prime}^{self.exponent}"


def rational_reconstruct(r: Residue, numerator_bound: int,
                         denominator_bound: int) -> Optional[Fraction]:
    """Recover a/b with |a| <= N, 0 < b <= D and a = b*r mod p^k.

    Half-extended Euclid with Wang's termination criterion; the answer is
    unique whenever 2*N*D < p^k.
    """
    m = r.modulus
    if 2 * numerator_bound * denominator_bound >= m:
        raise InsufficientPrecisionError(
            f"need 2*{numerator_bound}*{denominator_bound} < {r.prime}^{r.exponent}")
    if r.value == 0:
        return Fraction(0)
    r0, r1 = m, r.value
    t0, t1 = 0, 1
    while r1 > numerator_bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    a, b = r1, t1
    if b == 0:
        return None
    if b < 0:
        a, b = -a, -b
    if b > denominator_bound or b % r.prime == 0 or gcd(abs(a), b) != 1:
        return None
    if (a - b * r.value) % m != 0:
        return None
    return Fraction(a, b)


# ──────────────────────────────────────────────────────────────────
# Roots and Hensel lifting
# ──────────────────────────────────────────────────────────────────

def roots_mod_p(f: Sequence[int], p: int) -> List[int]:
    """Brute-force roots of an integer polynomial over Z/p (small p)."""
    return [x for x in range(p) if upoly_eval(f, x) % p == 0]


def hensel_root_lift(f: Sequence[int], p: int, r0: int, k: int) -> Residue:
    """Lift a simple root of f mod p to a root mod p^k (Newton iteration)."""
    if k < 1:
        raise ValueError(f"target exponent must be >= 1, got {k}")
    f = [int(c) for c in f]
    if upoly_eval(f, r0) % p != 0:
        raise ValueError(f"{r0} is not a root of the polynomial mod {p}")
    df = upoly_derivative(f)
    if upoly_eval(df, r0) % p == 0:
        raise LiftObstructedError(f"derivative vanishes at {r0} mod {p}: root is not simple",
                                  step=0)
    r = r0 % p
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        m = p ** prec
        inv = pow(upoly_eval(df, r) % m, -1, m)
        r = (r - upoly_eval(f, r) * inv) % m
    return Residue(p, k, r)


# ──────────────────────────────────────────────────────────────────
# Number fields (primitive element representation)
# ──────────────────────────────────────────────────────────────────

_TERM_RE = re.compile(
    r'^(?P<coef>\(?-?\d+(?:/\d+)?\)?)?\s*\*?\s*(?P<sym>[A-Za-z]\w*(?:\^\d+)?)?$')


def split_top_level_terms(text: str) -> List[str]:
    """Split a sum into signed terms, ignoring +/- inside parentheses."""
    terms, depth, cur = [], 0, ''
    s = text.replace(' ', '')
    for i, ch in enumerate(s):
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        if ch in '+-' and depth == 0 and cur and cur[-1] not in '*/^(':
            terms.append(cur)
            cur = '-' if ch == '-' else ''
            continue
        cur += ch
    if cur:
        terms.append(cur)
    return [t for t in terms if t not in ('', '+')]


def _parse_rational(text: str) -> Fraction:
    t = text.strip()
    if t.startswith('(') and t.endswith(')'):
        t = t[1:-1]
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {text!r}")


class NumberField:
    """Q(theta) with theta a root of a monic squarefree integer polynomial.

    basis_names/basis_coords give a display basis (first entry '1') in which
    elements are printed and parsed; by default the power basis of `gen`.
    """

    def __init__(self, minpoly: Sequence[int], tag: str, gen: str = 't',
                 symbols: Optional[Dict[str, Sequence[Rational]]] = None):
        f = [int(c) for c in minpoly]
        if len(f) < 2 or f[-1] != 1:
            raise ValueError("minimal polynomial must be monic of degree >= 1")
        if not upoly_is_squarefree(f):
            raise ValueError(f"polynomial {format_upoly(f)} is not squarefree")
        self.minpoly: Tuple[int, ...] = tuple(f)
        self.degree = len(f) - 1
        self.tag = tag
        self.gen = gen
        d = self.degree
        if symbols:
            names = ['1'] + list(symbols)
            coords = [tuple(Fraction(int(i == 0)) for i in range(d))]
            coords += [tuple(Fraction(c) for c in symbols[s]) for s in symbols]
        else:
            names = ['1'] + [gen if i == 1 else f"{gen}^{i}" for i in range(1, d)]
            coords = [tuple(Fraction(int(i == j)) for i in range(d)) for j in range(d)]
        if len(names) != d:
            raise ValueError("display basis must have one entry per degree")
        self.basis_names: Tuple[str, ...] = tuple(names)
        self.basis_coords: Tuple[Tuple[Fraction, ...], ...] = tuple(coords)
        self._to_basis = _invert_fraction_matrix([list(r) for r in coords])

    def __eq__(self, other):
        return (isinstance(other, NumberField) and type(other) is type(self)
                and other.minpoly == self.minpoly and other.tag == self.tag)

    def __hash__(self):
        return hash((type(self).__name__, self.minpoly, self.tag))

    def __repr__(self):
        return f"NumberField({self.tag})"

    # -- construction -------------------------------------------------

    def element(self, coords: Sequence[Rational]) -> 'NumberFieldElement':
        return self._element_class()(self, self.reduce_coeffs(coords))

    def _element_class(self):
        return NumberFieldElement

    def zero(self) -> 'NumberFieldElement':
        return self.element([])

    def one(self) -> 'NumberFieldElement':
        return self.element([1])

    def generator(self) -> 'NumberFieldElement':
        return self.element([0, 1])

    def from_basis(self, values: Sequence[Rational]) -> 'NumberFieldElement':
        """Element with the given coordinates in the display basis."""
        acc = [Fraction(0)] * self.degree
        for c, row in zip(values, self.basis_coords):
            for i in range(self.degree):
                acc[i] += Fraction(c) * row[i]
        return self.element(acc)

    def symbol(self, name: str) -> 'NumberFieldElement':
        base, _, power = name.partition('^')
        if base in self.basis_names and not power:
            return self.from_basis([int(n == base) for n in self.basis_names])
        if base == self.gen:
            return self.generator() ** int(power or 1)
        raise ParseError(f"unknown symbol {name!r} for field {self.tag}")

    def reduce_coeffs(self, coeffs: Sequence[Rational]) -> Tuple[Fraction, ...]:
        """Remainder modulo the (monic) minimal polynomial."""
        c = [Fraction(x) for x in coeffs]
        d = self.degree
        f = self.minpoly
        for i in range(len(c) - 1, d - 1, -1):
            lead = c[i]
            if lead == 0:
                continue
            for j in range(d + 1):
                c[i - d + j] -= lead * f[j]
        c = c[:d] + [Fraction(0)] * max(d - len(c), 0)
        return tuple(c)

    # -- text form ----------------------------------------------------

    def parse(self, text: str) -> 'NumberFieldElement':
        acc = self.zero()
        terms = split_top_level_terms(text)
        if not terms:
            raise ParseError(f"empty number-field element {text!r}")
        for term in terms:
            sign = 1
            if term.startswith('-'):
                sign, term = -1, term[1:]
            m = _TERM_RE.match(term)
            if not m or not (m.group('coef') or m.group('sym')):
                raise ParseError(f"bad term {term!r} in {text!r}")
            coef = _parse_rational(m.group('coef')) if m.group('coef') else Fraction(1)
            value = self.symbol(m.group('sym')) if m.group('sym') else self.one()
            acc = acc + value * (sign * coef)
        return acc

    def format(self, coords: Sequence[Fraction]) -> str:
        values = [sum((coords[i] * self._to_basis[i][j] for i in range(self.degree)),
                      Fraction(0)) for j in range(self.degree)]
        parts = []
        for name, v in zip(self.basis_names, values):
            if v == 0:
                continue
            mag = abs(v)
            if name == '1':
                body = str(mag)
            else:
                body = name if mag == 1 else f"{mag}*{name}"
            parts.append(('-' if v < 0 else '+', body))
        if not parts:
            return '0'
        out = ('-' if parts[0][0] == '-' else '') + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _invert_fraction_matrix(rows: List[List[Fraction]]) -> List[List[Fraction]]:
    n = len(rows)
    aug = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("display basis is not a basis")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [r[n:] for r in aug]


class NumberFieldElement:
    """Immutable element of a NumberField, stored in the power basis."""

    __slots__ = ('field', 'coords')

    def __init__(self, field: NumberField, coords: Tuple[Fraction, ...]):
        object.__setattr__(self, 'field', field)
        object.__setattr__(self, 'coords', tuple(coords))

    def __setattr__(self, name, value):
        raise AttributeError("number-field elements are immutable")

    def _coerce(self, other):
        if isinstance(other, NumberFieldElement):
            if other.field != self.field:
                raise ValueError(f"field mismatch: {self.field.tag} vs {other.field.tag}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.field.element([a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return self.field.element([-a for a in self.coords])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.field.element([a * other for a in self.coords])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.field.element(upoly_mul(list(self.coords), list(o.coords)))

    __rmul__ = __mul__

    def inverse(self) -> 'NumberFieldElement':
        """Extended Euclid in Q[x] modulo the minimal polynomial."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        r0, r1 = [Fraction(c) for c in self.field.minpoly], upoly_trim(list(self.coords))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = upoly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, upoly_sub(s0, upoly_mul(q, s1))
        c = r1[0]
        return self.field.element([x / c for x in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, NumberFieldElement):
            return NotImplemented
        return other.field == self.field and self.coords == other.coords

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.field, self.coords))

    def __str__(self):
        return self.field.format(self.coords)

    def __repr__(self):
        return f"{type(self).__name__}({self.field.tag}: {self})"


# ──────────────────────────────────────────────────────────────────
# Cyclotomic fields
# ──────────────────────────────────────────────────────────────────

@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Tuple[int, ...]:
    """Phi_n as an integer coefficient tuple (low degree first)."""
    f: List = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n):
        if d < n:
            f, rem = upoly_divmod(f, cyclotomic_polynomial(d))
            assert not rem
    return tuple(int(c) for c in f)


class CyclotomicField(NumberField):
    """Q(zeta_n), zeta_n = exp(2*pi*i/n), power basis in zeta_n named `w`."""

    def __init__(self, conductor: int, gen: str = 'w'):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        super().__init__(cyclotomic_polynomial(conductor), f"QQ(zeta{conductor})", gen=gen)
        self.conductor = conductor
        powers = []
        cur = [Fraction(1)]
        for _ in range(conductor):
            powers.append(self.reduce_coeffs(cur))
            cur = [Fraction(0)] + list(powers[-1])
        self._powers = tuple(powers)

    def _element_class(self):
        return CyclotomicElement

    def root_of_unity(self, j: int) -> 'CyclotomicElement':
        """zeta_n^j."""
        return CyclotomicElement(self, self._powers[j % self.conductor])


@lru_cache(maxsize=None)
def cyclotomic_field(n: int) -> CyclotomicField:
    return CyclotomicField(n)


class CyclotomicElement(NumberFieldElement):
    """Element of Q(zeta_n); mixed conductors are lifted to their lcm."""

    __slots__ = ()

    @property
    def conductor(self) -> int:
        return self.field.conductor

    def lift(self, m: int) -> 'CyclotomicElement':
        """Same value viewed in Q(zeta_m), n | m."""
        n = self.conductor
        if m == n:
            return self
        if m % n:
            raise ValueError(f"conductor {n} does not divide {m}")
        target = cyclotomic_field(m)
        acc = target.zero()
        for i, c in enumerate(self.coords):
            if c:
                acc = acc + target.root_of_unity(i * (m // n)) * c
        return acc

    def _align(self, other):
        if isinstance(other, CyclotomicElement) and other.conductor != self.conductor:
            n, m = self.conductor, other.conductor
            common = n * m // gcd(n, m)
            return self.lift(common), other.lift(common)
        return self, other

    def __add__(self, other):
        a, b = self._align(other)
        return NumberFieldElement.__add__(a, b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._align(other)
        return NumberFieldElement.__sub__(a, b)

    def __mul__(self, other):
        a, b = self._align(other)
        return NumberFieldElement.__mul__(a, b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._align(other)
        return NumberFieldElement.__truediv__(a, b)

    def __eq__(self, other):
        a, b = self._align(other)
        return NumberFieldElement.__eq__(a, b)

    __hash__ = NumberFieldElement.__hash__

    def conj(self) -> 'CyclotomicElement':
        """Complex conjugation zeta -> zeta^-1."""
        acc = self.field.zero()
        for i, c in enumerate(self.coords):
            if c:
                acc = acc + self.field.root_of_unity(-i) * c
        return acc

    def abs2(self) -> 'CyclotomicElement':
        return self * self.conj()

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def to_complex(self, dps: int = 30):
        import mpmath
        with mpmath.workdps(dps):
            z = mpmath.exp(2j * mpmath.pi / self.conductor)
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * z ** i
                               for i, c in enumerate(self.coords))


def zeta(n: int, j: int = 1) -> CyclotomicElement:
    return cyclotomic_field(n).root_of_unity(j)


# The fields used by the FPP computations.
QQ_S2 = NumberField((2, 0, 1), 'QQ(s2)', gen='s2')
QQ_S3 = NumberField((3, 0, 1), 'QQ(s3)', gen='s3')
# theta = s2 + s3, theta^4 + 10 theta^2 + 1 = 0; s6 denotes s2*s3.
QQ_S2_S3 = NumberField((1, 0, 10, 0, 1), 'QQ(s2,s3)', gen='t', symbols={
    's2': (0, Fraction(-9, 2), 0, Fraction(-1, 2)),
    's3': (0, Fraction(11, 2), 0, Fraction(1, 2)),
    's6': (Fraction(5, 2), 0, Fraction(1, 2), 0),
})

_NAMED_FIELDS = {f.tag: f for f in (QQ_S2, QQ_S3, QQ_S2_S3)}


def nf_embed_mod_pk(x: Union[Rational, NumberFieldElement], p: int, k: int,
                    root_choice: Optional[Residue] = None) -> Residue:
    """Ring homomorphism K -> Z/p^k sending the primitive element to root_choice."""
    if isinstance(x, (int, Fraction)):
        return Residue.from_rational(x, p, k)
    if root_choice is None:
        raise ValueError("a root of the defining polynomial is required")
    if root_choice.prime != p or root_choice.exponent < k:
        raise ModulusMismatchError(
            f"root given mod {root_choice.prime}^{root_choice.exponent}, need {p}^{k}")
    r = root_choice.truncate(k)
    m = p ** k
    if upoly_eval(x.field.minpoly, r.value) % m != 0:
        raise ValueError(f"{r} is not a root of {format_upoly(x.field.minpoly)}")
    acc = 0
    power = 1
    for c in x.coords:
        if c:
            if c.denominator % p == 0:
                raise BadPrimeError(f"coordinate denominator {c.denominator} divisible by {p}")
            acc += c.numerator * pow(c.denominator, -1, m) * power
        power = power * r.value % m
    return Residue(p, k, acc)


# ──────────────────────────────────────────────────────────────────
# Coefficient rings
# ──────────────────────────────────────────────────────────────────

_GF_RE = re.compile(r'^GF\((\d+)\)$')
_ZMOD_RE = re.compile(r'^Z/(\d+)\^(\d+)$')
_CYC_RE = re.compile(r'^QQ\(zeta(\d+)\)$')


@dataclass(frozen=True)
class Ring:
    """Closed enumeration of coefficient rings."""
    kind: str
    prime: Optional[int] = None
    exponent: Optional[int] = None
    field: Optional[NumberField] = None

    @property
    def modulus(self) -> Optional[int]:
        if self.kind != 'ZMOD':
            return None
        return self.prime ** self.exponent

    @property
    def is_field(self) -> bool:
        return self.kind in ('QQ', 'NF', 'CYC') or (self.kind == 'ZMOD' and self.exponent == 1)

    @property
    def tag(self) -> str:
        if self.kind in ('ZZ', 'QQ'):
            return self.kind
        if self.kind == 'ZMOD':
            return f"GF({self.prime})" if self.exponent == 1 else f"Z/{self.prime}^{self.exponent}"
        return self.field.tag

    def __str__(self):
        return self.tag

    @classmethod
    def parse_tag(cls, tag: str) -> 'Ring':
        tag = tag.strip().replace(' ', '')
        if tag in ('ZZ', 'QQ'):
            return cls(tag)
        m = _GF_RE.match(tag)
        if m:
            return zmod(int(m.group(1)), 1)
        m = _ZMOD_RE.match(tag)
        if m:
            return zmod(int(m.group(1)), int(m.group(2)))
        m = _CYC_RE.match(tag)
        if m:
            return cls('CYC', field=cyclotomic_field(int(m.group(1))))
        if tag in _NAMED_FIELDS:
            return cls('NF', field=_NAMED_FIELDS[tag])
        raise ParseError(f"unknown ring tag {tag!r}")

    # -- element handling ---------------------------------------------

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, x):
        """Bring an int/Fraction/Residue/field element into this ring's representation."""
        k = self.kind
        if k == 'ZZ':
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if k == 'QQ':
            if isinstance(x, NumberFieldElement):
                return x.as_fraction()
            return Fraction(x)
        if k == 'ZMOD':
            m = self.modulus
            if isinstance(x, Residue):
                if (x.prime, x.exponent) != (self.prime, self.exponent):
                    raise ModulusMismatchError(f"{x} does not live in {self.tag}")
                return x.value
            if isinstance(x, Fraction):
                if x.denominator % self.prime == 0:
                    raise BadPrimeError(f"denominator {x.denominator} divisible by {self.prime}")
                return x.numerator * pow(x.denominator, -1, m) % m
            return int(x) % m
        if isinstance(x, NumberFieldElement):
            if isinstance(x, CyclotomicElement) and k == 'CYC':
                return x.lift(self.field.conductor)
            if x.field != self.field:
                raise ValueError(f"{x!r} does not live in {self.tag}")
            return x
        return self.field.element([x])

    def reduce(self, x):
        if self.kind == 'ZMOD':
            return x % self.modulus
        return x

    def is_zero(self, x) -> bool:
        return x == 0

    def inv(self, x):
        if self.kind == 'ZZ':
            if x in (1, -1):
                return x
            raise NotAFieldError(f"{x} is not a unit in ZZ")
        if self.kind == 'QQ':
            return 1 / Fraction(x)
        if self.kind == 'ZMOD':
            if x % self.prime == 0:
                raise ZeroDivisionError(f"{x} is not a unit mod {self.prime}^{self.exponent}")
            return pow(x, -1, self.modulus)
        return x.inverse()

    def div(self, a, b):
        return self.reduce(a * self.inv(b))

    def parse_coeff(self, text: str):
        t = text.strip()
        if self.kind in ('NF', 'CYC'):
            if t.startswith('(') and t.endswith(')'):
                t = t[1:-1]
            return self.field.parse(t)
        return self.coerce(_parse_rational(t))

    def format_coeff(self, x) -> str:
        if self.kind in ('NF', 'CYC'):
            s = str(x)
            return s if _is_plain_number(s) else f"({s})"
        if self.kind == 'ZMOD':
            m = self.modulus
            return str(x - m if x > m // 2 else x)
        return str(x)

    def is_negative_literal(self, x) -> bool:
        """True if the coefficient prints with a leading minus (used by formatting)."""
        return self.format_coeff(x).startswith('-')


def _is_plain_number(s: str) -> bool:
    return re.match(r'^-?\d+(/\d+)?$', s) is not None


ZZ = Ring('ZZ')
QQ = Ring('QQ')


def zmod(p: int, k: int = 1) -> Ring:
    if p < 2 or k < 1:
        raise ValueError(f"bad modulus {p}^{k}")
    return Ring('ZMOD', p, k)


def GF(p: int) -> Ring:
    return zmod(p, 1)


def number_field_ring(field: NumberField) -> Ring:
    return Ring('CYC' if isinstance(field, CyclotomicField) else 'NF', field=field)


def to_residue_value(x, p: int, k: int, root: Optional[Residue] = None) -> int:
    """Integer representative of x in Z/p^k (number-field x needs a root)."""
    if isinstance(x, Residue):
        if (x.prime, x.exponent) != (p, k):
            raise ModulusMismatchError(f"{x} is not mod {p}^{k}")
        return x.value
    return nf_embed_mod_pk(x, p, k, root).value
