#!/usr/bin/env python3
"""
Lattice Reduction and Algebraic-Number Recognition

Exact integral LLL (d_i / lambda_ij kept as integers, no floating Gram-Schmidt),
minimal-polynomial recognition from p-adic and floating approximations, simultaneous
recognition of number-field elements from p-adic embeddings, and shrinking of
equation bases by reduction of their coefficient rows.

Float recognition accepts a relation only when the second reduced vector is at
least MARGIN_THRESHOLD times longer than the first; the margin is always
reported with the candidate.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import mpmath

from errors import (
    BadPrimeError,
    CancelledError,
    DependentRowsError,
    InsufficientPrecisionError,
)
from exact import (
    NumberField,
    NumberFieldElement,
    Residue,
    format_upoly,
    nf_embed_mod_pk,
    upoly_is_squarefree,
    upoly_primitive,
)
from linalg import bareiss_determinant

DEFAULT_DELTA = Fraction(99, 100)
MARGIN_THRESHOLD = 100

Matrix = List[List[int]]


class CancellationToken:
    """Cooperative cancellation for long reductions."""

    def __init__(self):
        self.cancelled = False

    def cancel(self):
        self.cancelled = True

    def check(self):
        if self.cancelled:
            raise CancelledError("lattice reduction cancelled")


@dataclass
class LatticeBasis:
    rows: Matrix
    transform: Optional[Matrix] = None

    @property
    def rank(self) -> int:
        return len(self.rows)

    def max_norm(self) -> int:
        return max((abs(x) for row in self.rows for x in row), default=0)


def norm2(v: Sequence[int]) -> int:
    return sum(x * x for x in v)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


# ──────────────────────────────────────────────────────────────────
# Integral LLL
# ──────────────────────────────────────────────────────────────────

def lll_reduce(basis: Union[LatticeBasis, Sequence[Sequence[int]]],
               delta: Fraction = DEFAULT_DELTA,
               token: Optional[CancellationToken] = None) -> LatticeBasis:
    """LLL-reduce the rows; returns the reduced rows and the unimodular transform."""
    rows_in = basis.rows if isinstance(basis, LatticeBasis) else basis
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta <= 1:
        raise ValueError(f"delta must lie in (1/4, 1], got {delta}")
    a_num, a_den = delta.numerator, delta.denominator
    b = [[int(x) for x in row] for row in rows_in]
    n = len(b)
    h = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return LatticeBasis([], [])
    # 1-based bookkeeping as in the integral algorithm; index 0 of d is d_0 = 1
    d = [0] * (n + 1)
    lam = [[0] * (n + 1) for _ in range(n + 1)]
    d[0] = 1
    d[1] = norm2(b[0])
    if d[1] == 0:
        raise DependentRowsError("first basis row is zero")

    def redi(k: int, l: int):
        if 2 * abs(lam[k][l]) > d[l]:
            q = (2 * lam[k][l] + d[l]) // (2 * d[l])
            b[k - 1] = [x - q * y for x, y in zip(b[k - 1], b[l - 1])]
            h[k - 1] = [x - q * y for x, y in zip(h[k - 1], h[l - 1])]
            lam[k][l] -= q * d[l]
            for i in range(1, l):
                lam[k][i] -= q * lam[l][i]

    def swapi(k: int, kmax: int):
        b[k - 1], b[k - 2] = b[k - 2], b[k - 1]
        h[k - 1], h[k - 2] = h[k - 2], h[k - 1]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lk = lam[k][k - 1]
        big = (d[k - 2] * d[k] + lk * lk) // d[k - 1]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k] * lam[i][k - 1] - lk * t) // d[k - 1]
            lam[i][k - 1] = (big * t + lk * lam[i][k]) // d[k]
        d[k - 1] = big

    k, kmax = 2, 1
    while k <= n:
        if token is not None:
            token.check()
        if k > kmax:
            kmax = k
            for j in range(1, k + 1):
                u = _dot(b[k - 1], b[j - 1])
                for i in range(1, j):
                    u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
                if j < k:
                    lam[k][j] = u
                else:
                    d[k] = u
                    if u == 0:
                        raise DependentRowsError("basis rows are linearly dependent")
        while True:
            redi(k, k - 1)
            lk = lam[k][k - 1]
            if a_den * d[k] * d[k - 2] < a_num * d[k - 1] ** 2 - a_den * lk * lk:
                swapi(k, kmax)
                k = max(2, k - 1)
                if token is not None:
                    token.check()
                continue
            for l in range(k - 2, 0, -1):
                redi(k, l)
            k += 1
            break
    return LatticeBasis(b, h)


def gram_schmidt(rows: Sequence[Sequence[int]]) -> Tuple[List[List[Fraction]], List[List[Fraction]]]:
    """Exact Gram-Schmidt vectors b*_i and coefficients mu_ij."""
    ortho: List[List[Fraction]] = []
    mu = [[Fraction(0)] * len(rows) for _ in rows]
    for i, v in enumerate(rows):
        w = [Fraction(x) for x in v]
        for j in range(i):
            denom = sum(x * x for x in ortho[j])
            mu[i][j] = sum(Fraction(x) * y for x, y in zip(v, ortho[j])) / denom if denom else Fraction(0)
            w = [x - mu[i][j] * y for x, y in zip(w, ortho[j])]
        ortho.append(w)
    return ortho, mu


def is_lll_reduced(rows: Sequence[Sequence[int]], delta: Fraction = DEFAULT_DELTA) -> bool:
    """Size-reduction and Lovasz conditions, checked with exact rationals."""
    ortho, mu = gram_schmidt(rows)
    sq = [sum(x * x for x in v) for v in ortho]
    for i in range(len(rows)):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, len(rows)):
        if sq[k] < (Fraction(delta) - mu[k][k - 1] ** 2) * sq[k - 1]:
            return False
    return True


def integer_determinant(m: Sequence[Sequence[int]]) -> int:
    return bareiss_determinant(m)


# ──────────────────────────────────────────────────────────────────
# Equation-basis shrinking
# ──────────────────────────────────────────────────────────────────

def shrink_basis(rows: Sequence[Sequence[int]], delta: Fraction = DEFAULT_DELTA,
                 token: Optional[CancellationToken] = None) -> LatticeBasis:
    """Smaller coefficient rows spanning the same lattice, sorted by max-norm."""
    src = [[int(x) for x in r] for r in rows]
    reduced = lll_reduce(src, delta, token)
    order = sorted(range(len(reduced.rows)), key=lambda i: (max(map(abs, reduced.rows[i]), default=0), i))
    out = LatticeBasis([reduced.rows[i] for i in order], [reduced.transform[i] for i in order])
    before = max((abs(x) for r in src for x in r), default=0)
    if out.max_norm() > before:
        order = sorted(range(len(src)), key=lambda i: (max(map(abs, src[i]), default=0), i))
        n = len(src)
        out = LatticeBasis([src[i] for i in order],
                           [[int(j == i) for j in range(n)] for i in order])
    return out


# ──────────────────────────────────────────────────────────────────
# Minimal-polynomial recognition
# ──────────────────────────────────────────────────────────────────

@dataclass
class MinPolyCandidate:
    coefficients: List[int]          # low degree first, content 1, leading coefficient > 0
    margin: Optional[float] = None
    accepted: bool = True
    note: str = ''

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coefficients)

    def format(self, var: str = 'x') -> str:
        return format_upoly(self.coefficients, var)

    def to_json(self) -> dict:
        return {
            'polynomial': self.format(),
            'coefficients': self.coefficients,
            'degree': self.degree,
            'height': self.height,
            'margin': self.margin,
            'accepted': self.accepted,
            'note': self.note,
        }


@dataclass
class Recognition:
    """Result of a float recognition: accepted candidate or None plus the best rejected one."""
    candidate: Optional[MinPolyCandidate]
    rejected: List[MinPolyCandidate] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.candidate is not None


def _margin(rows: Matrix) -> Optional[float]:
    if len(rows) < 2:
        return None
    first = norm2(rows[0])
    if first == 0:
        return None
    return float(mpmath.sqrt(mpmath.mpf(norm2(rows[1])) / first))


def minpoly_from_padic(r: Residue, max_degree: int, height_bound: int,
                       force: bool = False,
                       token: Optional[CancellationToken] = None) -> Optional[MinPolyCandidate]:
    """Lowest-degree integer polynomial of height <= H with f(r) = 0 mod p^k."""
    m = r.modulus
    if not force and m <= (2 * height_bound) ** (max_degree + 2):
        raise InsufficientPrecisionError(
            f"{r.prime}^{r.exponent} <= (2*{height_bound})^{max_degree + 2}; pass force to override")
    for deg in range(1, max_degree + 1):
        powers = [pow(r.value, i, m) for i in range(deg + 1)]
        rows = []
        for i in range(deg + 1):
            row = [int(i == j) for j in range(deg + 1)]
            rows.append(row + [m * powers[i]])
        rows.append([0] * (deg + 1) + [m * m])
        reduced = lll_reduce(rows, token=token).rows
        candidates = [row for row in reduced if row[-1] == 0 and any(row[:-1])]
        candidates.sort(key=norm2)
        for row in candidates:
            coeffs = upoly_primitive(row[:-1])
            if len(coeffs) - 1 != deg or max(abs(c) for c in coeffs) > height_bound:
                continue
            if sum(c * p for c, p in zip(coeffs, powers)) % m:
                continue
            if not upoly_is_squarefree(coeffs):
                continue
            return MinPolyCandidate(coeffs, margin=_margin(reduced), note='p-adic')
    return None


def _to_mp(x):
    if isinstance(x, str):
        return mpmath.mpmathify(x.strip().replace(' ', '').replace('i', 'j'))
    return mpmath.mpmathify(x)


def minpoly_from_float(x, max_degree: int, digits: int,
                       token: Optional[CancellationToken] = None) -> Recognition:
    """Integer relation among 1, x, ..., x^d by LLL on 10^N-scaled powers."""
    rejected: List[MinPolyCandidate] = []
    with mpmath.workdps(digits + 20):
        val = _to_mp(x)
        is_complex = isinstance(val, mpmath.mpc) and val.imag != 0
        scale = mpmath.mpf(10) ** digits
        tolerance = mpmath.mpf(10) ** (-(digits // 2))
        for deg in range(1, max_degree + 1):
            rows = []
            power = mpmath.mpf(1)
            for i in range(deg + 1):
                row = [int(i == j) for j in range(deg + 1)]
                row.append(int(mpmath.nint(scale * mpmath.re(power))))
                if is_complex:
                    row.append(int(mpmath.nint(scale * mpmath.im(power))))
                rows.append(row)
                power = power * val
            reduced = lll_reduce(rows, token=token).rows
            best = reduced[0]
            coeffs = upoly_primitive(best[:deg + 1])
            if not coeffs:
                continue
            margin = _margin(reduced)
            value = abs(mpmath.polyval(list(reversed(coeffs)), val))
            cand = MinPolyCandidate(coeffs, margin=margin, accepted=False, note='float')
            if len(coeffs) - 1 == deg and margin is not None and margin >= MARGIN_THRESHOLD \
                    and value < tolerance:
                cand.accepted = True
                return Recognition(cand, rejected)
            cand.note = f"float: margin {margin:.3g}, |f(x)| = {mpmath.nstr(value, 5)}" \
                if margin is not None else 'float: no margin'
            rejected.append(cand)
    rejected.sort(key=lambda c: -(c.margin or 0))
    return Recognition(None, rejected)


def element_from_padic(r: Residue, nf: NumberField, root: Residue,
                       height: int, token: Optional[CancellationToken] = None
                       ) -> Optional[NumberFieldElement]:
    """Element a = (n_0 + n_1 t + ... ) / D of the field whose embedding t -> root is r."""
    m = r.modulus
    dim = nf.degree
    rho = root.truncate(r.exponent).value
    powers = [pow(rho, i, m) for i in range(dim)]
    size = dim + 1
    rows = [[int(j == 0) for j in range(size)] + [m * r.value]]
    for i in range(dim):
        rows.append([int(j == i + 1) for j in range(size)] + [m * ((-powers[i]) % m)])
    rows.append([0] * size + [m * m])
    reduced = lll_reduce(rows, token=token).rows
    for row in sorted((row for row in reduced if row[-1] == 0 and row[0] != 0), key=norm2):
        den, nums = row[0], row[1:size]
        if max(abs(x) for x in row[:size]) > height:
            continue
        candidate = nf.element([Fraction(n, den) for n in nums])
        try:
            if nf_embed_mod_pk(candidate, r.prime, r.exponent, root) == r:
                return candidate
        except BadPrimeError:
            continue
    return None
