#!/usr/bin/env python3
"""
Verification Pipeline

Checks applied to candidate equations of a surface over a finite field:

  1. the Hilbert polynomial of the ideal matches the expectation
     (18m^2 - 9m + 1 for a bicanonically embedded fake projective plane,
     from chi(6mH) = (6m-1)(6m-2)/2);
  2. smoothness probes: a seeded choice of Jacobian minors of size
     codim is added to the ideal and the Hilbert polynomial must vanish;
  3. a brute-force search over hyperplanes for singular (nonreduced) cuts,
     optionally restricted to hyperplanes fixed by a linear action.

A zero probe is evidence of smoothness over the algebraic closure of F_p along
the probed minors, not a proof.

Both checks are exposed through cli.py (verify-fpp, search-cuts).
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, List, Optional, Sequence, Tuple

from errors import ArityMismatchError, NotAFieldError, ParseError
from exact import GF, Residue, format_upoly, upoly_trim
from groebner import HilbertData, buchberger, hilbert
from linalg import identity, nullspace, rref, transpose
from mpoly import IdealBasis, Poly, all_minor_selections, jacobian_minors, reduce_mod_p
from reports import render_verification

# 18m^2 - 9m + 1, constant term first.
FPP_HILBERT = (Fraction(1), Fraction(-9), Fraction(18))

Selection = Tuple[Tuple[int, ...], Tuple[int, ...]]


def _poly_text(coeffs: Sequence[Fraction]) -> str:
    return format_upoly(list(coeffs), 'm') if coeffs else '0'


@dataclass
class ProbeResult:
    size: int
    selections: List[Selection]
    hilbert_polynomial: List[Fraction]

    @property
    def is_zero(self) -> bool:
        return not self.hilbert_polynomial

    def to_json(self) -> dict:
        return {
            'minor_size': self.size,
            'selections': [[list(r), list(c)] for r, c in self.selections],
            'hilbert_polynomial': _poly_text(self.hilbert_polynomial),
            'zero': self.is_zero,
        }


@dataclass
class VerificationReport:
    digest: str
    primes: List[int]
    hilbert: Optional[HilbertData] = None
    expected: Optional[List[Fraction]] = None
    probes: List[ProbeResult] = field(default_factory=list)
    seed: int = 0

    @property
    def hilbert_polynomial(self) -> List[Fraction]:
        return list(self.hilbert.polynomial) if self.hilbert else []

    @property
    def hilbert_matches(self) -> bool:
        if self.expected is None:
            return True
        return self.hilbert_polynomial == upoly_trim([Fraction(c) for c in self.expected])

    @property
    def verdict(self) -> str:
        ok = self.hilbert_matches and all(p.is_zero for p in self.probes)
        return 'pass' if ok else 'fail'

    def to_json(self) -> dict:
        return {
            'digest': self.digest,
            'primes': self.primes,
            'seed': self.seed,
            'hilbert_polynomial': _poly_text(self.hilbert_polynomial),
            'expected': None if self.expected is None else _poly_text(
                upoly_trim([Fraction(c) for c in self.expected])),
            'hilbert': self.hilbert.to_json() if self.hilbert else None,
            'probes': [p.to_json() for p in self.probes],
            'verdict': self.verdict,
        }

    def render(self) -> str:
        return render_verification(self)


def _require_prime_field(ideal: IdealBasis) -> int:
    ring = ideal.ring
    if ring.kind != 'ZMOD' or ring.exponent != 1:
        raise NotAFieldError(f"verification runs over a prime field, got {ring.tag}")
    return ring.prime


def fpp_hilbert_check(ideal: IdealBasis, expected: Optional[Sequence] = FPP_HILBERT,
                      degree_cap: Optional[int] = None) -> VerificationReport:
    p = _require_prime_field(ideal)
    data = hilbert(buchberger(ideal, degree_cap=degree_cap))
    return VerificationReport(
        digest=ideal.digest(),
        primes=[p],
        hilbert=data,
        expected=None if expected is None else [Fraction(c) for c in expected],
    )


def codimension(ideal: IdealBasis, expected_dim: int) -> int:
    return ideal.nvars - 1 - expected_dim


def choose_minors(ideal: IdealBasis, size: int, count: int, seed: int) -> List[Selection]:
    """Seeded sample of `count` row/column selections (all of them if fewer exist)."""
    if size < 1 or size > min(len(ideal), ideal.nvars):
        raise ArityMismatchError(
            f"no minors available: size {size} for a {len(ideal)}x{ideal.nvars} Jacobian")
    options = all_minor_selections(ideal, size)
    if count >= len(options):
        return options
    picks = random.Random(seed).sample(range(len(options)), count)
    return [options[i] for i in sorted(picks)]


def smoothness_probe(ideal: IdealBasis, expected_dim: int, minor_count: int = 3,
                     seed: int = 0, degree_cap: Optional[int] = None) -> ProbeResult:
    """Add minor_count seeded Jacobian minors of size codim and recompute the Hilbert polynomial."""
    _require_prime_field(ideal)
    size = codimension(ideal, expected_dim)
    if minor_count == 0:
        selections: List[Selection] = []
        minors: List[Poly] = []
    else:
        selections = choose_minors(ideal, size, minor_count, seed)
        minors = [m for m in jacobian_minors(ideal, size, selections) if not m.is_zero()]
    data = hilbert(buchberger(ideal.extend(minors), degree_cap=degree_cap))
    return ProbeResult(size, selections, list(data.polynomial))


def run_verification(ideal: IdealBasis, p: Optional[int] = None, seed: int = 0,
                     minors: int = 3, expected: Optional[Sequence] = FPP_HILBERT,
                     expected_dim: Optional[int] = None, probes: int = 1,
                     root: Optional[Residue] = None,
                     degree_cap: Optional[int] = None) -> VerificationReport:
    """Hilbert check plus `probes` smoothness probes with seeds seed, seed+1, ...

    expected_dim defaults to the dimension read off the computed Hilbert polynomial.
    """
    if p is not None and not (ideal.ring.kind == 'ZMOD' and ideal.ring.prime == p
                              and ideal.ring.exponent == 1):
        ideal = reduce_mod_p(ideal, p, root)
    report = fpp_hilbert_check(ideal, expected, degree_cap)
    report.seed = seed
    dim = expected_dim if expected_dim is not None else len(report.hilbert_polynomial) - 1
    if dim < 0:
        return report
    for k in range(probes):
        report.probes.append(smoothness_probe(ideal, dim, minors, seed + k, degree_cap))
    return report


# ──────────────────────────────────────────────────────────────────
# Singular cut search
# ──────────────────────────────────────────────────────────────────

@dataclass
class CutSearchResult:
    cuts: List[Tuple[int, ...]]
    examined: int
    partial: bool

    def to_json(self) -> dict:
        return {'cuts': [list(c) for c in self.cuts], 'examined': self.examined,
                'partial': self.partial}


def _family(n: int, p: int, invariance: Optional[Sequence]) -> List[List[int]]:
    """Reduced echelon basis of coefficient vectors a with a*M = a for every M."""
    ring = GF(p)
    if not invariance:
        return identity(ring, n)
    rows = []
    for m in invariance:
        if len(m) != n or any(len(r) != n for r in m):
            raise ArityMismatchError(f"invariance matrices must be {n}x{n}")
        mt = transpose([[x % p for x in r] for r in m])
        rows += [[(mt[i][j] - (1 if i == j else 0)) % p for j in range(n)] for i in range(n)]
    basis = nullspace(ring, rows, n)
    if not basis:
        return []
    return rref(ring, basis)[0][:len(basis)]


def hyperplanes(n: int, p: int, invariance: Optional[Sequence] = None) -> Iterator[Tuple[int, ...]]:
    """Projective hyperplanes in the family, normalized and in lexicographic order.

    Lazy: with an echelon basis b_0..b_{r-1}, the normalized vectors led by b_j
    are b_j + sum c_i b_i (i > j), and their order is the order of the c tuples.
    """
    basis = _family(n, p, invariance)
    r = len(basis)
    for j in range(r - 1, -1, -1):
        for tail in product(range(p), repeat=r - 1 - j):
            vec = list(basis[j])
            for c, b in zip(tail, basis[j + 1:]):
                if c:
                    vec = [(x + c * y) % p for x, y in zip(vec, b)]
            yield tuple(vec)


def cut_is_singular(ideal: IdealBasis, plane: Sequence[int], expected_dim: int,
                    minor_count: Optional[int] = None, seed: int = 0) -> bool:
    ring, n = ideal.ring, ideal.nvars
    lin = Poly(ring, n, {tuple(int(i == j) for i in range(n)): c
                         for j, c in enumerate(plane) if c}, ideal.order)
    cut = ideal.extend([lin])
    size = codimension(cut, expected_dim - 1)
    count = minor_count if minor_count is not None else len(all_minor_selections(cut, size))
    return not smoothness_probe(cut, expected_dim - 1, count, seed).is_zero


def search_singular_cuts(ideal: IdealBasis, invariance: Optional[Sequence] = None,
                         budget: Optional[int] = None, expected_dim: Optional[int] = None,
                         minor_count: Optional[int] = None, seed: int = 0) -> CutSearchResult:
    """Hyperplanes H (up to scaling) with V(I) cap H singular.

    expected_dim is the dimension of V(I); by default that of a complete
    intersection, nvars - 1 - #generators.
    """
    p = _require_prime_field(ideal)
    dim = expected_dim if expected_dim is not None else ideal.nvars - 1 - len(ideal)
    if dim < 1:
        raise ArityMismatchError(f"cuts of a {dim}-dimensional scheme are empty")
    found, examined = [], 0
    for plane in hyperplanes(ideal.nvars, p, invariance):
        if budget is not None and examined >= budget:
            return CutSearchResult(found, examined, True)
        examined += 1
        if cut_is_singular(ideal, plane, dim, minor_count, seed):
            found.append(plane)
    return CutSearchResult(found, examined, False)


# ──────────────────────────────────────────────────────────────────
# CLI
# ──────────────────────────────────────────────────────────────────

def load_matrix(path) -> List[List[int]]:
    rows = []
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            line = line.split('#', 1)[0].strip()
            if line:
                try:
                    rows.append([int(x) for x in line.split()])
                except ValueError:
                    raise ParseError(f"bad matrix row {line!r}", line=lineno)
    return rows

