#!/usr/bin/env python3
"""
Cover Ledger and Section Kernels

Dimension bookkeeping for the tower of unramified covers of the fake projective
plane (Riemann-Roch with K = 3H, the holomorphic Lefschetz count for the
central C3), and the small kernels used when sections of the covers are
assembled from values at points: Reynolds averaging over a finite matrix group,
evaluation of sections with square roots of the 2-torsion cuts, cube-root branch
choice from triple products, and the weight patterns of the section quadruple.

Complex kernels work on caller-supplied mpmath values with an explicit
tolerance; exact kernels accept ints, Fractions and number-field elements.

The ledger and the Reynolds projector are exposed through cli.py (ledger,
split, reynolds).
"""

import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import product
from math import gcd, isqrt
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from errors import ArityMismatchError, BranchLocusError, InconsistentDataError
from exact import QQ, ZZ, CyclotomicElement, NumberFieldElement, Ring, cyclotomic_field, zeta
from linalg import mat_add, mat_mul, mat_scale

FIXTURES_DIR = Path(__file__).resolve().parent.parent / 'fixtures'
TORSION_TABLE = FIXTURES_DIR / 'torsion.json'


# ──────────────────────────────────────────────────────────────────
# Dimension ledger
# ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CoverSpec:
    """An n-fold unramified cover of the fake projective plane (K = 3H)."""
    label: str
    degree: Optional[int]
    note: str = ''


# Levels of the tower. The quotient 8./C3 is singular and covers nothing;
# its row comes from the central C3 eigenspace split.
TOWER = (
    CoverSpec('P2fake, P2fake^', 1),
    CoverSpec('2.P2fake', 2),
    CoverSpec('4.P2fake', 4),
    CoverSpec('8.P2fake', 8),
    CoverSpec('8.P2fake/C3', None, 'invariants of the central C3 on 8.P2fake'),
    CoverSpec('72.P2fake', 72),
    CoverSpec('9.P2fake^', 9),
)

LEFSCHETZ_LEVELS = (1, 2, 4, 8)


def chi_cover(n: int, k: int) -> int:
    """chi(X, kH) = n (k-1)(k-2) / 2 on an n-fold cover."""
    if n < 1 or k < 0:
        raise ValueError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    return n * (k - 1) * (k - 2) // 2


def lefschetz_fixed_points(level: int) -> Tuple[int, int]:
    """(fixed points of the central C3 generator, alternating trace on kH, k = 0 mod 3).

    Three points of type 1/3(1,2) on the base; each double cover doubles them,
    and every point contributes equally, so the sum scales with the level.
    """
    if level not in LEFSCHETZ_LEVELS:
        raise ValueError(f"unsupported level {level}; expected one of {LEFSCHETZ_LEVELS}")
    return 3 * level, level


def eigenspace_split(total: int, lefschetz_number: int,
                     real_structure: bool = False) -> Tuple[int, int, int]:
    """Dimensions (d0, d1, d2) of the 1, w, w^2 eigenspaces of an order-3 action.

    Solves d0 + d1 + d2 = total, d0 + w d1 + w^2 d2 = lefschetz_number, which
    with d1 = d2 reads d0 - d1 = lefschetz_number. d1 = d2 holds when the action
    is defined over a real subfield; the caller asserts it with real_structure.
    """
    if not real_structure:
        raise ValueError("eigenspace_split needs real_structure=True (d1 = d2)")
    diff = total - lefschetz_number
    if diff % 3 or diff < 0 or total < 0:
        raise InconsistentDataError(
            f"no nonnegative split of {total} with trace {lefschetz_number}")
    d1 = diff // 3
    d0 = lefschetz_number + d1
    if d0 < 0:
        raise InconsistentDataError(
            f"no nonnegative split of {total} with trace {lefschetz_number}")
    return d0, d1, d1


@dataclass(frozen=True)
class LedgerRow:
    label: str
    degree: Optional[int]
    h0_3H: int
    h0_6H: int
    source: str


@dataclass(frozen=True)
class LefschetzRecord:
    level: int
    fixed_points: int
    lefschetz_sum: int


@dataclass
class DimLedger:
    rows: List[LedgerRow]
    lefschetz: List[LefschetzRecord]
    splits: Dict[str, Tuple[int, int, int]]

    def cells(self) -> List[Tuple[int, int]]:
        return [(r.h0_3H, r.h0_6H) for r in self.rows]

    def to_json(self) -> dict:
        return {
            'rows': [asdict(r) for r in self.rows],
            'lefschetz': [asdict(r) for r in self.lefschetz],
            'splits': {k: list(v) for k, v in self.splits.items()},
        }


def h0_ledger() -> DimLedger:
    """h0(3H) and h0(6H) along the tower.

    For k > 3 Kodaira vanishing gives h0(kH) = chi(kH). For k = 3,
    h0 = chi - h2 + h1 = n - 1 + h^{1,0}, and h^{1,0} = 0 because every cover
    in the tower has finite abelianization.
    """
    top = 8
    _, lsum = lefschetz_fixed_points(top)
    # H^2(8., 3H) carries the trivial action; H^1 vanishes.
    split3 = eigenspace_split(chi_cover(top, 3) - 1, lsum - 1, real_structure=True)
    split6 = eigenspace_split(chi_cover(top, 6), lsum, real_structure=True)

    rows = []
    for spec in TOWER:
        if spec.degree is None:
            rows.append(LedgerRow(spec.label, None, split3[0], split6[0],
                                  'central C3 invariants via holomorphic Lefschetz'))
        else:
            n = spec.degree
            rows.append(LedgerRow(spec.label, n, chi_cover(n, 3) - 1, chi_cover(n, 6),
                                  'Riemann-Roch, Kodaira vanishing, h^{1,0} = 0'))
    lefschetz = [LefschetzRecord(level, *lefschetz_fixed_points(level))
                 for level in LEFSCHETZ_LEVELS]
    return DimLedger(rows, lefschetz, {'8.P2fake 3H': split3, '8.P2fake 6H': split6})


def torsion_table(path=None) -> Dict[str, Dict[int, int]]:
    """Picard torsion of the covers: label -> {cyclic order: multiplicity}."""
    data = json.loads(Path(path or TORSION_TABLE).read_text())
    return {label: {int(k): int(v) for k, v in factors.items()}
            for label, factors in data['torsion'].items()}


def torsion_order(factors: Dict[int, int]) -> int:
    out = 1
    for order, mult in factors.items():
        out *= order ** mult
    return out


# ──────────────────────────────────────────────────────────────────
# Reynolds averaging
# ──────────────────────────────────────────────────────────────────

def _rep_ring(mats) -> Ring:
    entries = [x for m in mats for row in m for x in row]
    cyc = [x for x in entries if isinstance(x, CyclotomicElement)]
    if cyc:
        n = 1
        for x in cyc:
            n = n * x.conductor // gcd(n, x.conductor)
        return Ring('CYC', field=cyclotomic_field(n))
    if all(isinstance(x, int) for x in entries):
        return ZZ
    return QQ


def _mat_key(m) -> tuple:
    return tuple(tuple(x.coords if isinstance(x, NumberFieldElement) else Fraction(x) for x in row)
                 for row in m)


def _coerce_rep(rep: Sequence, ring: Ring) -> list:
    return [[[ring.coerce(x) for x in row] for row in m] for m in rep]


def check_closed(rep: Sequence, ring: Optional[Ring] = None) -> bool:
    ring = ring or _rep_ring(rep)
    rep = _coerce_rep(rep, ring)
    keys = {_mat_key(m) for m in rep}
    return all(_mat_key(mat_mul(ring, a, b)) in keys for a in rep for b in rep)


def reynolds_project(rep: Sequence) -> list:
    """P = (1/|G|) sum_g rho(g) for a finite matrix group given by all its elements."""
    if not rep:
        raise ArityMismatchError("empty representation")
    n = len(rep[0])
    if any(len(m) != n or any(len(row) != n for row in m) for m in rep):
        raise ArityMismatchError("representation matrices must be square of one size")
    ring = _rep_ring(rep)
    rep = _coerce_rep(rep, ring)
    if len({_mat_key(m) for m in rep}) != len(rep):
        raise InconsistentDataError("representation lists a matrix twice")
    if not check_closed(rep, ring):
        raise InconsistentDataError("matrices are not closed under multiplication")
    avg_ring = QQ if ring == ZZ else ring
    acc = [[avg_ring.coerce(x) for x in row] for row in rep[0]]
    for m in rep[1:]:
        acc = mat_add(avg_ring, acc, [[avg_ring.coerce(x) for x in row] for row in m])
    return mat_scale(avg_ring, acc, Fraction(1, len(rep)))


def matrix_trace(m):
    return sum((m[i][i] for i in range(len(m))), 0)


def permutation_matrix(perm: Sequence[int]) -> List[List[int]]:
    """Matrix sending basis vector e_i to e_perm[i]."""
    n = len(perm)
    m = [[0] * n for _ in range(n)]
    for i, j in enumerate(perm):
        m[j][i] = 1
    return m


def affine_permutation_rep(group) -> List[List[List[int]]]:
    """Permutation matrices of x -> m x + v on (Z/3)^2 for G648-type elements (c, m, v)."""
    points = list(product(range(3), repeat=2))
    index = {p: i for i, p in enumerate(points)}
    out = []
    for _, m, v in group.elements:
        perm = [index[((m[0][0] * x + m[0][1] * y + v[0]) % 3,
                       (m[1][0] * x + m[1][1] * y + v[1]) % 3)] for x, y in points]
        out.append(permutation_matrix(perm))
    return out


def regular_rep(group) -> List[List[List[int]]]:
    """Left regular representation, one permutation matrix per element."""
    return [permutation_matrix(group.table[g]) for g in range(group.order)]


# ──────────────────────────────────────────────────────────────────
# Square-root sections
# ──────────────────────────────────────────────────────────────────

def torsion_cut_values(point: Sequence, dps: int = 50):
    """Values of R1 + w^j R4 + w^2j R7 (j = 1, 2) at a complex point R0..R9."""
    if len(point) != 10:
        raise ArityMismatchError(f"expected 10 coordinates, got {len(point)}")
    with mpmath.workdps(dps):
        w = mpmath.exp(2j * mpmath.pi / 3)
        r1, r4, r7 = (mpmath.mpmathify(point[i]) for i in (1, 4, 7))
        return r1 + w * r4 + w ** 2 * r7, r1 + w ** 2 * r4 + w * r7


def _exact_sqrt(x: Fraction) -> Fraction:
    if x < 0:
        raise ValueError(f"{x} has no rational square root")
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n != x.numerator or d * d != x.denominator:
        raise ValueError(f"{x} is not a rational square")
    return Fraction(n, d)


def sqrt_section_eval(f_value, l1, l2, branch: Tuple[int, int] = (1, 1), tol=None):
    """F / (sqrt(L1) sqrt(L2)) with the square-root signs given by branch.

    Rational inputs must be perfect squares and give exact results; anything
    else goes through mpmath's principal square root.
    """
    if any(b not in (1, -1) for b in branch):
        raise ValueError(f"branch signs must be +1 or -1, got {branch}")
    exact = all(isinstance(x, (int, Fraction)) for x in (f_value, l1, l2))
    if exact:
        if l1 == 0 or l2 == 0:
            raise BranchLocusError("cut value is zero")
        r1, r2 = _exact_sqrt(Fraction(l1)), _exact_sqrt(Fraction(l2))
        return Fraction(f_value) / (branch[0] * r1 * branch[1] * r2)
    tol = mpmath.mpf(10) ** (-mpmath.mp.dps // 2) if tol is None else tol
    if abs(l1) <= tol or abs(l2) <= tol:
        raise BranchLocusError(f"cut value below tolerance {mpmath.nstr(tol, 3)}")
    return mpmath.mpmathify(f_value) / (branch[0] * mpmath.sqrt(l1) * branch[1] * mpmath.sqrt(l2))


# ──────────────────────────────────────────────────────────────────
# Cube-root branches
# ──────────────────────────────────────────────────────────────────

def _close(a, b, tol) -> bool:
    if tol is None:
        return a == b
    return abs(a - b) <= tol * max(1, abs(b))


def cube_root_disambiguate(cubes: Sequence, triples: Dict[int, object], f1, f2,
                           tol=None) -> List:
    """f_k = t_{12k} / (f1 f2) for k = 3..n (1-based), checking f_k^3 = c_k.

    `triples` maps k to the value of f1 f2 f_k. Returns [f1, f2, f3, ..., fn].
    tol=None means exact comparison.
    """
    if len(cubes) < 2:
        raise ArityMismatchError("need at least two cubes")
    if any(_close(c, 0, tol) for c in cubes):
        raise InconsistentDataError("a cube vanishes")
    for k, f in ((1, f1), (2, f2)):
        if not _close(f ** 3, cubes[k - 1], tol):
            raise InconsistentDataError(f"f{k} is not a cube root of c{k}")
    base = f1 * f2
    out = [f1, f2]
    for k in range(3, len(cubes) + 1):
        if k not in triples:
            raise InconsistentDataError(f"missing triple product t12{k}")
        fk = triples[k] / base
        if not _close(fk ** 3, cubes[k - 1], tol):
            raise InconsistentDataError(f"inconsistent triple data at k={k}")
        out.append(fk)
    return out


def deck_orbit(cubes: Sequence, triples: Dict[int, object], f1, f2, tol=None) -> List[List]:
    """Solutions for all nine choices (w^i f1, w^j f2), i, j in Z/3.

    Exact inputs use w = zeta_3 in Q(zeta_3); otherwise w = exp(2 pi i / 3).
    """
    if tol is None:
        roots = [zeta(3, i) for i in range(3)]
    else:
        roots = [mpmath.exp(2j * mpmath.pi * i / 3) for i in range(3)]
    return [cube_root_disambiguate(cubes, triples, roots[i] * f1, roots[j] * f2, tol)
            for i, j in product(range(3), repeat=2)]


# ──────────────────────────────────────────────────────────────────
# Section quadruples
# ──────────────────────────────────────────────────────────────────

CENTRAL_WEIGHTS = (1, 0, 0, 2)


@dataclass(frozen=True)
class SectionQuadruple:
    """s1..s4 with the exponents of w by which the central C3 and h act on each."""
    values: Tuple
    central_weights: Tuple[int, int, int, int] = CENTRAL_WEIGHTS
    h_weights: Tuple[int, int, int, int] = (0, 0, 0, 0)

    def relation_holds(self, tol=None) -> bool:
        s1, s2, s3, s4 = self.values
        return _close(s1 * s4, s2 * s3, tol)


def key_weight_pattern(a: int, b: int) -> Tuple[int, int, int, int]:
    """Exponents of w for h on (s1, s2, s3, s4): (2a, a+b, a+b, 2b) mod 3."""
    return (2 * a) % 3, (a + b) % 3, (a + b) % 3, (2 * b) % 3


def key_weight_systems() -> List[Tuple[Tuple[int, int], Tuple[int, int, int, int]]]:
    return [((a, b), key_weight_pattern(a, b)) for a, b in product(range(3), repeat=2)]


def key_weight_check(q: SectionQuadruple, a: int, b: int, tol=None) -> bool:
    if len(q.values) != 4:
        raise ArityMismatchError("a section quadruple has four values")
    return (q.relation_holds(tol)
            and tuple(w % 3 for w in q.central_weights) == CENTRAL_WEIGHTS
            and tuple(w % 3 for w in q.h_weights) == key_weight_pattern(a, b))
