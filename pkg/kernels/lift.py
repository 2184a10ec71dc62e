#!/usr/bin/env python3
"""
Certificate Lifting

Solves polynomial identities  T = U_1*K_1 + ... + U_s*K_s  in which the K_i are
known homogeneous polynomials (the generators E_i, or extra known factors such
as a cut) and the U_i are unknown multipliers of prescribed degree. The linear
system for the multiplier coefficients is solved over F_p, lifted p-adically
one digit at a time, and finally recognised coefficientwise as rationals (or
number-field elements, for slots marked `nf`) and checked exactly.

Template file format (ideal header, generator lines, then stanzas):

    ring QQ vars 3 order grevlex
    prime 7
    x0^2 - x1*x2
    target: 2*x0^3 + 3/2*x0^2*x1 + x0^2*x2 - x0*x1*x2 - 1/2*x1^2*x2
    slot degree=1
    knownfactor: x0 + x1 + x2 degree=2

`slot` lines give the multiplier degree of each generator in order; generators
without a slot line get deg(T) - deg(E_i). Templates over a number field need a
`root r` line naming a simple root of the defining polynomial mod p.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from errors import InconsistentDataError, LiftObstructedError, ParseError
from exact import (
    QQ,
    GF,
    NumberFieldElement,
    Residue,
    Ring,
    hensel_root_lift,
    nf_embed_mod_pk,
    rational_reconstruct,
    zmod,
)
from lattice import element_from_padic
from mpoly import IdealBasis, Poly, monomials_of_degree, parse_ideal
import linalg


@dataclass
class Slot:
    """One unknown multiplier U with its known factor K."""
    name: str
    factor: Poly
    degree: int
    number_field: bool = False


# ──────────────────────────────────────────────────────────────────
# Template
# ──────────────────────────────────────────────────────────────────

class CertificateTemplate:
    def __init__(self, target: Poly, slots: Sequence[Slot], prime: int,
                 root: Optional[int] = None):
        if not slots:
            raise ValueError("a certificate template needs at least one unknown slot")
        ring = target.ring
        if ring.kind == 'ZZ':
            target = target.map_coefficients(QQ, Fraction)
            slots = [Slot(s.name, s.factor.map_coefficients(QQ, Fraction), s.degree, s.number_field)
                     for s in slots]
            ring = QQ
        if ring.kind not in ('QQ', 'NF', 'CYC'):
            raise ValueError(f"templates must be over QQ or a number field, got {ring.tag}")
        if not target.is_homogeneous():
            raise ValueError("target polynomial must be homogeneous")
        if target.is_zero():
            sized = [s for s in slots if s.degree >= 0]
            deg_t = sized[0].factor.total_degree() + sized[0].degree if sized else 0
        else:
            deg_t = target.total_degree()
        for s in slots:
            if s.factor.ring != ring or s.factor.nvars != target.nvars:
                raise ValueError(f"slot {s.name} does not match the target's ring and arity")
            if s.factor.is_zero() or not s.factor.is_homogeneous():
                raise ValueError(f"known factor of slot {s.name} must be nonzero homogeneous")
            if s.degree >= 0 and s.factor.total_degree() + s.degree != deg_t:
                raise ValueError(
                    f"slot {s.name}: {s.factor.total_degree()} + {s.degree} != deg(T) = {deg_t}")
        if ring.kind in ('NF', 'CYC'):
            if root is None:
                raise ValueError(f"templates over {ring.tag} need a root of the defining polynomial mod p")
            if sum(c * root ** i for i, c in enumerate(ring.field.minpoly)) % prime:
                raise ValueError(f"{root} is not a root of the defining polynomial mod {prime}")
        self.ring = ring
        self.nvars = target.nvars
        self.order = target.order
        self.target = target
        self.slots = list(slots)
        self.prime = prime
        self.root = root
        self.degree = deg_t
        self._roots: Dict[int, Residue] = {}
        self._build_system()
        self._solvers: Dict[tuple, linalg.LinearSolver] = {}

    # -- construction helpers -----------------------------------------

    @classmethod
    def from_generators(cls, target: Poly, generators: Sequence[Poly], prime: int,
                        slot_degrees: Optional[Sequence[Optional[int]]] = None,
                        known: Sequence[Tuple[Poly, int, bool]] = (),
                        nf_slots: Sequence[int] = (), root: Optional[int] = None
                        ) -> 'CertificateTemplate':
        deg_t = target.total_degree()
        slots = []
        for i, g in enumerate(generators):
            d = slot_degrees[i] if slot_degrees and slot_degrees[i] is not None else deg_t - g.total_degree()
            slots.append(Slot(f"H{i + 1}", g, d, i in nf_slots))
        for j, (factor, d, nf) in enumerate(known):
            slots.append(Slot(f"R{j + 1}", factor, d, nf))
        return cls(target, slots, prime, root)

    def _build_system(self):
        rows = monomials_of_degree(self.nvars, self.degree, self.order)
        self.row_index = {m: i for i, m in enumerate(rows)}
        self.rows = rows
        self.columns: List[Tuple[int, tuple]] = []
        self.col_entries: List[List[Tuple[int, object]]] = []
        for si, s in enumerate(self.slots):
            if s.degree < 0:
                continue
            for u in monomials_of_degree(self.nvars, s.degree, self.order):
                entries = []
                for m, c in s.factor.terms():
                    mono = tuple(a + b for a, b in zip(m, u))
                    entries.append((self.row_index[mono], c))
                self.columns.append((si, u))
                self.col_entries.append(entries)
        self.rhs: Dict[int, object] = {}
        for m, c in self.target.terms():
            if m not in self.row_index:
                raise ValueError("target monomial outside the identity's degree")
            self.rhs[self.row_index[m]] = c

    @property
    def unknowns(self) -> int:
        return len(self.columns)

    def root_at(self, exponent: int) -> Optional[Residue]:
        if self.root is None:
            return None
        if exponent not in self._roots:
            self._roots[exponent] = hensel_root_lift(self.ring.field.minpoly, self.prime,
                                                     self.root, exponent)
        return self._roots[exponent]

    def embed(self, c, exponent: int) -> int:
        """Integer representative of a template coefficient mod p^exponent."""
        if isinstance(c, NumberFieldElement):
            return nf_embed_mod_pk(c, self.prime, exponent, self.root_at(exponent)).value
        return Residue.from_rational(c, self.prime, exponent).value

    def solver(self, columns: Optional[Sequence[int]] = None) -> linalg.LinearSolver:
        """Solver over F_p for the full system, or for the given columns only."""
        key = tuple(range(self.unknowns)) if columns is None else tuple(columns)
        if key not in self._solvers:
            p = self.prime
            a = [[0] * len(key) for _ in self.rows]
            for jj, j in enumerate(key):
                for i, c in self.col_entries[j]:
                    a[i][jj] = (a[i][jj] + self.embed(c, 1)) % p
            self._solvers[key] = linalg.LinearSolver(GF(p), a)
        return self._solvers[key]

    def residual_vector(self, values: Sequence[int], exponent: int) -> List[int]:
        """b - A x mod p^exponent, one entry per target-degree monomial."""
        m = self.prime ** exponent
        r = [0] * len(self.rows)
        for i, c in self.rhs.items():
            r[i] = self.embed(c, exponent)
        for j, entries in enumerate(self.col_entries):
            x = values[j]
            if x:
                for i, c in entries:
                    r[i] -= self.embed(c, exponent) * x
        return [v % m for v in r]

    def slot_polys(self, values: Sequence, ring: Ring) -> List[Poly]:
        """Multiplier polynomials from a flat coefficient vector."""
        terms: List[Dict[tuple, object]] = [{} for _ in self.slots]
        for (si, u), v in zip(self.columns, values):
            terms[si][u] = v
        return [Poly(ring, self.nvars, t, self.order) for t in terms]


def load_template(path, prime: Optional[int] = None) -> CertificateTemplate:
    return parse_template(Path(path).read_text(encoding='utf-8'), prime)


_SLOT_RE = re.compile(r'^slot\s+degree\s*=\s*(-?\d+)(\s+nf)?\s*$')
_KNOWN_RE = re.compile(r'^knownfactor:\s*(.+?)\s+degree\s*=\s*(\d+)(\s+nf)?\s*$')


def parse_template(text: str, prime: Optional[int] = None) -> CertificateTemplate:
    ideal_lines: List[str] = []
    target_src = None
    slot_specs: List[Tuple[int, bool]] = []
    known_src: List[Tuple[int, str, int, bool]] = []
    file_prime = None
    root = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            ideal_lines.append('')
            continue
        if line.startswith('prime '):
            file_prime = _int_field(line, lineno)
            ideal_lines.append('')
        elif line.startswith('root '):
            root = _int_field(line, lineno)
            ideal_lines.append('')
        elif line.startswith('target:'):
            target_src = (lineno, line[len('target:'):].strip())
            ideal_lines.append('')
        elif line.startswith('slot'):
            m = _SLOT_RE.match(line)
            if not m:
                raise ParseError(f"bad slot line {line!r}", line=lineno)
            slot_specs.append((int(m.group(1)), bool(m.group(2))))
            ideal_lines.append('')
        elif line.startswith('knownfactor:'):
            m = _KNOWN_RE.match(line)
            if not m:
                raise ParseError(f"bad knownfactor line {line!r}", line=lineno)
            known_src.append((lineno, m.group(1), int(m.group(2)), bool(m.group(3))))
            ideal_lines.append('')
        else:
            ideal_lines.append(line)
    ideal = parse_ideal('\n'.join(ideal_lines))
    if target_src is None:
        raise ParseError("template has no 'target:' line")
    p = prime or file_prime
    if p is None:
        raise ParseError("no prime given (template 'prime' line or --prime)")
    if len(slot_specs) > len(ideal.generators):
        raise ParseError(f"{len(slot_specs)} slot lines for {len(ideal.generators)} generators")
    target = _parse_line(target_src, ideal)
    known = [(_parse_line((ln, src), ideal), d, nf) for ln, src, d, nf in known_src]
    degrees = [s[0] for s in slot_specs] + [None] * (len(ideal.generators) - len(slot_specs))
    nf_slots = [i for i, s in enumerate(slot_specs) if s[1]]
    try:
        return CertificateTemplate.from_generators(target, ideal.generators, p, degrees,
                                                   known, nf_slots, root)
    except ValueError as exc:
        raise ParseError(str(exc))


def _int_field(line: str, lineno: int) -> int:
    try:
        return int(line.split(None, 1)[1])
    except (IndexError, ValueError):
        raise ParseError(f"expected an integer in {line!r}", line=lineno)


def _parse_line(src: Tuple[int, str], ideal: IdealBasis) -> Poly:
    lineno, text = src
    try:
        return Poly.parse(text, ideal.ring, ideal.nvars, ideal.order)
    except ValueError as exc:
        raise ParseError(str(exc), line=lineno)


# ──────────────────────────────────────────────────────────────────
# Solutions
# ──────────────────────────────────────────────────────────────────

@dataclass
class CertificateSolution:
    template: CertificateTemplate
    exponent: int
    values: List[int]

    @property
    def modulus(self) -> int:
        return self.template.prime ** self.exponent

    def multipliers(self) -> List[Poly]:
        t = self.template
        return t.slot_polys(self.values, zmod(t.prime, self.exponent))

    def truncate(self, exponent: int) -> 'CertificateSolution':
        if exponent > self.exponent:
            raise ValueError(f"cannot truncate exponent {self.exponent} up to {exponent}")
        m = self.template.prime ** exponent
        return CertificateSolution(self.template, exponent, [v % m for v in self.values])

    def support(self) -> List[int]:
        return [j for j, v in enumerate(self.values) if v]

    def format(self) -> str:
        lines = [f"# exponent {self.exponent} (mod {self.template.prime}^{self.exponent})"]
        for slot, poly in zip(self.template.slots, self.multipliers()):
            lines.append(f"{slot.name} = {poly.format()}")
        return '\n'.join(lines)


def certificate_solve_mod_p(tmpl: CertificateTemplate) -> Optional[CertificateSolution]:
    """Particular solution over F_p (free coefficients zero), or None."""
    b = tmpl.residual_vector([0] * tmpl.unknowns, 1)
    x = tmpl.solver().solve(b)
    if x is None:
        return None
    return CertificateSolution(tmpl, 1, list(x))


def certificate_lift(sol: CertificateSolution, steps: int) -> CertificateSolution:
    """Lift a solution mod p^k to p^(k+steps) one p-adic digit at a time.

    Corrections are solved on the columns that are nonzero mod p only; every
    other coefficient keeps its input value at every exponent.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    tmpl = sol.template
    p = tmpl.prime
    support = [j for j, v in enumerate(sol.values) if v % p]
    solver = tmpl.solver(support)
    values = list(sol.values)
    k = sol.exponent
    for step in range(1, steps + 1):
        pk = p ** k
        r = tmpl.residual_vector(values, k + 1)
        if any(v % pk for v in r):
            raise InconsistentDataError(f"input is not a solution mod {p}^{k}")
        y = solver.solve([(v // pk) % p for v in r])
        if y is None:
            raise LiftObstructedError(
                f"lift obstructed at step {step} (exponent {k} -> {k + 1})", step=step)
        m = pk * p
        for j, c in zip(support, y):
            values[j] = (values[j] + pk * c) % m
        k += 1
    return CertificateSolution(tmpl, k, values)


def residual(tmpl: CertificateTemplate, sol: CertificateSolution) -> Poly:
    """T - sum U_i K_i reduced mod p^k, as a polynomial over Z/p^k."""
    ring = zmod(tmpl.prime, sol.exponent)
    r = tmpl.residual_vector(sol.values, sol.exponent)
    return Poly(ring, tmpl.nvars, {tmpl.rows[i]: v for i, v in enumerate(r) if v}, tmpl.order)


@dataclass
class ReconstructionResult:
    ok: bool
    multipliers: Optional[List[Poly]] = None
    failing_slot: Optional[str] = None
    verified: bool = False
    message: str = ''

    def to_json(self) -> dict:
        return {
            'ok': self.ok,
            'verified': self.verified,
            'failing_slot': self.failing_slot,
            'message': self.message,
            'multipliers': [m.format() for m in self.multipliers] if self.multipliers else None,
        }


def certificate_reconstruct(sol: CertificateSolution, numerator_bound: int,
                            denominator_bound: int, height: Optional[int] = None
                            ) -> ReconstructionResult:
    """Recover exact multipliers and check the identity exactly."""
    tmpl = sol.template
    p, k = tmpl.prime, sol.exponent
    ring = tmpl.ring
    exact_values: List[object] = []
    for (si, _), v in zip(tmpl.columns, sol.values):
        slot = tmpl.slots[si]
        res = Residue(p, k, v)
        if slot.number_field and ring.kind in ('NF', 'CYC'):
            x = element_from_padic(res, ring.field, tmpl.root_at(k),
                                   height or max(numerator_bound, denominator_bound))
        else:
            q = rational_reconstruct(res, numerator_bound, denominator_bound)
            x = None if q is None else ring.coerce(q)
        if x is None:
            return ReconstructionResult(False, failing_slot=slot.name,
                                        message=f"coefficient of {slot.name} not recognised")
        exact_values.append(x)
    multipliers = tmpl.slot_polys(exact_values, ring)
    rhs = Poly.zero(ring, tmpl.nvars, tmpl.order)
    for slot, u in zip(tmpl.slots, multipliers):
        rhs = rhs + slot.factor * u
    if rhs != tmpl.target:
        return ReconstructionResult(False, multipliers, None, False,
                                    "reconstructed multipliers do not satisfy the identity")
    return ReconstructionResult(True, multipliers, None, True, "identity verified exactly")
