#!/usr/bin/env python3
"""
FPP Kernels CLI

One entry point for every kernel, plus line-oriented pipeline manifests that
replay a sequence of commands from a single seed.

Usage:
    python3 cli.py char-table --group g648 [--dixon-prime q] [--out table.csv]
    python3 cli.py decompose71 [--table table.csv] [--subgroups G72,G72hat]
    python3 cli.py ledger
    python3 cli.py split --total 80 --lefschetz 8
    python3 cli.py recognize --padic v,p,k --deg d --height H
    python3 cli.py recognize --float 1.41421356... --deg d --digits N
    python3 cli.py lll-shrink <matrix-file>
    python3 cli.py lift-certificate <template-file> --prime p --steps k [--reconstruct N D]
    python3 cli.py hilbert <ideal-file> [--order grevlex|lex] [--mod p]
    python3 cli.py verify-fpp <ideal-file> --mod p [--seed s] [--minors 3]
    python3 cli.py search-cuts <ideal-file> --mod p [--invariant <matrix-file>] [--budget N]
    python3 cli.py reynolds --rep <matrix-file>
    python3 cli.py run <manifest> [--force] [--out-dir DIR]

Every command accepts --json (machine-readable stdout) and --quiet (no
progress on stderr).

Manifest format:

    # globals before the first step
    seed = 0
    prime = 7

    step verify-fpp
    ideal = fixtures/conic_gf7.ideal
    expected = 1,2
    out = conic.json

Inputs are resolved against the working directory, or against the output
directory when an earlier step declares them as its `out`. Outputs land in the
output directory (FPP_OUTPUT_DIR, default ./output) and are never overwritten
without --force.

Exit codes:
  0  success / verification pass
  1  check failed or kernel error
  2  bad arguments / missing input file
"""

import argparse
import json
import sys
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

from config import DEFAULT_PRECISION, DEFAULT_SEED, get_settings, load_env
from errors import ConfigError, KernelError, ManifestError, ParseError
from exact import Residue, cyclotomic_field
from geom import eigenspace_split, h0_ledger, matrix_trace, reynolds_project
from groebner import buchberger, hilbert
from grouprep import (
    character_table_dixon,
    decompose_71,
    decompose_regular_restrictions,
    group_by_name,
    is_regular_character,
    load_table,
    match_tables,
    restrict_character,
    total_degree,
    trivial_character,
)
from lattice import Recognition, minpoly_from_float, minpoly_from_padic, shrink_basis
from lift import (
    certificate_lift,
    certificate_reconstruct,
    certificate_solve_mod_p,
    load_template,
    residual,
)
from mpoly import load_ideal, reduce_mod_p
from reports import render_ledger, render_pipeline, render_recognition
from verify import FPP_HILBERT, load_matrix, run_verification, search_singular_cuts

Options = Dict[str, object]


# ──────────────────────────────────────────────────────────────────
# Step plumbing
# ──────────────────────────────────────────────────────────────────

@dataclass
class StepContext:
    """Defaults and path resolution shared by the steps of one run."""
    seed: int = DEFAULT_SEED
    precision: int = DEFAULT_PRECISION
    prime: Optional[int] = None
    dixon_prime: Optional[int] = None
    base_dir: Path = field(default_factory=Path)
    outputs: Dict[str, Path] = field(default_factory=dict)
    quiet: bool = False

    def resolve(self, value) -> Path:
        if str(value) in self.outputs:
            return self.outputs[str(value)]
        path = Path(str(value))
        return path if path.is_absolute() else self.base_dir / path

    def info(self, message: str):
        if not self.quiet:
            print(f"→ {message}", file=sys.stderr)


@dataclass
class StepOutcome:
    ok: bool
    data: dict
    text: str
    artifact: Optional[str] = None    # file body for non-JSON outputs (CSV tables)
    message: str = ''


@dataclass(frozen=True)
class CommandSpec:
    name: str
    runner: Callable[[Options, StepContext], StepOutcome]
    keys: FrozenSet[str]
    int_keys: FrozenSet[str] = frozenset()
    input_keys: FrozenSet[str] = frozenset()


def _int(opts: Options, key: str, default: Optional[int] = None) -> Optional[int]:
    value = opts.get(key)
    if value is None or value == '':
        return default
    if isinstance(value, int):
        return value
    try:
        return int(str(value).strip())
    except ValueError:
        raise ParseError(f"{key} must be an integer, got {value!r}")


def _require(opts: Options, key: str):
    if opts.get(key) in (None, ''):
        raise ParseError(f"missing required option '{key}'")
    return opts[key]


def _ints(value, count: Optional[int] = None) -> List[int]:
    if isinstance(value, (list, tuple)):
        parts = [str(v) for v in value]
    else:
        parts = str(value).replace(',', ' ').split()
    try:
        out = [int(x) for x in parts]
    except ValueError:
        raise ParseError(f"expected integers, got {value!r}")
    if count is not None and len(out) != count:
        raise ParseError(f"expected {count} integers, got {value!r}")
    return out


def _names(value) -> List[str]:
    if not value:
        return []
    if isinstance(value, (list, tuple)):
        return list(value)
    return [x for x in str(value).replace(',', ' ').split()]


def _flag(opts: Options, key: str) -> bool:
    value = opts.get(key)
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in ('1', 'true', 'yes', 'on') if value is not None else False


def _multiset(values) -> str:
    return ' '.join(f"{v}^{n}" for v, n in sorted(Counter(values).items()))


def _load_ideal(opts: Options, ctx: StepContext, prime_key: Optional[str] = None):
    ideal = load_ideal(ctx.resolve(_require(opts, 'ideal')))
    p = _int(opts, prime_key, ctx.prime) if prime_key else _int(opts, 'mod')
    if p is not None and not (ideal.ring.kind == 'ZMOD' and ideal.ring.prime == p
                              and ideal.ring.exponent == 1):
        ideal = reduce_mod_p(ideal, p)
    return ideal


# ──────────────────────────────────────────────────────────────────
# Commands
# ──────────────────────────────────────────────────────────────────

def run_char_table(opts: Options, ctx: StepContext) -> StepOutcome:
    group = group_by_name(str(opts.get('group') or 'g648'))
    ctx.info(f"Dixon-Schneider on {group.name} ({len(group.classes)} classes)")
    table = character_table_dixon(group, _int(opts, 'dixon_prime', ctx.dixon_prime))
    defects = table.row_orthogonality_defects() + table.column_orthogonality_defects()
    degrees = table.degrees
    data = {
        'group': group.name,
        'order': group.order,
        'classes': len(table),
        'dixon_prime': table.dixon_prime,
        'conductor': table.conductor,
        'degrees': degrees,
        'sum_of_squares': sum(d * d for d in degrees),
        'orthogonal': not defects,
    }
    text = (f"{group.name}: {len(table)} classes over F_{table.dixon_prime}, "
            f"degrees {_multiset(degrees)}, sum of squares {data['sum_of_squares']}")
    return StepOutcome(not defects, data, text, artifact=table.to_data().to_csv(),
                       message='' if not defects else f"{len(defects)} orthogonality defects")


def run_decompose71(opts: Options, ctx: StepContext) -> StepOutcome:
    group = group_by_name(str(opts.get('group') or 'g648'))
    table = character_table_dixon(group, _int(opts, 'dixon_prime', ctx.dixon_prime))
    names = _names(opts.get('subgroups'))
    if names:
        subs = [group.named_subgroup(n) for n in names]
        ctx.info(f"Searching decompositions regular on {', '.join(names)}")
        sols = decompose_regular_restrictions(table, subs, limit=2)
        if len(sols) != 1:
            found = 'no' if not sols else 'more than one'
            return StepOutcome(False, {'group': group.name, 'subgroups': names, 'solutions': len(sols)},
                               f"{found} decomposition regular on {', '.join(names)}",
                               message=f"{found} decomposition")
        mults = list(sols[0])
    else:
        names = ['G72', 'G72hat']
        subs = [group.named_subgroup(n) for n in names]
        mults = decompose_71(table)

    chi = table.combination(mults) + trivial_character(group)
    regular = {n: is_regular_character(restrict_character(chi, s)) for n, s in zip(names, subs)}

    labels = [f"chi_{i + 1}" for i in range(len(table))]
    shown = list(mults)
    conjugated = False
    table_path = opts.get('table')
    if table_path:
        printed = load_table(ctx.resolve(table_path))
        match = match_tables(table.to_data(), printed)
        if match is None:
            return StepOutcome(False, {'table': str(table_path)},
                               f"{table_path} does not match the computed table",
                               message='table mismatch')
        labels = printed.row_labels
        shown = [0] * len(mults)
        for i, m in enumerate(mults):
            shown[match.rows[i]] = m
        conjugated = match.conjugated

    support = [labels[j] for j, m in enumerate(shown) if m]
    degree = total_degree(table, mults)
    data = {
        'group': group.name,
        'subgroups': names,
        'multiplicities': shown,
        'support': support,
        'total_degree': degree,
        'regular': regular,
        'table': str(table_path) if table_path else None,
        'conjugated': conjugated,
    }
    text = (f"{' + '.join(support)}  (degree {degree}); "
            + ', '.join(f"{n} {'regular' if ok else 'NOT regular'}" for n, ok in regular.items()))
    ok = all(regular.values())
    return StepOutcome(ok, data, text, message='' if ok else 'restriction not regular')


def run_ledger(opts: Options, ctx: StepContext) -> StepOutcome:
    ledger = h0_ledger()
    return StepOutcome(True, ledger.to_json(), render_ledger(ledger))


def run_split(opts: Options, ctx: StepContext) -> StepOutcome:
    total = _int(opts, 'total')
    lsum = _int(opts, 'lefschetz')
    if total is None or lsum is None:
        raise ParseError("split needs total and lefschetz")
    split = eigenspace_split(total, lsum, real_structure=True)
    return StepOutcome(True, {'total': total, 'lefschetz': lsum, 'split': list(split)},
                       ' '.join(str(d) for d in split))


def run_recognize(opts: Options, ctx: StepContext) -> StepOutcome:
    deg = _int(opts, 'deg')
    if deg is None:
        raise ParseError("recognize needs deg")
    if opts.get('padic'):
        v, p, k = _ints(opts['padic'], 3)
        height = _int(opts, 'height')
        if height is None:
            raise ParseError("p-adic recognition needs height")
        rec = Recognition(minpoly_from_padic(Residue(p, k, v), deg, height, force=_flag(opts, 'force')))
    elif opts.get('float'):
        digits = _int(opts, 'digits', ctx.precision)
        ctx.info(f"LLL recognition, degree <= {deg}, {digits} digits")
        rec = minpoly_from_float(str(opts['float']), deg, digits)
    else:
        raise ParseError("recognize needs padic or float")

    expect = opts.get('expect')
    found = rec.candidate.format() if rec.candidate else None
    ok = rec.ok and (not expect or found == ' '.join(str(expect).split()))
    data = {
        'candidate': rec.candidate.to_json() if rec.candidate else None,
        'rejected': [c.to_json() for c in rec.rejected],
        'expected': expect or None,
    }
    message = ''
    if not rec.ok:
        message = 'no relation accepted'
    elif not ok:
        message = f"found {found}, expected {expect}"
    return StepOutcome(ok, data, render_recognition(rec), message=message)


def run_lll_shrink(opts: Options, ctx: StepContext) -> StepOutcome:
    rows = load_matrix(ctx.resolve(_require(opts, 'matrix')))
    before = max((abs(x) for r in rows for x in r), default=0)
    out = shrink_basis(rows)
    data = {'rows': out.rows, 'transform': out.transform,
            'max_norm_before': before, 'max_norm_after': out.max_norm()}
    text = '\n'.join(' '.join(str(x) for x in r) for r in out.rows)
    return StepOutcome(True, data, text)


def run_lift_certificate(opts: Options, ctx: StepContext) -> StepOutcome:
    tmpl = load_template(ctx.resolve(_require(opts, 'template')), _int(opts, 'prime', ctx.prime))
    steps = _int(opts, 'steps', 0)
    ctx.info(f"Solving {tmpl.unknowns} unknowns mod {tmpl.prime}")
    sol = certificate_solve_mod_p(tmpl)
    if sol is None:
        return StepOutcome(False, {'prime': tmpl.prime, 'solved': False},
                           f"no solution mod {tmpl.prime}", message='inconsistent system mod p')
    sol = certificate_lift(sol, steps)
    res_zero = residual(tmpl, sol).is_zero()
    data = {
        'prime': tmpl.prime,
        'exponent': sol.exponent,
        'solved': True,
        'residual_zero': res_zero,
        'multipliers': [m.format() for m in sol.multipliers()],
    }
    text = sol.format()
    ok = res_zero
    bounds = opts.get('reconstruct')
    if bounds:
        num, den = _ints(bounds, 2)
        rr = certificate_reconstruct(sol, num, den)
        data['reconstruction'] = rr.to_json()
        text += f"\n# reconstruction: {rr.message}"
        if rr.ok:
            text += '\n' + '\n'.join(f"{s.name} = {m.format()}"
                                     for s, m in zip(tmpl.slots, rr.multipliers))
        ok = ok and rr.ok
    return StepOutcome(ok, data, text, message='' if ok else 'certificate check failed')


def run_hilbert(opts: Options, ctx: StepContext) -> StepOutcome:
    ideal = _load_ideal(opts, ctx)
    order = opts.get('order') or None
    gb = buchberger(ideal, order, degree_cap=_int(opts, 'degree_cap'))
    data = hilbert(gb)
    text = '\n'.join([
        f"numerator:        ({data.format_numerator()}) / (1 - t)^{data.denominator_exponent}",
        f"polynomial:       {data.format_polynomial()}",
        f"regularity index: {data.regularity_index}",
    ])
    return StepOutcome(True, {'digest': ideal.digest(), 'basis_size': len(gb.polys), **data.to_json()}, text)


def _expected(value):
    if value is None or value == '' or value == 'fpp':
        return FPP_HILBERT
    if value == 'none':
        return None
    try:
        return [Fraction(x) for x in str(value).split(',')]
    except ValueError:
        raise ParseError(f"expected must be 'fpp', 'none' or c0,c1,..., got {value!r}")


def run_verify_fpp(opts: Options, ctx: StepContext) -> StepOutcome:
    p = _int(opts, 'mod', ctx.prime)
    if p is None:
        raise ParseError("verify-fpp needs a prime (mod)")
    ideal = load_ideal(ctx.resolve(_require(opts, 'ideal')))
    seed = _int(opts, 'seed', ctx.seed)
    ctx.info(f"Verifying {ideal.digest()} over F_{p}, seed {seed}")
    report = run_verification(ideal, p, seed=seed, minors=_int(opts, 'minors', 3),
                              expected=_expected(opts.get('expected')),
                              expected_dim=_int(opts, 'dim'), probes=_int(opts, 'probes', 1),
                              degree_cap=_int(opts, 'degree_cap'))
    ok = report.verdict == 'pass'
    return StepOutcome(ok, report.to_json(), report.render(), message='' if ok else 'verification failed')


def run_search_cuts(opts: Options, ctx: StepContext) -> StepOutcome:
    ideal = _load_ideal(opts, ctx, prime_key='mod')
    inv = opts.get('invariant')
    invariance = [load_matrix(ctx.resolve(inv))] if inv else None
    result = search_singular_cuts(ideal, invariance, _int(opts, 'budget'),
                                  expected_dim=_int(opts, 'dim'), seed=_int(opts, 'seed', ctx.seed))
    if result.partial:
        ctx.info(f"⚠️  budget exhausted after {result.examined} hyperplanes")
    lines = [' '.join(str(c) for c in cut) for cut in result.cuts]
    lines.append(f"# {len(result.cuts)} singular cuts among {result.examined} hyperplanes"
                 + (' (partial)' if result.partial else ''))
    return StepOutcome(True, result.to_json(), '\n'.join(lines))


def load_rep(path) -> list:
    """Matrices separated by blank lines; an optional `conductor N` line allows w entries."""
    field_ = None
    mats: List[list] = []
    current: List[list] = []
    with open(path) as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.split('#', 1)[0].strip()
            if line.startswith('conductor'):
                field_ = cyclotomic_field(_ints(line.split(None, 1)[1:], 1)[0])
                continue
            if not line:
                if current:
                    mats.append(current)
                    current = []
                continue
            try:
                row = [field_.parse(x) if field_ else Fraction(x) for x in line.split()]
            except (ValueError, ParseError):
                raise ParseError(f"bad matrix row {line!r}", line=lineno)
            current.append([int(x) if isinstance(x, Fraction) and x.denominator == 1 else x
                            for x in row])
    if current:
        mats.append(current)
    return mats


def run_reynolds(opts: Options, ctx: StepContext) -> StepOutcome:
    rep = load_rep(ctx.resolve(_require(opts, 'rep')))
    proj = reynolds_project(rep)
    rank = matrix_trace(proj)
    data = {
        'group_order': len(rep),
        'dimension': len(proj),
        'invariant_dimension': str(rank),
        'projector': [[str(x) for x in row] for row in proj],
    }
    text = '\n'.join(' '.join(str(x) for x in row) for row in proj)
    text += f"\n# invariant subspace dimension {rank}"
    return StepOutcome(True, data, text)


COMMANDS: Dict[str, CommandSpec] = {spec.name: spec for spec in [
    CommandSpec('char-table', run_char_table, frozenset({'group', 'dixon_prime', 'out'}),
                frozenset({'dixon_prime'})),
    CommandSpec('decompose71', run_decompose71,
                frozenset({'group', 'dixon_prime', 'table', 'subgroups', 'out'}),
                frozenset({'dixon_prime'}), frozenset({'table'})),
    CommandSpec('ledger', run_ledger, frozenset({'out'})),
    CommandSpec('split', run_split, frozenset({'total', 'lefschetz', 'out'}),
                frozenset({'total', 'lefschetz'})),
    CommandSpec('recognize', run_recognize,
                frozenset({'padic', 'float', 'deg', 'height', 'digits', 'force', 'expect', 'out'}),
                frozenset({'deg', 'height', 'digits'})),
    CommandSpec('lll-shrink', run_lll_shrink, frozenset({'matrix', 'out'}),
                input_keys=frozenset({'matrix'})),
    CommandSpec('lift-certificate', run_lift_certificate,
                frozenset({'template', 'prime', 'steps', 'reconstruct', 'out'}),
                frozenset({'prime', 'steps'}), frozenset({'template'})),
    CommandSpec('hilbert', run_hilbert, frozenset({'ideal', 'order', 'mod', 'degree_cap', 'out'}),
                frozenset({'mod', 'degree_cap'}), frozenset({'ideal'})),
    CommandSpec('verify-fpp', run_verify_fpp,
                frozenset({'ideal', 'mod', 'seed', 'minors', 'expected', 'dim', 'probes',
                           'degree_cap', 'out'}),
                frozenset({'mod', 'seed', 'minors', 'dim', 'probes', 'degree_cap'}),
                frozenset({'ideal'})),
    CommandSpec('search-cuts', run_search_cuts,
                frozenset({'ideal', 'mod', 'invariant', 'budget', 'dim', 'seed', 'out'}),
                frozenset({'mod', 'budget', 'dim', 'seed'}), frozenset({'ideal', 'invariant'})),
    CommandSpec('reynolds', run_reynolds, frozenset({'rep', 'out'}), input_keys=frozenset({'rep'})),
]}


# ──────────────────────────────────────────────────────────────────
# Manifests
# ──────────────────────────────────────────────────────────────────

GLOBAL_KEYS = frozenset({'seed', 'precision', 'prime', 'dixon_prime', 'output_dir'})
INT_GLOBALS = frozenset({'seed', 'precision', 'prime', 'dixon_prime'})


@dataclass
class ManifestStep:
    index: int                     # 1-based position in the pipeline
    command: str
    options: Dict[str, str]
    line: int

    @property
    def output(self) -> Optional[str]:
        return self.options.get('out')


@dataclass
class PipelineManifest:
    name: str
    steps: List[ManifestStep] = field(default_factory=list)
    settings: Dict[str, str] = field(default_factory=dict)


def _check_int(key: str, value: str, lineno: int):
    try:
        int(value)
    except ValueError:
        raise ManifestError(f"{key} must be an integer, got {value!r}", line=lineno)


def parse_manifest(text: str, name: str = '<manifest>') -> PipelineManifest:
    manifest = PipelineManifest(name)
    outputs: Dict[str, int] = {}
    current: Optional[ManifestStep] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        head = line.split()
        if head[0] == 'step':
            if len(head) != 2:
                raise ManifestError("expected 'step <command>'", line=lineno)
            if head[1] not in COMMANDS:
                raise ManifestError(f"unknown command {head[1]!r}", line=lineno)
            current = ManifestStep(len(manifest.steps) + 1, head[1], {}, lineno)
            manifest.steps.append(current)
            continue

        key, sep, value = line.partition('=')
        key = key.strip().replace('-', '_')
        value = value.strip()
        if not sep or not key or not value:
            raise ManifestError(f"expected 'key = value', got {line!r}", line=lineno)

        if current is None:
            if key not in GLOBAL_KEYS:
                raise ManifestError(f"unknown global setting {key!r}", line=lineno)
            if key in INT_GLOBALS:
                _check_int(key, value, lineno)
            manifest.settings[key] = value
            continue

        spec = COMMANDS[current.command]
        if key == 'seed':
            raise ManifestError("seed is set once, before the first step", line=lineno)
        if key not in spec.keys:
            raise ManifestError(f"{current.command} takes no option {key!r}", line=lineno)
        if key in current.options:
            raise ManifestError(f"{key!r} given twice in step {current.index}", line=lineno)
        if key in spec.int_keys:
            _check_int(key, value, lineno)
        if key == 'out':
            if value in outputs:
                raise ManifestError(
                    f"output {value} already declared by step {outputs[value]}", line=lineno)
            outputs[value] = current.index
        current.options[key] = value
    return manifest


def load_manifest(path) -> PipelineManifest:
    path = Path(path)
    return parse_manifest(path.read_text(encoding='utf-8'), path.name)


@dataclass
class StepRecord:
    index: int
    name: str
    ok: bool
    output: Optional[str] = None
    message: str = ''
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {'index': self.index, 'name': self.name, 'ok': self.ok,
                'output': self.output, 'message': self.message, 'data': self.data}


@dataclass
class PipelineReport:
    manifest: str
    steps: List[StepRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.steps)

    @property
    def failed_index(self) -> Optional[int]:
        return next((s.index for s in self.steps if not s.ok), None)

    def to_json(self) -> dict:
        return {'manifest': self.manifest, 'ok': self.ok, 'failed_index': self.failed_index,
                'steps': [s.to_json() for s in self.steps]}

    def render(self) -> str:
        return render_pipeline(self)


def _write_output(target: Path, outcome: StepOutcome):
    target.parent.mkdir(parents=True, exist_ok=True)
    if target.suffix == '.json':
        body = json.dumps(outcome.data, indent=2) + '\n'
    else:
        body = outcome.artifact if outcome.artifact is not None else outcome.text + '\n'
    target.write_text(body, encoding='utf-8')


def _execute(step: ManifestStep, ctx: StepContext, out_root: Path, force: bool) -> StepRecord:
    spec = COMMANDS[step.command]
    record = StepRecord(step.index, step.command, False, step.output)
    for key in sorted(spec.input_keys & step.options.keys()):
        path = ctx.resolve(step.options[key])
        if not path.exists():
            record.message = f"input not found: {path}"
            return record
    target = None
    if step.output:
        target = out_root / step.output
        try:
            target.resolve().relative_to(out_root.resolve())
        except ValueError:
            record.message = f"output {step.output} escapes {out_root}"
            return record
        if target.exists() and not force:
            record.message = f"refusing to overwrite {target} (use --force)"
            return record
    try:
        outcome = spec.runner(dict(step.options), ctx)
    except (KernelError, ValueError, KeyError) as e:
        record.message = str(e).strip("'")
        return record
    if target is not None:
        _write_output(target, outcome)
    record.ok = outcome.ok
    record.message = outcome.message
    record.data = outcome.data
    return record


def run_pipeline(manifest: PipelineManifest, base_dir=None, output_dir=None,
                 force: bool = False, settings=None,
                 quiet: bool = True) -> Tuple[int, PipelineReport]:
    """Run steps in order, stopping at the first failure; returns (exit code, report)."""
    settings = settings or get_settings()
    g = manifest.settings
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    out_root = Path(output_dir or g.get('output_dir') or settings.output_dir)
    if not out_root.is_absolute():
        out_root = base / out_root

    ctx = StepContext(
        seed=int(g.get('seed', settings.seed)),
        precision=int(g.get('precision', settings.precision)),
        prime=int(g['prime']) if 'prime' in g else None,
        dixon_prime=int(g['dixon_prime']) if 'dixon_prime' in g else settings.dixon_prime,
        base_dir=base,
        outputs={s.output: out_root / s.output for s in manifest.steps if s.output},
        quiet=quiet,
    )
    report = PipelineReport(manifest.name)
    for step in manifest.steps:
        ctx.info(f"[{step.index}] {step.command}")
        record = _execute(step, ctx, out_root, force)
        report.steps.append(record)
        if not ctx.quiet:
            mark = '✓' if record.ok else '✗'
            print(f"{mark} [{step.index}] {step.command}"
                  + (f": {record.message}" if record.message else ''), file=sys.stderr)
        if not record.ok:
            break
    return (0 if report.ok else 1), report


# ──────────────────────────────────────────────────────────────────
# CLI
# ──────────────────────────────────────────────────────────────────

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='Machine-readable output')
    common.add_argument('--quiet', '-q', action='store_true', help='No progress on stderr')
    common.add_argument('--out', help='Write the result (.json as JSON, otherwise text)')

    parser = argparse.ArgumentParser(
        description="Exact kernels for fake projective plane computations",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Environment Variables:
  FPP_PRECISION     Default working precision in decimal digits (100)
  FPP_SEED          Default seed for probabilistic steps (0)
  FPP_DIXON_PRIME   Override of the Dixon-Schneider prime
  FPP_OUTPUT_DIR    Directory for pipeline outputs (output)
        """)
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('char-table', parents=[common], help='Dixon-Schneider character table')
    p.add_argument('--group', default='g648')
    p.add_argument('--dixon-prime', type=int)

    p = sub.add_parser('decompose71', parents=[common], help='Decompose the 71-dimensional character')
    p.add_argument('--group', default='g648')
    p.add_argument('--dixon-prime', type=int)
    p.add_argument('--table', help='CSV table supplying row labels and order for the report; '
                   'multiplicities are computed from the recomputed table')
    p.add_argument('--subgroups', help='Comma-separated subgroup names (default G72,G72hat)')

    sub.add_parser('ledger', parents=[common], help='Section dimensions along the cover tower')

    p = sub.add_parser('split', parents=[common], help='Eigenspaces of an order-3 action')
    p.add_argument('--total', type=int, required=True)
    p.add_argument('--lefschetz', type=int, required=True)

    p = sub.add_parser('recognize', parents=[common], help='Minimal polynomial recognition')
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument('--padic', help='v,p,k for the residue v mod p^k')
    src.add_argument('--float', help='Decimal approximation (complex as a+bi)')
    p.add_argument('--deg', type=int, required=True)
    p.add_argument('--height', type=int)
    p.add_argument('--digits', type=int)
    p.add_argument('--force', action='store_true', help='Skip the p-adic precision floor')
    p.add_argument('--expect', help='Fail unless this polynomial is found')

    p = sub.add_parser('lll-shrink', parents=[common], help='Shrink coefficient rows by LLL')
    p.add_argument('matrix')

    p = sub.add_parser('lift-certificate', parents=[common], help='Solve, lift and reconstruct a certificate')
    p.add_argument('template')
    p.add_argument('--prime', type=int)
    p.add_argument('--steps', type=int, default=0)
    p.add_argument('--reconstruct', type=int, nargs=2, metavar=('NUM_BOUND', 'DEN_BOUND'))

    p = sub.add_parser('hilbert', parents=[common], help='Hilbert series and polynomial')
    p.add_argument('ideal')
    p.add_argument('--order', choices=['grevlex', 'lex'])
    p.add_argument('--mod', type=int)
    p.add_argument('--degree-cap', type=int)

    p = sub.add_parser('verify-fpp', parents=[common], help='Hilbert check and smoothness probes')
    p.add_argument('ideal')
    p.add_argument('--mod', type=int, required=True)
    p.add_argument('--seed', type=int)
    p.add_argument('--minors', type=int, default=3)
    p.add_argument('--expected', help="'fpp' (default), 'none' or c0,c1,... constant term first")
    p.add_argument('--dim', type=int)
    p.add_argument('--probes', type=int, default=1)
    p.add_argument('--degree-cap', type=int)

    p = sub.add_parser('search-cuts', parents=[common], help='Singular hyperplane sections')
    p.add_argument('ideal')
    p.add_argument('--mod', type=int, required=True)
    p.add_argument('--invariant', help='Matrix file of a linear action the cuts must be fixed by')
    p.add_argument('--budget', type=int)
    p.add_argument('--dim', type=int)
    p.add_argument('--seed', type=int)

    p = sub.add_parser('reynolds', parents=[common], help='Reynolds projector of a matrix group')
    p.add_argument('--rep', required=True)

    p = sub.add_parser('run', parents=[common], help='Run a pipeline manifest')
    p.add_argument('manifest')
    p.add_argument('--force', action='store_true', help='Overwrite existing outputs')
    p.add_argument('--out-dir', help='Output directory (default FPP_OUTPUT_DIR)')
    return parser


def _options(args: argparse.Namespace) -> Options:
    skip = {'command', 'json', 'quiet'}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None and v is not False}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    load_env()
    try:
        settings = get_settings()
    except ConfigError as e:
        print(f"✗ {e}", file=sys.stderr)
        return 2

    if args.command == 'run':
        try:
            manifest = load_manifest(args.manifest)
        except FileNotFoundError:
            print(f"✗ Not found: {args.manifest}", file=sys.stderr)
            return 2
        except ManifestError as e:
            print(f"✗ {args.manifest}: {e}", file=sys.stderr)
            return 2
        status, report = run_pipeline(manifest, output_dir=args.out_dir, force=args.force,
                                      settings=settings, quiet=args.quiet)
        print(json.dumps(report.to_json(), indent=2) if args.json else report.render())
        return status

    spec = COMMANDS[args.command]
    opts = _options(args)
    ctx = StepContext(seed=settings.seed, precision=settings.precision,
                      dixon_prime=settings.dixon_prime, quiet=args.quiet)
    for key in sorted(spec.input_keys & opts.keys()):
        if not ctx.resolve(opts[key]).exists():
            print(f"✗ Not found: {opts[key]}", file=sys.stderr)
            return 2
    try:
        outcome = spec.runner(opts, ctx)
    except KeyError as e:
        print(f"✗ {str(e).strip(chr(39))}", file=sys.stderr)
        return 2
    except (KernelError, ValueError) as e:
        print(f"✗ {e}", file=sys.stderr)
        return 1

    out = opts.get('out')
    if out:
        _write_output(Path(out), outcome)
        if not args.quiet:
            print(f"✓ Wrote {out}", file=sys.stderr)
    if args.json:
        print(json.dumps(outcome.data, indent=2))
    elif not out:
        print(outcome.text)
    if not outcome.ok and not args.quiet:
        print(f"✗ {outcome.message or 'check failed'}", file=sys.stderr)
    return 0 if outcome.ok else 1


if __name__ == '__main__':
    sys.exit(main())
