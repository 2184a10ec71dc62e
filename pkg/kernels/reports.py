#!/usr/bin/env python3
"""
Text rendering for kernel reports.

Each structured result (verification report, dimension ledger, recognition,
pipeline bundle) has a to_json() form; this module renders the human-readable
form through the Jinja2 templates in kernels/templates/.
"""

from fractions import Fraction
from pathlib import Path
from typing import List

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from exact import format_upoly, upoly_trim

TEMPLATES_DIR = Path(__file__).resolve().parent / 'templates'
RULE = '─' * 60

_env = Environment(
    loader=FileSystemLoader(str(TEMPLATES_DIR)),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=False,
    undefined=StrictUndefined,
    autoescape=False,
)


def _render(name: str, **context) -> str:
    return _env.get_template(name).render(rule=RULE, **context)


def _upoly(coeffs) -> str:
    coeffs = upoly_trim([Fraction(c) for c in coeffs])
    return format_upoly(coeffs, 'm') if coeffs else '0'


def render_verification(report) -> str:
    probe_text: List[str] = [_upoly(p.hilbert_polynomial) for p in report.probes]
    expected = None if report.expected is None else _upoly(report.expected)
    return _render('verification.txt.j2',
                   r=report,
                   found=_upoly(report.hilbert_polynomial),
                   expected=expected,
                   probe_text=probe_text)


def render_ledger(ledger) -> str:
    return _render('ledger.txt.j2', ledger=ledger)


def render_recognition(rec) -> str:
    return _render('recognition.txt.j2', rec=rec)


def render_pipeline(bundle) -> str:
    return _render('pipeline.txt.j2', bundle=bundle)
