import random
from fractions import Fraction

import pytest

from errors import (
    InconsistentDataError,
    InsufficientPrecisionError,
    LiftObstructedError,
    ParseError,
)
from exact import QQ, QQ_S2, roots_mod_p
from lift import (
    CertificateSolution,
    CertificateTemplate,
    certificate_lift,
    certificate_reconstruct,
    certificate_solve_mod_p,
    load_template,
    parse_template,
    residual,
)
from mpoly import Poly, monomials_of_degree


def P(text, nvars=3):
    return Poly.parse(text, QQ, nvars)


@pytest.fixture
def planted(fixtures_dir):
    return load_template(fixtures_dir / 'planted.template')


def test_planted_template_shape(planted):
    assert planted.prime == 7
    assert [s.name for s in planted.slots] == ['H1', 'R1']
    assert planted.unknowns == 3 + 6


def test_planted_identity_is_recovered(planted):
    sol = certificate_solve_mod_p(planted)
    assert sol is not None
    assert residual(planted, sol).is_zero()
    lifted = certificate_lift(sol, 5)
    assert lifted.exponent == 6
    assert set(lifted.support()) <= set(sol.support())
    assert residual(planted, lifted).is_zero()
    result = certificate_reconstruct(lifted, 10, 10)
    assert result.ok and result.verified
    h1, r1 = result.multipliers
    identity = P("x0^2 - x1*x2") * h1 + P("x0 + x1 + x2") * r1
    assert identity == planted.target
    assert result.to_json()['failing_slot'] is None


def test_lift_digits_are_coherent(planted):
    sol = certificate_solve_mod_p(planted)
    assert certificate_lift(sol, 0).values == sol.values
    four = certificate_lift(sol, 4)
    assert four.truncate(2) == certificate_lift(sol, 1)
    with pytest.raises(ValueError):
        sol.truncate(3)


def test_low_precision_reconstruction_is_refused(planted):
    sol = certificate_solve_mod_p(planted)
    with pytest.raises(InsufficientPrecisionError):
        certificate_reconstruct(sol, 10, 10)


def test_target_outside_ideal_has_no_solution():
    tmpl = CertificateTemplate.from_generators(P("x0^2"), [P("x1*x2")], 7)
    assert certificate_solve_mod_p(tmpl) is None


def test_lift_obstruction_reports_step():
    tmpl = CertificateTemplate.from_generators(P("7*x0"), [P("7*x0")], 7)
    sol = certificate_solve_mod_p(tmpl)
    assert sol is not None
    with pytest.raises(LiftObstructedError) as exc:
        certificate_lift(sol, 3)
    assert exc.value.step == 1


def test_lift_rejects_non_solution():
    tmpl = CertificateTemplate.from_generators(P("x0"), [P("x0")], 7)
    bogus = CertificateSolution(tmpl, 1, [2])
    with pytest.raises(InconsistentDataError):
        certificate_lift(bogus, 1)


def test_number_field_slot_is_recognised():
    root = roots_mod_p(QQ_S2.minpoly, 73)[0]
    text = (
        "ring QQ(s2) vars 2 order grevlex\n"
        "prime 73\n"
        f"root {root}\n"
        "x0\n"
        "target: x0*x1 + s2*x0^2\n"
        "slot degree=1 nf\n"
    )
    tmpl = parse_template(text)
    lifted = certificate_lift(certificate_solve_mod_p(tmpl), 6)
    result = certificate_reconstruct(lifted, 100, 100, height=100)
    assert result.ok
    (u,) = result.multipliers
    assert u.coefficient((1, 0)) == QQ_S2.symbol('s2')
    assert u.coefficient((0, 1)) == 1


def test_template_parse_errors():
    with pytest.raises(ParseError):
        parse_template("ring QQ vars 2 order grevlex\nprime 7\nx0\n")
    with pytest.raises(ParseError):
        parse_template("ring QQ vars 2 order grevlex\nx0\ntarget: x0*x1\n")
    with pytest.raises(ParseError) as exc:
        parse_template("ring QQ vars 2 order grevlex\nprime 7\nx0\ntarget: x0*x1\nslot degree=one\n")
    assert exc.value.line == 5


def test_template_needs_root_for_number_fields():
    with pytest.raises(ParseError):
        parse_template("ring QQ(s2) vars 1 order grevlex\nprime 73\nx0\ntarget: s2*x0\n")


def test_lift_keeps_support_fixed():
    # x0*(x0 + 7*x1): the x1 coefficient vanishes mod 7 and may not be revived
    tmpl = CertificateTemplate.from_generators(P("x0^2 + 7*x0*x1"), [P("x0")], 7)
    sol = certificate_solve_mod_p(tmpl)
    assert sol.values == [1, 0, 0]
    with pytest.raises(LiftObstructedError) as exc:
        certificate_lift(sol, 3)
    assert exc.value.step == 1


def _small_unit(rng, p):
    while True:
        q = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
        if q.numerator % p and q.denominator % p:
            return q


def _random_poly(rng, p, degree, density=0.6):
    monos = monomials_of_degree(3, degree)
    terms = {m: _small_unit(rng, p) for m in monos if rng.random() < density}
    terms.setdefault(monos[0], Fraction(1))
    return Poly(QQ, 3, terms)


def test_planted_round_trip():
    rng = random.Random(29)
    for trial in range(25):
        p = (7, 11, 13)[trial % 3]
        generator = _random_poly(rng, p, rng.randint(1, 2))
        multiplier = _random_poly(rng, p, rng.randint(1, 2))
        tmpl = CertificateTemplate.from_generators(generator * multiplier, [generator], p)
        sol = certificate_solve_mod_p(tmpl)
        assert sol is not None
        lifted = sol
        for _ in range(10):
            lifted = certificate_lift(lifted, 1)
            assert residual(tmpl, lifted).is_zero()
        assert lifted.support() == sol.support()
        result = certificate_reconstruct(lifted, 10, 10)
        assert result.ok and result.verified
        assert result.multipliers == [multiplier]
