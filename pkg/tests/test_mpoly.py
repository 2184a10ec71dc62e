import random
from fractions import Fraction

import pytest

from errors import ArityMismatchError, ParseError, SingularMatrixError
from exact import QQ, GF, hensel_root_lift, roots_mod_p, zmod
from linalg import inverse
from mpoly import (
    LEX,
    IdealBasis,
    Poly,
    all_minor_selections,
    dump_ideal,
    jacobian_minors,
    linear_change_of_coordinates,
    load_ideal,
    monomials_of_degree,
    parse_ideal,
    reduce_mod_p,
    two_torsion_cuts,
)


def P(text, nvars=3, ring=QQ):
    return Poly.parse(text, ring, nvars)


def _random_poly(rng, nvars, degree):
    terms = {m: Fraction(rng.randint(-5, 5), rng.randint(1, 3))
             for m in monomials_of_degree(nvars, degree) if rng.random() < 0.6}
    return Poly(QQ, nvars, terms)


# ── evaluation ───────────────────────────────────────────────────

def test_evaluate_product():
    assert P("x0*x1", 2).evaluate([2, 3]) == 6


def test_evaluate_scales_with_degree():
    f = P("x0^3 - 2*x0*x1*x2 + 5*x2^3")
    pt = [Fraction(1, 2), 3, -1]
    assert f.evaluate([2 * c for c in pt]) == 8 * f.evaluate(pt)


def test_evaluate_arity_mismatch():
    with pytest.raises(ArityMismatchError):
        P("x0*x1", 2).evaluate([1, 2, 3])


def test_evaluate_at_padic_root():
    ring = zmod(73, 5)
    r = hensel_root_lift([2, 0, 1], 73, roots_mod_p([2, 0, 1], 73)[0], 5)
    f = Poly.parse("x0^2 + 2*x1^2", ring, 2)
    assert f.evaluate([r.value, 1]) == 0


# ── arithmetic and text ──────────────────────────────────────────

def test_derivative_product_rule():
    rng = random.Random(5)
    for _ in range(10):
        f = _random_poly(rng, 3, 2)
        g = _random_poly(rng, 3, 3)
        for i in range(3):
            assert (f * g).derivative(i) == f.derivative(i) * g + f * g.derivative(i)


@pytest.mark.parametrize("ring", [QQ, GF(101)], ids=['QQ', 'GF101'])
def test_ring_axioms(ring):
    rng = random.Random(41)

    def poly():
        return Poly(ring, 3, {m: rng.randint(-5, 5)
                              for d in range(3) for m in monomials_of_degree(3, d)
                              if rng.random() < 0.4})

    for _ in range(200):
        f, g, h = poly(), poly(), poly()
        assert (f + g) + h == f + (g + h)
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f * g == g * f
        assert f - f == Poly.zero(ring, 3)


def test_format_and_parse_agree():
    f = P("3/2*x0^2*x1 - x2^3 + x0*x1*x2")
    assert P(f.format()) == f
    assert P("x0 - x0") == 0


def test_parse_rejects_unknown_variable():
    with pytest.raises(ParseError):
        P("y^2", 3)


def test_power_and_substitute():
    x, y = P("x0", 2), P("x1", 2)
    f = P("x0^2 - x1^2", 2)
    assert f.substitute([x + y, x - y]) == (x * y).scale(4)
    assert (x + y) ** 2 == P("x0^2 + 2*x0*x1 + x1^2", 2)


# ── ideals ───────────────────────────────────────────────────────

def test_ideal_text_round_trip(fixtures_dir, tmp_path):
    ideal = load_ideal(fixtures_dir / 'twisted_cubic.ideal')
    assert len(ideal) == 3
    assert ideal.degrees() == [2, 2, 2]
    out = tmp_path / 'copy.ideal'
    dump_ideal(ideal, out)
    again = load_ideal(out)
    assert again == ideal
    assert again.digest() == ideal.digest()
    assert len(ideal.digest()) == 12


def test_parse_ideal_reports_line_numbers():
    with pytest.raises(ParseError) as exc:
        parse_ideal("ring QQ vars 2 order grevlex\n# comment\nx0^2 + x1\n")
    assert exc.value.line == 3
    with pytest.raises(ParseError) as exc:
        parse_ideal("vars 2\n")
    assert exc.value.line == 1


def test_parse_ideal_unknown_order():
    with pytest.raises(ParseError):
        parse_ideal("ring QQ vars 2 order deglex\nx0*x1\n")


def test_ideal_rejects_inhomogeneous_generators():
    with pytest.raises(ValueError):
        IdealBasis(QQ, 2, [P("x0^2 + x1", 2)])


# ── Jacobian minors ──────────────────────────────────────────────

def test_jacobian_of_conic():
    ideal = IdealBasis(QQ, 3, [P("x0*x1 - x2^2")])
    minors = jacobian_minors(ideal, 1, all_minor_selections(ideal, 1))
    assert minors == [P("x1"), P("x0"), P("-2*x2")]


def test_jacobian_two_by_two_minor():
    ideal = IdealBasis(QQ, 3, [P("x0^2 - x1*x2"), P("x1^2 - x0*x2")])
    (minor,) = jacobian_minors(ideal, 2, [((0, 1), (0, 1))])
    assert minor == P("4*x0*x1 - x2^2")


def test_jacobian_minor_selection_errors():
    ideal = IdealBasis(QQ, 3, [P("x0^2 - x1*x2"), P("x1^2 - x0*x2")])
    with pytest.raises(ValueError):
        jacobian_minors(ideal, 3, [((0, 1, 1), (0, 1, 2))])
    with pytest.raises(ValueError):
        jacobian_minors(ideal, 2, [((0, 1), (0, 5))])
    with pytest.raises(ValueError):
        jacobian_minors(ideal, 2, [((0, 0), (0, 1))])


# ── coordinate changes and reductions ────────────────────────────

def test_coordinate_change_identity_and_swap():
    ideal = IdealBasis(QQ, 2, [P("x0^2 + 3*x0*x1", 2)])
    eye = [[1, 0], [0, 1]]
    assert linear_change_of_coordinates(ideal, eye) == ideal
    swapped = linear_change_of_coordinates(ideal, [[0, 1], [1, 0]])
    assert swapped.generators == [P("x1^2 + 3*x0*x1", 2)]


def test_coordinate_change_round_trip():
    ring = GF(101)
    ideal = IdealBasis(ring, 3, [Poly.parse("x0^2 + x1*x2", ring, 3),
                                 Poly.parse("x0*x1*x2 - 4*x2^3", ring, 3)])
    m = [[1, 2, 3], [0, 1, 4], [5, 6, 0]]
    there = linear_change_of_coordinates(ideal, m)
    back = linear_change_of_coordinates(there, inverse(ring, m))
    assert back == ideal


def test_coordinate_change_rejects_bad_matrices():
    ideal = IdealBasis(QQ, 2, [P("x0*x1", 2)])
    with pytest.raises(SingularMatrixError):
        linear_change_of_coordinates(ideal, [[1, 2], [2, 4]])
    with pytest.raises(ArityMismatchError):
        linear_change_of_coordinates(ideal, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_reduce_mod_p(fixtures_dir):
    ideal = load_ideal(fixtures_dir / 'nodal_cubic.ideal')
    reduced = reduce_mod_p(ideal, 7)
    assert reduced.ring == GF(7)
    (g,) = reduced.generators
    assert g.coefficient((3, 0, 0)) == 6
    assert g.coefficient((0, 2, 1)) == 1


def test_lex_order_leading_monomial():
    f = Poly.parse("x1^3 + x0*x2^2", QQ, 3, order=LEX)
    assert f.leading_monomial() == (1, 0, 2)
    assert P("x1^3 + x0*x2^2").leading_monomial() == (0, 3, 0)


def test_two_torsion_cuts_sum():
    cuts = two_torsion_cuts()
    assert len(cuts) == 3
    total = cuts[0] + cuts[1] + cuts[2]
    assert total.monomials() == [tuple(1 if i == 1 else 0 for i in range(10))]
    with pytest.raises(ArityMismatchError):
        two_torsion_cuts(nvars=5)


def test_show_and_minors_commands(fixtures_dir, tmp_path, capsys):
    from mpoly import main
    assert main(['show', str(fixtures_dir / 'conic_gf7.ideal')]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith('ring GF(7) vars 3')
    assert '1 generators' in captured.err
    assert main(['minors', str(fixtures_dir / 'conic_gf7.ideal'), '--size', '1', '--json']) == 0
    assert main(['show', str(tmp_path / 'absent.ideal')]) == 2
    bad = tmp_path / 'bad.ideal'
    bad.write_text("ring QQ vars 3 order grevlex\nx0 + y7\n")
    assert main(['show', str(bad)]) == 1
