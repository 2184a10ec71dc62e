import random
from fractions import Fraction

import pytest

from errors import (
    BadPrimeError,
    InsufficientPrecisionError,
    LiftObstructedError,
    ModulusMismatchError,
    ParseError,
)
from exact import (
    QQ,
    QQ_S2,
    QQ_S2_S3,
    GF,
    Residue,
    Ring,
    cyclotomic_field,
    cyclotomic_polynomial,
    format_upoly,
    hensel_root_lift,
    nf_embed_mod_pk,
    rational_reconstruct,
    roots_mod_p,
    upoly_eval,
    zeta,
    zmod,
)


# ── residues ─────────────────────────────────────────────────────

def test_residue_arithmetic_wraps_modulus():
    a = Residue(7, 3, 5)
    b = Residue(7, 3, 340)
    assert a + b == Residue(7, 3, 2)
    assert (a * b).value == (5 * 340) % 343
    assert -a == Residue(7, 3, 338)


def test_residue_mixed_moduli_rejected():
    with pytest.raises(ModulusMismatchError):
        Residue(7, 3, 1) + Residue(7, 2, 1)


def test_residue_from_rational():
    third = Residue.from_rational(Fraction(1, 3), 5, 4)
    assert third * 3 == Residue(5, 4, 1)
    with pytest.raises(BadPrimeError):
        Residue.from_rational(Fraction(1, 10), 5, 2)


def test_residue_text_form():
    r = Residue.parse("12 mod 7^2")
    assert r == Residue(7, 2, 12)
    assert str(r) == "12 mod 7^2"
    with pytest.raises(ParseError):
        Residue.parse("12 mod seven")


def test_residue_truncate_and_centered():
    r = Residue(3, 4, 80)
    assert r.truncate(2) == Residue(3, 2, 8)
    assert r.centered() == -1
    with pytest.raises(InsufficientPrecisionError):
        r.truncate(5)


# ── rational reconstruction ──────────────────────────────────────

def test_rational_reconstruct_round_trip():
    rng = random.Random(11)
    p, k, bound = 73, 4, 1000
    checked = 0
    while checked < 100:
        q = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if q.denominator % p == 0:
            continue
        r = Residue.from_rational(q, p, k)
        assert rational_reconstruct(r, bound, bound) == q
        checked += 1


def test_rational_reconstruct_no_small_rational():
    assert rational_reconstruct(Residue(73, 2, 1000), 10, 10) is None


def test_rational_reconstruct_needs_precision():
    with pytest.raises(InsufficientPrecisionError):
        rational_reconstruct(Residue(73, 1, 5), 100, 100)


def test_rational_reconstruct_zero():
    assert rational_reconstruct(Residue(5, 6, 0), 10, 10) == 0


# ── roots and Hensel lifting ─────────────────────────────────────

def test_hensel_lifts_sqrt_minus_two():
    f = [2, 0, 1]
    roots = roots_mod_p(f, 73)
    assert len(roots) == 2
    for r0 in roots:
        r = hensel_root_lift(f, 73, r0, 5)
        assert upoly_eval(f, r.value) % 73 ** 5 == 0
        assert r.value % 73 == r0


def test_hensel_rejects_non_root():
    with pytest.raises(ValueError):
        hensel_root_lift([2, 0, 1], 73, 1, 3)


def test_hensel_rejects_multiple_root():
    with pytest.raises(LiftObstructedError):
        hensel_root_lift([0, 0, 1], 5, 0, 3)


# ── number fields ────────────────────────────────────────────────

def test_s2_s3_symbols():
    s2 = QQ_S2_S3.symbol('s2')
    s3 = QQ_S2_S3.symbol('s3')
    s6 = QQ_S2_S3.symbol('s6')
    assert s2 * s2 == -2
    assert s3 * s3 == -3
    assert s6 == s2 * s3
    assert QQ_S2_S3.parse("1 + s6") == 1 + s6
    assert str(QQ_S2_S3.parse("2 - 3*s2")) == "2 - 3*s2"


def test_number_field_inverse():
    x = QQ_S2.parse("3 - 2*s2")
    assert x * x.inverse() == 1
    assert (x / x) == 1


def test_nf_embedding_is_a_ring_map():
    root = hensel_root_lift(QQ_S2.minpoly, 73, roots_mod_p(QQ_S2.minpoly, 73)[0], 10)
    a = QQ_S2.parse("1 + s2")
    b = QQ_S2.parse("3/5 - 2*s2")
    ea = nf_embed_mod_pk(a, 73, 10, root)
    eb = nf_embed_mod_pk(b, 73, 10, root)
    assert nf_embed_mod_pk(a * b, 73, 10, root) == ea * eb
    assert nf_embed_mod_pk(a + b, 73, 10, root) == ea + eb


def test_nf_embedding_on_random_pairs():
    rng = random.Random(17)
    p, k = 73, 6
    root = hensel_root_lift(QQ_S2.minpoly, p, roots_mod_p(QQ_S2.minpoly, p)[0], k)

    def element():
        return QQ_S2.element([Fraction(rng.randint(-50, 50), rng.randint(1, 50)) for _ in range(2)])

    for _ in range(1000):
        a, b = element(), element()
        ea, eb = nf_embed_mod_pk(a, p, k, root), nf_embed_mod_pk(b, p, k, root)
        assert nf_embed_mod_pk(a * b, p, k, root) == ea * eb
        assert nf_embed_mod_pk(a + b, p, k, root) == ea + eb


def test_nf_embedding_requires_root():
    with pytest.raises(ValueError):
        nf_embed_mod_pk(QQ_S2.generator(), 73, 3)


# ── cyclotomic fields ────────────────────────────────────────────

def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_roots_of_unity():
    w = zeta(3)
    assert w ** 3 == 1
    assert w + zeta(3, 2) == -1
    assert w.conj() == zeta(3, 2)
    assert w.abs2() == 1


def test_mixed_conductors_align():
    assert zeta(3).lift(12) == zeta(12, 4)
    assert zeta(4) * zeta(3) == zeta(12, 7)
    assert zeta(3) == zeta(12, 4)


def test_cyclotomic_parse_uses_w():
    f = cyclotomic_field(3)
    assert f.parse("w^2") == zeta(3, 2)
    assert f.parse("2*w^2") == zeta(3, 2) * 2
    assert f.parse("-1 - w") == zeta(3, 2)


def test_to_complex():
    z = zeta(12).to_complex(30)
    assert abs(z.real - 3 ** 0.5 / 2) < 1e-12
    assert abs(z.imag - 0.5) < 1e-12


# ── rings ────────────────────────────────────────────────────────

@pytest.mark.parametrize("tag", ["ZZ", "QQ", "GF(7)", "Z/7^3", "QQ(zeta12)", "QQ(s2)", "QQ(s2,s3)"])
def test_ring_tags_round_trip(tag):
    assert Ring.parse_tag(tag).tag == tag


def test_unknown_ring_tag():
    with pytest.raises(ParseError):
        Ring.parse_tag("RR")


def test_ring_fields():
    assert GF(7).is_field
    assert not zmod(7, 2).is_field
    assert QQ.is_field
    assert GF(7).inv(3) == 5


def test_format_upoly():
    assert format_upoly([2, 0, 0, -4, 0, 0, 3]) == "3*x^6 - 4*x^3 + 2"
    assert format_upoly([-3, 4]) == "4*x - 3"
    assert format_upoly([]) == "0"
