import random
from fractions import Fraction

import pytest

from errors import CancelledError, DependentRowsError, InsufficientPrecisionError
from exact import QQ_S2, hensel_root_lift, nf_embed_mod_pk, roots_mod_p
from lattice import (
    CancellationToken,
    element_from_padic,
    integer_determinant,
    is_lll_reduced,
    lll_reduce,
    minpoly_from_float,
    minpoly_from_padic,
    norm2,
    shrink_basis,
)
from verify import load_matrix

SQRT2 = "1.4142135623730950488016887242096980785696718753769480731766797379907324784621"
W = ("0.915054068476483029776565810152687776552403942301034188216686673320708890525067507377612586981514984576"
     "-0.190411440047426707549482592421913317097298590126661198861950383006560267118432283773175851101875561795i")


def _root(k):
    return hensel_root_lift(QQ_S2.minpoly, 73, roots_mod_p(QQ_S2.minpoly, 73)[0], k)


# ── LLL ──────────────────────────────────────────────────────────

def test_lll_small_example():
    rows = [[1, 1, 1], [-1, 0, 2], [3, 5, 6]]
    out = lll_reduce(rows)
    assert is_lll_reduced(out.rows)
    assert norm2(out.rows[0]) == 1
    assert abs(integer_determinant(out.rows)) == 3
    for trow, brow in zip(out.transform, out.rows):
        assert [sum(t * r[j] for t, r in zip(trow, rows)) for j in range(3)] == brow
    assert abs(integer_determinant(out.transform)) == 1


def test_lll_rejects_dependent_rows():
    with pytest.raises(DependentRowsError):
        lll_reduce([[1, 2], [2, 4]])


def test_lll_delta_range():
    with pytest.raises(ValueError):
        lll_reduce([[1, 0], [0, 1]], delta=Fraction(1, 5))


def test_lll_honours_cancellation():
    token = CancellationToken()
    token.cancel()
    with pytest.raises(CancelledError):
        lll_reduce([[1, 0], [5, 1]], token=token)


def test_unreduced_basis_is_detected():
    assert not is_lll_reduced([[1, 0], [7, 1]])
    assert is_lll_reduced([[1, 0], [0, 1]])


# ── basis shrinking ──────────────────────────────────────────────

def test_shrink_matrix_fixture(fixtures_dir):
    rows = load_matrix(fixtures_dir / 'shrink.matrix')
    assert integer_determinant(rows) == -1
    out = shrink_basis(rows)
    assert out.max_norm() == 1
    assert abs(integer_determinant(out.rows)) == 1


def test_shrink_never_grows():
    rows = [[1, 0, 0], [0, 1, 0]]
    assert shrink_basis(rows).max_norm() == 1


def test_nearly_parallel_rows():
    rows = [[1000000, 999999], [999999, 999998]]
    out = lll_reduce(rows)
    # determinant -1: the lattice is Z^2 and the difference (1, 1) lies in it
    assert integer_determinant(rows) == -1
    assert sorted(sorted(map(abs, r)) for r in out.rows) == [[0, 1], [0, 1]]
    assert is_lll_reduced(out.rows)
    assert [a - b for a, b in zip(*rows)] == [1, 1]


def _unimodular(rng, n, spread):
    lower = [[rng.randint(-spread, spread) if j < i else int(i == j) for j in range(n)] for i in range(n)]
    upper = [[rng.randint(-spread, spread) if j > i else int(i == j) for j in range(n)] for i in range(n)]
    return [[sum(lower[i][k] * upper[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def test_shrink_recovers_planted_rows():
    rng = random.Random(13)
    n = 5
    for _ in range(5):
        planted = [[20 if i == j else rng.randint(-2, 2) for j in range(n)] for i in range(n)]
        u = _unimodular(rng, n, 1000)
        assert abs(integer_determinant(u)) == 1
        scrambled = [[sum(u[i][k] * planted[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        out = shrink_basis(scrambled)
        limit = max(abs(x) for r in planted for x in r)
        assert out.max_norm() <= 4 * limit
        assert abs(integer_determinant(out.rows)) == abs(integer_determinant(planted))
        assert abs(integer_determinant(out.transform)) == 1


# ── minimal polynomials ──────────────────────────────────────────

def test_float_recognises_sqrt2():
    rec = minpoly_from_float(SQRT2, 4, 40)
    assert rec.ok
    assert rec.candidate.format() == "x^2 - 2"
    assert rec.candidate.margin >= 100


def test_float_recognises_rational():
    rec = minpoly_from_float("0.75", 3, 30)
    assert rec.ok
    assert rec.candidate.coefficients == [-3, 4]


def test_float_recognises_complex_sextic():
    rec = minpoly_from_float(W, 6, 100)
    assert rec.ok
    assert rec.candidate.format() == "3*x^6 - 4*x^3 + 2"
    assert rec.candidate.to_json()['degree'] == 6


def test_float_rejects_without_margin():
    rec = minpoly_from_float("3.14159265358979323846264338327950288", 2, 30)
    assert not rec.ok
    assert rec.rejected
    assert all(not c.accepted for c in rec.rejected)


def test_padic_recognises_quadratic():
    k = 14
    x = QQ_S2.parse("-773/66449 + 16/66449*s2")
    r = nf_embed_mod_pk(x, 73, k, _root(k))
    cand = minpoly_from_padic(r, 2, 66449)
    assert cand is not None
    assert cand.coefficients == [9, 1546, 66449]
    assert cand.height == 66449


def test_padic_precision_guard():
    x = QQ_S2.parse("-773/66449 + 16/66449*s2")
    r = nf_embed_mod_pk(x, 73, 4, _root(4))
    with pytest.raises(InsufficientPrecisionError):
        minpoly_from_padic(r, 2, 66449)


def test_element_from_padic():
    k = 10
    root = _root(k)
    x = QQ_S2.parse("3/5 - 2*s2")
    r = nf_embed_mod_pk(x, 73, k, root)
    assert element_from_padic(r, QQ_S2, root, 100) == x
