import random
from fractions import Fraction
from itertools import combinations

import mpmath
import pytest

from cli import load_rep
from errors import BranchLocusError, InconsistentDataError
from exact import zeta
from geom import (
    SectionQuadruple,
    affine_permutation_rep,
    chi_cover,
    cube_root_disambiguate,
    deck_orbit,
    eigenspace_split,
    h0_ledger,
    key_weight_check,
    key_weight_pattern,
    key_weight_systems,
    lefschetz_fixed_points,
    matrix_trace,
    regular_rep,
    reynolds_project,
    sqrt_section_eval,
    torsion_cut_values,
    torsion_order,
    torsion_table,
)
from grouprep import group_by_name


# ── dimension ledger ─────────────────────────────────────────────

def test_ledger_cells():
    ledger = h0_ledger()
    assert ledger.cells() == [(0, 10), (1, 20), (3, 40), (7, 80), (7, 32), (71, 720), (8, 90)]
    assert ledger.splits['8.P2fake 6H'] == (32, 24, 24)
    assert ledger.splits['8.P2fake 3H'] == (7, 0, 0)
    assert ledger.to_json()['rows'][4]['degree'] is None


def test_lefschetz_records():
    ledger = h0_ledger()
    assert [r.fixed_points for r in ledger.lefschetz] == [3, 6, 12, 24]
    assert [r.lefschetz_sum for r in ledger.lefschetz] == [1, 2, 4, 8]
    with pytest.raises(ValueError):
        lefschetz_fixed_points(3)


def test_chi_cover():
    assert chi_cover(1, 6) == 10
    assert chi_cover(72, 3) == 72
    with pytest.raises(ValueError):
        chi_cover(0, 3)


def test_eigenspace_split():
    assert eigenspace_split(80, 8, real_structure=True) == (32, 24, 24)
    with pytest.raises(ValueError):
        eigenspace_split(80, 8)
    with pytest.raises(InconsistentDataError):
        eigenspace_split(5, 1, real_structure=True)


def test_torsion_table(fixtures_dir):
    table = torsion_table(fixtures_dir / 'torsion.json')
    assert torsion_order(table['P2fake']) == 52
    assert torsion_order(table['P2fake^']) == 18
    assert torsion_order(table['72.P2fake']) == 2 ** 8 * 3 * 13
    assert table == torsion_table()


# ── Reynolds averaging ───────────────────────────────────────────

def _square(m):
    n = len(m)
    return [[sum(m[i][k] * m[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def test_reynolds_on_permutation_fixture(fixtures_dir):
    proj = reynolds_project(load_rep(fixtures_dir / 'c3_perm.rep'))
    assert _square(proj) == proj
    assert proj == [[Fraction(1, 3)] * 3 for _ in range(3)]
    assert matrix_trace(proj) == 1


def test_reynolds_on_diagonal_fixture(fixtures_dir):
    rep = load_rep(fixtures_dir / 'c3_diag.rep')
    proj = reynolds_project(rep)
    assert proj[0][0] == 1
    assert _square(proj) == proj
    assert proj[1][1] == 0 and proj[2][2] == 0
    assert matrix_trace(proj) == 1


def test_reynolds_on_affine_action():
    g72 = group_by_name('G72')
    proj = reynolds_project(affine_permutation_rep(g72))
    assert matrix_trace(proj) == 1
    assert _square(proj) == proj


def test_reynolds_on_regular_rep():
    proj = reynolds_project(regular_rep(group_by_name('q8')))
    assert matrix_trace(proj) == 1
    assert _square(proj) == proj


def test_reynolds_rejects_bad_input():
    eye = [[1, 0], [0, 1]]
    with pytest.raises(InconsistentDataError):
        reynolds_project([eye, eye])
    with pytest.raises(InconsistentDataError):
        reynolds_project([eye, [[2, 0], [0, 1]]])


# ── square-root sections ─────────────────────────────────────────

def test_sqrt_section_exact():
    assert sqrt_section_eval(6, 4, 9) == 1
    assert sqrt_section_eval(6, 4, 9, branch=(-1, 1)) == -1
    with pytest.raises(BranchLocusError):
        sqrt_section_eval(6, 0, 9)
    with pytest.raises(ValueError):
        sqrt_section_eval(6, 2, 9)


def test_sqrt_section_float():
    v = sqrt_section_eval(mpmath.mpf(2), mpmath.mpf(2), mpmath.mpf(2))
    assert abs(v - 1) < mpmath.mpf(10) ** -10
    with pytest.raises(BranchLocusError):
        sqrt_section_eval(mpmath.mpf(1), mpmath.mpf(0), mpmath.mpf(2))


def test_torsion_cuts_vanish_on_diagonal():
    point = [0, 1, 0, 0, 1, 0, 0, 1, 0, 0]
    a, b = torsion_cut_values(point)
    assert abs(a) < 1e-30 and abs(b) < 1e-30


# ── cube-root branches ───────────────────────────────────────────

def test_cube_root_disambiguation():
    assert cube_root_disambiguate([8, 27, 125], {3: 30}, 2, 3) == [2, 3, 5]
    with pytest.raises(InconsistentDataError):
        cube_root_disambiguate([8, 27, 125], {3: 31}, 2, 3)
    with pytest.raises(InconsistentDataError):
        cube_root_disambiguate([8, 27, 125], {}, 2, 3)


def test_deck_orbit_has_nine_solutions():
    orbit = deck_orbit([8, 27, 125], {3: 30}, 2, 3)
    assert len(orbit) == 9
    assert len({tuple(s) for s in orbit}) == 9
    for f1, f2, f3 in orbit:
        assert f3 ** 3 == 125
        assert f1 * f2 * f3 == 30
    assert [2, 3, 5] in orbit
    assert [zeta(3) * 2, zeta(3, 2) * 3, 5] in orbit


def test_cube_roots_recovered_on_random_plants():
    rng = random.Random(7)
    for trial in range(50):
        conductor = (3, 12)[trial % 2]
        n = rng.randint(3, 5)
        planted = []
        while len(planted) < n:
            f = zeta(conductor) * rng.randint(-4, 4) + rng.randint(-4, 4)
            if not f.is_zero():
                planted.append(f)
        f1, f2 = planted[:2]
        cubes = [f ** 3 for f in planted]
        triples = {k: f1 * f2 * planted[k - 1] for k in range(3, len(planted) + 1)}
        assert cube_root_disambiguate(cubes, triples, f1, f2) == planted
        orbit = deck_orbit(cubes, triples, f1, f2)
        assert len(orbit) == 9
        assert planted in orbit
        assert all(a != b for a, b in combinations(orbit, 2))
        for sol in orbit:
            assert all(s ** 3 == c for s, c in zip(sol, cubes))
            assert all(sol[0] * sol[1] * sol[k - 1] == t for k, t in triples.items())


# ── key weights ──────────────────────────────────────────────────

def test_key_weight_patterns():
    assert key_weight_pattern(0, 0) == (0, 0, 0, 0)
    assert key_weight_pattern(1, 2) == (2, 0, 0, 1)
    assert len(key_weight_systems()) == 9


def test_key_weight_check():
    q = SectionQuadruple((1, 2, 3, 6), h_weights=(2, 2, 2, 2))
    assert key_weight_check(q, 1, 1)
    assert not key_weight_check(q, 0, 1)
    broken = SectionQuadruple((1, 2, 3, 7), h_weights=(2, 2, 2, 2))
    assert not key_weight_check(broken, 1, 1)
