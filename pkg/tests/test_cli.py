import json

import pytest

from cli import COMMANDS, load_manifest, main, parse_manifest, run_pipeline
from config import Settings
from errors import ManifestError

SQRT2 = "1.4142135623730950488016887242096980785696718753769480731766797379907324784621"

CONIC_STEPS = """\
seed = 3
prime = 7

step ledger
out = ledger.txt

step split
total = 80
lefschetz = 8
out = split.json

step verify-fpp
ideal = fixtures/conic_gf7.ideal
expected = 1,2
out = conic.json
"""


@pytest.fixture
def root(fixtures_dir):
    return fixtures_dir.parent


def _run(text, root, out, **kw):
    return run_pipeline(parse_manifest(text, 'test.manifest'), base_dir=root,
                        output_dir=out, settings=Settings(), **kw)


# ── manifest parsing ─────────────────────────────────────────────

def test_parse_manifest():
    m = parse_manifest(CONIC_STEPS, 'conic')
    assert m.settings == {'seed': '3', 'prime': '7'}
    assert [s.command for s in m.steps] == ['ledger', 'split', 'verify-fpp']
    assert [s.index for s in m.steps] == [1, 2, 3]
    assert m.steps[2].options['ideal'] == 'fixtures/conic_gf7.ideal'
    assert m.steps[2].output == 'conic.json'
    assert m.steps[1].line == 7


def test_manifest_accepts_dashed_keys():
    m = parse_manifest("step hilbert\nideal = a.ideal\ndegree-cap = 4\n")
    assert m.steps[0].options['degree_cap'] == '4'


@pytest.mark.parametrize("text, line", [
    ("step frobnicate\n", 1),
    ("step\n", 1),
    ("step ledger\nout ledger.txt\n", 2),
    ("colour = blue\n", 1),
    ("seed = zero\n", 1),
    ("step verify-fpp\nideal = a\nseed = 1\n", 3),
    ("step split\ntotal = 8\ntotal = 9\n", 3),
    ("step split\ntotal = eight\n", 2),
    ("step ledger\nout = a.txt\n\nstep ledger\nout = a.txt\n", 5),
    ("step ledger\nbudget = 3\n", 2),
])
def test_manifest_errors_carry_line(text, line):
    with pytest.raises(ManifestError) as exc:
        parse_manifest(text)
    assert exc.value.line == line


def test_every_command_takes_out():
    assert all('out' in spec.keys for spec in COMMANDS.values())


# ── pipelines ────────────────────────────────────────────────────

def test_pipeline_runs_and_writes_outputs(root, tmp_path):
    status, report = _run(CONIC_STEPS, root, tmp_path)
    assert status == 0
    assert report.ok and report.failed_index is None
    assert [s.ok for s in report.steps] == [True, True, True]
    assert json.loads((tmp_path / 'split.json').read_text())['split'] == [32, 24, 24]
    conic = json.loads((tmp_path / 'conic.json').read_text())
    assert conic['verdict'] == 'pass' and conic['seed'] == 3
    assert 'h0(3H)' in (tmp_path / 'ledger.txt').read_text()


def test_pipeline_stops_at_first_failure(root, tmp_path):
    text = (
        "step split\ntotal = 80\nlefschetz = 8\n\n"
        "step verify-fpp\nideal = fixtures/nodal_cubic.ideal\nmod = 7\nexpected = none\nout = nodal.json\n\n"
        "step ledger\nout = ledger.txt\n"
    )
    status, report = _run(text, root, tmp_path)
    assert status == 1
    assert report.failed_index == 2
    assert len(report.steps) == 2
    assert report.steps[1].message == 'verification failed'
    assert json.loads((tmp_path / 'nodal.json').read_text())['verdict'] == 'fail'
    assert not (tmp_path / 'ledger.txt').exists()
    assert report.to_json()['failed_index'] == 2


def test_pipeline_refuses_to_overwrite(root, tmp_path):
    text = "step ledger\nout = ledger.txt\n"
    (tmp_path / 'ledger.txt').write_text('keep me\n')
    status, report = _run(text, root, tmp_path)
    assert status == 1
    assert 'refusing to overwrite' in report.steps[0].message
    assert (tmp_path / 'ledger.txt').read_text() == 'keep me\n'

    status, _ = _run(text, root, tmp_path, force=True)
    assert status == 0
    assert 'h0(6H)' in (tmp_path / 'ledger.txt').read_text()


def test_pipeline_missing_input(root, tmp_path):
    status, report = _run("step lll-shrink\nmatrix = fixtures/absent.matrix\n", root, tmp_path)
    assert status == 1
    assert report.steps[0].message.startswith('input not found')


def test_pipeline_output_cannot_escape(root, tmp_path):
    status, report = _run("step ledger\nout = ../escape.txt\n", root, tmp_path / 'out')
    assert status == 1
    assert 'escapes' in report.steps[0].message
    assert not (tmp_path / 'escape.txt').exists()


def test_pipeline_chains_outputs(root, tmp_path):
    text = (
        "step lll-shrink\nmatrix = fixtures/shrink.matrix\nout = small.matrix\n\n"
        "step lll-shrink\nmatrix = small.matrix\nout = again.json\n"
    )
    status, report = _run(text, root, tmp_path)
    assert status == 0
    assert report.steps[0].data['max_norm_before'] == 1000000
    again = json.loads((tmp_path / 'again.json').read_text())
    assert again['max_norm_before'] == 1
    assert again['max_norm_after'] == 1


def test_kernel_error_fails_the_step(root, tmp_path):
    status, report = _run("step char-table\ngroup = monster\n", root, tmp_path)
    assert status == 1
    assert 'monster' in report.steps[0].message


def test_pipeline_render(root, tmp_path):
    _, report = _run(CONIC_STEPS, root, tmp_path)
    text = report.render()
    assert text.startswith('📋 Pipeline test.manifest')
    assert '✅ [3] verify-fpp → conic.json' in text
    assert 'Status: OK' in text


# ── main ─────────────────────────────────────────────────────────

def test_main_split(capsys):
    assert main(['split', '--total', '80', '--lefschetz', '8']) == 0
    assert capsys.readouterr().out.strip() == '32 24 24'


def test_main_ledger_json(capsys):
    assert main(['ledger', '--json']) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['rows'][0]['h0_3H'] == 0


def test_main_recognize(capsys):
    assert main(['recognize', '--float', SQRT2, '--deg', '4', '--digits', '40', '--quiet']) == 0
    out = capsys.readouterr().out
    assert '✅ x^2 - 2' in out


def test_main_recognize_expectation(capsys):
    code = main(['recognize', '--float', SQRT2, '--deg', '4', '--digits', '40',
                 '--expect', 'x^2 - 3', '--quiet'])
    assert code == 1


def test_main_verify(fixtures_dir, capsys):
    ideal = str(fixtures_dir / 'conic_gf7.ideal')
    assert main(['verify-fpp', ideal, '--mod', '7', '--expected', '1,2', '--quiet']) == 0
    assert 'Verdict: PASS' in capsys.readouterr().out
    assert main(['verify-fpp', ideal, '--mod', '7', '--quiet']) == 1


def test_main_hilbert(fixtures_dir, capsys):
    assert main(['hilbert', str(fixtures_dir / 'twisted_cubic.ideal'), '--json']) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['basis_size'] >= 3


def test_main_search_cuts(fixtures_dir, capsys):
    assert main(['search-cuts', str(fixtures_dir / 'conic_gf5.ideal'), '--mod', '5', '--quiet']) == 0
    assert capsys.readouterr().out.strip().endswith('# 6 singular cuts among 31 hyperplanes')


def test_main_reynolds(fixtures_dir, capsys):
    assert main(['reynolds', '--rep', str(fixtures_dir / 'c3_perm.rep')]) == 0
    assert capsys.readouterr().out.strip().endswith('# invariant subspace dimension 1')


def test_main_lift_certificate(fixtures_dir, capsys):
    code = main(['lift-certificate', str(fixtures_dir / 'planted.template'),
                 '--steps', '5', '--reconstruct', '10', '10', '--json', '--quiet'])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data['exponent'] == 6
    assert data['residual_zero'] is True
    assert data['reconstruction']['ok'] is True


def test_main_writes_out(tmp_path, capsys):
    target = tmp_path / 'split.json'
    assert main(['split', '--total', '80', '--lefschetz', '8', '--out', str(target), '--quiet']) == 0
    assert capsys.readouterr().out == ''
    assert json.loads(target.read_text())['split'] == [32, 24, 24]
    table = tmp_path / 'c3.csv'
    assert main(['char-table', '--group', 'c3', '--out', str(table), '--quiet']) == 0
    assert table.read_text().startswith('# conductor ')


@pytest.mark.parametrize("argv", [
    ['hilbert', 'no/such.ideal'],
    ['char-table', '--group', 'monster'],
    ['run', 'no/such.manifest'],
])
def test_main_bad_arguments(argv, capsys):
    assert main(argv) == 2
    assert '✗' in capsys.readouterr().err


def test_main_bad_manifest(tmp_path, capsys):
    bad = tmp_path / 'bad.manifest'
    bad.write_text("step ledger\nwho = me\n")
    assert main(['run', str(bad)]) == 2
    assert 'line 2' in capsys.readouterr().err


def test_main_run(fixtures_dir, tmp_path, capsys):
    manifest = tmp_path / 'conic.manifest'
    manifest.write_text(
        f"step verify-fpp\nideal = {fixtures_dir / 'conic_gf7.ideal'}\nmod = 7\n"
        "expected = 1,2\nout = conic.json\n")
    out_dir = tmp_path / 'out'
    assert main(['run', str(manifest), '--out-dir', str(out_dir), '--json', '--quiet']) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['ok'] is True
    assert data['steps'][0]['output'] == 'conic.json'
    assert (out_dir / 'conic.json').exists()
    # second run refuses to overwrite
    assert main(['run', str(manifest), '--out-dir', str(out_dir), '--quiet']) == 1
    capsys.readouterr()
    assert main(['run', str(manifest), '--out-dir', str(out_dir), '--force', '--quiet']) == 0


def test_demo_manifest_parses(root):
    m = load_manifest(root / 'manifests' / 'demo.manifest')
    assert [s.command for s in m.steps] == ['char-table', 'decompose71', 'ledger', 'recognize']
    assert (root / m.steps[1].options['table']).exists()
    assert m.steps[3].options['expect'] == '3*x^6 - 4*x^3 + 2'


def test_decompose71_table_supplies_labels_only(capsys):
    with pytest.raises(SystemExit):
        main(['decompose71', '--help'])
    out = capsys.readouterr().out
    assert 'labels' in out
    assert 'recomputed' in out
