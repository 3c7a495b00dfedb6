import os
import json
import pytest
import sasaki.checks
import sasaki.main
import sasaki.zoo

def _lines(out):
    return out.rstrip(os.linesep).split(os.linesep)

def test_list(environ, capsys):
    assert sasaki.main.doit(['list'], environ) == 0
    out, _ = capsys.readouterr()
    lines = _lines(out)
    models = [l.split()[1] for l in lines if l.startswith('model ')]
    found = [l.split()[1] for l in lines if l.startswith('check ')]
    assert models == list(sasaki.zoo.MODEL_IDS)
    assert found == list(sasaki.checks.CATALOGUE)
    assert len(lines) == len(models) + len(found)
    iphi = [l for l in lines if l.split()[1] == 'check_iphi_riem'][0]
    assert '[Proposition: i_phi Riem vanishes]' in iphi
    assert iphi.endswith(sasaki.checks.CATALOGUE['check_iphi_riem'].statement)

def test_list_json(environ, capsys):
    assert sasaki.main.doit(['list', '--format', 'json'], environ) == 0
    out, _ = capsys.readouterr()
    doc = json.loads(out)
    assert doc['schema'] == sasaki.main.SCHEMA
    assert [m['model'] for m in doc['models']] == list(sasaki.zoo.MODEL_IDS)
    assert [c['check'] for c in doc['checks']] == list(sasaki.checks.CATALOGUE)
    anchors = {c['check']: c['anchor'] for c in doc['checks']}
    assert anchors['check_iphi_riem'] == 'Proposition: i_phi Riem vanishes'
    assert anchors['check_lefschetz_injectivity'].startswith('Main theorem, proof step')
    assert all(c['anchor'] and c['statement'] for c in doc['checks'])
    assert len(set(anchors.values())) == len(anchors)

def test_run(environ, capsys):
    assert sasaki.main.doit(['run', '--model', 'darboux-sasakian:1',
                             '--checks', 'validate_acms,check_easy_facts'], environ) == 0
    out, _ = capsys.readouterr()
    lines = _lines(out)
    assert len(lines) == 2
    assert lines[0].split()[:3] == ['PASSED', 'validate_acms', 'darboux-sasakian:1']
    assert lines[1].split()[:2] == ['PASSED', 'check_easy_facts']
    assert '(3 points' in lines[0]

def test_run_from_environment(environ, capsys):
    env = dict(environ)
    env['SASAKI_MODEL'] = 's5-nearly-sasakian'
    env['SASAKI_CHECKS'] = 'check_main_theorem_mechanism'
    assert sasaki.main.doit(['run'], env) == 0
    out, _ = capsys.readouterr()
    lines = _lines(out)
    assert lines[0].split()[:3] == ['SKIPPED', 'check_main_theorem_mechanism',
                                   's5-nearly-sasakian']
    assert lines[1] == '    note: skipped: dimension 5 < 7'

def test_run_failing(environ, capsys):
    assert sasaki.main.doit(['run', '--model', 'darboux-perturbed:1',
                             '--checks', 'check_easy_facts'], environ) == 1
    out, _ = capsys.readouterr()
    lines = _lines(out)
    assert lines[0].startswith('FAILED')
    assert any(l.startswith('    failed: gate: nearly Sasakian') for l in lines)

def test_json(environ, capsys):
    args = ['run', '--model', 'darboux-pseudo:1:-', '--format', 'json',
            '--checks', 'validate_acms,check_contactness']
    assert sasaki.main.doit(args, environ) == 0
    first, _ = capsys.readouterr()
    assert sasaki.main.doit(args, environ) == 0
    second, _ = capsys.readouterr()
    assert first == second
    doc = json.loads(first)
    assert doc['schema'] == sasaki.main.SCHEMA
    assert doc['config']['seed'] == sasaki.checks.DEFAULT_SEED
    assert doc['config']['points'] == 3
    assert [r['check'] for r in doc['reports']] == ['validate_acms', 'check_contactness']
    assert [r['status'] for r in doc['reports']] == ['passed', 'skipped']
    assert doc['reports'][0]['residuals']['g(xi, xi) = 1']['tolerance'] == 1e-8

def test_out_file(environ, capsys, tmpdir):
    path = str(tmpdir.join('report.json'))
    assert sasaki.main.doit(['run', '--model', 'darboux-sasakian:1', '--checks',
                             'check_lefschetz_injectivity', '--format', 'json',
                             '--out', path, '--seed', '3'], environ) == 0
    out, _ = capsys.readouterr()
    assert out == ''
    with open(path) as f:
        doc = json.load(f)
    assert doc['reports'][0]['status'] == 'passed'
    assert doc['reports'][0]['seed'] == 3

def _usage_error(args, environ):
    with pytest.raises(SystemExit) as ex:
        sasaki.main.doit(args, environ)
    assert ex.value.code == 2

def test_usage_errors(environ):
    _usage_error(['run', '--model', 'darboux-sasakian:0'], environ)
    _usage_error(['run', '--model', 'no-such-model'], environ)
    _usage_error(['run', '--model', 's5-nearly-sasakian', '--checks', 'check_nothing'], environ)
    _usage_error(['run'], environ)
    _usage_error(['run', '--model', 's5-nearly-sasakian', '--points', '0'], environ)
    _usage_error(['run', '--model', 's5-nearly-sasakian', '--tol', '-1'], environ)
    _usage_error(['run', '--model', 's5-nearly-sasakian', '--format', 'xml'], environ)
    env = dict(environ)
    env['SASAKI_SEED'] = 'seven'
    _usage_error(['run', '--model', 's5-nearly-sasakian'], env)
    _usage_error([], environ)
