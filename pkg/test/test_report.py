import json
import numpy as np
import sasaki.exceptions
from sasaki import report
from sasaki.report import CheckReport, SpectrumResult

def test_record_keeps_max():
    r = CheckReport('c', 'm', 1e-8, seed=1, points=2)
    r.record('a', 1e-10)
    r.record('a', 1e-12)
    assert r.residuals['a'] == 1e-10
    assert r.status == report.PASSED
    r.record('a', float('nan'))
    assert r.residuals['a'] == float('inf')
    assert r.status == report.FAILED
    assert r.failures() == ['a']

def test_own_tolerance():
    r = CheckReport('c', 'm', 1e-8)
    r.record('count', 0, 0.5)
    r.record('loose', 1e-7, 1e-6)
    assert r.passed
    assert r.tolerance_for('count') == 0.5
    assert r.tolerance_for('other') == 1e-8
    r.record('count', 1, 0.5)
    assert r.failures() == ['count']

def test_skip_and_error():
    r = CheckReport('c', 'm', 1e-8)
    r.skip('skipped: because')
    r.skip('skipped: because')
    assert r.status == report.SKIPPED
    assert r.notes == ['skipped: because']
    assert not r.passed
    r.fail_with(sasaki.exceptions.ChartDomainError((2.0,), '|u| >= 1'), np.array([2.0]))
    assert r.status == report.ERRORED
    assert r.error_point == [2.0]

def test_to_dict_is_json():
    r = CheckReport('c', 'm', 1e-8, seed=7, points=1)
    r.record('bad', float('inf'))
    r.value('vector', np.arange(3, dtype=float))
    r.value('count', np.int64(4))
    r.spectrum = SpectrumResult([0.0, -1.0, -1.0], [(0.0, 1), (-1.0, 2)],
                                [1.0, -2.0, 1.0, 0.0], [3.0, -2.0, 2.0, -2.0], 0.0)
    d = r.to_dict()
    assert d['residuals']['bad'] == {'max': 'inf', 'tolerance': 1e-8}
    assert d['values'] == {'vector': [0.0, 1.0, 2.0], 'count': 4}
    assert d['spectrum']['multiplicities'] == [[0.0, 1], [-1.0, 2]]
    assert json.loads(json.dumps(d, allow_nan=False)) == d
    assert d['status'] == 'failed'
    assert 'error' not in d

def test_spectrum_warnings_in_dict():
    spec = SpectrumResult([0.0, -1.0], [(0.0, 1), (-1.0, 1)], [1.0, 1.0, 0.0],
                          [2.0, -1.0, 1.0], 0.0,
                          warnings=['eigenvalues -1 and -1 closer than 1e-06: ill-conditioned'])
    assert spec.to_dict()['warnings'] == spec.warnings
    assert SpectrumResult([0.0], [(0.0, 1)], [1.0, 0.0], [1.0, 0.0], 0.0).to_dict()['warnings'] == []
