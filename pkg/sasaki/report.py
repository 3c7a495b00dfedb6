"""
Check reports: per-identity residuals with pass/fail against a tolerance.
"""

import numpy as np

#: Report status values
PASSED = 'passed'
FAILED = 'failed'
SKIPPED = 'skipped'
ERRORED = 'errored'

def _clean(value):
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        # strict JSON has no inf/nan
        return value if np.isfinite(value) else str(value)
    return value

class CheckReport(object):
    """
    Residual record of one check on one model.

    A report passes iff every residual is below its tolerance (the report's
    tolerance unless a residual was recorded with its own).
    """

    def __init__(self, check_id, model_id, tol, seed=None, points=0):
        """
        :param check_id: Catalogue id of the check
        :type check_id: str

        :param model_id: Registry id of the model
        :type model_id: str

        :param tol: Default tolerance
        :type tol: float

        :param seed: Seed the points were sampled with
        :type seed: int

        :param points: Number of sampled points
        :type points: int
        """
        self.check_id = check_id
        self.model_id = model_id
        self.tol = float(tol)
        self.seed = seed
        self.points = points
        self.residuals = {}
        self.tolerances = {}
        self.values = {}
        self.notes = []
        self.spectrum = None
        self.error = None
        self.error_point = None
        self._skipped = False

    def record(self, name, residual, tol=None):
        """
        Keep the largest residual seen under ``name``.

        :param name: Identity being checked
        :type name: str

        :param residual: Residual at one point
        :type residual: float

        :param tol: Tolerance for this identity, if not the report's
        :type tol: float
        """
        residual = float(residual)
        if np.isnan(residual):
            residual = float('inf')
        self.residuals[name] = max(self.residuals.get(name, 0.0), residual)
        if tol is not None:
            self.tolerances[name] = float(tol)

    def value(self, name, value):
        """Informational value, not judged."""
        self.values[name] = _clean(value)

    def note(self, text):
        if text not in self.notes:
            self.notes.append(text)

    def skip(self, reason):
        self._skipped = True
        self.note(reason)

    def fail_with(self, exc, point=None):
        self.error = str(exc)
        if point is not None:
            self.error_point = [float(c) for c in np.asarray(point).ravel()]

    def tolerance_for(self, name):
        return self.tolerances.get(name, self.tol)

    @property
    def status(self):
        if self.error is not None:
            return ERRORED
        if self._skipped:
            return SKIPPED
        return PASSED if self.passed else FAILED

    @property
    def passed(self):
        if self.error is not None or self._skipped:
            return False
        return all(r < self.tolerance_for(name) for name, r in self.residuals.items())

    def failures(self):
        return sorted(name for name, r in self.residuals.items()
                      if not r < self.tolerance_for(name))

    def to_dict(self):
        """
        :rtype: dict
        :returns: JSON-serializable form
        """
        out = {
            'check': self.check_id,
            'model': self.model_id,
            'status': self.status,
            'passed': self.status == PASSED,
            'tolerance': self.tol,
            'seed': self.seed,
            'points': self.points,
            'residuals': {name: {'max': r, 'tolerance': self.tolerance_for(name)}
                          for name, r in self.residuals.items()},
            'values': self.values,
            'notes': list(self.notes),
        }
        if self.spectrum is not None:
            out['spectrum'] = self.spectrum.to_dict()
        if self.error is not None:
            out['error'] = self.error
            out['error_point'] = self.error_point
        return _clean(out)

    def __repr__(self):
        return 'CheckReport(%s, %s, %s)' % (self.check_id, self.model_id, self.status)

class SpectrumResult(object):
    """
    Spectrum of ``(nabla xi)^2`` at a point: descending eigenvalues with
    multiplicities, signed characteristic polynomial coefficients ``e_s`` and
    power sums ``p_s``. ``warnings`` flags eigenvalue clusters too close to
    separate reliably.
    """

    def __init__(self, eigenvalues, multiplicities, e, p, newton_residual, warnings=None):
        self.eigenvalues = np.asarray(eigenvalues, dtype=float)
        self.multiplicities = list(multiplicities)
        self.e = np.asarray(e, dtype=float)
        self.p = np.asarray(p, dtype=float)
        self.newton_residual = float(newton_residual)
        self.warnings = list(warnings or [])

    def to_dict(self):
        return _clean({
            'eigenvalues': self.eigenvalues,
            'multiplicities': [[v, m] for v, m in self.multiplicities],
            'e': self.e,
            'p': self.p,
            'newton_residual': self.newton_residual,
            'warnings': self.warnings,
        })
