"""
Module containing exceptions thrown by :mod:`sasaki`.
"""

class SasakiError(Exception):
    """
    Base exception class for all sasaki errors
    """
    pass

class SasakiUnexpectedError(SasakiError):
    """
    Unexpected value error
    """
    def __init__(self, got, expected):
        """
        :param got: Actual value received
        :param expected: Value that was expected
        """
        super(SasakiUnexpectedError, self).__init__()
        self.got = got
        self.expected = expected

class ValenceError(SasakiUnexpectedError):
    """
    Tensor valence or permutation arity didn't fit the operation
    """
    def __str__(self):
        return 'expected valence %s, got %s' % (self.expected, self.got)

class DimensionError(SasakiUnexpectedError):
    """
    Tensors live in spaces of different dimension
    """
    def __str__(self):
        return 'expected dimension %s, got %s' % (self.expected, self.got)

class SignatureError(SasakiUnexpectedError):
    """
    Metric signature differs from the declared one, or can't carry an
    almost contact metric structure
    """
    def __str__(self):
        return 'expected signature %s, got %s' % (self.expected, self.got)

class JetDomainError(SasakiError):
    """
    Jet operation evaluated outside its domain
    """
    def __init__(self, op, value):
        """
        :param op: Name of the operation (``div``, ``sqrt``)
        :type op: str

        :param value: Offending value part
        :type value: float
        """
        super(JetDomainError, self).__init__()
        self.op = op
        self.value = value

    def __str__(self):
        return '%s undefined at value %r' % (self.op, self.value)

class SingularMetricError(SasakiError):
    """
    Metric is (numerically) degenerate at a point
    """
    def __init__(self, point, det):
        """
        :param point: Chart point
        :type point: tuple

        :param det: Determinant of the metric there
        :type det: float
        """
        super(SingularMetricError, self).__init__()
        self.point = point
        self.det = det

    def __str__(self):
        return 'singular metric at %s (det %.3e)' % (self.point, self.det)

class ChartDomainError(SasakiError):
    """
    Point lies outside the domain of a chart
    """
    def __init__(self, point, reason):
        super(ChartDomainError, self).__init__()
        self.point = point
        self.reason = reason

    def __str__(self):
        return 'point %s outside chart: %s' % (self.point, self.reason)

class NotAlternatingError(SasakiError):
    """
    Form expected to be alternating isn't
    """
    def __init__(self, residual):
        super(NotAlternatingError, self).__init__()
        self.residual = residual

    def __str__(self):
        return 'not alternating (residual %.3e)' % self.residual

class SymmetryPreconditionError(SasakiError):
    """
    (0,4)-tensor lacks one of the curvature-type symmetries
    """
    def __init__(self, which, residual):
        """
        :param which: The failing symmetry, as a group algebra element string
        :type which: str

        :param residual: Size of the violation
        :type residual: float
        """
        super(SymmetryPreconditionError, self).__init__()
        self.which = which
        self.residual = residual

    def __str__(self):
        return 'symmetry %s violated (residual %.3e)' % (self.which, self.residual)

class StructureError(SasakiError):
    """
    Malformed almost contact metric data
    """
    def __init__(self, reason):
        super(StructureError, self).__init__()
        self.reason = reason

    def __str__(self):
        return 'bad structure: %s' % self.reason

class DegenerateFormError(SasakiError):
    """
    2-form expected to be nondegenerate isn't
    """
    def __init__(self, det):
        super(DegenerateFormError, self).__init__()
        self.det = det

    def __str__(self):
        return 'degenerate 2-form (det %.3e)' % self.det

class UnknownModelError(SasakiError):
    """
    Model id not in the registry
    """
    def __init__(self, model_id):
        super(UnknownModelError, self).__init__()
        self.model_id = model_id

    def __str__(self):
        return 'unknown model: %s' % self.model_id

class UnknownCheckError(SasakiError):
    """
    Check id not in the catalogue
    """
    def __init__(self, check_id):
        super(UnknownCheckError, self).__init__()
        self.check_id = check_id

    def __str__(self):
        return 'unknown check: %s' % self.check_id
