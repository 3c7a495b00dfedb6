"""
Second-order jets: a scalar carried with its exact gradient and Hessian in
chart coordinates.

Field evaluators are written with plain arithmetic and the functions below,
so the same code runs on floats and on :class:`Jet2` values.
"""

import math
import numbers

import numpy as np

from sasaki import exceptions

class Jet2(object):
    """
    Truncated second-order Taylor expansion of a scalar function.
    """
    __slots__ = ('value', 'gradient', 'hessian')

    # numpy scalars and arrays defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(self, value, gradient, hessian):
        """
        :param value: Function value
        :type value: float

        :param gradient: First derivatives, length ``dim``
        :type gradient: numpy.ndarray

        :param hessian: Second derivatives, ``dim`` x ``dim``; symmetrised on write
        :type hessian: numpy.ndarray
        """
        self.value = float(value)
        self.gradient = np.asarray(gradient, dtype=float)
        h = np.asarray(hessian, dtype=float)
        self.hessian = 0.5 * (h + h.T)

    @classmethod
    def constant(cls, value, dim):
        return cls(value, np.zeros(dim), np.zeros((dim, dim)))

    @property
    def dim(self):
        return self.gradient.shape[0]

    def _lift(self, other):
        if isinstance(other, Jet2):
            if other.dim != self.dim:
                raise exceptions.DimensionError(other.dim, self.dim)
            return other
        if isinstance(other, numbers.Real):
            return Jet2.constant(other, self.dim)
        return None

    def _chain(self, f0, f1, f2):
        g = self.gradient
        return Jet2(f0, f1 * g, f1 * self.hessian + f2 * np.outer(g, g))

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return Jet2(self.value + other.value,
                    self.gradient + other.gradient,
                    self.hessian + other.hessian)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.value, -self.gradient, -self.hessian)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            return Jet2(self.value * other, self.gradient * other, self.hessian * other)
        other = self._lift(other)
        if other is None:
            return NotImplemented
        gu, gv = self.gradient, other.gradient
        cross = np.outer(gu, gv)
        return Jet2(self.value * other.value,
                    self.value * gv + other.value * gu,
                    self.value * other.hessian + other.value * self.hessian +
                    cross + cross.T)

    __rmul__ = __mul__

    def reciprocal(self):
        u = self.value
        if u == 0.0:
            raise exceptions.JetDomainError('div', u)
        return self._chain(1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u))

    def __truediv__(self, other):
        if isinstance(other, numbers.Real):
            if other == 0:
                raise exceptions.JetDomainError('div', float(other))
            return self * (1.0 / other)
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    __div__ = __truediv__

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other * self.reciprocal()

    __rdiv__ = __rtruediv__

    def __pow__(self, k):
        if not isinstance(k, numbers.Integral):
            return NotImplemented
        return powi(self, int(k))

    def __repr__(self):
        return 'Jet2(%r, %r, %r)' % (self.value, self.gradient.tolist(), self.hessian.tolist())

def seed_variables(point):
    """
    Independent chart variables at a point.

    :param point: Chart point
    :type point: array-like

    :rtype: list
    :returns: One :class:`Jet2` per coordinate, gradient ``e_i``, zero Hessian
    """
    point = np.asarray(point, dtype=float).ravel()
    dim = point.shape[0]
    if dim < 1:
        raise exceptions.DimensionError(dim, 'dim >= 1')
    eye = np.eye(dim)
    return [Jet2(point[i], eye[i], np.zeros((dim, dim))) for i in range(dim)]

def sin(x):
    if isinstance(x, Jet2):
        s, c = math.sin(x.value), math.cos(x.value)
        return x._chain(s, c, -s) # pylint: disable=protected-access
    return math.sin(x)

def cos(x):
    if isinstance(x, Jet2):
        s, c = math.sin(x.value), math.cos(x.value)
        return x._chain(c, -s, -c) # pylint: disable=protected-access
    return math.cos(x)

def exp(x):
    if isinstance(x, Jet2):
        e = math.exp(x.value)
        return x._chain(e, e, e) # pylint: disable=protected-access
    return math.exp(x)

def sqrt(x):
    """
    :raises sasaki.exceptions.JetDomainError: Value part not positive
    """
    if isinstance(x, Jet2):
        if x.value <= 0.0:
            raise exceptions.JetDomainError('sqrt', x.value)
        r = math.sqrt(x.value)
        return x._chain(r, 0.5 / r, -0.25 / (r * x.value)) # pylint: disable=protected-access
    if x < 0.0:
        raise exceptions.JetDomainError('sqrt', float(x))
    return math.sqrt(x)

def powi(x, k):
    """
    Integer power. Negative exponents go through the reciprocal.
    """
    if not isinstance(x, Jet2):
        if k < 0 and x == 0:
            raise exceptions.JetDomainError('div', float(x))
        return float(x) ** k
    if k < 0:
        return powi(x, -k).reciprocal()
    if k == 0:
        return Jet2.constant(1.0, x.dim)
    if k == 1:
        return x
    u = x.value
    return x._chain(u ** k, k * u ** (k - 1), k * (k - 1) * u ** (k - 2)) # pylint: disable=protected-access

def value_of(x):
    return x.value if isinstance(x, Jet2) else float(x)

def split(components, dim):
    """
    Unpack an array of jets (and plain numbers, treated as constants).

    :param components: Array-like of :class:`Jet2` or numbers, any shape
    :type components: array-like

    :param dim: Number of chart variables
    :type dim: int

    :rtype: tuple
    :returns: ``(value, d1, d2)`` float arrays of shapes ``s``, ``s + (dim,)``
              and ``s + (dim, dim)``, derivative axes last
    """
    arr = np.asarray(components, dtype=object)
    shape = arr.shape
    value = np.zeros(shape)
    d1 = np.zeros(shape + (dim,))
    d2 = np.zeros(shape + (dim, dim))
    for idx in np.ndindex(*shape):
        c = arr[idx]
        if isinstance(c, Jet2):
            if c.dim != dim:
                raise exceptions.DimensionError(c.dim, dim)
            value[idx] = c.value
            d1[idx] = c.gradient
            d2[idx] = c.hessian
        else:
            value[idx] = float(c)
    return value, d1, d2
