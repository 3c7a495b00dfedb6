"""
Chart-level pseudo-Riemannian machinery: Levi-Civita connection, iterated
covariant derivatives, curvature and exterior derivatives.

Covariant derivatives put each new direction slot first among the covariant
slots, so ``cov_derivative(T, x)(X, Y_1, ..., Y_q) == (nabla_X T)(Y_1, ..., Y_q)``
and ``cov2_derivative(T, x)(X, Y, ...)`` differentiates ``nabla T`` along ``X``.

Curvature follows ``R_{X,Y} = nabla^2_{X,Y} - nabla^2_{Y,X}`` and
``Riem(X, Y, Z, W) = g(R_{X,Y} Z, W)``.
"""

import logging
import threading

import numpy as np

from sasaki import exceptions, jet, tensor
from sasaki.tensor import PointTensor

logger = logging.getLogger(__name__)

#: Below this ``|det g|`` a metric counts as singular
SINGULAR_DET = 1e-10

_CACHE_SIZE = 256

def _key(x):
    return tuple(float(c) for c in np.asarray(x, dtype=float).ravel())

class PointCache(object):
    """
    Bounded memo of per-point values, safe to share between threads.

    Values are computed outside the lock; when two threads race on the same
    key the first stored value wins and both callers get it.
    """

    def __init__(self, size=_CACHE_SIZE):
        """
        :param size: Entries kept before the cache is emptied; ``None`` for unbounded
        :type size: int
        """
        self._size = size
        self._items = {}
        self._lock = threading.Lock()

    def get(self, key):
        with self._lock:
            return self._items.get(key)

    def put(self, key, value):
        with self._lock:
            full = self._size is not None and len(self._items) >= self._size
            if key not in self._items and full:
                self._items.clear()
            return self._items.setdefault(key, value)

    def __len__(self):
        with self._lock:
            return len(self._items)

class FieldJet(object):
    """
    Components of a tensor field at a point with their first and second
    partial derivatives (derivative axes last).
    """
    __slots__ = ('p', 'q', 'value', 'd1', 'd2')

    def __init__(self, p, q, value, d1, d2):
        self.p = p
        self.q = q
        self.value = value
        self.d1 = d1
        self.d2 = d2

    def partial(self):
        """First partials with the derivative axis first."""
        return np.moveaxis(self.d1, -1, 0)

    def partial2(self):
        """Second partials with both derivative axes first."""
        return np.moveaxis(self.d2, [-2, -1], [0, 1])

class TensorField(object):
    """
    Tensor field on a chart, given by an evaluator that accepts a list of
    coordinates (floats or :class:`sasaki.jet.Jet2`) and returns components
    shaped ``(dim,) * (p + q)``, contravariant indices first.
    """

    def __init__(self, p, q, dim, evaluator, name=None):
        self._p = p
        self._q = q
        self._dim = dim
        self._evaluator = evaluator
        self.name = name or 'field'
        self._jets = PointCache()

    @classmethod
    def constant(cls, p, q, components, name=None):
        comps = np.array(components, dtype=float)
        dim = comps.shape[0]
        return cls(p, q, dim, lambda _: comps, name)

    @property
    def p(self):
        return self._p

    @property
    def q(self):
        return self._q

    @property
    def dim(self):
        return self._dim

    @property
    def valence(self):
        return (self._p, self._q)

    def evaluate(self, coords):
        """Raw evaluator output as an object array."""
        out = np.asarray(self._evaluator(coords), dtype=object)
        shape = (self._dim,) * (self._p + self._q)
        if out.shape != shape:
            raise exceptions.DimensionError(out.shape, shape)
        return out

    def at(self, x):
        """
        :param x: Chart point
        :type x: array-like

        :rtype: sasaki.tensor.PointTensor
        """
        coords = [float(c) for c in np.asarray(x, dtype=float).ravel()]
        if len(coords) != self._dim:
            raise exceptions.DimensionError(len(coords), self._dim)
        out = self.evaluate(coords)
        comps = np.vectorize(jet.value_of, otypes=[float])(out) if out.size else out
        return PointTensor(self._p, self._q, np.asarray(comps, dtype=float), self._dim)

    def jet(self, x):
        """
        :rtype: FieldJet
        :returns: Components with exact first and second partials at ``x``
        """
        key = _key(x)
        cached = self._jets.get(key)
        if cached is not None:
            return cached
        if len(key) != self._dim:
            raise exceptions.DimensionError(len(key), self._dim)
        value, d1, d2 = jet.split(self.evaluate(jet.seed_variables(key)), self._dim)
        fj = FieldJet(self._p, self._q, value, d1, d2)
        logger.debug('jet of %s at %s', self.name, key)
        return self._jets.put(key, fj)

    def __repr__(self):
        return 'TensorField(%s, %d, %d, dim=%d)' % (self.name, self._p, self._q, self._dim)

class Connection(object):
    """Levi-Civita data at a point: metric, inverse, Christoffel symbols and their partials."""
    __slots__ = ('g', 'ginv', 'gamma', 'dgamma')

    def __init__(self, g, ginv, gamma, dgamma):
        self.g = g
        self.ginv = ginv
        # gamma[k, i, j] = Gamma^k_ij
        self.gamma = gamma
        # dgamma[a, k, i, j] = d_a Gamma^k_ij
        self.dgamma = dgamma

class MetricField(TensorField):
    """
    Symmetric nondegenerate (0,2) field with a declared signature.
    """

    def __init__(self, dim, evaluator, signature=None, name='g'):
        """
        :param dim: Chart dimension
        :type dim: int

        :param evaluator: Component evaluator, see :class:`TensorField`
        :type evaluator: callable

        :param signature: Declared signs of the eigenvalues, any order; ``None`` means all ``+1``
        :type signature: sequence
        """
        super(MetricField, self).__init__(0, 2, dim, evaluator, name)
        if signature is None:
            signature = (1,) * dim
        signature = tuple(int(s) for s in signature)
        if len(signature) != dim or any(s not in (1, -1) for s in signature):
            raise exceptions.SignatureError(signature, 'one of +1/-1 per dimension')
        self.signature = signature
        self._connections = PointCache()

    @property
    def riemannian(self):
        return all(s == 1 for s in self.signature)

    def check(self, x, tol=tensor.DEFAULT_TOL):
        """
        Verify symmetry, nondegeneracy and signature at ``x``.

        :raises sasaki.exceptions.SingularMetricError: ``|det g| < 1e-10``
        :raises sasaki.exceptions.SignatureError: Eigenvalue signs differ from the declared signature
        """
        g = self.at(x).components
        asym = tensor.residual(g, g.T)
        if asym > tol:
            raise exceptions.SignatureError('asymmetric (%.3e)' % asym, 'symmetric')
        det = float(np.linalg.det(g))
        if abs(det) < SINGULAR_DET:
            raise exceptions.SingularMetricError(_key(x), det)
        eig = np.linalg.eigvalsh(g)
        got = (int(np.sum(eig > 0)), int(np.sum(eig < 0)))
        expected = (self.signature.count(1), self.signature.count(-1))
        if got != expected:
            raise exceptions.SignatureError(got, expected)

    def connection(self, x):
        """
        :rtype: Connection
        :raises sasaki.exceptions.SingularMetricError: ``|det g| < 1e-10``
        """
        key = _key(x)
        cached = self._connections.get(key)
        if cached is not None:
            return cached
        fj = self.jet(key)
        g = fj.value
        det = float(np.linalg.det(g))
        if abs(det) < SINGULAR_DET:
            raise exceptions.SingularMetricError(key, det)
        ginv = np.linalg.inv(g)
        # d1g[i, j, l] = d_i g_jl, d2g[a, i, j, l] = d_a d_i g_jl
        d1g = fj.partial()
        d2g = fj.partial2()
        s = (np.einsum('ijl->lij', d1g) + np.einsum('jil->lij', d1g) - d1g)
        gamma = 0.5 * np.einsum('kl,lij->kij', ginv, s)
        ds = (np.einsum('aijl->alij', d2g) + np.einsum('ajil->alij', d2g) - d2g)
        dginv = -np.einsum('kb,abc,cl->akl', ginv, d1g, ginv)
        dgamma = 0.5 * (np.einsum('akl,lij->akij', dginv, s) +
                        np.einsum('kl,alij->akij', ginv, ds))
        conn = Connection(g, ginv, gamma, dgamma)
        return self._connections.put(key, conn)

def christoffel(g, x):
    """
    :param g: Metric
    :type g: MetricField

    :param x: Chart point
    :type x: array-like

    :rtype: sasaki.tensor.PointTensor
    :returns: (1,2) tensor with components ``Gamma^k_ij``
    """
    return PointTensor(1, 2, g.connection(x).gamma, g.dim)

def _connection_terms(gamma, arr, contra_axes, cov_axes):
    """Gamma acting on every index of ``arr``; the direction axis comes first."""
    out = np.zeros((gamma.shape[0],) + arr.shape)
    for r in contra_axes:
        # gamma[t, a, m] arr[.., m, ..]
        term = np.tensordot(gamma, arr, axes=([2], [r]))
        out += np.moveaxis(term, 0, r + 1)
    for s in cov_axes:
        # gamma[m, a, t] arr[.., m, ..]
        term = np.tensordot(gamma, arr, axes=([0], [s]))
        out -= np.moveaxis(term, 1, s + 1)
    return out

def _check_field(g, t):
    if t.dim != g.dim:
        raise exceptions.DimensionError(t.dim, g.dim)

def _nabla_direction_first(g, t, x):
    conn = g.connection(x)
    fj = t.jet(x)
    p, q = t.p, t.q
    contra, cov = range(p), range(p, p + q)
    return conn, fj, fj.partial() + _connection_terms(conn.gamma, fj.value, contra, cov)

def cov_derivative(t, x, g):
    """
    Covariant derivative of a tensor field at a point.

    :param t: Field of valence (p,q)
    :type t: TensorField

    :param x: Chart point
    :type x: array-like

    :param g: Metric supplying the Levi-Civita connection
    :type g: MetricField

    :rtype: sasaki.tensor.PointTensor
    :returns: (p,q+1) tensor, direction in the first covariant slot
    """
    _check_field(g, t)
    _, _, arr = _nabla_direction_first(g, t, x)
    return PointTensor(t.p, t.q + 1, np.moveaxis(arr, 0, t.p), t.dim)

def cov2_derivative(t, x, g):
    """
    Second covariant derivative, ``(X, Y, ...) -> (nabla_X (nabla T))(Y, ...)``.

    :rtype: sasaki.tensor.PointTensor
    :returns: (p,q+2) tensor, directions in the first two covariant slots
    """
    _check_field(g, t)
    conn, fj, nabla = _nabla_direction_first(g, t, x)
    p, q, dim = t.p, t.q, t.dim
    contra, cov = range(p), range(p, p + q)
    dt = fj.partial()
    # d_b of (dT + C(Gamma, T)) = ddT + C(dGamma_b, T) + C(Gamma, dT_b)
    d_nabla = fj.partial2() + np.stack(
        [_connection_terms(conn.dgamma[b], fj.value, contra, cov) +
         _connection_terms(conn.gamma, dt[b], contra, cov)
         for b in range(dim)])
    nabla2 = d_nabla + _connection_terms(conn.gamma, nabla,
                                         range(1, p + 1),
                                         [0] + list(range(p + 1, p + q + 1)))
    order = list(range(2, 2 + p)) + [0, 1] + list(range(2 + p, 2 + p + q))
    return PointTensor(p, q + 2, np.transpose(nabla2, order), dim)

def riemann(g, x):
    """
    Curvature from the Christoffel symbols and their partials.

    :param g: Metric
    :type g: MetricField

    :param x: Chart point
    :type x: array-like

    :rtype: tuple
    :returns: ``(R, Riem)``: (1,3) tensor with ``R(X, Y, Z) = R_{X,Y} Z`` and
              (0,4) tensor ``Riem(X, Y, Z, W) = g(R_{X,Y} Z, W)``
    """
    conn = g.connection(x)
    gam, dgam = conn.gamma, conn.dgamma
    r = (np.einsum('iljk->lijk', dgam) - np.einsum('jlik->lijk', dgam) +
         np.einsum('lim,mjk->lijk', gam, gam) - np.einsum('ljm,mik->lijk', gam, gam))
    riem = np.einsum('lw,lijk->ijkw', conn.g, r)
    return PointTensor(1, 3, r, g.dim), PointTensor(0, 4, riem, g.dim)

def riemann_nested(g, x):
    """
    Curvature rebuilt as ``nabla^2 Z o (1 - (1,2))`` on the coordinate fields.

    :rtype: sasaki.tensor.PointTensor
    :returns: (1,3) tensor comparable with the first output of :func:`riemann`
    """
    dim = g.dim
    skew = tensor.ga(2, '1 - (1,2)')
    cols = []
    for k in range(dim):
        e_k = TensorField.constant(1, 0, np.eye(dim)[k], name='d%d' % k)
        cols.append(tensor.apply_group_element(cov2_derivative(e_k, x, g), skew).components)
    return PointTensor(1, 3, np.stack(cols, axis=-1), dim)

def sectional_curvature(g, x, u, v):
    """
    :param u: First spanning vector
    :type u: array-like

    :param v: Second spanning vector
    :type v: array-like

    :rtype: float
    :returns: ``Riem(u, v, v, u) / (g(u,u) g(v,v) - g(u,v)^2)``
    """
    _, riem = riemann(g, x)
    gm = g.at(x)
    area = float(gm(u, u) * gm(v, v) - gm(u, v) ** 2)
    if abs(area) < SINGULAR_DET:
        raise exceptions.DegenerateFormError(area)
    return float(riem(u, v, v, u)) / area

def exterior_element(k):
    """
    Group algebra element ``D`` of arity ``k + 1`` with ``d omega = nabla omega o D``
    for a k-form ``omega``: ``sum_i (-1)^i`` moving argument ``i`` to the front.

    :rtype: sasaki.tensor.GroupAlgebraElement
    """
    terms = {}
    for i in range(k + 1):
        args = (i,) + tuple(j for j in range(k + 1) if j != i)
        terms[tensor.perm_inverse(args)] = (-1.0) ** i
    return tensor.GroupAlgebraElement(k + 1, terms)

def shift_element(a):
    """Inclusion ``s`` of :func:`sasaki.tensor.shift` extended linearly."""
    return tensor.GroupAlgebraElement(a.q + 1, {tensor.shift(s): c for s, c in a.terms.items()})

def _require_form(t, x, tol):
    if t.p != 0:
        raise exceptions.ValenceError(t.valence, '(0,k)')
    res = tensor.alternation_residual(t.at(x))
    if res > tol:
        raise exceptions.NotAlternatingError(res)

def exterior_derivative(omega, x, g, tol=tensor.DEFAULT_TOL):
    """
    Exterior derivative of a 1- or 2-form as an alternation of ``nabla``,
    without factorial factors: ``d omega = nabla omega o (1 - (1,2))`` for
    ``k = 1`` and ``nabla omega o (1 + (1,2,3) + (1,3,2))`` for ``k = 2``.

    :raises sasaki.exceptions.ValenceError: ``k > 2``
    :raises sasaki.exceptions.NotAlternatingError: ``omega`` not alternating at ``x``
    """
    if omega.q > 2:
        raise exceptions.ValenceError(omega.q, 'form degree <= 2')
    _require_form(omega, x, tol)
    nabla = cov_derivative(omega, x, g)
    return tensor.apply_group_element(nabla, exterior_element(omega.q))

def exterior_derivative_squared(omega, x, g, tol=tensor.DEFAULT_TOL):
    """
    ``d(d omega)`` from the second covariant derivative, via
    ``nabla (T o a) = nabla T o s(a)``.
    """
    if omega.q > 2:
        raise exceptions.ValenceError(omega.q, 'form degree <= 2')
    _require_form(omega, x, tol)
    k = omega.q
    element = shift_element(exterior_element(k)) * exterior_element(k + 1)
    return tensor.apply_group_element(cov2_derivative(omega, x, g), element)

def lie_bracket(u, v, x):
    """
    Bracket ``[u, v]`` of vector fields from partial derivatives only.

    :rtype: sasaki.tensor.PointTensor
    """
    if u.valence != (1, 0) or v.valence != (1, 0):
        raise exceptions.ValenceError((u.valence, v.valence), ((1, 0), (1, 0)))
    ju, jv = u.jet(x), v.jet(x)
    return tensor.vector(jv.d1.dot(ju.value) - ju.d1.dot(jv.value))

def lie_derivative_metric(g, v, x):
    """
    ``L_v g`` from partial derivatives only:
    ``v^k d_k g_ij + g_kj d_i v^k + g_ik d_j v^k``.

    :rtype: sasaki.tensor.PointTensor
    """
    jg, jv = g.jet(x), v.jet(x)
    gm = jg.value
    dv = jv.d1  # dv[k, i] = d_i v^k
    out = (np.einsum('k,ijk->ij', jv.value, jg.d1) +
           np.einsum('kj,ki->ij', gm, dv) + np.einsum('ik,kj->ij', gm, dv))
    return PointTensor(0, 2, out, g.dim)
