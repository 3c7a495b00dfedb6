"""
Almost contact metric structures on charts, their derived operators and
defect tensors, and a registry of concrete models.

Models are looked up by id:

- ``darboux-sasakian:n``: the standard Sasakian structure on ``R^(2n+1)``
- ``darboux-pseudo:n:+-``: the same with one transverse sign per block
- ``darboux-perturbed:n``: transverse metric rescaled by ``1 + 0.01 f``,
  still an almost contact metric structure but not nearly Sasakian
- ``s5-nearly-sasakian``: a small sphere in ``S^6``, nearly Sasakian and
  not Sasakian
"""

import logging
import math
import re
from collections import OrderedDict

import numpy as np

from sasaki import exceptions, jet, octonion, tensor
from sasaki.geometry import (MetricField, PointCache, TensorField,
                             cov2_derivative, cov_derivative, exterior_derivative,
                             riemann)
from sasaki.report import CheckReport

logger = logging.getLogger(__name__)

#: Default distance kept from the edge of a chart domain when sampling
DEFAULT_MARGIN = 0.1

#: Lower bound of the Sasakian defect g-norm on ``s5-nearly-sasakian``; the
#: construction gives ``2 sqrt(3)`` at every point
S5_DEFECT_FLOOR = 3.4

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_SQRT2 = math.sqrt(2.0)

_CACHE_SIZE = 64

def _key(x):
    return tuple(float(c) for c in np.asarray(x, dtype=float).ravel())

class DerivedOperators(object):
    """
    Operators built from an almost contact metric structure at one point,
    computed on first use.

    Notation: ``A = nabla xi``, ``A2 = A o A``, ``h = nabla_xi phi``.
    """

    def __init__(self, structure, x):
        self.structure = structure
        self.x = _key(x)
        self._memo = PointCache(size=None)

    def _get(self, name, build):
        value = self._memo.get(name)
        if value is None:
            logger.debug('computing %s at %s', name, self.x)
            value = self._memo.put(name, build())
        return value

    # fields at the point

    @property
    def g(self):
        return self._get('g', lambda: self.structure.g.at(self.x))

    @property
    def phi(self):
        return self._get('phi', lambda: self.structure.phi.at(self.x))

    @property
    def xi(self):
        return self._get('xi', lambda: self.structure.xi.at(self.x))

    @property
    def eta(self):
        return self._get('eta', lambda: self.structure.eta.at(self.x))

    @property
    def identity(self):
        return tensor.identity(self.structure.dim)

    # first order

    @property
    def nabla_xi(self):
        return self._get('A', lambda: cov_derivative(self.structure.xi, self.x,
                                                     self.structure.g))

    @property
    def nabla_xi_sq(self):
        return self._get('A2', lambda: tensor.power(self.nabla_xi, 2))

    @property
    def nabla_phi(self):
        return self._get('nabla_phi', lambda: cov_derivative(self.structure.phi, self.x,
                                                             self.structure.g))

    @property
    def nabla_eta(self):
        return self._get('nabla_eta', lambda: cov_derivative(self.structure.eta, self.x,
                                                             self.structure.g))

    @property
    def h(self):
        """``nabla_xi phi`` as a (1,1) tensor."""
        return self._get('h', lambda: tensor.insert(self.nabla_phi, 0, self.xi))

    @property
    def phi_h(self):
        return self._get('phi_h', lambda: tensor.compose(self.phi, self.h))

    @property
    def d_eta(self):
        return self._get('d_eta', lambda: exterior_derivative(self.structure.eta, self.x,
                                                              self.structure.g))

    # second order

    @property
    def nabla2_xi(self):
        return self._get('nabla2_xi', lambda: cov2_derivative(self.structure.xi, self.x,
                                                              self.structure.g))

    @property
    def nabla2_phi(self):
        return self._get('nabla2_phi', lambda: cov2_derivative(self.structure.phi, self.x,
                                                               self.structure.g))

    def _curvature(self):
        return riemann(self.structure.g, self.x)

    @property
    def curvature(self):
        """(1,3) tensor ``R(X, Y, Z) = R_{X,Y} Z``."""
        return self._get('curvature', self._curvature)[0]

    @property
    def riem(self):
        """(0,4) tensor ``g(R_{X,Y} Z, W)``."""
        return self._get('curvature', self._curvature)[1]

    @property
    def r_phi(self):
        """``(R_{X,Y} phi) Z = R_{X,Y} phi Z - phi R_{X,Y} Z`` from the curvature."""
        return self._get('r_phi', lambda: (
            tensor.insert_operator(self.curvature, 2, self.phi) -
            tensor.compose(self.phi, self.curvature)))

    @property
    def r_phi_nested(self):
        """``R_{X,Y} phi`` as the skew part of ``nabla^2 phi``."""
        return self._get('r_phi_nested', lambda: tensor.apply_group_element(
            self.nabla2_phi, tensor.ga(3, '1 - (1,2)')))

    # forms

    @property
    def big_phi(self):
        """``Phi = g o (phi (x) id)``, i.e. ``Phi(X, Y) = g(phi X, Y)``."""
        return self._get('Phi', lambda: tensor.compose(
            self.g, tensor.tensor_product(self.phi, self.identity)))

    @property
    def psi(self):
        """``Psi = g o (h (x) id)``."""
        return self._get('Psi', lambda: tensor.compose(
            self.g, tensor.tensor_product(self.h, self.identity)))

    @property
    def nabla_h(self):
        """``(nabla_X h) Y = (nabla^2_{X,xi} phi) Y + (nabla_{A X} phi) Y``."""
        return self._get('nabla_h', lambda: (
            tensor.insert(self.nabla2_phi, 1, self.xi) +
            tensor.insert_operator(self.nabla_phi, 0, self.nabla_xi)))

    @property
    def nabla_big_phi(self):
        return self._get('nabla_Phi', lambda: tensor.compose(
            self.g, tensor.tensor_product(self.nabla_phi, self.identity)))

    @property
    def nabla_psi(self):
        return self._get('nabla_Psi', lambda: tensor.compose(
            self.g, tensor.tensor_product(self.nabla_h, self.identity)))

class AcmsField(object):
    """
    Almost contact metric structure ``(phi, xi, eta, g)`` on a chart of odd
    dimension ``2n + 1``.
    """

    def __init__(self, model_id, g, phi, xi, eta, sampler=None, domain=None,
                 description=''):
        """
        :param model_id: Registry id
        :type model_id: str

        :param g: Metric
        :type g: sasaki.geometry.MetricField

        :param phi: (1,1) field
        :type phi: sasaki.geometry.TensorField

        :param xi: (1,0) field
        :type xi: sasaki.geometry.TensorField

        :param eta: (0,1) field
        :type eta: sasaki.geometry.TensorField

        :param sampler: ``sampler(rng, margin)`` returning one chart point
        :type sampler: callable

        :param domain: ``domain(x)`` raising :class:`sasaki.exceptions.ChartDomainError` outside the chart
        :type domain: callable

        :raises sasaki.exceptions.StructureError: Even dimension
        :raises sasaki.exceptions.ValenceError: A field has the wrong valence
        """
        dim = g.dim
        if dim % 2 == 0:
            raise exceptions.StructureError('even dimension %d' % dim)
        for field, valence in ((phi, (1, 1)), (xi, (1, 0)), (eta, (0, 1))):
            if field.valence != valence:
                raise exceptions.ValenceError(field.valence, valence)
            if field.dim != dim:
                raise exceptions.DimensionError(field.dim, dim)
        self.model_id = model_id
        self.g = g
        self.phi = phi
        self.xi = xi
        self.eta = eta
        self.description = description
        self._sampler = sampler
        self._domain = domain
        self._derived = PointCache(_CACHE_SIZE)
        self.phi_form = TensorField(0, 2, dim, self._phi_form_components, name='Phi')

    def _phi_form_components(self, coords):
        ph = self.phi.evaluate(coords)
        gm = self.g.evaluate(coords)
        dim = self.dim
        return [[sum((ph[a, i] * gm[a, j] for a in range(dim)), 0.0)
                 for j in range(dim)] for i in range(dim)]

    @property
    def dim(self):
        return self.g.dim

    @property
    def n(self):
        return (self.g.dim - 1) // 2

    @property
    def signature(self):
        return self.g.signature

    @property
    def riemannian(self):
        return self.g.riemannian

    def check_domain(self, x):
        """
        :raises sasaki.exceptions.ChartDomainError: ``x`` outside the chart
        """
        x = np.asarray(x, dtype=float).ravel()
        if x.shape[0] != self.dim:
            raise exceptions.DimensionError(x.shape[0], self.dim)
        if self._domain is not None:
            self._domain(x)

    def sample(self, count, seed, margin=DEFAULT_MARGIN):
        """
        Seeded chart points.

        :param count: Number of points
        :type count: int

        :param seed: Generator seed
        :type seed: int

        :rtype: numpy.ndarray
        :returns: ``count`` x ``dim`` array
        """
        rng = np.random.default_rng(seed)
        sampler = self._sampler or _box_sampler(self.dim)
        points = np.array([sampler(rng, margin) for _ in range(count)]).reshape(count, self.dim)
        logger.debug('sampled %d points of %s with seed %s', count, self.model_id, seed)
        return points

    def derived(self, x):
        """
        :rtype: DerivedOperators
        """
        self.check_domain(x)
        key = _key(x)
        d = self._derived.get(key)
        if d is None:
            d = self._derived.put(key, DerivedOperators(self, key))
        return d

    def with_phi_scaled(self, factor):
        """Copy with ``phi`` multiplied by ``factor`` (a deliberately broken structure)."""
        phi = self.phi
        scaled = TensorField(1, 1, self.dim,
                             lambda c: phi.evaluate(c) * factor, name='phi*%g' % factor)
        return AcmsField('%s[phi*%g]' % (self.model_id, factor), self.g, scaled,
                         self.xi, self.eta, self._sampler, self._domain,
                         self.description)

    def __repr__(self):
        return 'AcmsField(%s, dim=%d)' % (self.model_id, self.dim)

def _box_sampler(dim, half_width=1.0):
    def sampler(rng, margin):
        r = half_width - margin
        return rng.uniform(-r, r, size=dim)
    return sampler

# ---------------------------------------------------------------------------
# validation and defects

def _vanishing(t):
    return tensor.residual(t, tensor.zeros(t.p, t.q, t.dim))

def validate_acms(structure, points, tol=tensor.DEFAULT_TOL, seed=None, progress=None):
    """
    Check the almost contact metric axioms at each point.

    :param structure: Structure to validate
    :type structure: AcmsField

    :param points: Chart points, one per row
    :type points: numpy.ndarray

    :param tol: Tolerance
    :type tol: float

    :param progress: Optional callback ``progress(check_id, done, total)``
    :type progress: callable

    :rtype: sasaki.report.CheckReport
    """
    if structure.dim % 2 == 0:
        raise exceptions.StructureError('even dimension %d' % structure.dim)
    points = np.asarray(points, dtype=float).reshape(-1, structure.dim)
    report = CheckReport('validate_acms', structure.model_id, tol, seed, len(points))
    dim = structure.dim
    for i, x in enumerate(points):
        try:
            structure.check_domain(x)
            try:
                structure.g.check(x, tol)
            except exceptions.SignatureError as ex:
                report.note(str(ex))
                report.record('metric signature', float('inf'))
            g = structure.g.at(x)
            phi = structure.phi.at(x)
            xi = structure.xi.at(x)
            eta = structure.eta.at(x)
        except (exceptions.SingularMetricError, exceptions.ChartDomainError,
                exceptions.JetDomainError) as ex:
            report.fail_with(ex, x)
            break
        ident = tensor.identity(dim)
        report.record('phi^2 = -id + xi (x) eta', tensor.residual(
            tensor.compose(phi, phi), -ident + tensor.tensor_product(xi, eta)))
        report.record('eta = g(., xi)', tensor.residual(eta, tensor.lower(xi, g)))
        report.record('g(xi, xi) = 1', abs(float(g(xi.components, xi.components)) - 1.0))
        report.record('g(phi X, Y) = -g(X, phi Y)', tensor.residual(
            tensor.compose(g, tensor.tensor_product(phi, ident)),
            -tensor.compose(g, tensor.tensor_product(ident, phi))))
        report.record('phi xi = 0', _vanishing(tensor.compose(phi, xi)))
        report.record('eta o phi = 0', _vanishing(tensor.compose(eta, phi)))
        if progress:
            progress(report.check_id, i + 1, len(points))
    logger.info('validate_acms on %s: %s', structure.model_id, report.status)
    return report

def sasakian_defect(structure, x):
    """
    ``(X, Y) -> (nabla_X phi) Y - g(X, Y) xi + eta(Y) X``; zero iff Sasakian at ``x``.

    :rtype: sasaki.tensor.PointTensor
    """
    d = structure.derived(x)
    return (d.nabla_phi - tensor.tensor_product(d.xi, d.g) +
            tensor.tensor_product(d.identity, d.eta))

def nearly_sasakian_defect(structure, x):
    """
    Symmetrisation of :func:`sasakian_defect` in its two slots; zero iff nearly
    Sasakian at ``x``.
    """
    return tensor.apply_group_element(sasakian_defect(structure, x), tensor.ga(2, '1 + (1,2)'))

def defect_norm(structure, x, t):
    """
    Metric norm ``sqrt|g_ab g^ij g^kl t^a_ik t^b_jl|`` of a (1,2) tensor.

    :rtype: float
    """
    if t.valence != (1, 2):
        raise exceptions.ValenceError(t.valence, (1, 2))
    conn = structure.g.connection(x)
    val = np.einsum('ab,ij,kl,aik,bjl->', conn.g, conn.ginv, conn.ginv,
                    t.components, t.components)
    return math.sqrt(abs(float(val)))

# ---------------------------------------------------------------------------
# Darboux models

def _darboux(n, eps, conformal=None):
    """
    Fields of the Darboux structure on ``R^(2n+1)``, coordinates
    ``(x_1..x_n, y_1..y_n, z)``, transverse metric ``eps_i / 4 (dx_i^2 + dy_i^2)``
    optionally scaled by ``conformal(coords)``.
    """
    dim = 2 * n + 1
    z = 2 * n

    def eta_components(c):
        out = [0.0] * dim
        for i in range(n):
            out[i] = -0.5 * c[n + i]
        out[z] = 0.5
        return out

    def g_components(c):
        e = eta_components(c)
        scale = conformal(c) if conformal is not None else 1.0
        out = [[e[a] * e[b] for b in range(dim)] for a in range(dim)]
        for i in range(n):
            for a in (i, n + i):
                out[a][a] = out[a][a] + 0.25 * eps[i] * scale
        return out

    def phi_components(c):
        out = [[0.0] * dim for _ in range(dim)]
        for i in range(n):
            out[n + i][i] = -float(eps[i])
            out[i][n + i] = float(eps[i])
            out[z][n + i] = eps[i] * c[n + i]
        return out

    xi = np.zeros(dim)
    xi[z] = 2.0
    signature = [1] + [e for e in eps for _ in range(2)]
    g = MetricField(dim, g_components, signature=signature)
    return (g,
            TensorField(1, 1, dim, phi_components, name='phi'),
            TensorField.constant(1, 0, xi, name='xi'),
            TensorField(0, 1, dim, eta_components, name='eta'))

def zoo_standard_sasakian(n):
    """
    Standard Sasakian structure on ``R^(2n+1)``:
    ``eta = (dz - sum y_i dx_i) / 2``, ``xi = 2 d/dz``,
    ``g = eta (x) eta + (1/4) sum (dx_i^2 + dy_i^2)``.

    :param n: Number of transverse blocks, ``>= 1``
    :type n: int

    :rtype: AcmsField
    """
    if n < 1:
        raise exceptions.StructureError('n must be >= 1, got %d' % n)
    g, phi, xi, eta = _darboux(n, [1] * n)
    return AcmsField('darboux-sasakian:%d' % n, g, phi, xi, eta,
                     description='standard Sasakian structure on R^%d' % (2 * n + 1))

def _parse_signs(signature, n):
    if isinstance(signature, str):
        if any(c not in '+-' for c in signature):
            raise exceptions.SignatureError(signature, "string of '+'/'-'")
        signs = [1 if c == '+' else -1 for c in signature]
    else:
        signs = [int(s) for s in signature]
    if len(signs) != n or any(s not in (1, -1) for s in signs):
        raise exceptions.SignatureError(signature, 'one sign per block, %d blocks' % n)
    return signs

def zoo_pseudo_sasakian(n, signature):
    """
    Darboux model with transverse metric ``(1/4) sum eps_i (dx_i^2 + dy_i^2)``.

    :param signature: One sign per block, as ``'+-'`` or a sequence of ``+1``/``-1``
    :type signature: str or sequence

    :raises sasaki.exceptions.SignatureError: Wrong length or symbols

    :rtype: AcmsField
    """
    if n < 1:
        raise exceptions.StructureError('n must be >= 1, got %d' % n)
    eps = _parse_signs(signature, n)
    g, phi, xi, eta = _darboux(n, eps)
    text = ''.join('+' if e > 0 else '-' for e in eps)
    return AcmsField('darboux-pseudo:%d:%s' % (n, text), g, phi, xi, eta,
                     description='pseudo-Sasakian Darboux structure, transverse signs %s' % text)

def zoo_perturbed(n):
    """
    Darboux model with transverse metric scaled by ``1 + 0.01 f``,
    ``f = 1 + 2 sum (x_i^2 - y_i^2)``.

    The axioms of an almost contact metric structure survive; the nearly
    Sasakian condition does not.

    :rtype: AcmsField
    """
    if n < 1:
        raise exceptions.StructureError('n must be >= 1, got %d' % n)

    def conformal(c):
        f = 1.0
        for i in range(n):
            f = f + 2.0 * (c[i] * c[i] - c[n + i] * c[n + i])
        return 1.0 + 0.01 * f

    def domain(x):
        if conformal(list(x)) <= 0.0:
            raise exceptions.ChartDomainError(_key(x), 'conformal factor not positive')

    g, phi, xi, eta = _darboux(n, [1] * n, conformal)
    return AcmsField('darboux-perturbed:%d' % n, g, phi, xi, eta, domain=domain,
                     description='Darboux structure with 1% conformal transverse perturbation')

# ---------------------------------------------------------------------------
# nearly Sasakian small sphere in S^6

def _check_frame(frame):
    q = np.eye(7) if frame is None else np.asarray(frame, dtype=float)
    if q.shape != (7, 7):
        raise exceptions.DimensionError(q.shape, (7, 7))
    if tensor.residual(q.T.dot(q), np.eye(7)) > 1e-12:
        raise exceptions.StructureError('frame is not orthogonal')
    return q

class _SmallSphere(object):
    """
    ``M = {p in S^6 : <p, e> = 1/sqrt 2}`` in ``Im O = R^7`` with the
    orthographic chart ``p(u) = Q (s u, s sqrt(1 - |u|^2), 1/sqrt 2)``,
    ``s = 1/sqrt 2``; ``e`` is the last column of ``Q``.
    """

    def __init__(self, frame):
        self.q = frame.tolist()
        self.e = [row[6] for row in self.q]

    def domain(self, x):
        r2 = float(np.dot(x, x))
        if r2 >= 1.0:
            raise exceptions.ChartDomainError(_key(x), '|u| >= 1')

    def embed(self, u):
        """Point ``p``, tangent vectors ``t_a = dp/du_a`` and unit normal ``nu``."""
        r2 = sum((c * c for c in u), 0.0)
        if jet.value_of(r2) >= 1.0:
            raise exceptions.ChartDomainError(tuple(jet.value_of(c) for c in u), '|u| >= 1')
        w = jet.sqrt(1.0 - r2)
        s = _INV_SQRT2
        local = [s * c for c in u] + [s * w, _INV_SQRT2]
        q = self.q
        p = [sum((q[k][j] * local[j] for j in range(7)), 0.0) for k in range(7)]
        tangents = []
        for a in range(5):
            slope = u[a] / w
            tangents.append([s * q[k][a] - s * slope * q[k][5] for k in range(7)])
        nu = [p[k] - _SQRT2 * self.e[k] for k in range(7)]
        return p, tangents, nu

    def chart_components(self, v):
        """Chart components of an ambient tangent vector."""
        q = self.q
        return [sum((q[k][a] * v[k] for k in range(7)), 0.0) / _INV_SQRT2 for a in range(5)]

    def reeb(self, p):
        return [_SQRT2 * c for c in octonion.cross(p, self.e)]

    def g_components(self, u):
        _, t, _ = self.embed(u)
        return [[sum((t[a][k] * t[b][k] for k in range(7)), 0.0) for b in range(5)]
                for a in range(5)]

    def xi_components(self, u):
        p, _, _ = self.embed(u)
        return self.chart_components(self.reeb(p))

    def eta_components(self, u):
        p, t, _ = self.embed(u)
        xi = self.reeb(p)
        return [sum((xi[k] * t[b][k] for k in range(7)), 0.0) for b in range(5)]

    def phi_components(self, u):
        p, t, nu = self.embed(u)
        cols = []
        for b in range(5):
            jx = octonion.cross(p, t[b])
            along = sum((jx[k] * nu[k] for k in range(7)), 0.0)
            cols.append(self.chart_components([jx[k] - along * nu[k] for k in range(7)]))
        return [[cols[b][a] for b in range(5)] for a in range(5)]

    @staticmethod
    def sampler(rng, margin):
        direction = rng.normal(size=5)
        direction = direction / np.linalg.norm(direction)
        return direction * (1.0 - margin) * rng.uniform() ** 0.2

def zoo_nearly_sasakian_s5(frame=None):
    """
    Small sphere of radius ``1/sqrt 2`` in the nearly Kaehler ``S^6``:
    ``J_p X = p x X``, unit normal ``nu = p - sqrt 2 e``,
    ``xi = -J nu``, ``phi X = J X - <J X, nu> nu``, round induced metric.

    :param frame: Orthogonal 7x7 matrix placing the chart; identity by default
    :type frame: numpy.ndarray

    :raises sasaki.exceptions.StructureError: ``frame`` not orthogonal

    :rtype: AcmsField
    """
    sphere = _SmallSphere(_check_frame(frame))
    g = MetricField(5, sphere.g_components)
    return AcmsField('s5-nearly-sasakian', g,
                     TensorField(1, 1, 5, sphere.phi_components, name='phi'),
                     TensorField(1, 0, 5, sphere.xi_components, name='xi'),
                     TensorField(0, 1, 5, sphere.eta_components, name='eta'),
                     sampler=sphere.sampler, domain=sphere.domain,
                     description='nearly Sasakian, non-Sasakian small sphere in S^6')

# ---------------------------------------------------------------------------
# registry

#: Model id templates and descriptions, in listing order
MODEL_IDS = OrderedDict([
    ('darboux-sasakian:n', 'standard Sasakian structure on R^(2n+1)'),
    ('s5-nearly-sasakian', 'nearly Sasakian, non-Sasakian S^5 in the nearly Kaehler S^6'),
    ('darboux-pseudo:n:signs', 'pseudo-Sasakian Darboux structure, one +/- per block'),
    ('darboux-perturbed:n', 'almost contact metric, not nearly Sasakian (negative control)'),
])

_DARBOUX_RE = re.compile(r'^darboux-(sasakian|perturbed):([1-9]\d*)$')
_PSEUDO_RE = re.compile(r'^darboux-pseudo:([1-9]\d*):([+-]+)$')

_models = {}

def _build(model_id):
    if model_id == 's5-nearly-sasakian':
        return zoo_nearly_sasakian_s5()
    m = _DARBOUX_RE.match(model_id)
    if m:
        n = int(m.group(2))
        if m.group(1) == 'sasakian':
            return zoo_standard_sasakian(n)
        return zoo_perturbed(n)
    m = _PSEUDO_RE.match(model_id)
    if m:
        try:
            return zoo_pseudo_sasakian(int(m.group(1)), m.group(2))
        except exceptions.SignatureError:
            raise exceptions.UnknownModelError(model_id)
    raise exceptions.UnknownModelError(model_id)

def get_model(model_id):
    """
    :param model_id: Registry id, e.g. ``darboux-sasakian:3``
    :type model_id: str

    :raises sasaki.exceptions.UnknownModelError: Id not recognised

    :rtype: AcmsField
    """
    structure = _models.get(model_id)
    if structure is None:
        structure = _build(model_id)
        _models[model_id] = structure
        logger.info('built model %s', model_id)
    return structure

def is_model_id(model_id):
    try:
        get_model(model_id)
    except exceptions.UnknownModelError:
        return False
    return True
