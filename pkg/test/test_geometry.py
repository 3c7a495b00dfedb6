import itertools
import math
import numpy as np
import pytest
import sasaki.exceptions
import sasaki.zoo
from sasaki import geometry, jet, tensor
from sasaki.geometry import MetricField, TensorField

def _round_sphere():
    # (theta, phi) chart on the unit 2-sphere
    def g(c):
        s = jet.sin(c[0])
        return [[1.0, 0.0], [0.0, s * s]]
    return MetricField(2, g, name='round')

_X = [0.7, -0.4]

def test_christoffel():
    gamma = geometry.christoffel(_round_sphere(), _X).components
    theta = _X[0]
    assert np.isclose(gamma[0, 1, 1], -math.sin(theta) * math.cos(theta))
    assert np.isclose(gamma[1, 0, 1], math.cos(theta) / math.sin(theta))
    assert np.isclose(gamma[1, 1, 0], math.cos(theta) / math.sin(theta))
    assert np.isclose(gamma[0, 0, 0], 0.0)

def test_sectional_curvature():
    g = _round_sphere()
    assert np.isclose(geometry.sectional_curvature(g, _X, [1.0, 0.0], [0.0, 1.0]), 1.0)
    assert np.isclose(geometry.sectional_curvature(g, _X, [1.0, 2.0], [-0.5, 1.0]), 1.0)
    with pytest.raises(sasaki.exceptions.DegenerateFormError):
        geometry.sectional_curvature(g, _X, [1.0, 0.0], [2.0, 0.0])

def test_riemann_two_routes():
    for g, x in ((_round_sphere(), _X),
                 (sasaki.zoo.get_model('darboux-sasakian:2').g, [0.1, -0.3, 0.5, 0.2, 0.4])):
        r, riem = geometry.riemann(g, x)
        assert r.valence == (1, 3)
        assert riem.valence == (0, 4)
        assert tensor.residual(r, geometry.riemann_nested(g, x)) < 1e-10
        for which in tensor.CURVATURE_SYMMETRIES:
            assert tensor.apply_group_element(riem, tensor.ga(4, which)).norm() < 1e-10

def test_reeb_sectional_curvature():
    structure = sasaki.zoo.get_model('darboux-sasakian:1')
    x = [0.3, -0.6, 0.2]
    xi = structure.xi.at(x).components
    assert np.isclose(geometry.sectional_curvature(structure.g, x, xi, [1.0, 0.0, 0.0]), 1.0)
    assert np.isclose(geometry.sectional_curvature(structure.g, x, xi, [0.0, 1.0, 0.0]), 1.0)

def test_metric_parallel():
    g = sasaki.zoo.get_model('darboux-perturbed:1').g
    x = [0.2, 0.5, -0.1]
    assert geometry.cov_derivative(g, x, g).norm() < 1e-12
    assert geometry.cov2_derivative(g, x, g).norm() < 1e-11

def test_cov_derivative_slots():
    g = _round_sphere()
    # d/dphi is Killing: nabla V is g-skew
    v = TensorField.constant(1, 0, [0.0, 1.0], name='d_phi')
    nabla = geometry.cov_derivative(v, _X, g)
    assert nabla.valence == (1, 1)
    low = tensor.compose(g.at(_X), nabla).components
    assert np.allclose(low, -low.T)
    # nabla_{d_theta} d_phi = cot(theta) d_phi
    assert np.allclose(nabla([1.0, 0.0]), [0.0, math.cos(_X[0]) / math.sin(_X[0])])

def test_exterior_derivative():
    g = sasaki.zoo.get_model('darboux-sasakian:1').g
    omega = TensorField(0, 1, 3, lambda c: [c[0] * c[1], c[2] * c[2], jet.sin(c[0])],
                        name='omega')
    x = [0.4, -0.2, 0.9]
    d = geometry.exterior_derivative(omega, x, g).components
    assert np.isclose(d[0, 1], -x[0])
    assert np.isclose(d[0, 2], math.cos(x[0]))
    assert np.isclose(d[1, 2], -2.0 * x[2])
    assert np.allclose(d, -d.T)
    assert geometry.exterior_derivative_squared(omega, x, g).norm() < 1e-10

def test_exterior_derivative_of_two_form():
    structure = sasaki.zoo.get_model('darboux-perturbed:2')
    x = [0.1, 0.2, -0.3, 0.4, 0.5]
    nabla = geometry.cov_derivative(structure.phi_form, x, structure.g)
    d = geometry.exterior_derivative(structure.phi_form, x, structure.g)
    cyclic = tensor.apply_group_element(nabla, tensor.ga(3, '1 + (1,2,3) + (1,3,2)'))
    assert tensor.residual(d, cyclic) < 1e-12
    assert tensor.alternation_residual(d) < 1e-12
    assert geometry.exterior_derivative_squared(structure.phi_form, x, structure.g).norm() < 1e-10
    with pytest.raises(sasaki.exceptions.NotAlternatingError):
        geometry.exterior_derivative(structure.g, x, structure.g)

def test_exterior_element():
    assert geometry.exterior_element(1) == tensor.ga(2, '1 - (1,2)')
    assert geometry.exterior_element(0) == tensor.GroupAlgebraElement.identity(1)
    assert geometry.shift_element(tensor.ga(2, '1 - (1,2)')) == tensor.ga(3, '1 - (2,3)')

def test_lie():
    g = _round_sphere()
    d_phi = TensorField.constant(1, 0, [0.0, 1.0])
    d_theta = TensorField.constant(1, 0, [1.0, 0.0])
    assert geometry.lie_derivative_metric(g, d_phi, _X).norm() < 1e-14
    lie = geometry.lie_derivative_metric(g, d_theta, _X).components
    assert np.allclose(lie, [[0.0, 0.0], [0.0, 2.0 * math.sin(_X[0]) * math.cos(_X[0])]])
    u = TensorField(1, 0, 2, lambda c: [0.0, c[0]])
    assert np.allclose(geometry.lie_bracket(u, d_theta, _X).components, [0.0, -1.0])

def test_metric_checks():
    g = _round_sphere()
    g.check(_X)
    with pytest.raises(sasaki.exceptions.SingularMetricError):
        g.check([1e-7, 0.0])
    with pytest.raises(sasaki.exceptions.SingularMetricError):
        g.connection([0.0, 0.0])
    lorentz = MetricField(2, lambda c: [[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(sasaki.exceptions.SignatureError):
        lorentz.check([0.0, 0.0])
    MetricField(2, lambda c: [[1.0, 0.0], [0.0, -1.0]], signature=[-1, 1]).check([0.0, 0.0])
    with pytest.raises(sasaki.exceptions.SignatureError):
        MetricField(2, lambda c: [[1.0, 0.0], [0.0, 1.0]], signature=[1])
    assert not MetricField(2, lambda c: np.eye(2), signature=[1, -1]).riemannian

def test_field_shapes():
    t = TensorField(1, 1, 3, lambda c: np.zeros((3, 2)))
    with pytest.raises(sasaki.exceptions.DimensionError):
        t.at([0.0, 0.0, 0.0])
    g = _round_sphere()
    with pytest.raises(sasaki.exceptions.DimensionError):
        g.at([0.0, 0.0, 0.0])
    assert g.jet(_X) is g.jet(_X)

_MODELS = ['darboux-sasakian:2', 's5-nearly-sasakian', 'darboux-perturbed:2',
           'darboux-pseudo:2:-+']

def _composed(t1, t2):
    n1 = t1.p + t1.q
    def evaluator(c):
        return np.tensordot(t1.evaluate(c), t2.evaluate(c),
                            axes=(list(range(n1 - t2.p, n1)), list(range(t2.p))))
    return TensorField(t1.p, t1.q - t2.p + t2.q, t1.dim, evaluator)

def _quadratic_vector(dim):
    return TensorField(1, 0, dim, lambda c: [c[(i + 1) % dim] * c[i] + 0.5
                                             for i in range(dim)], name='v')

def _quadratic_form(rng, dim, q):
    coef = rng.normal(size=(dim,) * q + (dim,))
    def evaluator(c):
        mon = np.array([c[m] * c[(m + 1) % dim] + 1.0 for m in range(dim)], dtype=object)
        return np.tensordot(coef, mon, axes=([q], [0]))
    return TensorField(0, q, dim, evaluator, name='T')

def _permuted(t, s):
    axes = list(range(t.p)) + [t.p + i for i in s]
    return TensorField(t.p, t.q, t.dim, lambda c: np.transpose(t.evaluate(c), axes))

@pytest.mark.parametrize('model_id', _MODELS)
def test_leibniz_rule(model_id):
    structure = sasaki.zoo.get_model(model_id)
    g = structure.g
    for t1, t2 in ((structure.phi_form, structure.phi), (structure.phi, structure.phi)):
        field = _composed(t1, t2)
        # free slots of t1 that stay in front of the direction slot
        k = t1.q - t2.p
        q = field.q + 1
        move = (k,) + tuple(range(k)) + tuple(range(k + 1, q))
        for x in structure.sample(3, 7):
            lhs = geometry.cov_derivative(field, x, g)
            rhs = (tensor.compose(geometry.cov_derivative(t1, x, g), t2.at(x)) +
                   tensor.permute(tensor.compose(t1.at(x),
                                                 geometry.cov_derivative(t2, x, g)), move))
            assert tensor.residual(lhs, rhs) < 1e-8

@pytest.mark.parametrize('model_id', ['darboux-sasakian:1', 's5-nearly-sasakian'])
def test_nabla_of_permuted_field(model_id, rng):
    structure = sasaki.zoo.get_model(model_id)
    t = _quadratic_form(rng, structure.dim, 3)
    x = structure.sample(1, 7)[0]
    nabla = geometry.cov_derivative(t, x, structure.g)
    for s in itertools.permutations(range(3)):
        lhs = geometry.cov_derivative(_permuted(t, s), x, structure.g)
        assert tensor.residual(lhs, tensor.permute(nabla, tensor.shift(s))) < 1e-8

@pytest.mark.parametrize('model_id', _MODELS)
def test_torsion_free(model_id):
    structure = sasaki.zoo.get_model(model_id)
    g = structure.g
    v = _quadratic_vector(structure.dim)
    w = _composed(structure.phi, v)
    points = list(structure.sample(3, 7)) + [np.full(structure.dim, 0.05)]
    for x in points:
        for a, b in ((structure.xi, v), (v, w), (structure.xi, w)):
            lhs = (tensor.compose(geometry.cov_derivative(b, x, g), a.at(x)) -
                   tensor.compose(geometry.cov_derivative(a, x, g), b.at(x)))
            assert tensor.residual(lhs, geometry.lie_bracket(a, b, x)) < 1e-8

def test_point_cache():
    cache = geometry.PointCache(size=2)
    assert cache.get((0.0,)) is None
    first = object()
    assert cache.put((0.0,), first) is first
    assert cache.put((0.0,), object()) is first
    cache.put((1.0,), 1)
    cache.put((2.0,), 2)
    assert len(cache) <= 2
    assert cache.get((2.0,)) == 2
    unbounded = geometry.PointCache(size=None)
    for i in range(500):
        unbounded.put((float(i),), i)
    assert len(unbounded) == 500
