import itertools
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
import sasaki.exceptions
from sasaki import tensor
from sasaki.tensor import GroupAlgebraElement, PointTensor, ga, perm

def _random(rng, p, q, dim):
    return PointTensor(p, q, rng.normal(size=(dim,) * (p + q)), dim)

def _antisym(rng, dim):
    r = rng.normal(size=(dim, dim))
    return r - r.T

def test_perm():
    assert perm(3, (1, 2, 3)) == (1, 2, 0)
    assert perm(3) == (0, 1, 2)
    # rightmost cycle first
    assert perm(3, (1, 2), (2, 3)) == tensor.perm_compose(perm(3, (1, 2)), perm(3, (2, 3)))
    assert tensor.sign(perm(3, (1, 2, 3))) == 1
    assert tensor.sign(perm(4, (1, 3))) == -1
    assert tensor.perm_str(perm(4, (1, 3), (2, 4))) == '(1,3)(2,4)'
    assert tensor.perm_str(perm(2)) == '1'
    assert tensor.shift(perm(2, (1, 2))) == perm(3, (2, 3))
    s = perm(4, (1, 2, 4))
    assert tensor.perm_compose(s, tensor.perm_inverse(s)) == perm(4)
    with pytest.raises(sasaki.exceptions.ValenceError):
        perm(3, (1, 4))
    with pytest.raises(sasaki.exceptions.ValenceError):
        perm(3, (1, 1))

def test_permute_right_action(rng):
    t = _random(rng, 1, 3, 3)
    s, u = perm(3, (1, 2)), perm(3, (1, 2, 3))
    lhs = tensor.permute(tensor.permute(t, s), u)
    rhs = tensor.permute(t, tensor.perm_compose(s, u))
    assert tensor.residual(lhs, rhs) < 1e-14

def test_permute_slots(rng):
    t = _random(rng, 0, 3, 3)
    x, y, z = rng.normal(size=(3, 3))
    # (T o (1,2,3))(X, Y, Z) = T(Z, X, Y)
    assert np.isclose(tensor.permute(t, perm(3, (1, 2, 3)))(x, y, z), t(z, x, y))

def test_parse_and_str():
    assert str(ga(4, '1 - (1,3)(2,4)')) == '1 - (1,3)(2,4)'
    assert str(ga(3, '2*(1,2,3) - 1')) == '-1 + 2*(1,2,3)'
    assert str(ga(2, '(1,2) - (1,2)')) == '0'
    assert ga(3, '3') == 3 * GroupAlgebraElement.identity(3)
    assert ga(2, '1 - (1,2)') == 1 - ga(2, '(1,2)')
    with pytest.raises(ValueError):
        ga(3, '(1,2')
    with pytest.raises(ValueError):
        ga(3, '1 (1,2)')
    with pytest.raises(sasaki.exceptions.ValenceError):
        ga(2, '(1,3)')
    with pytest.raises(sasaki.exceptions.ValenceError):
        ga(2, '1') + ga(3, '1')

def test_group_algebra_products():
    c = ga(3, '(1,2,3)')
    assert c * c * c == GroupAlgebraElement.identity(3)
    assert ga(3, '(1,2)') * ga(3, '(1,2)') == ga(3, '1')
    assert ga(3, '1 + (1,2,3) + (1,3,2)') * ga(3, '1 - (1,2,3)') == GroupAlgebraElement(3)
    # the decomposition used to rebuild 2 nabla^2 phi
    two = (ga(3, '1 - (1,2)') * ga(3, '1 + (1,2,3) - (1,3,2)') +
           ga(3, '1 + (2,3)') * ga(3, '1 - (1,2,3) + (1,3,2)'))
    assert two == 2 * GroupAlgebraElement.identity(3)

def test_apply_is_a_right_action(rng):
    t = _random(rng, 1, 3, 3)
    a = ga(3, '1 - 2*(1,2) + (1,3,2)')
    b = ga(3, '(2,3) + 0.5*(1,2,3)')
    lhs = tensor.apply_group_element(tensor.apply_group_element(t, a), b)
    rhs = tensor.apply_group_element(t, a * b)
    assert tensor.residual(lhs, rhs) < 1e-13
    two = (ga(3, '1 - (1,2)') * ga(3, '1 + (1,2,3) - (1,3,2)') +
           ga(3, '1 + (2,3)') * ga(3, '1 - (1,2,3) + (1,3,2)'))
    assert tensor.residual(tensor.apply_group_element(t, two), 2.0 * t) < 1e-13

def test_point_tensor():
    t = PointTensor(1, 1, np.eye(3))
    assert t.valence == (1, 1)
    assert t.dim == 3
    assert not t.components.flags.writeable
    assert np.allclose(t(np.array([1.0, 2.0, 3.0])), [1.0, 2.0, 3.0])
    s = PointTensor(0, 0, 2.5, dim=4)
    assert s.dim == 4
    assert float(s.components) == 2.5
    with pytest.raises(sasaki.exceptions.DimensionError):
        PointTensor(1, 1, np.zeros((3, 2)))
    with pytest.raises(sasaki.exceptions.ValenceError):
        PointTensor(1, 1, np.zeros(3))
    with pytest.raises(sasaki.exceptions.DimensionError):
        PointTensor(0, 0, 1.0)
    with pytest.raises(sasaki.exceptions.ValenceError):
        t + tensor.vector([1.0, 0.0, 0.0])

def test_products(rng):
    xi = tensor.vector(rng.normal(size=3))
    eta = tensor.covector(rng.normal(size=3))
    x, y = rng.normal(size=(2, 3))
    op = tensor.tensor_product(xi, eta)
    assert op.valence == (1, 1)
    assert np.allclose(op(x), eta(x) * xi.components)
    a = tensor.operator(rng.normal(size=(3, 3)))
    # tp(A, eta)(X, Y) = eta(Y) A X
    assert np.allclose(tensor.tensor_product(a, eta)(x, y), eta(y) * a(x))
    g = tensor.identity(3)
    assert np.allclose(tensor.compose(a, xi).components, a.components.dot(xi.components))
    assert np.allclose(tensor.insert(a, 0, x).components, a(x))
    b = tensor.operator(rng.normal(size=(3, 3)))
    assert np.allclose(tensor.insert_operator(a, 0, b)(x), a(b(x)))
    assert np.allclose(tensor.power(a, 2).components, a.components.dot(a.components))
    assert tensor.residual(tensor.compose(g, a), a) == 0.0
    with pytest.raises(sasaki.exceptions.ValenceError):
        tensor.compose(eta, tensor.tensor_product(xi, xi))

def test_wedge_conventions(rng):
    eta = tensor.covector(rng.normal(size=4))
    alpha = tensor.covector(rng.normal(size=4))
    psi = PointTensor(0, 2, _antisym(rng, 4))
    x, y, z = rng.normal(size=(3, 4))
    w = tensor.wedge(eta, alpha)
    assert np.isclose(w(x, y), eta(x) * alpha(y) - eta(y) * alpha(x))
    w3 = tensor.wedge(eta, psi)
    assert np.isclose(w3(x, y, z), eta(x) * psi(y, z) + eta(y) * psi(z, x) + eta(z) * psi(x, y))
    assert tensor.alternation_residual(w3) < 1e-14
    # vector-valued: (eta ^ A)(X, Y) = eta(X) A Y - eta(Y) A X
    a = tensor.operator(rng.normal(size=(4, 4)))
    wa = tensor.wedge(eta, a)
    assert wa.valence == (1, 2)
    assert np.allclose(wa(x, y), eta(x) * a(y) - eta(y) * a(x))
    with pytest.raises(sasaki.exceptions.NotAlternatingError):
        tensor.wedge(eta, PointTensor(0, 2, rng.normal(size=(4, 4))))

def test_wedge_associative(rng):
    eta = tensor.covector(rng.normal(size=5))
    omega = PointTensor(0, 2, _antisym(rng, 5))
    beta = PointTensor(0, 2, _antisym(rng, 5))
    lhs = tensor.wedge(tensor.wedge(eta, omega), beta)
    rhs = tensor.wedge(eta, tensor.wedge(omega, beta))
    assert tensor.residual(lhs, rhs) < 1e-12

def test_operators(rng):
    a = tensor.operator(rng.normal(size=(3, 3)))
    b = tensor.operator(rng.normal(size=(3, 3)))
    ab, ba = a.components.dot(b.components), b.components.dot(a.components)
    assert np.allclose(tensor.commutator(a, b).components, ab - ba)
    assert np.allclose(tensor.anticommutator(a, b).components, ab + ba)
    r = rng.normal(size=(3, 3))
    g = tensor.PointTensor(0, 2, r.dot(r.T) + 3 * np.eye(3))
    x, y = rng.normal(size=(2, 3))
    at = tensor.transpose_g(a, g)
    assert np.isclose(g(at(x), y), g(x, a(y)))
    v = tensor.vector(x)
    assert tensor.residual(tensor.raise_(tensor.lower(v, g), g), v) < 1e-12
    with pytest.raises(sasaki.exceptions.ValenceError):
        tensor.commutator(tensor.covector(x), tensor.covector(y))

def test_commutator_with_leading_slot(rng):
    nabla = PointTensor(1, 2, rng.normal(size=(3, 3, 3)))
    h = tensor.operator(rng.normal(size=(3, 3)))
    x = rng.normal(size=3)
    # X -> [nabla_X, h]
    lhs = tensor.insert(tensor.commutator(nabla, h), 0, x).components
    nx = tensor.insert(nabla, 0, x).components
    assert np.allclose(lhs, nx.dot(h.components) - h.components.dot(nx))

def test_i_phi(rng):
    t = _random(rng, 0, 3, 3)
    assert tensor.residual(tensor.i_phi(t, tensor.identity(3)), 3.0 * t) < 1e-14
    phi = tensor.operator(rng.normal(size=(3, 3)))
    x, y, z = rng.normal(size=(3, 3))
    expected = t(phi(x), y, z) + t(x, phi(y), z) + t(x, y, phi(z))
    assert np.isclose(tensor.i_phi(t, phi)(x, y, z), expected)
    with pytest.raises(sasaki.exceptions.ValenceError):
        tensor.i_phi(tensor.vector(x), phi)

def _curvature_type(rng, dim):
    s = rng.normal(size=(dim, dim))
    s = s + s.T
    # Kulkarni-Nomizu square: S(X, W) S(Y, Z) - S(X, Z) S(Y, W)
    return PointTensor(0, 4, np.einsum('il,jk->ijkl', s, s) - np.einsum('ik,jl->ijkl', s, s))

def test_curvature_symmetries(rng):
    r = _curvature_type(rng, 4)
    for which in tensor.CURVATURE_SYMMETRIES:
        assert tensor.apply_group_element(r, ga(4, which)).norm() < 1e-12

def test_polarization(rng):
    r = _curvature_type(rng, 4)
    assert not tensor.polarization_vanishing_test(r)
    assert tensor.polarization_vanishing_test(r * 1e-12)
    assert tensor.polarization_vanishing_test(tensor.zeros(0, 4, 4))
    with pytest.raises(sasaki.exceptions.SymmetryPreconditionError):
        tensor.polarization_vanishing_test(_random(rng, 0, 4, 4))
    with pytest.raises(sasaki.exceptions.ValenceError):
        tensor.polarization_vanishing_test(_random(rng, 0, 3, 4))

def test_residual():
    assert tensor.residual(np.zeros(3), np.zeros(3)) == 0.0
    assert tensor.residual([2.0], [1.0]) == 1.0 / 3.0

@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=4), min_size=2, max_size=4, unique=True))
def test_cycle_sign(cycle):
    assert tensor.sign(perm(4, tuple(cycle))) == (-1) ** (len(cycle) - 1)

_SEEDS = st.integers(min_value=0, max_value=2 ** 32 - 1)

@pytest.mark.parametrize('q', [1, 2, 3])
@pytest.mark.parametrize('dim', [2, 3, 4])
def test_permute_right_action_exhaustive(rng, q, dim):
    t = _random(rng, 1, q, dim)
    group = list(itertools.permutations(range(q)))
    for s in group:
        once = tensor.permute(t, s)
        for u in group:
            lhs = tensor.permute(once, u)
            rhs = tensor.permute(t, tensor.perm_compose(s, u))
            assert tensor.residual(lhs, rhs) == 0.0

@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=3, max_value=5), _SEEDS)
def test_two_in_group_algebra(dim, seed):
    t = _random(np.random.default_rng(seed), 0, 3, dim)
    two = (ga(3, '1 - (1,2)') * ga(3, '1 + (1,2,3) - (1,3,2)') +
           ga(3, '1 + (2,3)') * ga(3, '1 - (1,2,3) + (1,3,2)'))
    lhs = (tensor.apply_group_element(tensor.apply_group_element(t, ga(3, '1 - (1,2)')),
                                      ga(3, '1 + (1,2,3) - (1,3,2)')) +
           tensor.apply_group_element(tensor.apply_group_element(t, ga(3, '1 + (2,3)')),
                                      ga(3, '1 - (1,2,3) + (1,3,2)')))
    assert tensor.residual(lhs, 2.0 * t) < 1e-12
    assert tensor.residual(tensor.apply_group_element(t, two), 2.0 * t) < 1e-12

@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=1),
       st.integers(min_value=0, max_value=2), st.integers(min_value=0, max_value=1),
       st.integers(min_value=0, max_value=1), st.integers(min_value=0, max_value=1), _SEEDS)
def test_compose_associative(dim, p_a, p_b, p_c, extra_a, q_c, seed):
    rng = np.random.default_rng(seed)
    # q_b >= p_c and q_a >= p_b so both bracketings are defined
    a = _random(rng, p_a, p_b + extra_a, dim)
    b = _random(rng, p_b, p_c + 1, dim)
    c = _random(rng, p_c, q_c, dim)
    lhs = tensor.compose(tensor.compose(a, b), c)
    rhs = tensor.compose(a, tensor.compose(b, c))
    assert lhs.valence == rhs.valence == (p_a, extra_a + 1 + q_c)
    assert tensor.residual(lhs, rhs) < 1e-12

@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=2, max_value=4), st.integers(min_value=1, max_value=3), _SEEDS)
def test_apply_linear(dim, q, seed):
    rng = np.random.default_rng(seed)
    t = _random(rng, 0, q, dim)
    group = list(itertools.permutations(range(q)))
    a = GroupAlgebraElement(q, {s: float(c) for s, c in zip(group, rng.normal(size=len(group)))})
    b = GroupAlgebraElement(q, {s: float(c) for s, c in zip(group, rng.normal(size=len(group)))})
    lhs = tensor.apply_group_element(t, 2.0 * a - b)
    rhs = 2.0 * tensor.apply_group_element(t, a) - tensor.apply_group_element(t, b)
    assert tensor.residual(lhs, rhs) < 1e-12
