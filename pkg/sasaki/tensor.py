"""
Dense multilinear algebra at a point.

Components are stored contravariant indices first, then covariant ones.
Permutations act on covariant slots only:

    (T o sigma)(X_1, ..., X_q) = T(X_sigma^-1(1), ..., X_sigma^-1(q))

and are composed as functions, ``(st)(i) = s(t(i))``, which makes
:func:`permute` a right action: ``permute(T, s*t) ==
permute(permute(T, s), t)``.

Wedge products use the unnormalised shuffle sum, so that
``(eta ^ A)(X, Y) = eta(X) A(Y) - eta(Y) A(X)`` and
``(eta ^ Psi)(X, Y, Z) = eta(X) Psi(Y, Z) + eta(Y) Psi(Z, X) + eta(Z) Psi(X, Y)``.
"""

import itertools
import logging
import re

import numpy as np

from sasaki import exceptions

logger = logging.getLogger(__name__)

#: Default relative tolerance for identities evaluated from exact jets
DEFAULT_TOL = 1e-8

class PointTensor(object):
    """
    Valence-(p,q) tensor at a point of a ``dim``-dimensional space.

    Components are copied on construction and the copy is read-only.
    """

    def __init__(self, p, q, components, dim=None):
        """
        :param p: Contravariant valence
        :type p: int

        :param q: Covariant valence
        :type q: int

        :param components: Array of shape ``(dim,) * (p + q)``
        :type components: array-like

        :param dim: Ambient dimension, required only for scalars (``p + q == 0``)
        :type dim: int
        """
        if p < 0 or q < 0:
            raise exceptions.ValenceError((p, q), 'non-negative valence')
        arr = np.array(components, dtype=float)
        if p + q == 0:
            if dim is None:
                raise exceptions.DimensionError(None, 'explicit dim for a scalar')
            arr = arr.reshape(())
        else:
            if arr.ndim != p + q:
                raise exceptions.ValenceError(arr.ndim, p + q)
            if dim is None:
                dim = arr.shape[0]
            if arr.shape != (dim,) * (p + q):
                raise exceptions.DimensionError(arr.shape, (dim,) * (p + q))
        if dim < 1:
            raise exceptions.DimensionError(dim, 'dim >= 1')
        arr.flags.writeable = False
        self._p = p
        self._q = q
        self._dim = dim
        self._components = arr

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

    @property
    def components(self):
        return self._components

    def norm(self):
        """
        :rtype: float
        :returns: Largest absolute component
        """
        if self._components.size == 0:
            return 0.0
        return float(np.max(np.abs(self._components)))

    def __call__(self, *vectors):
        """
        Evaluate the covariant slots on vectors, in order.

        Fewer vectors than ``q`` fill the first slots and leave the rest open.

        :rtype: numpy.ndarray
        :returns: Remaining components (a 0-d array when fully contracted)
        """
        if len(vectors) > self._q:
            raise exceptions.ValenceError(len(vectors), self._q)
        out = self._components
        for v in vectors:
            out = np.tensordot(out, np.asarray(v, dtype=float), axes=([self._p], [0]))
        return out

    def _check_same(self, other):
        if not isinstance(other, PointTensor):
            return NotImplemented
        if other.valence != self.valence:
            raise exceptions.ValenceError(other.valence, self.valence)
        if other.dim != self.dim:
            raise exceptions.DimensionError(other.dim, self.dim)
        return other

    def __add__(self, other):
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return PointTensor(self._p, self._q, self._components + other.components, self._dim)

    def __sub__(self, other):
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return PointTensor(self._p, self._q, self._components - other.components, self._dim)

    def __neg__(self):
        return PointTensor(self._p, self._q, -self._components, self._dim)

    def __mul__(self, scalar):
        if isinstance(scalar, PointTensor):
            return NotImplemented
        return PointTensor(self._p, self._q, self._components * float(scalar), self._dim)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return PointTensor(self._p, self._q, self._components / float(scalar), self._dim)

    def __repr__(self):
        return 'PointTensor(%d, %d, dim=%d)' % (self._p, self._q, self._dim)

def vector(components):
    """Vector (1,0) from a component array."""
    return PointTensor(1, 0, components)

def covector(components):
    """One-form (0,1) from a component array."""
    return PointTensor(0, 1, components)

def operator(matrix):
    """(1,1) tensor whose component ``[a, b]`` is row ``a`` column ``b``."""
    return PointTensor(1, 1, matrix)

def identity(dim):
    """
    :param dim: Ambient dimension
    :type dim: int

    :rtype: PointTensor
    :returns: The identity endomorphism
    """
    return PointTensor(1, 1, np.eye(dim))

def zeros(p, q, dim):
    return PointTensor(p, q, np.zeros((dim,) * (p + q)), dim)

def _check_dim(t1, t2):
    if t1.dim != t2.dim:
        raise exceptions.DimensionError(t2.dim, t1.dim)

# ---------------------------------------------------------------------------
# permutations

def perm(q, *cycles):
    """
    Permutation of ``{1..q}`` from 1-based cycles, stored 0-based as a tuple of
    images. Cycles compose as functions: the rightmost acts first.

    ``perm(3, (1, 2, 3))`` sends 1 to 2, 2 to 3 and 3 to 1.

    :rtype: tuple
    """
    images = list(range(q))
    for cycle in reversed(cycles):
        c = [i - 1 for i in cycle]
        if any(i < 0 or i >= q for i in c) or len(set(c)) != len(c):
            raise exceptions.ValenceError(cycle, 'cycle in 1..%d' % q)
        step = dict(zip(c, c[1:] + c[:1]))
        images = [step.get(i, i) for i in images]
    return tuple(images)

def perm_compose(s, t):
    """``s o t`` as functions: ``t`` first."""
    if len(s) != len(t):
        raise exceptions.ValenceError(len(t), len(s))
    return tuple(s[i] for i in t)

def perm_inverse(s):
    inv = [0] * len(s)
    for i, si in enumerate(s):
        inv[si] = i
    return tuple(inv)

def sign(s):
    """
    :param s: 0-based image tuple
    :type s: tuple

    :rtype: int
    :returns: ``+1`` for even permutations, ``-1`` for odd ones
    """
    seen = [False] * len(s)
    result = 1
    for start in range(len(s)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = s[i]
            length += 1
        if length % 2 == 0:
            result = -result
    return result

def perm_str(s):
    """Cycle notation, 1-based; the identity prints as ``1``."""
    seen = [False] * len(s)
    out = []
    for start in range(len(s)):
        if seen[start] or s[start] == start:
            seen[start] = True
            continue
        cycle = []
        i = start
        while not seen[i]:
            seen[i] = True
            cycle.append(i + 1)
            i = s[i]
        out.append('(' + ','.join(str(c) for c in cycle) + ')')
    return ''.join(out) or '1'

def shift(s):
    """
    Inclusion of a permutation of ``{1..q}`` into ``{1..q+1}`` fixing 1 and
    shifting the rest up by one, as used when a new direction slot is
    prepended by covariant differentiation.
    """
    return (0,) + tuple(i + 1 for i in s)

def permute(t, s):
    """
    Act with a permutation on the covariant slots of a tensor.

    :param t: Tensor to permute
    :type t: PointTensor

    :param s: Permutation of ``{1..q}`` as a 0-based image tuple (see :func:`perm`)
    :type s: tuple

    :rtype: PointTensor
    :returns: ``T o s``, evaluating to ``T(X_s^-1(1), ..., X_s^-1(q))``
    """
    if len(s) != t.q:
        raise exceptions.ValenceError(len(s), t.q)
    axes = list(range(t.p)) + [t.p + i for i in s]
    return PointTensor(t.p, t.q, np.transpose(t.components, axes), t.dim)

# ---------------------------------------------------------------------------
# group algebra

_TERM_RE = re.compile(r'([+-])?(?:(\d+(?:\.\d*)?)\*)?((?:\(\d+(?:,\d+)*\))+|\d+(?:\.\d*)?)')
_CYCLE_RE = re.compile(r'\((\d+(?:,\d+)*)\)')

class GroupAlgebraElement(object):
    """
    Formal real combination of permutations of ``{1..q}``.

    Multiplication follows function composition, so
    ``apply_group_element(T, a * b) ==
    apply_group_element(apply_group_element(T, a), b)``.
    """

    def __init__(self, q, terms=None):
        """
        :param q: Arity
        :type q: int

        :param terms: Mapping from 0-based image tuples to coefficients
        :type terms: dict
        """
        self._q = q
        self._terms = {}
        for s, c in (terms or {}).items():
            s = tuple(s)
            if len(s) != q:
                raise exceptions.ValenceError(len(s), q)
            if sorted(s) != list(range(q)):
                raise exceptions.ValenceError(s, 'permutation of %d' % q)
            c = self._terms.get(s, 0.0) + float(c)
            if c == 0.0:
                self._terms.pop(s, None)
            else:
                self._terms[s] = c

    @classmethod
    def identity(cls, q):
        return cls(q, {tuple(range(q)): 1.0})

    @classmethod
    def parse(cls, q, text):
        """
        Parse sums like ``'1 - (1,3)(2,4)'`` or ``'2*(1,2,3) - 1'``.

        A bare number is a multiple of the identity.

        :rtype: GroupAlgebraElement
        """
        s = text.replace(' ', '')
        pos = 0
        terms = {}
        while pos < len(s):
            m = _TERM_RE.match(s, pos)
            if not m or m.end() == pos or (pos > 0 and not m.group(1)):
                raise ValueError('cannot parse group algebra element: %r' % text)
            sgn = -1.0 if m.group(1) == '-' else 1.0
            coeff = float(m.group(2)) if m.group(2) else 1.0
            atom = m.group(3)
            if atom.startswith('('):
                cycles = [tuple(int(i) for i in c.split(','))
                          for c in _CYCLE_RE.findall(atom)]
                p = perm(q, *cycles)
            else:
                if m.group(2):
                    raise ValueError('cannot parse group algebra element: %r' % text)
                coeff = float(atom)
                p = tuple(range(q))
            terms[p] = terms.get(p, 0.0) + sgn * coeff
            pos = m.end()
        return cls(q, terms)

    @property
    def q(self):
        return self._q

    @property
    def terms(self):
        return dict(self._terms)

    def _coerce(self, other):
        if isinstance(other, GroupAlgebraElement):
            if other.q != self._q:
                raise exceptions.ValenceError(other.q, self._q)
            return other
        return GroupAlgebraElement(self._q, {tuple(range(self._q)): float(other)})

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self._terms)
        for s, c in other.terms.items():
            terms[s] = terms.get(s, 0.0) + c
        return GroupAlgebraElement(self._q, terms)

    __radd__ = __add__

    def __neg__(self):
        return GroupAlgebraElement(self._q, {s: -c for s, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return GroupAlgebraElement(self._q, {s: c * float(other)
                                                 for s, c in self._terms.items()})
        other = self._coerce(other)
        terms = {}
        for s, a in self._terms.items():
            for t, b in other.terms.items():
                st = perm_compose(s, t)
                terms[st] = terms.get(st, 0.0) + a * b
        return GroupAlgebraElement(self._q, terms)

    def __rmul__(self, scalar):
        return self * scalar

    def __eq__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self._q == other.q and self._terms == other.terms

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self._q, frozenset(self._terms.items())))

    def __str__(self):
        if not self._terms:
            return '0'
        parts = []
        for s in sorted(self._terms, key=lambda s: (s != tuple(range(self._q)), s)):
            c = self._terms[s]
            mag = abs(c)
            body = perm_str(s)
            if mag != 1.0:
                body = ('%g' % mag) if body == '1' else '%g*%s' % (mag, body)
            parts.append(('- ' if c < 0 else '+ ') + body)
        out = ' '.join(parts)
        return out[2:] if out.startswith('+ ') else '-' + out[2:]

    def __repr__(self):
        return 'GroupAlgebraElement(%d, %r)' % (self._q, str(self))

def ga(q, text):
    """Shorthand for :meth:`GroupAlgebraElement.parse`."""
    return GroupAlgebraElement.parse(q, text)

def apply_group_element(t, a):
    """
    :param t: Tensor of covariant valence ``a.q``
    :type t: PointTensor

    :param a: Group algebra element
    :type a: GroupAlgebraElement

    :rtype: PointTensor
    :returns: ``sum(c * permute(t, s))`` over the terms of ``a``
    """
    if a.q != t.q:
        raise exceptions.ValenceError(a.q, t.q)
    out = np.zeros_like(t.components)
    for s, c in a.terms.items():
        out = out + c * permute(t, s).components
    return PointTensor(t.p, t.q, out, t.dim)

# ---------------------------------------------------------------------------
# products

def tensor_product(t1, t2):
    """
    Outer product with slots ordered (contra t1, contra t2, cov t1, cov t2).

    ``tensor_product(xi, eta)`` is the operator ``X -> eta(X) xi``.

    :rtype: PointTensor
    """
    _check_dim(t1, t2)
    outer = np.multiply.outer(t1.components, t2.components)
    p1, q1, p2, q2 = t1.p, t1.q, t2.p, t2.q
    n1 = p1 + q1
    axes = (list(range(p1)) + list(range(n1, n1 + p2)) +
            list(range(p1, n1)) + list(range(n1 + p2, n1 + p2 + q2)))
    return PointTensor(p1 + p2, q1 + q2, np.transpose(outer, axes), t1.dim)

def compose(t1, t2):
    """
    Feed the outputs of ``t2`` into the last ``t2.p`` covariant slots of ``t1``.

    :param t1: Outer tensor, valence (p1, q1)
    :type t1: PointTensor

    :param t2: Inner tensor, valence (p2, q2) with ``p2 <= q1``
    :type t2: PointTensor

    :rtype: PointTensor
    :returns: Tensor of valence ``(p1, q1 - p2 + q2)``
    """
    _check_dim(t1, t2)
    if t1.q < t2.p:
        raise exceptions.ValenceError(t2.p, '<= %d' % t1.q)
    n1 = t1.p + t1.q
    axes = (list(range(n1 - t2.p, n1)), list(range(t2.p)))
    out = np.tensordot(t1.components, t2.components, axes=axes)
    return PointTensor(t1.p, t1.q - t2.p + t2.q, out, t1.dim)

def insert(t, slot, v):
    """
    Evaluate one covariant slot (0-based) on a vector.

    :rtype: PointTensor
    :returns: Tensor of valence ``(p, q - 1)``
    """
    if not 0 <= slot < t.q:
        raise exceptions.ValenceError(slot, 'slot in 0..%d' % (t.q - 1))
    comps = v.components if isinstance(v, PointTensor) else np.asarray(v, dtype=float)
    out = np.tensordot(t.components, comps, axes=([t.p + slot], [0]))
    return PointTensor(t.p, t.q - 1, out, t.dim)

def insert_operator(t, slot, a):
    """Precompose one covariant slot (0-based) with a (1,1) tensor."""
    if a.valence != (1, 1):
        raise exceptions.ValenceError(a.valence, (1, 1))
    _check_dim(t, a)
    axis = t.p + slot
    out = np.tensordot(t.components, a.components, axes=([axis], [0]))
    return PointTensor(t.p, t.q, np.moveaxis(out, -1, axis), t.dim)

def i_phi(t, phi):
    """
    Sum of ``t`` with ``phi`` inserted into each slot in turn.

    :param t: Purely covariant tensor, ``q >= 1``
    :type t: PointTensor

    :param phi: (1,1) tensor
    :type phi: PointTensor

    :rtype: PointTensor
    """
    if t.p != 0 or t.q < 1:
        raise exceptions.ValenceError(t.valence, '(0,k), k >= 1')
    out = np.zeros_like(t.components)
    for slot in range(t.q):
        out = out + insert_operator(t, slot, phi).components
    return PointTensor(0, t.q, out, t.dim)

def alternation_residual(t):
    """
    Largest violation of antisymmetry under adjacent transpositions of the
    covariant slots, relative to ``1 + |t|``.

    :rtype: float
    """
    worst = 0.0
    for k in range(t.q - 1):
        s = list(range(t.q))
        s[k], s[k + 1] = s[k + 1], s[k]
        worst = max(worst, (t + permute(t, tuple(s))).norm())
    return worst / (1.0 + t.norm())

def _require_alternating(t, tol):
    res = alternation_residual(t)
    if res > tol:
        raise exceptions.NotAlternatingError(res)

def wedge(alpha, beta, tol=DEFAULT_TOL):
    """
    Wedge of a k-form with an l-form, or with a vector-valued l-form (``beta.p``
    may be positive), as the unnormalised shuffle sum.

    :param alpha: Alternating (0,k) tensor
    :type alpha: PointTensor

    :param beta: Tensor whose covariant slots are alternating
    :type beta: PointTensor

    :rtype: PointTensor
    :returns: Tensor of valence ``(beta.p, k + l)``
    """
    _check_dim(alpha, beta)
    if alpha.p != 0:
        raise exceptions.ValenceError(alpha.valence, '(0,k)')
    _require_alternating(alpha, tol)
    _require_alternating(beta, tol)
    k, l, p = alpha.q, beta.q, beta.p
    m = k + l
    outer = np.multiply.outer(alpha.components, beta.components)
    # bring beta's contravariant axes to the front
    outer = np.transpose(outer, list(range(k, k + p)) + list(range(k)) +
                         list(range(k + p, k + p + l)))
    out = np.zeros((alpha.dim,) * (p + m))
    for left in itertools.combinations(range(m), k):
        right = [i for i in range(m) if i not in left]
        order = list(left) + right
        axes = [0] * m
        for j, slot in enumerate(order):
            axes[slot] = j
        out = out + sign(tuple(order)) * np.transpose(
            outer, list(range(p)) + [p + a for a in axes])
    return PointTensor(p, m, out, alpha.dim)

# ---------------------------------------------------------------------------
# operators and metrics

def _require_operator(a):
    if a.valence != (1, 1):
        raise exceptions.ValenceError(a.valence, (1, 1))

def _both_ways(a, b):
    if a.valence != (1, 1) and b.valence != (1, 1):
        raise exceptions.ValenceError((a.valence, b.valence), 'one (1,1) factor')
    if a.p != 1 or b.p != 1:
        raise exceptions.ValenceError((a.valence, b.valence), 'endomorphism-valued')
    return compose(a, b), compose(b, a)

def commutator(a, b):
    """
    ``a o b - b o a`` for endomorphisms, pointwise in any leading slots:
    with ``a = nabla phi`` this is ``X -> [nabla_X phi, b]``.
    """
    ab, ba = _both_ways(a, b)
    return ab - ba

def anticommutator(a, b):
    ab, ba = _both_ways(a, b)
    return ab + ba

def power(a, k):
    """``k``-th power of a (1,1) tensor under composition."""
    _require_operator(a)
    out = identity(a.dim)
    for _ in range(k):
        out = compose(out, a)
    return out

def transpose_g(a, g):
    """
    Metric adjoint ``a^T`` of a (1,1) tensor: ``g(a^T X, Y) == g(X, a Y)``.

    :rtype: PointTensor
    """
    _require_operator(a)
    _check_dim(a, g)
    gm = g.components
    return operator(np.linalg.solve(gm, a.components.T.dot(gm)))

def lower(v, g):
    """``g(., v)`` as a one-form."""
    return compose(g, v)

def raise_(w, g):
    """Vector ``v`` with ``g(., v) == w``."""
    if w.valence != (0, 1):
        raise exceptions.ValenceError(w.valence, (0, 1))
    return vector(np.linalg.solve(g.components, w.components))

def residual(lhs, rhs):
    """
    Scale-free residual ``max|lhs - rhs| / (1 + max(max|lhs|, max|rhs|))``.

    Accepts :class:`PointTensor` or array-likes.

    :rtype: float
    """
    a = lhs.components if isinstance(lhs, PointTensor) else np.asarray(lhs, dtype=float)
    b = rhs.components if isinstance(rhs, PointTensor) else np.asarray(rhs, dtype=float)
    if a.size == 0:
        return 0.0
    diff = float(np.max(np.abs(a - b)))
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return diff / (1.0 + scale)

# ---------------------------------------------------------------------------
# curvature-type (0,4) tensors

CURVATURE_SYMMETRIES = ('1 + (1,2)', '1 - (1,3)(2,4)', '1 + (1,2,3) + (1,3,2)')

def polarization_vanishing_test(t, tol=DEFAULT_TOL):
    """
    Decide whether a curvature-type (0,4) tensor vanishes using only its
    values ``T(X, Y, X, Y)``.

    The tensor is rebuilt from those values by polarisation, which is exact
    for tensors with the three symmetries in :data:`CURVATURE_SYMMETRIES`.

    :param t: (0,4) tensor
    :type t: PointTensor

    :raises sasaki.exceptions.SymmetryPreconditionError: One of the symmetries fails

    :rtype: bool
    :returns: Whether the rebuilt tensor is zero to ``tol``
    """
    if t.valence != (0, 4):
        raise exceptions.ValenceError(t.valence, (0, 4))
    for which in CURVATURE_SYMMETRIES:
        res = apply_group_element(t, ga(4, which)).norm() / (1.0 + t.norm())
        if res > tol:
            raise exceptions.SymmetryPreconditionError(which, res)
    dim = t.dim
    signs = np.array([1.0, -1.0])
    eye = np.eye(dim)
    # u[a, c, s] = e_a + s e_c
    u = eye[:, None, None, :] + signs[None, None, :, None] * eye[None, :, None, :]
    k4 = np.einsum('wxyz,acsw,bdtx,acsy,bdtz->acsbdt', t.components, u, u, u, u,
                   optimize=True)
    # coefficient of s*t in k(e_a + s e_c, e_b + t e_d)
    c1 = 0.25 * np.einsum('acsbdt,s,t->abcd', k4, signs, signs)
    rebuilt = (c1 - np.transpose(c1, (0, 1, 3, 2))) / 6.0
    logger.debug('polarization rebuild max %.3e', np.max(np.abs(rebuilt)))
    return bool(np.max(np.abs(rebuilt)) <= tol)
