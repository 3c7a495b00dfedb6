"""
Checks of the identities satisfied by nearly (pseudo-)Sasakian structures.

Every check evaluates both sides of an identity on sampled chart points of a
model and records the largest residual per identity in a
:class:`sasaki.report.CheckReport`. Mathematical failures are recorded, not
raised; a singular metric or a point outside the chart marks the check
``errored`` with the offending point.

Checks whose statements rest on a positive definite metric are skipped on
pseudo-Riemannian models.
"""

import logging
import math
from collections import OrderedDict, namedtuple

import numpy as np

from sasaki import exceptions, linalg, tensor, zoo
from sasaki.geometry import (exterior_derivative, exterior_derivative_squared,
                             exterior_element, lie_derivative_metric)
from sasaki.report import CheckReport, SpectrumResult

logger = logging.getLogger(__name__)

#: Default seed for sampling
DEFAULT_SEED = 7

#: Default number of sampled points per check
DEFAULT_POINTS = 20

#: Relative agreement required between characteristic polynomials at different points
CHARPOLY_TOL = 1e-6

#: Newton identity tolerance
NEWTON_TOL = 1e-9

#: Relative tolerance of the contact volume against the adapted-basis product
CONTACT_VOLUME_TOL = 1e-6

#: Eigenvalues closer than this are reported as ill-conditioned
CLUSTER_WARN_GAP = 1e-6

#: Kernel dimension of ``beta -> omega ^ beta`` from 2-forms to 4-forms
LEFSCHETZ_KERNEL = OrderedDict([(4, 5), (6, 0), (8, 0)])

# integer-valued residuals (counts, ranks) pass iff they are zero
_COUNT_TOL = 0.5

_POINT_ERRORS = (exceptions.SingularMetricError, exceptions.ChartDomainError,
                 exceptions.JetDomainError, exceptions.DegenerateFormError)

def _zero(t):
    return tensor.residual(t, tensor.zeros(t.p, t.q, t.dim))

def _eq(lhs, rhs):
    return tensor.residual(lhs, rhs)

def _rel(a, b):
    return abs(a - b) / (1.0 + max(abs(a), abs(b)))

def _point_rng(seed, index):
    return np.random.default_rng([0 if seed is None else int(seed), index])

def _new_report(check_id, structure, points, tol, seed):
    points = np.asarray(points, dtype=float).reshape(-1, structure.dim)
    return points, CheckReport(check_id, structure.model_id, tol, seed, len(points))

def _riemannian_only(report, structure):
    if structure.riemannian:
        return True
    report.skip('skipped: needs a positive definite metric')
    logger.warning('%s skipped on %s: metric is not positive definite',
                   report.check_id, structure.model_id)
    return False

def _gate(report, d):
    defect = zoo.nearly_sasakian_defect(d.structure, d.x)
    report.record('gate: nearly Sasakian', _zero(defect))

def _each_point(report, structure, points, seed, progress, body):
    for i, x in enumerate(points):
        try:
            body(report, structure.derived(x), _point_rng(seed, i))
        except _POINT_ERRORS as ex:
            logger.warning('%s on %s errored at %s: %s', report.check_id,
                           structure.model_id, list(x), ex)
            report.fail_with(ex, x)
            break
        if progress:
            progress(report.check_id, i + 1, len(points))
    logger.info('%s on %s: %s', report.check_id, structure.model_id, report.status)
    return report

def _record_forms(report, name, build):
    try:
        report.record(name, build())
    except exceptions.NotAlternatingError as ex:
        report.note('%s: %s' % (name, ex))
        report.record(name, float('inf'))

# ---------------------------------------------------------------------------
# spectrum of (nabla xi)^2

def _clusters(values):
    """Group descending values; returns index lists, group means and warnings."""
    groups = []
    for i, v in enumerate(values):
        if groups and abs(values[groups[-1][-1]] - v) <= 1e-8 * (1.0 + abs(v)):
            groups[-1].append(i)
        else:
            groups.append([i])
    means = [float(np.mean([values[i] for i in grp])) for grp in groups]
    warnings = []
    for a, b in zip(means, means[1:]):
        if a - b < CLUSTER_WARN_GAP:
            warnings.append('eigenvalues %.12g and %.12g closer than %g: ill-conditioned' % (
                a, b, CLUSTER_WARN_GAP))
            logger.warning('%s', warnings[-1])
    return groups, means, warnings

def spectrum(structure, x):
    """
    Spectrum of ``(nabla xi)^2`` at ``x``.

    Riemannian models use the Jacobi solver on the g-symmetrised operator;
    otherwise eigenvalues are the real parts of a general eigen-solve and only
    the characteristic polynomial is relied on.

    :rtype: sasaki.report.SpectrumResult
    """
    d = structure.derived(x)
    a2 = d.nabla_xi_sq.components
    if structure.riemannian:
        w, _, _ = linalg.g_eigh(a2, d.g.components)
    else:
        w = np.sort(np.linalg.eigvals(a2).real)[::-1]
    groups, means, warnings = _clusters(w)
    e = linalg.elementary_symmetric(a2)
    p = linalg.power_sums(a2)
    return SpectrumResult(w, [(m, len(grp)) for m, grp in zip(means, groups)], e, p,
                          linalg.newton_residual(e, p), warnings)

def _eigenbundles(d):
    w, vecs, asym = linalg.g_eigh(d.nabla_xi_sq.components, d.g.components)
    groups, means, warnings = _clusters(w)
    return [(m, vecs[:, grp]) for m, grp in zip(means, groups)], asym, warnings

# ---------------------------------------------------------------------------
# checks

def check_easy_facts(structure, points, tol=tensor.DEFAULT_TOL, seed=None, progress=None):
    """
    First consequences of the nearly Sasakian condition: ``eta o A = 0``,
    ``A xi = 0``, ``nabla_xi eta = 0``, skewness of ``h`` and ``phi h``,
    ``h = phi (phi + A)``, ``A^2 + id - xi (x) eta = h^2``, ``A`` skew
    (``xi`` Killing), ``d eta = 2 nabla eta = -2 g o A`` and ``nabla xi`` the metric
    dual of ``nabla eta``.
    """
    points, report = _new_report('check_easy_facts', structure, points, tol, seed)

    def body(report, d, _):
        _gate(report, d)
        a, a2, h, phi_h, phi = d.nabla_xi, d.nabla_xi_sq, d.h, d.phi_h, d.phi
        ident = d.identity
        report.record('eta o A = 0', _zero(tensor.compose(d.eta, a)))
        report.record('A xi = 0', _zero(tensor.compose(a, d.xi)))
        report.record('nabla_xi eta = 0', _zero(tensor.insert(d.nabla_eta, 0, d.xi)))
        report.record('nabla_X xi = (nabla_X eta)^sharp', max(
            _eq(tensor.compose(a, tensor.vector(e)),
                tensor.raise_(tensor.insert(d.nabla_eta, 0, e), d.g))
            for e in np.eye(structure.dim)))
        report.record('h skew', _zero(h + tensor.transpose_g(h, d.g)))
        report.record('phi h skew', _zero(phi_h + tensor.transpose_g(phi_h, d.g)))
        report.record('h phi = -phi h', _zero(tensor.anticommutator(h, phi)))
        report.record('(phi h) phi = -phi (phi h)', _zero(tensor.anticommutator(phi_h, phi)))
        report.record('h = phi (phi + A)', _eq(h, tensor.compose(phi, phi + a)))
        report.record('phi + A + phi h = 0', _zero(phi + a + phi_h))
        h2 = tensor.compose(h, h)
        report.record('A^2 + id - xi (x) eta = h^2',
                      _eq(a2 + ident - tensor.tensor_product(d.xi, d.eta), h2))
        report.record('h^2 = (phi h)^2', _eq(h2, tensor.compose(phi_h, phi_h)))
        report.record('[phi, A^2] = 0', _zero(tensor.commutator(phi, a2)))
        report.record('A + A^T = 0', _zero(a + tensor.transpose_g(a, d.g)))
        report.record('Lie derivative of g along xi',
                      _zero(lie_derivative_metric(d.structure.g, d.structure.xi, d.x)))
        report.record('d eta = 2 nabla eta', _eq(d.d_eta, 2.0 * d.nabla_eta))
        report.record('d eta = -2 g o A', _eq(d.d_eta, -2.0 * tensor.compose(d.g, a)))

    return _each_point(report, structure, points, seed, progress, body)

def check_contactness(structure, points, tol=tensor.DEFAULT_TOL, seed=None, progress=None):
    """
    ``(nabla xi)^2`` is nonpositive with a simple zero eigenvalue, ``nabla xi``
    has rank ``2n`` and ``eta ^ (d eta)^n`` on the adapted basis equals
    ``n! 2^n prod lambda_k``.
    """
    points, report = _new_report('check_contactness', structure, points, tol, seed)
    if not _riemannian_only(report, structure):
        return report
    n = structure.n

    def body(report, d, _):
        _gate(report, d)
        spec = spectrum(structure, d.x)
        if report.spectrum is None:
            report.spectrum = spec
        for warning in spec.warnings:
            report.note(warning)
        w = spec.eigenvalues
        report.record('spectrum nonpositive', max(0.0, float(np.max(w))))
        report.record('one zero eigenvalue',
                      abs(int(np.sum(np.abs(w) <= 1e-6)) - 1), _COUNT_TOL)
        report.record('2n negative eigenvalues',
                      abs(int(np.sum(w <= -1e-3)) - 2 * n), _COUNT_TOL)
        sv = np.linalg.svd(d.nabla_xi.components, compute_uv=False)
        rank = int(np.sum(sv > 1e-9 * max(1.0, float(sv[0]))))
        report.record('rank nabla xi = 2n', abs(rank - 2 * n), _COUNT_TOL)
        report.record('xi in kernel of nabla xi', _zero(tensor.compose(d.nabla_xi, d.xi)))
        basis, lambdas = linalg.adapted_basis(d.nabla_xi.components, d.g.components,
                                              d.xi.components)
        volume = linalg.contact_volume(d.eta, d.d_eta, basis)
        expected = math.factorial(n) * 2 ** n * float(np.prod(lambdas))
        report.record('eta ^ (d eta)^n = n! 2^n prod lambda',
                      abs(volume - expected) / abs(expected), CONTACT_VOLUME_TOL)
        report.value('lambdas', lambdas)
        report.value('contact volume', volume)

    return _each_point(report, structure, points, seed, progress, body)

def check_iphi_riem(structure, points, tol=tensor.DEFAULT_TOL, seed=None, progress=None):
    """
    ``i_phi Riem = 0``, its expression through ``R phi`` (by both routes to
    ``R phi``), the curvature symmetries of ``i_phi Riem`` and the scalar
    identity ``g((nabla^2_{Y,X} phi) X, Y) = d eta(X, Y) g(X, Y) / 2``.
    """
    points, report = _new_report('check_iphi_riem', structure, points, tol, seed)

    def body(report, d, rng):
        _gate(report, d)
        ident = d.identity
        iphi = tensor.i_phi(d.riem, d.phi)
        report.record('i_phi Riem = 0', _zero(iphi))
        report.record('R phi: curvature = skew nabla^2 phi', _eq(d.r_phi, d.r_phi_nested))
        pair = tensor.ga(4, '1 + (1,3)(2,4)')
        for name, r_phi in (('curvature', d.r_phi), ('nabla^2 phi', d.r_phi_nested)):
            t = tensor.compose(d.g, tensor.tensor_product(r_phi, ident))
            report.record('i_phi Riem = g o (R phi (x) id)(1 + (1,3)(2,4)) [%s]' % name,
                          _eq(tensor.apply_group_element(t, pair), iphi))
        scale = 1.0 + iphi.norm()
        for which in tensor.CURVATURE_SYMMETRIES:
            sym = tensor.apply_group_element(iphi, tensor.ga(4, which))
            report.record('i_phi Riem o (%s) = 0' % which, sym.norm() / scale)
        try:
            vanishes = tensor.polarization_vanishing_test(iphi, tol)
            report.record('polarization agrees', float(vanishes != (_zero(iphi) < tol)),
                          _COUNT_TOL)
        except exceptions.SymmetryPreconditionError as ex:
            report.note(str(ex))
        dim = structure.dim
        for _ in range(3):
            x, y = rng.normal(size=dim), rng.normal(size=dim)
            q = float(d.g(d.nabla2_phi(y, x, x), y))
            rhs = 0.5 * float(d.d_eta(x, y)) * float(d.g(x, y))
            report.record('g((nabla^2_{Y,X} phi) X, Y) = d eta(X, Y) g(X, Y) / 2', _rel(q, rhs))

    return _each_point(report, structure, points, seed, progress, body)

def check_curvature_reeb(structure, points, tol=tensor.DEFAULT_TOL, seed=None, progress=None):
    """
    Curvature in the direction of ``xi``: ``R xi = eta ^ A^2``, the formula for
    ``nabla^2 xi``, ``R_xi``, ``(R phi) xi``, ``R_xi phi``, the Killing lemma
    ``g o nabla^2 xi = (g o R xi) o (1,2)`` and ``d d eta = 0``.
    """
    points, report = _new_report('check_curvature_reeb', structure, points, tol, seed)

    def body(report, d, _):
        _gate(report, d)
        xi, eta, g, a2, phi = d.xi, d.eta, d.g, d.nabla_xi_sq, d.phi
        ident = d.identity
        proj = ident - tensor.tensor_product(xi, eta)
        t = tensor.insert(d.riem, 3, xi)
        for slot in range(3):
            t = tensor.insert_operator(t, slot, proj)
        report.record('Riem(X, Y, Z, xi) = 0 on ker eta', _zero(t))
        r_xi = tensor.compose(d.curvature, xi)
        report.record('R xi = eta ^ A^2', _eq(r_xi, tensor.wedge(eta, a2)))
        g_a2 = tensor.compose(g, a2)
        report.record('nabla^2 xi = -A^2 (x) eta + xi (x) g o A^2', _eq(
            d.nabla2_xi,
            -tensor.tensor_product(a2, eta) + tensor.tensor_product(xi, g_a2)))
        report.record('R_xi = A^2 (x) eta - xi (x) g o A^2', _eq(
            tensor.insert(d.curvature, 0, xi),
            tensor.tensor_product(a2, eta) - tensor.tensor_product(xi, g_a2)))
        phi_a2 = tensor.compose(phi, a2)
        report.record('(R phi) xi = -eta ^ phi A^2', _eq(
            tensor.compose(d.r_phi, xi), -tensor.wedge(eta, phi_a2)))
        report.record('R_xi phi = -A^2 phi (x) eta - xi (x) g o phi A^2', _eq(
            tensor.insert(d.r_phi, 0, xi),
            -tensor.tensor_product(tensor.compose(a2, phi), eta) -
            tensor.tensor_product(xi, tensor.compose(g, phi_a2))))
        g_n2 = tensor.compose(g, d.nabla2_xi)
        report.record('g o nabla^2 xi = (g o R xi) o (1,2)', _eq(
            g_n2, tensor.permute(tensor.compose(g, r_xi), tensor.perm(3, (1, 2)))))
        report.record('g o nabla^2 xi = -(g o nabla^2 xi) o (1,3)', _eq(
            g_n2, -tensor.permute(g_n2, tensor.perm(3, (1, 3)))))
        report.record('d d eta = 0', _zero(exterior_derivative_squared(
            structure.eta, d.x, structure.g, tol)))
        if d.h.norm() < tol:
            report.record('R xi = eta ^ (-id + xi (x) eta) when Sasakian', _eq(
                r_xi, tensor.wedge(eta, -ident + tensor.tensor_product(xi, eta))))

    return _each_point(report, structure, points, seed, progress, body)

def check_charpoly_constancy(structure, points, tol=tensor.DEFAULT_TOL, seed=None,
                             progress=None):
    """
    Coefficients of the characteristic polynomial of ``(nabla xi)^2`` and the
    traces of its powers are the same at every point; Newton identities hold
    pointwise.
    """
    points, report = _new_report('check_charpoly_constancy', structure, points, tol, seed)
    first = []
    n = structure.n

    def body(report, d, _):
        _gate(report, d)
        a2 = d.nabla_xi_sq.components
        e = linalg.elementary_symmetric(a2)
        p = linalg.power_sums(a2, n)
        report.record('Newton identities', linalg.newton_residual(
            e, linalg.power_sums(a2)), NEWTON_TOL)
        if not first:
            first.extend([e, p])
            report.value('e', e)
            report.value('p', p)
            return
        report.record('char poly coefficients constant', _eq(e, first[0]), CHARPOLY_TOL)
        report.record('traces of A^(2s), s <= n, constant', _eq(p, first[1]), CHARPOLY_TOL)

    return _each_point(report, structure, points, seed, progress, body)

def check_eigenbundles(structure, points, tol=tensor.DEFAULT_TOL, seed=None, progress=None):
    """
    Eigenbundles of ``(nabla xi)^2``: mutually g-orthogonal, invariant under
    ``phi`` and ``nabla xi``, the zero eigenbundle spanned by ``xi``.
    """
    points, report = _new_report('check_eigenbundles', structure, points, tol, seed)
    if not _riemannian_only(report, structure):
        return report
    dim = structure.dim

    def body(report, d, _):
        _gate(report, d)
        bundles, asym, warnings = _eigenbundles(d)
        for warning in warnings:
            report.note(warning)
        gm = d.g.components
        a2 = d.nabla_xi_sq.components
        report.record('A^2 g-self-adjoint', asym)
        projectors = [v.dot(v.T).dot(gm) for _, v in bundles]
        idem = max(tensor.residual(pk.dot(pk), pk) for pk in projectors)
        report.record('projectors idempotent', idem, 1e-10)
        report.record('projectors sum to id', _eq(sum(projectors), np.eye(dim)))
        ortho = 0.0
        for i, (_, vi) in enumerate(bundles):
            for _, vj in bundles[i + 1:]:
                ortho = max(ortho, float(np.max(np.abs(vi.T.dot(gm).dot(vj)))))
        report.record('eigenbundles g-orthogonal', ortho)
        report.record('A^2 scalar on each eigenbundle', max(
            _eq(a2.dot(v), mu * v) for mu, v in bundles))
        mults = [v.shape[1] for _, v in bundles]
        report.record('multiplicities sum to dim', abs(sum(mults) - dim), _COUNT_TOL)
        zeros = [(mu, v) for mu, v in bundles if abs(mu) <= 1e-6]
        if len(zeros) != 1 or zeros[0][1].shape[1] != 1:
            report.record('zero eigenbundle is span xi', float('inf'))
        else:
            v = zeros[0][1]
            report.record('zero eigenbundle is span xi', _eq(
                v.dot(v.T).dot(gm), np.outer(d.xi.components, d.eta.components)))
        phi, a = d.phi.components, d.nabla_xi.components
        report.record('phi preserves eigenbundles', max(
            _eq(pk.dot(phi), phi.dot(pk)) for pk in projectors))
        report.record('A preserves eigenbundles', max(
            _eq(pk.dot(a), a.dot(pk)) for pk in projectors))
        report.value('multiplicities', [[mu, v.shape[1]] for mu, v in bundles])

    return _each_point(report, structure, points, seed, progress, body)

def check_second_order_phi(structure, points, tol=tensor.DEFAULT_TOL, seed=None,
                           progress=None):
    """
    Second-order identities for ``phi``: ``nabla^2_xi phi``, the commutator
    and anticommutator of ``nabla phi`` with ``h``, the derivative of
    ``phi^2 = -id + xi (x) eta`` and of ``phi A + A phi = 2 (id - xi (x) eta)``,
    and ``2 nabla^2 phi`` rebuilt from ``R phi`` and the derivative of the
    nearly Sasakian condition.
    """
    points, report = _new_report('check_second_order_phi', structure, points, tol, seed)

    def body(report, d, _):
        _gate(report, d)
        xi, eta, g, phi, a, a2, h = d.xi, d.eta, d.g, d.phi, d.nabla_xi, d.nabla_xi_sq, d.h
        ident = d.identity
        tp, comp = tensor.tensor_product, tensor.compose
        nphi = d.nabla_phi
        h_xi_phi = tensor.insert(d.nabla2_phi, 0, xi)
        ha = comp(h, a)
        report.record('nabla^2_xi phi = eta ^ hA - xi (x) g o hA', _eq(
            h_xi_phi, tensor.wedge(eta, ha) - tp(xi, comp(g, ha))))
        b = comp(a, ident - comp(a, phi))
        report.record('A (id - A phi) = -hA', _eq(b, -ha))
        report.record('nabla^2_xi phi = xi (x) g o B - eta ^ B, B = A (id - A phi)', _eq(
            h_xi_phi, tp(xi, comp(g, b)) - tensor.wedge(eta, b)))
        h_plus = comp(h, ident + h)
        h_minus = comp(h, ident - h)
        anti = tensor.anticommutator(nphi, h)
        comm = tensor.commutator(nphi, h)
        report.record('{nabla phi, h}', _eq(
            anti, 2.0 * tp(eta, comp(h, h)) - tp(h_plus, eta) + tp(xi, comp(g, h_minus))))
        report.record('[nabla phi, h]', _eq(
            comm, tp(h_plus, eta) + tp(xi, comp(g, h_minus))))
        report.record('({.,.} + [.,.]) / 2 = nabla phi o h', _eq(
            0.5 * (anti + comm), comp(nphi, h)))
        report.record('{nabla phi, phi} = A (x) eta - xi (x) g o A', _eq(
            tensor.anticommutator(nphi, phi), tp(a, eta) - tp(xi, comp(g, a))))
        n2xi = d.nabla2_xi
        report.record('nabla (phi A + A phi)', _eq(
            comp(nphi, a) + comp(phi, n2xi) + comp(n2xi, phi) + comp(a, nphi),
            -2.0 * tp(a, eta) + 2.0 * tp(xi, comp(g, a))))
        report.record('phi o nabla^2 xi = -phi A^2 (x) eta', _eq(
            comp(phi, n2xi), -tp(comp(phi, a2), eta)))
        report.record('nabla^2 xi o phi = xi (x) g o A^2 phi', _eq(
            comp(n2xi, phi), tp(xi, comp(g, comp(a2, phi)))))
        t = tp(a, g) - tp(d.nabla_eta, ident)
        sym23 = tensor.ga(3, '1 + (2,3)')
        report.record('nabla^2 phi o (1 + (2,3)) = (A (x) g - nabla eta (x) id) o (1 + (2,3))',
                      _zero(tensor.apply_group_element(d.nabla2_phi - t, sym23)))
        rebuilt = (tensor.apply_group_element(d.r_phi, tensor.ga(3, '1 + (1,2,3) - (1,3,2)')) +
                   tensor.apply_group_element(tensor.apply_group_element(t, sym23),
                                              tensor.ga(3, '1 - (1,2,3) + (1,3,2)')))
        report.record('2 nabla^2 phi from R phi', _eq(2.0 * d.nabla2_phi, rebuilt))

    return _each_point(report, structure, points, seed, progress, body)

def _image_projector(d):
    h2 = tensor.compose(d.h, d.h).components
    w, vecs, _ = linalg.g_eigh(h2, d.g.components)
    keep = vecs[:, np.abs(w) > 1e-8]
    return keep.dot(keep.T).dot(d.g.components)

def check_image_kernel_cases(structure, points, tol=tensor.DEFAULT_TOL, seed=None,
                             progress=None):
    """
    ``(nabla phi) o Y`` for ``Y`` in the image of ``h`` and for ``Y`` in
    ``ker(A^2 + id)``, and ``(nabla phi) Y`` reassembled from the two cases.
    """
    points, report = _new_report('check_image_kernel_cases', structure, points, tol, seed)
    if not _riemannian_only(report, structure):
        return report
    dim = structure.dim

    def image_case(d, y):
        hy = tensor.compose(d.h, y)
        return (tensor.tensor_product(d.eta, hy) +
                tensor.tensor_product(d.xi, tensor.compose(d.g, y - hy)))

    def kernel_case(d, y):
        return tensor.tensor_product(d.xi, tensor.compose(d.g, y))

    def body(report, d, rng):
        _gate(report, d)
        nphi = d.nabla_phi
        y = tensor.compose(d.h, tensor.vector(rng.normal(size=dim)))
        if y.norm() < tol:
            report.note('image of nabla_xi phi is zero: image case vacuous')
        else:
            report.record('(nabla phi) o hZ', _eq(tensor.compose(nphi, y), image_case(d, y)))
        bundles, _, _ = _eigenbundles(d)
        minus_one = [v for mu, v in bundles if abs(mu + 1.0) <= 1e-6]
        if not minus_one:
            report.note('ker(A^2 + id) is zero: kernel case vacuous')
        else:
            v = minus_one[0]
            y = tensor.vector(v.dot(rng.normal(size=v.shape[1])))
            report.record('(nabla phi) o Y, Y in ker(A^2 + id)',
                          _eq(tensor.compose(nphi, y), kernel_case(d, y)))
        y = rng.normal(size=dim)
        along = float(d.eta(y))
        y_im = _image_projector(d).dot(y)
        y_ker = y - along * d.xi.components - y_im
        slot_xi = tensor.tensor_product(d.xi, d.eta) - d.identity - d.h
        reassembled = (along * slot_xi + image_case(d, tensor.vector(y_im)) +
                       kernel_case(d, tensor.vector(y_ker)))
        report.record('(nabla phi) Y reassembled from eigencomponents',
                      _eq(tensor.compose(nphi, tensor.vector(y)), reassembled))

    return _each_point(report, structure, points, seed, progress, body)

def mainish_rhs(d):
    """
    ``xi (x) g - id (x) eta + eta (x) h - h (x) eta - xi (x) g o h``, the
    closed form of ``nabla phi`` on a nearly Sasakian manifold.

    :param d: Operators at a point
    :type d: sasaki.zoo.DerivedOperators

    :rtype: sasaki.tensor.PointTensor
    """
    tp = tensor.tensor_product
    return (tp(d.xi, d.g) - tp(d.identity, d.eta) + tp(d.eta, d.h) - tp(d.h, d.eta) -
            tp(d.xi, tensor.compose(d.g, d.h)))

def check_mainish_formula(structure, points, tol=tensor.DEFAULT_TOL, seed=None,
                          progress=None):
    """``nabla phi`` in closed form, with the slot test ``(nabla_X phi) xi``."""
    points, report = _new_report('check_mainish_formula', structure, points, tol, seed)
    if not _riemannian_only(report, structure):
        return report

    def body(report, d, _):
        _gate(report, d)
        report.record('nabla phi closed form', _eq(d.nabla_phi, mainish_rhs(d)))
        report.record('(nabla_X phi) xi = eta(X) xi - X - hX', _eq(
            tensor.insert(d.nabla_phi, 1, d.xi),
            tensor.tensor_product(d.xi, d.eta) - d.identity - d.h))

    return _each_point(report, structure, points, seed, progress, body)

def check_strange_forms(structure, points, tol=tensor.DEFAULT_TOL, seed=None, progress=None):
    """
    ``Phi`` and ``Psi`` are forms with ``d Phi = 3 eta ^ Psi``,
    ``eta ^ d Psi = 0`` and ``d eta ^ Psi = 0``.
    """
    points, report = _new_report('check_strange_forms', structure, points, tol, seed)
    if not _riemannian_only(report, structure):
        return report
    d_form = exterior_element(2)

    def body(report, d, _):
        _gate(report, d)
        report.record('Phi alternating', tensor.alternation_residual(d.big_phi))
        report.record('Psi alternating', tensor.alternation_residual(d.psi))
        try:
            d_phi = exterior_derivative(structure.phi_form, d.x, structure.g, tol)
        except exceptions.NotAlternatingError as ex:
            report.note(str(ex))
            report.record('d Phi = 3 eta ^ Psi', float('inf'))
            return
        report.record('d Phi: exterior derivative = alternated g o (nabla phi (x) id)',
                      _eq(d_phi, tensor.apply_group_element(d.nabla_big_phi, d_form)))
        d_psi = tensor.apply_group_element(d.nabla_psi, d_form)
        _record_forms(report, 'd Phi = 3 eta ^ Psi',
                      lambda: _eq(d_phi, 3.0 * tensor.wedge(d.eta, d.psi, tol)))
        _record_forms(report, 'eta ^ d Psi = 0',
                      lambda: _zero(tensor.wedge(d.eta, d_psi, tol)))
        _record_forms(report, 'd eta ^ Psi = 0',
                      lambda: _zero(tensor.wedge(d.d_eta, d.psi, tol)))
        dd_phi = exterior_derivative_squared(structure.phi_form, d.x, structure.g, tol)
        report.record('d d Phi = 0', _zero(dd_phi))
        _record_forms(report, 'd d Phi = 3 (d eta ^ Psi - eta ^ d Psi)', lambda: _eq(
            dd_phi, 3.0 * (tensor.wedge(d.d_eta, d.psi, tol) -
                           tensor.wedge(d.eta, d_psi, tol))))
        if d.h.norm() < tol:
            report.record('d Phi = 0 when Sasakian', _zero(d_phi))

    return _each_point(report, structure, points, seed, progress, body)

def _standard_symplectic(dim2m):
    m = dim2m // 2
    omega = np.zeros((dim2m, dim2m))
    omega[:m, m:] = np.eye(m)
    omega[m:, :m] = -np.eye(m)
    return omega

def lefschetz_case(dim2m, omega=None, seed=DEFAULT_SEED):
    """
    Kernel dimension of ``beta -> omega ^ beta`` on 2-forms, numerically and
    by exact elimination on an integer form.

    :param dim2m: Even dimension, 4, 6 or 8
    :type dim2m: int

    :param omega: Nondegenerate antisymmetric matrix; by default the standard
                  symplectic form plus a small seeded random 2-form
    :type omega: numpy.ndarray

    :raises sasaki.exceptions.DegenerateFormError: ``omega`` degenerate

    :rtype: dict
    """
    if dim2m not in LEFSCHETZ_KERNEL:
        raise exceptions.DimensionError(dim2m, list(LEFSCHETZ_KERNEL))
    rng = np.random.default_rng([int(seed), dim2m])
    if omega is None:
        r = rng.normal(size=(dim2m, dim2m))
        omega = _standard_symplectic(dim2m) + 0.05 * (r - r.T)
    kernel, sigma = linalg.lefschetz_kernel_dim(omega)
    exact = None
    for _ in range(20):
        k = rng.integers(-1, 2, size=(dim2m, dim2m))
        candidate = _standard_symplectic(dim2m) + np.triu(k, 1) - np.triu(k, 1).T
        try:
            exact = linalg.lefschetz_kernel_dim_exact(candidate)
            break
        except exceptions.DegenerateFormError:
            continue
    if exact is None:
        exact = linalg.lefschetz_kernel_dim_exact(_standard_symplectic(dim2m))
    return {'dim': dim2m, 'kernel_dim': kernel, 'sigma_min': sigma,
            'exact_kernel_dim': exact, 'expected': LEFSCHETZ_KERNEL[dim2m]}

def check_lefschetz_injectivity(structure=None, points=None, tol=tensor.DEFAULT_TOL,
                                seed=DEFAULT_SEED, progress=None):
    """
    Wedging with a nondegenerate 2-form is injective from 2-forms to 4-forms
    in dimensions 6 and 8, with a 5-dimensional kernel in dimension 4.

    Independent of the model; ``structure`` and ``points`` only label the report.
    """
    # pylint: disable=unused-argument
    model_id = structure.model_id if structure is not None else 'none'
    seed = DEFAULT_SEED if seed is None else seed
    report = CheckReport('check_lefschetz_injectivity', model_id, tol, seed, 0)
    try:
        for i, dim2m in enumerate(LEFSCHETZ_KERNEL):
            case = lefschetz_case(dim2m, seed=seed)
            report.record('kernel dim, 2m = %d' % dim2m,
                          abs(case['kernel_dim'] - case['expected']), _COUNT_TOL)
            report.record('exact kernel dim, 2m = %d' % dim2m,
                          abs(case['exact_kernel_dim'] - case['expected']), _COUNT_TOL)
            report.value('2m = %d' % dim2m, case)
            if progress:
                progress(report.check_id, i + 1, len(LEFSCHETZ_KERNEL))
    except exceptions.DegenerateFormError as ex:
        report.fail_with(ex)
    logger.info('%s: %s', report.check_id, report.status)
    return report

def main_theorem_chain(structure, x, tol=tensor.DEFAULT_TOL):
    """
    The chain ``d eta ^ Psi = 0`` and ``d eta`` nondegenerate on ``ker eta``
    force ``Psi|ker eta = 0`` when wedging with ``d eta`` is injective there;
    with ``i_xi Psi = 0`` this gives ``Psi = 0``, hence ``nabla_xi phi = 0``.

    The vanishing of ``Psi`` on ``ker eta`` is certified by
    ``|Psi| <= |d eta ^ Psi| / sigma_min``, ``sigma_min`` the smallest
    singular value of the wedging map (infinite when it is not injective).

    :rtype: collections.OrderedDict
    """
    if not structure.riemannian:
        raise exceptions.SignatureError(structure.signature, 'positive definite')
    d = structure.derived(x)
    frame = linalg.kernel_eta_frame(d.xi.components, d.g.components)
    omega = frame.T.dot(d.d_eta.components).dot(frame)
    beta = frame.T.dot(d.psi.components).dot(frame)
    out = OrderedDict()
    out['dim'] = structure.dim
    out['d eta ^ Psi'] = _zero(tensor.wedge(d.d_eta, d.psi, tol))
    out['d eta det on ker eta'] = float(np.linalg.det(omega))
    kernel, _ = linalg.lefschetz_kernel_dim(omega)
    lmap = linalg.lefschetz_matrix(omega)
    sv = np.zeros(lmap.shape[1])
    found = np.linalg.svd(lmap, compute_uv=False)
    sv[:len(found)] = found
    sigma = float(np.min(sv))
    coeffs = np.array([beta[i, j] for i in range(frame.shape[1])
                       for j in range(i + 1, frame.shape[1])])
    image = float(np.linalg.norm(lmap.dot(coeffs)))
    out['lefschetz kernel dim'] = kernel
    out['lefschetz sigma min'] = sigma
    out['Psi on ker eta'] = float(np.linalg.norm(coeffs))
    out['Psi bound'] = image / sigma if sigma > 1e-12 else float('inf')
    out['i_xi Psi'] = _zero(tensor.insert(d.psi, 0, d.xi))
    out['nabla_xi phi'] = _zero(d.h)
    out['sasakian defect'] = _zero(zoo.sasakian_defect(structure, x))
    return out

def check_main_theorem_mechanism(structure, points, tol=tensor.DEFAULT_TOL, seed=None,
                                 progress=None):
    """
    In dimension at least 7 a nearly Sasakian structure is Sasakian: the
    implication chain of :func:`main_theorem_chain` executed pointwise.
    """
    points, report = _new_report('check_main_theorem_mechanism', structure, points, tol, seed)
    if not _riemannian_only(report, structure):
        return report
    if structure.dim < 7:
        report.skip('skipped: dimension %d < 7' % structure.dim)
        logger.warning('%s skipped on %s: dimension %d < 7', report.check_id,
                       structure.model_id, structure.dim)
        return report

    def body(report, d, _):
        _gate(report, d)
        chain = main_theorem_chain(structure, d.x, tol)
        report.record('d eta ^ Psi = 0', chain['d eta ^ Psi'])
        report.record('wedging with d eta injective on ker eta',
                      chain['lefschetz kernel dim'], _COUNT_TOL)
        report.record('Psi = 0 on ker eta', chain['Psi on ker eta'])
        report.record('certified bound on Psi|ker eta', chain['Psi bound'])
        report.record('bound dominates Psi|ker eta',
                      max(0.0, chain['Psi on ker eta'] - chain['Psi bound']))
        report.record('i_xi Psi = 0', chain['i_xi Psi'])
        report.record('nabla_xi phi = 0', chain['nabla_xi phi'])
        report.record('Sasakian defect = 0', chain['sasakian defect'])
        report.value('lefschetz sigma min', chain['lefschetz sigma min'])

    return _each_point(report, structure, points, seed, progress, body)

# ---------------------------------------------------------------------------
# catalogue

#: ``anchor`` names the result a check certifies, ``statement`` is the identity itself
Check = namedtuple('Check', ['check_id', 'function', 'anchor', 'statement'])

#: Checks in listing and run order
CATALOGUE = OrderedDict((c.check_id, c) for c in [
    Check('validate_acms', zoo.validate_acms,
          'Definition: almost contact metric structure',
          'phi^2 = -id + xi (x) eta, eta = g(., xi), g(xi, xi) = 1, phi g-skew'),
    Check('check_easy_facts', check_easy_facts,
          'Proposition: first properties of nearly Sasakian manifolds',
          'xi is Killing, nabla_xi xi = 0, A^2 + id - xi (x) eta = (nabla_xi phi)^2'),
    Check('check_contactness', check_contactness,
          'Theorem: nearly Sasakian structures are contact',
          'eta is a contact form: (nabla xi)^2 has a simple zero eigenvalue, rank 2n'),
    Check('check_iphi_riem', check_iphi_riem,
          'Proposition: i_phi Riem vanishes',
          'i_phi Riem = 0 on nearly pseudo-Sasakian manifolds'),
    Check('check_curvature_reeb', check_curvature_reeb,
          'Proposition: curvature along the Reeb field',
          'R xi = eta ^ (nabla xi)^2 and g o nabla^2 xi = (g o R xi) o (1,2)'),
    Check('check_charpoly_constancy', check_charpoly_constancy,
          'Theorem: constant characteristic polynomial of (nabla xi)^2',
          'the characteristic polynomial of (nabla xi)^2 has constant coefficients'),
    Check('check_eigenbundles', check_eigenbundles,
          'Proposition: eigenbundle decomposition of the tangent bundle',
          'eigenbundles of (nabla xi)^2 are pairwise orthogonal and phi-invariant'),
    Check('check_second_order_phi', check_second_order_phi,
          'Proposition: second covariant derivatives of phi along xi',
          'nabla^2_xi phi = eta ^ (nabla_xi phi o nabla xi) - xi (x) g o (...)'),
    Check('check_image_kernel_cases', check_image_kernel_cases,
          'Proposition: nabla phi on the image and kernel cases',
          '(nabla phi) o Y on the image of nabla_xi phi and on ker((nabla xi)^2 + id)'),
    Check('check_mainish_formula', check_mainish_formula,
          'Theorem: closed formula for nabla phi',
          'nabla phi = xi (x) g - id (x) eta + eta (x) h - h (x) eta - xi (x) g o h'),
    Check('check_strange_forms', check_strange_forms,
          'Proposition: exterior derivatives of Phi and Psi',
          'd Phi = 3 eta ^ Psi, eta ^ d Psi = 0, d eta ^ Psi = 0'),
    Check('check_lefschetz_injectivity', check_lefschetz_injectivity,
          'Main theorem, proof step: wedging with d eta is injective on 2-forms',
          'wedging with a nondegenerate 2-form is injective on 2-forms in dim >= 6'),
    Check('check_main_theorem_mechanism', check_main_theorem_mechanism,
          'Main theorem: nearly Sasakian of dimension >= 7 is Sasakian',
          'nearly Sasakian in dimension >= 7 implies Sasakian'),
])

def resolve_checks(check_ids):
    """
    :param check_ids: ``'all'``, a comma-separated string or a sequence of ids
    :type check_ids: str or sequence

    :raises sasaki.exceptions.UnknownCheckError: An id is not in the catalogue

    :rtype: list
    """
    if isinstance(check_ids, str):
        if check_ids.strip() == 'all':
            return list(CATALOGUE)
        check_ids = [c.strip() for c in check_ids.split(',') if c.strip()]
    out = []
    for check_id in check_ids:
        if check_id not in CATALOGUE:
            raise exceptions.UnknownCheckError(check_id)
        if check_id not in out:
            out.append(check_id)
    return out

def run_checks(model_id, check_ids='all', seed=DEFAULT_SEED, tol=tensor.DEFAULT_TOL,
               count=DEFAULT_POINTS, progress=None):
    """
    Run checks on one model.

    :param model_id: Registry id
    :type model_id: str

    :param check_ids: See :func:`resolve_checks`
    :type check_ids: str or sequence

    :param seed: Sampling seed
    :type seed: int

    :param tol: Tolerance
    :type tol: float

    :param count: Points per check
    :type count: int

    :param progress: Optional callback ``progress(check_id, done, total)``
    :type progress: callable

    :raises sasaki.exceptions.UnknownModelError: Unknown model id
    :raises sasaki.exceptions.UnknownCheckError: Unknown check id

    :rtype: list
    :returns: One :class:`sasaki.report.CheckReport` per check, in catalogue order
    """
    ids = resolve_checks(check_ids)
    structure = zoo.get_model(model_id)
    ids = [c for c in CATALOGUE if c in ids]
    points = structure.sample(count, seed)
    reports = []
    for check_id in ids:
        fn = CATALOGUE[check_id].function
        try:
            report = fn(structure, points, tol=tol, seed=seed, progress=progress)
        except exceptions.SasakiError as ex:
            logger.warning('%s on %s raised: %s', check_id, model_id, ex)
            report = CheckReport(check_id, model_id, tol, seed, len(points))
            report.fail_with(ex)
        reports.append(report)
    return reports
