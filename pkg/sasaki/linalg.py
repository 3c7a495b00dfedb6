"""
Small dense linear algebra used by the checks: cyclic Jacobi eigen-solves of
metric-symmetric operators, characteristic polynomials by Faddeev-LeVerrier,
Newton identities, Pfaffians, metric-orthonormal frames and the Lefschetz
map on forms.
"""

import itertools
import logging
import math
from fractions import Fraction

import numpy as np

from sasaki import exceptions, tensor

logger = logging.getLogger(__name__)

def jacobi(a, tol=1e-14, max_sweeps=60):
    """
    Eigen-decomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    :param a: Symmetric matrix
    :type a: numpy.ndarray

    :param tol: Stop once the off-diagonal Frobenius norm is below ``tol`` times the total
    :type tol: float

    :rtype: tuple
    :returns: ``(eigenvalues, eigenvectors)`` sorted by descending eigenvalue,
              eigenvectors as columns
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.linalg.norm(a), 1e-300)
    for sweep in range(max_sweeps):
        off = np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= tol * scale:
            break
        for k in range(n - 1):
            for l in range(k + 1, n):
                if a[k, l] == 0.0:
                    continue
                diff = a[l, l] - a[k, k]
                if abs(a[k, l]) < abs(diff) * 1.0e-36:
                    t = a[k, l] / diff
                else:
                    theta = diff / (2.0 * a[k, l])
                    t = 1.0 / (abs(theta) + math.sqrt(theta ** 2 + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t ** 2 + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[k, k] = rot[l, l] = c
                rot[k, l] = s
                rot[l, k] = -s
                a = rot.T.dot(a).dot(rot)
                a[k, l] = a[l, k] = 0.0
                v = v.dot(rot)
    else:
        logger.warning('jacobi did not converge in %d sweeps', max_sweeps)
    logger.debug('jacobi: %d sweeps', sweep)
    w = np.diag(a).copy()
    order = np.argsort(-w, kind='stable')
    return w[order], v[:, order]

def g_eigh(op, g):
    """
    Eigen-decomposition of an operator that is self-adjoint for a positive
    definite metric, through ``S = L^T op L^-T`` with ``g = L L^T``.

    :param op: Operator matrix, ``op[a, b]`` row ``a`` column ``b``
    :type op: numpy.ndarray

    :param g: Positive definite metric matrix
    :type g: numpy.ndarray

    :rtype: tuple
    :returns: ``(eigenvalues, vectors, asymmetry)``: descending eigenvalues,
              g-orthonormal eigenvectors as columns, and the relative
              asymmetry of ``S`` before symmetrising
    """
    try:
        chol = np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise exceptions.SignatureError('indefinite', 'positive definite')
    s = chol.T.dot(op).dot(np.linalg.inv(chol.T))
    asym = tensor.residual(s, s.T)
    w, v = jacobi(0.5 * (s + s.T))
    return w, np.linalg.solve(chol.T, v), asym

def faddeev_leverrier(a):
    """
    Characteristic polynomial ``det(t I - a) = t^n + c_1 t^(n-1) + ... + c_n``.

    :rtype: numpy.ndarray
    :returns: ``[1, c_1, ..., c_n]``
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    c = np.zeros(n + 1)
    c[0] = 1.0
    m = np.zeros((n, n))
    eye = np.eye(n)
    for k in range(1, n + 1):
        m = a.dot(m) + c[k - 1] * eye
        c[k] = -np.trace(a.dot(m)) / k
    return c

def elementary_symmetric(a):
    """``e_s = (-1)^s c_s``, the elementary symmetric polynomials of the eigenvalues."""
    c = faddeev_leverrier(a)
    return np.array([(-1) ** s * c[s] for s in range(len(c))])

def power_sums(a, count=None):
    """
    :rtype: numpy.ndarray
    :returns: ``[n, tr a, tr a^2, ..., tr a^count]``
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    count = n if count is None else count
    out = [float(n)]
    m = np.eye(n)
    for _ in range(count):
        m = m.dot(a)
        out.append(float(np.trace(m)))
    return np.array(out)

def newton_residual(e, p):
    """
    Largest violation of ``s e_s = sum_{j=1..s} (-1)^(j-1) e_{s-j} p_j``,
    relative to ``1 +`` the largest term.

    :param e: ``[e_0 = 1, e_1, ..., e_n]``
    :param p: ``[p_0, p_1, ..., p_n]`` (``p_0`` unused)

    :rtype: float
    """
    worst = 0.0
    scale = 0.0
    for s in range(1, len(e)):
        rhs = sum((-1) ** (j - 1) * e[s - j] * p[j] for j in range(1, s + 1))
        worst = max(worst, abs(s * e[s] - rhs))
        scale = max(scale, abs(s * e[s]), abs(rhs))
    return worst / (1.0 + scale)

def pfaffian(m):
    """
    Pfaffian of an antisymmetric matrix by expansion along the first row.

    :rtype: float
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if n % 2:
        return 0.0
    if n == 0:
        return 1.0
    total = 0.0
    rest = list(range(1, n))
    for idx, j in enumerate(rest):
        if m[0, j] == 0.0:
            continue
        keep = [r for r in rest if r != j]
        total += (-1) ** idx * m[0, j] * pfaffian(m[np.ix_(keep, keep)])
    return total

def contact_volume(eta, deta, vectors):
    """
    ``eta ^ (d eta)^n`` evaluated on ``2n + 1`` vectors, expanding along the
    ``eta`` slot and using ``omega^n(w_1, ..., w_2n) = n! Pf(omega(w_a, w_b))``.

    :param eta: One-form
    :type eta: sasaki.tensor.PointTensor

    :param deta: Two-form
    :type deta: sasaki.tensor.PointTensor

    :param vectors: Matrix whose columns are the arguments
    :type vectors: numpy.ndarray

    :rtype: float
    """
    vectors = np.asarray(vectors, dtype=float)
    count = vectors.shape[1]
    n = (count - 1) // 2
    etas = eta.components.dot(vectors)
    gram = vectors.T.dot(deta.components).dot(vectors)
    total = 0.0
    for i in range(count):
        if etas[i] == 0.0:
            continue
        keep = [j for j in range(count) if j != i]
        total += (-1) ** i * etas[i] * math.factorial(n) * pfaffian(gram[np.ix_(keep, keep)])
    return total

def g_orthonormal(vectors, g, tol=1e-10):
    """
    Gram-Schmidt with respect to a positive definite metric, dropping vectors
    that are dependent on the earlier ones.

    :param vectors: Columns to orthonormalise, in order
    :type vectors: numpy.ndarray

    :rtype: numpy.ndarray
    :returns: g-orthonormal columns
    """
    out = []
    for v in np.asarray(vectors, dtype=float).T:
        w = v.copy()
        for u in out:
            w = w - u.dot(g).dot(w) * u
        nrm2 = w.dot(g).dot(w)
        if nrm2 > tol * max(1.0, v.dot(g).dot(v)):
            out.append(w / math.sqrt(nrm2))
    dim = np.asarray(vectors).shape[0]
    return np.array(out).T if out else np.zeros((dim, 0))

def kernel_eta_frame(xi, g):
    """g-orthonormal basis of ``ker eta = xi^perp``, as columns."""
    dim = g.shape[0]
    return g_orthonormal(np.column_stack([xi, np.eye(dim)]), g)[:, 1:]

def adapted_basis(nabla_xi, g, xi, tol=1e-8):
    """
    Basis ``(xi, X_1, Y_1, ..., X_n, Y_n)`` with ``nabla_{X_k} xi = lambda_k Y_k``,
    g-orthonormal, built inside the eigenspaces of ``(nabla xi)^2``.

    :param nabla_xi: Matrix of ``X -> nabla_X xi``, g-skew
    :type nabla_xi: numpy.ndarray

    :rtype: tuple
    :returns: ``(basis, lambdas)``, basis as columns
    """
    sq = nabla_xi.dot(nabla_xi)
    w, vecs, _ = g_eigh(sq, g)
    dim = g.shape[0]
    xi = np.asarray(xi, dtype=float)
    # drop the xi direction before pairing
    rest = g_orthonormal(np.column_stack([xi, vecs]), g)[:, 1:]
    vals = np.array([v.dot(g).dot(sq.dot(v)) for v in rest.T])
    order = np.argsort(vals, kind='stable')
    remaining = [rest[:, i] for i in order]
    columns = [xi]
    lambdas = []
    while remaining:
        x = remaining.pop(0)
        ax = nabla_xi.dot(x)
        lam = math.sqrt(max(ax.dot(g).dot(ax), 0.0))
        if lam < tol:
            raise exceptions.DegenerateFormError(lam)
        y = ax / lam
        columns.extend([x, y])
        lambdas.append(lam)
        if remaining:
            remaining = list(g_orthonormal(
                np.column_stack(columns + remaining), g)[:, len(columns):].T)
    basis = np.column_stack(columns)
    if basis.shape[1] != dim:
        raise exceptions.DimensionError(basis.shape[1], dim)
    return basis, np.array(lambdas)

# ---------------------------------------------------------------------------
# Lefschetz map on forms

def _pairs(dim):
    return list(itertools.combinations(range(dim), 2))

def _quads(dim):
    return list(itertools.combinations(range(dim), 4))

def lefschetz_matrix(omega):
    """
    Matrix of ``beta -> omega ^ beta`` from 2-forms to 4-forms in the bases
    ``e^i ^ e^j`` (``i < j``) and values on ``(e_a, e_b, e_c, e_d)`` (``a < b < c < d``).

    :param omega: Antisymmetric matrix
    :type omega: numpy.ndarray

    :rtype: numpy.ndarray
    """
    omega = np.asarray(omega, dtype=float)
    dim = omega.shape[0]
    om = tensor.PointTensor(0, 2, omega)
    quads = _quads(dim)
    cols = []
    for i, j in _pairs(dim):
        beta = np.zeros((dim, dim))
        beta[i, j], beta[j, i] = 1.0, -1.0
        four = tensor.wedge(om, tensor.PointTensor(0, 2, beta)).components
        cols.append([four[q] for q in quads])
    return np.array(cols).T

def _require_nondegenerate(omega):
    det = float(np.linalg.det(np.asarray(omega, dtype=float)))
    if abs(det) < 1e-10:
        raise exceptions.DegenerateFormError(det)
    return det

def lefschetz_kernel_dim(omega, tol=1e-9):
    """
    Kernel dimension of the Lefschetz map by singular values.

    :raises sasaki.exceptions.DegenerateFormError: ``omega`` degenerate

    :rtype: tuple
    :returns: ``(kernel_dim, smallest_singular_value)``
    """
    _require_nondegenerate(omega)
    m = lefschetz_matrix(omega)
    sv = np.linalg.svd(m, compute_uv=False)
    full = np.zeros(m.shape[1])
    full[:len(sv)] = sv
    cutoff = tol * max(1.0, float(np.max(sv)) if sv.size else 1.0)
    return int(np.sum(full <= cutoff)), float(np.min(full))

def _exact_rank(rows):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank

def lefschetz_kernel_dim_exact(omega):
    """
    Kernel dimension by exact rational elimination, for an integer ``omega``.

    Matrix entries are enumerated directly: ``(omega ^ beta)(e_a, e_b, e_c, e_d)``
    over the three splittings of ``{a, b, c, d}`` into pairs.

    :rtype: int
    """
    om = [[Fraction(int(round(v))) for v in row] for row in np.asarray(omega)]
    dim = len(om)
    if _exact_rank(om) < dim:
        raise exceptions.DegenerateFormError(0.0)
    pairs = _pairs(dim)
    rows = []
    for a, b, c, d in _quads(dim):
        row = []
        for i, j in pairs:
            def beta(u, v):
                # pylint: disable=cell-var-from-loop
                if (u, v) == (i, j):
                    return 1
                if (u, v) == (j, i):
                    return -1
                return 0
            val = (om[a][b] * beta(c, d) + om[c][d] * beta(a, b)
                   - om[a][c] * beta(b, d) - om[b][d] * beta(a, c)
                   + om[a][d] * beta(b, c) + om[b][c] * beta(a, d))
            row.append(Fraction(val))
        rows.append(row)
    return len(pairs) - _exact_rank(rows)
