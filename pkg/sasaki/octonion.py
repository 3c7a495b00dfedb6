"""
Octonions by Cayley-Dickson doubling of the quaternions, and the cross
product on the imaginary octonions ``Im O = R^7``.

Basis ``1, e_1, ..., e_7``; an octonion is an array of 8 reals, the first
four forming the quaternion ``a`` and the last four ``b`` of the pair
``(a, b)``, multiplied as ``(a, b)(c, d) = (ac - conj(d) b, da + b conj(c))``.
"""

import numpy as np

def _qmul(x, y):
    a0, a1, a2, a3 = x
    b0, b1, b2, b3 = y
    return np.array([a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                     a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                     a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                     a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0])

def _qconj(x):
    return np.array([x[0], -x[1], -x[2], -x[3]])

def cayley_dickson(x, y):
    """
    Octonion product by doubling.

    :param x: Left factor, 8 reals
    :type x: array-like

    :param y: Right factor, 8 reals
    :type y: array-like

    :rtype: numpy.ndarray
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a, b = x[:4], x[4:]
    c, d = y[:4], y[4:]
    return np.concatenate([_qmul(a, c) - _qmul(_qconj(d), b),
                           _qmul(d, a) + _qmul(b, _qconj(c))])

def _build_table():
    eye = np.eye(8)
    table = np.zeros((8, 8, 8))
    for i in range(8):
        for j in range(8):
            table[i, j] = cayley_dickson(eye[i], eye[j])
    table.flags.writeable = False
    return table

#: ``TABLE[i, j, k]``: coefficient of ``e_k`` in ``e_i e_j``
TABLE = _build_table()

#: Nonzero ``(i, j, k, c)`` with ``e_i x e_j = c e_k`` on ``Im O``, 0-based in ``R^7``
CROSS_TERMS = tuple((i, j, k, float(TABLE[i + 1, j + 1, k + 1]))
                    for i in range(7) for j in range(7) for k in range(7)
                    if TABLE[i + 1, j + 1, k + 1] != 0.0)

def multiply(x, y):
    """Octonion product through the frozen table."""
    return np.einsum('i,j,ijk->k', np.asarray(x, dtype=float),
                     np.asarray(y, dtype=float), TABLE)

def conjugate(x):
    x = np.array(x, dtype=float)
    x[1:] = -x[1:]
    return x

def norm(x):
    return float(np.sqrt(np.dot(x, x)))

def cross(x, y):
    """
    Cross product ``Im(xy)`` of imaginary octonions given as 7-vectors.

    Works on sequences of floats or of :class:`sasaki.jet.Jet2`.

    :rtype: list
    """
    out = [0.0] * 7
    for i, j, k, c in CROSS_TERMS:
        out[k] = out[k] + c * (x[i] * y[j])
    return out
