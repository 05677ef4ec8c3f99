"""Vector algebra in R^4.

Arrays carry the four ambient coordinates on the last axis, so every
function broadcasts over leading grid dimensions.

Orientation: ``wedge3(a, b, c)`` is the vector w with
``dot4(w, x) == det4(x, a, b, c)`` (the argument of the inner product in the
first column). With this choice the Clifford normal C ^ C_u ^ C_v is
(sqrt2/2)(cos(v-u), sin(v-u), -cos(u+v), -sin(u+v)) and the Clifford second
form is (0, 1, 0).
"""

import numpy as np


def dot4(a, b):
    """Canonical inner product of R^4 along the last axis."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.einsum("...i,...i->...", a, b)


def _det3(m):
    # m[..., row, col]
    return (
        m[..., 0, 0] * (m[..., 1, 1] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 1])
        - m[..., 0, 1] * (m[..., 1, 0] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 0])
        + m[..., 0, 2] * (m[..., 1, 0] * m[..., 2, 1] - m[..., 1, 1] * m[..., 2, 0])
    )


def wedge3(a, b, c):
    """Triple wedge product, by cofactor expansion along the first column of
    det[x, a, b, c]. Orthogonal to a, b, c; alternating in its arguments."""
    cols = np.stack(np.broadcast_arrays(
        np.asarray(a, dtype=float), np.asarray(b, dtype=float), np.asarray(c, dtype=float)
    ), axis=-1)  # (..., 4 rows, 3 cols)
    out = np.empty(cols.shape[:-1])
    for i in range(4):
        minor = np.delete(cols, i, axis=-2)
        out[..., i] = (-1) ** i * _det3(minor)
    return out


def det4(a, b, c, d):
    """Determinant of the 4x4 matrix with columns a, b, c, d (in that order)."""
    return dot4(wedge3(b, c, d), a)


def normalize(a):
    a = np.asarray(a, dtype=float)
    return a / np.sqrt(dot4(a, a))[..., None]
