"""Fixed-size 3D linear algebra.

Vectors and matrices are plain ``numpy`` arrays of shape ``(3,)`` and
``(3, 3)``. The only structured type is :class:`SkewMatrix3`, which stores a
skew-symmetric matrix through its three free entries::

    [[  0,  p1,  p2],
     [-p1,   0,  p3],
     [-p2, -p3,   0]]

Its rotation axis (the kernel direction) is ``(p3, -p2, p1)``; for any
vector ``v`` the product ``S @ v`` equals ``v x axis``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NotOnSphere, NotSkew

UNIT_TOL = 1e-9
SCALE_TOL = 1e-9
SKEW_TOL = 1e-9

# below this angular rate rotation_exp switches to the series form
_SMALL_BETA = 1e-8


def as_vector3(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite components")
    return arr


def as_matrix3(M) -> np.ndarray:
    arr = np.asarray(M, dtype=float)
    if arr.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def as_unit(v, tol: float = UNIT_TOL) -> np.ndarray:
    """Validate that ``v`` lies on the unit sphere within ``tol``.

    The returned copy is renormalized so downstream code sees a point that
    is on the sphere to rounding precision.
    """
    arr = as_vector3(v)
    n = float(np.linalg.norm(arr))
    if abs(n - 1.0) > tol:
        raise NotOnSphere(f"|v| = {n!r} is not within {tol:g} of 1")
    return arr / n


def cross(u, v) -> np.ndarray:
    return np.cross(u, v)


def max_abs(M) -> float:
    return float(np.max(np.abs(M)))


def is_skew(M, tol: float = SKEW_TOL) -> bool:
    M = np.asarray(M, dtype=float)
    return max_abs(M + M.T) <= tol


@dataclass(frozen=True)
class SkewMatrix3:
    """Skew-symmetric 3x3 matrix stored by its upper-triangle entries."""

    p1: float
    p2: float
    p3: float

    @property
    def matrix(self) -> np.ndarray:
        return skew_materialize(self)

    @property
    def axis(self) -> np.ndarray:
        return np.array([self.p3, -self.p2, self.p1], dtype=float)

    @property
    def params(self) -> tuple[float, float, float]:
        return (self.p1, self.p2, self.p3)

    @classmethod
    def from_axis(cls, w) -> "SkewMatrix3":
        w = as_vector3(w)
        return cls(float(w[2]), float(-w[1]), float(w[0]))

    def norm(self) -> float:
        """Euclidean length of the axis, i.e. the angular rate of exp(tS)."""
        return math.sqrt(self.p1 * self.p1 + self.p2 * self.p2 + self.p3 * self.p3)

    def __add__(self, other: "SkewMatrix3") -> "SkewMatrix3":
        return SkewMatrix3(self.p1 + other.p1, self.p2 + other.p2, self.p3 + other.p3)

    def scaled(self, c: float) -> "SkewMatrix3":
        return SkewMatrix3(c * self.p1, c * self.p2, c * self.p3)

    def __matmul__(self, v):
        return self.matrix @ v


def skew_materialize(S: SkewMatrix3) -> np.ndarray:
    p1, p2, p3 = float(S.p1), float(S.p2), float(S.p3)
    return np.array(
        [[0.0, p1, p2],
         [-p1, 0.0, p3],
         [-p2, -p3, 0.0]]
    )


def skew_extract(M, tol: float = SKEW_TOL) -> SkewMatrix3:
    """Read the parameters of a skew-symmetric matrix.

    Raises :class:`NotSkew` when ``max|M + M^T| > tol``. Small asymmetries
    below ``tol`` are averaged out.
    """
    M = as_matrix3(M)
    defect = max_abs(M + M.T)
    if defect > tol:
        raise NotSkew(f"max|M + M^T| = {defect:g} exceeds {tol:g}")
    if np.array_equal(M, -M.T):
        return SkewMatrix3(float(M[0, 1]), float(M[0, 2]), float(M[1, 2]))
    return SkewMatrix3(
        float(0.5 * (M[0, 1] - M[1, 0])),
        float(0.5 * (M[0, 2] - M[2, 0])),
        float(0.5 * (M[1, 2] - M[2, 1])),
    )


def rotation_exp(C: SkewMatrix3, t: float) -> np.ndarray:
    """Closed-form ``expm(t * C)`` for a skew-symmetric ``C`` (Rodrigues).

    ``exp(tC) = I + sin(bt)/b * C + (1 - cos bt)/b**2 * C**2`` with ``b`` the
    length of the rotation axis. Since ``C @ v == v x C.axis`` the result
    turns vectors by ``-b*t`` about ``C.axis`` (right-hand rule).
    """
    M = C.matrix
    beta = C.norm()
    t = float(t)
    if beta < _SMALL_BETA:
        bt2 = (beta * t) ** 2
        f1 = t * (1.0 - bt2 / 6.0)
        f2 = 0.5 * t * t * (1.0 - bt2 / 12.0)
    else:
        f1 = math.sin(beta * t) / beta
        # 2 sin^2(x/2) avoids cancellation in 1 - cos x for small x
        f2 = 2.0 * (math.sin(0.5 * beta * t) / beta) ** 2
    return np.eye(3) + f1 * M + f2 * (M @ M)


def rank_at_most_2(cols: Sequence, scale_tol: float = SCALE_TOL) -> int:
    """Numerical rank (0, 1 or 2) of vectors known to span at most a plane.

    The caller guarantees that all vectors are tangent to the sphere at a
    common point, so pairwise cross products decide rank 2 exactly up to
    tolerance. Accepts any number of vectors.
    """
    vecs = [np.asarray(c, dtype=float) for c in cols]
    norms = [float(np.linalg.norm(c)) for c in vecs]
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            w = float(np.linalg.norm(np.cross(vecs[i], vecs[j])))
            if w > scale_tol * max(1.0, norms[i] * norms[j]):
                return 2
    if any(n > scale_tol for n in norms):
        return 1
    return 0


def rank_at_most_2_batch(fields: np.ndarray, scale_tol: float = SCALE_TOL) -> np.ndarray:
    """Vectorized :func:`rank_at_most_2` over many points.

    ``fields`` has shape ``(n_points, k, 3)``; returns an int array of shape
    ``(n_points,)``.
    """
    fields = np.asarray(fields, dtype=float)
    n, k, _ = fields.shape
    norms = np.linalg.norm(fields, axis=2)
    rank2 = np.zeros(n, dtype=bool)
    for i in range(k):
        for j in range(i + 1, k):
            w = np.linalg.norm(np.cross(fields[:, i], fields[:, j]), axis=1)
            rank2 |= w > scale_tol * np.maximum(1.0, norms[:, i] * norms[:, j])
    rank1 = np.any(norms > scale_tol, axis=1)
    return np.where(rank2, 2, np.where(rank1, 1, 0))
