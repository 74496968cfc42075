"""Orthogonal reduction of a skew pair (A, B) to the canonical drift block.

For skew ``A != 0`` there is an orthogonal ``P`` with::

    P^T A P = [[0, a, 0], [-a, 0, 0], [0, 0, 0]],   a = |axis(A)| > 0

Conjugating ``B`` by the same ``P`` gives a skew matrix with parameters
``(b1, b2, b3)``. The pair brackets to zero exactly when
``alpha = b2**2 + b3**2`` vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import BracketVanishes, ZeroMatrix
from .linalg3 import SkewMatrix3, max_abs, skew_extract

TOL = 1e-9

# P = identity is only used when A's off-block entries are at roundoff level
_IDENTITY_BRANCH_REL = 1e-14

# rotation by pi/2 about the third axis
QUARTER_TURN = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class NormalFormData:
    """Working frame of a skew pair.

    Coordinates in the working frame are ``y = (P @ Q).T @ x``. In that frame
    the drift is ``skew(a, 0, 0)`` and the control matrix is
    ``skew(b1, b2, b3)``.
    """

    a: float
    P: np.ndarray
    Q: np.ndarray
    b1: float
    b2: float
    b3: float
    alpha: float

    @property
    def frame(self) -> np.ndarray:
        """Combined orthogonal map ``P @ Q`` from working to original coordinates."""
        return self.P @ self.Q

    @property
    def drift(self) -> SkewMatrix3:
        return SkewMatrix3(self.a, 0.0, 0.0)

    @property
    def control(self) -> SkewMatrix3:
        return SkewMatrix3(self.b1, self.b2, self.b3)

    def to_working(self, x) -> np.ndarray:
        return self.frame.T @ np.asarray(x, dtype=float)

    def to_original(self, y) -> np.ndarray:
        return self.frame @ np.asarray(y, dtype=float)

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "P": self.P.tolist(),
            "Q": self.Q.tolist(),
            "b1": self.b1,
            "b2": self.b2,
            "b3": self.b3,
            "alpha": self.alpha,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormalFormData":
        b2, b3 = float(d["b2"]), float(d["b3"])
        return cls(
            a=float(d["a"]),
            P=np.asarray(d["P"], dtype=float),
            Q=np.asarray(d["Q"], dtype=float),
            b1=float(d["b1"]),
            b2=b2,
            b3=b3,
            alpha=b2 * b2 + b3 * b3,
        )


def _as_skew(M) -> SkewMatrix3:
    if isinstance(M, SkewMatrix3):
        return M
    return skew_extract(M)


def skew_normal_form(A, tol: float = TOL) -> tuple[float, np.ndarray]:
    """Return ``(a, P)`` with ``P`` orthogonal and ``P.T @ A @ P`` canonical.

    The columns of ``P`` are the orthonormal eigen-directions

        v1 = (-a1 a3, a1 a2, r**2) / (a r)
        v2 = -(a2, a3, 0) / r
        v3 = (a3, -a2, a1) / a

    with ``r = hypot(a2, a3)``. When ``r`` vanishes ``A`` is already
    block-diagonal; ``P`` is then the identity, or a half-turn about the
    first axis when ``a1 < 0`` so that the upper entry comes out positive.
    """
    S = _as_skew(A)
    a1, a2, a3 = S.params
    a = S.norm()
    if a <= tol:
        raise ZeroMatrix(f"drift matrix is zero (|A| = {a:g})")
    r = math.hypot(a2, a3)
    if r <= _IDENTITY_BRANCH_REL * a:
        if a1 > 0:
            return a, np.eye(3)
        return a, np.diag([1.0, -1.0, -1.0])
    v1 = np.array([-a1 * a3, a1 * a2, r * r]) / (a * r)
    v2 = -np.array([a2, a3, 0.0]) / r
    v3 = np.array([a3, -a2, a1]) / a
    return a, np.column_stack([v1, v2, v3])


def reduce_system(A, B, tol: float = TOL) -> NormalFormData:
    a, P = skew_normal_form(A, tol)
    Bt = P.T @ _as_skew(B).matrix @ P
    b = skew_extract(Bt, tol=max(tol, 1e-9 * (1.0 + max_abs(Bt))))
    return NormalFormData(
        a=a, P=P, Q=np.eye(3), b1=b.p1, b2=b.p2, b3=b.p3,
        alpha=b.p2 * b.p2 + b.p3 * b.p3,
    )


def conjugated_bracket(nf: NormalFormData) -> np.ndarray:
    """``[J(A), B~]`` in the working frame (before any fixup rotation)."""
    J = nf.drift.matrix
    Bt = nf.control.matrix
    return J @ Bt - Bt @ J


def ensure_b3_nonzero(nf: NormalFormData, tol: float = TOL) -> NormalFormData:
    """Rotate the working frame by a quarter turn if ``b3`` is degenerate.

    The quarter turn about the third axis commutes with the drift block, so
    ``a`` and ``alpha`` are unchanged while ``(b2, b3)`` becomes ``(b3, -b2)``.
    """
    if nf.alpha <= tol:
        raise BracketVanishes(
            f"b2^2 + b3^2 = {nf.alpha:g}: [A, B] vanishes, no steering guarantee"
        )
    if abs(nf.b3) > tol:
        return nf
    Q = QUARTER_TURN
    Bq = Q.T @ nf.control.matrix @ Q
    b = skew_extract(Bq)
    return replace(nf, Q=nf.Q @ Q, b1=b.p1, b2=b.p2, b3=b.p3,
                   alpha=b.p2 * b.p2 + b.p3 * b.p3)
