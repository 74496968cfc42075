"""Vector fields induced on the unit sphere by 3x3 matrices.

A matrix ``M`` induces the tangent field ``h_M(s) = M s - <M s, s> s``.
The map ``M -> h_M`` is linear and turns matrix commutators into Lie
brackets of vector fields, so bracket computations are done on matrices
and only pushed to the sphere at evaluation points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg3 import SKEW_TOL, as_matrix3, is_skew

PROPORTIONAL_TOL = 1e-9


@dataclass(frozen=True)
class SystemPair:
    """Drift and control matrices of ``x' = A x + u B x``."""

    A: np.ndarray
    B: np.ndarray
    label: str | None = None
    skew: bool = field(init=False)

    def __post_init__(self):
        A = as_matrix3(self.A)
        B = as_matrix3(self.B)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "skew", is_skew(A, SKEW_TOL) and is_skew(B, SKEW_TOL))

    def field(self, s, u: float = 0.0) -> np.ndarray:
        return induced_field(self.A, s) + u * induced_field(self.B, s)


def induced_field(M, s):
    """Evaluate ``h_M(s) = M s - <M s, s> s``.

    Works for float arrays and for object arrays (e.g. ``fractions.Fraction``
    entries), in which case the result is exact. ``s`` may also be a stack of
    points with shape ``(n, 3)``.
    """
    M = np.asarray(M)
    s = np.asarray(s)
    Ms = s @ M.T
    radial = np.sum(Ms * s, axis=-1)
    return Ms - radial[..., None] * s if s.ndim > 1 else Ms - radial * s


def matrix_bracket(A, B) -> np.ndarray:
    A = np.asarray(A)
    B = np.asarray(B)
    return A @ B - B @ A


def field_derivative(M, s, v, h: float = 1e-5) -> np.ndarray:
    """Directional derivative of ``h_M`` at ``s`` along ``v`` by central differences.

    The step is taken along the unit direction of ``v`` so the truncation
    error does not grow with ``|v|``.
    """
    s = np.asarray(s, dtype=float)
    v = np.asarray(v, dtype=float)
    nv = float(np.linalg.norm(v))
    if nv == 0.0:
        return np.zeros(3)
    d = v / nv
    return nv * (induced_field(M, s + h * d) - induced_field(M, s - h * d)) / (2.0 * h)


def field_bracket_check(A, B, s, h: float = 1e-5) -> float:
    """Residual between the finite-difference bracket ``[h_A, h_B](s)`` and ``h_[A,B](s)``.

    Uses the convention ``[X, Y] = dX(Y) - dY(X)``. Intended for property
    tests; the fields are extended off the sphere by the same formula.
    """
    s = np.asarray(s, dtype=float)
    hA = induced_field(A, s)
    hB = induced_field(B, s)
    numeric = field_derivative(A, s, hB, h) - field_derivative(B, s, hA, h)
    exact = induced_field(matrix_bracket(A, B), s)
    return float(np.linalg.norm(numeric - exact))


def _proportional(m: np.ndarray, n: np.ndarray, tol: float) -> bool:
    nn = float(n @ n)
    if nn == 0.0:
        return False
    resid = m - (m @ n) / nn * n
    return float(np.linalg.norm(resid)) <= tol * float(np.linalg.norm(m))


def bracket_closure(A, B, depth: int = 3, tol: float = PROPORTIONAL_TOL) -> list[np.ndarray]:
    """Generators ``A, B`` plus iterated brackets up to ``depth`` levels.

    ``depth == 1`` returns the generators, ``depth == 2`` adds ``[A, B]``,
    and each further level brackets ``A`` and ``B`` with the matrices that
    were new at the previous level. Brackets that vanish, or are
    proportional to a matrix already collected, are dropped.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    A = as_matrix3(A)
    B = as_matrix3(B)
    out = [A, B]
    frontier = [B]
    for _ in range(depth - 1):
        new = []
        for X in (A, B):
            for Y in frontier:
                Z = matrix_bracket(X, Y)
                scale = max(1.0, float(np.linalg.norm(X)) * float(np.linalg.norm(Y)))
                if float(np.linalg.norm(Z)) <= tol * scale:
                    continue
                z = Z.ravel()
                if any(_proportional(z, W.ravel(), tol) for W in out + new):
                    continue
                new.append(Z)
        if not new:
            break
        out.extend(new)
        frontier = new
    return out
