"""Constant-control flows of the normal-form system.

All quantities here live in the working frame of a :class:`NormalFormData`:
drift ``skew(a, 0, 0)`` and control ``skew(b1, b2, b3)``. For a constant
control ``u`` the generator ``C = A + u B`` is skew with rate

    beta(u) = sqrt((a + u b1)**2 + (u b2)**2 + (u b3)**2)

and every trajectory is a circle on the sphere traversed with period
``2 pi / beta``. Trajectories are evaluated through :func:`rotation_exp`;
the eigenbasis expansion in :class:`ClosedFormSolution` is kept as an
independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketVanishes, DegenerateB3, DegenerateRotation, LatitudeOutOfRange
from .linalg3 import SkewMatrix3, rotation_exp
from .normal_form import NormalFormData

TOL = 1e-9
TWO_PI = 2.0 * math.pi


def generator(nf: NormalFormData, u: float) -> SkewMatrix3:
    """``A + u B`` in the working frame."""
    return SkewMatrix3(nf.a + u * nf.b1, u * nf.b2, u * nf.b3)


def beta(nf: NormalFormData, u: float) -> float:
    return generator(nf, u).norm()


def solve_constant_control(nf: NormalFormData, s0, u: float, t: float) -> np.ndarray:
    return rotation_exp(generator(nf, u), t) @ np.asarray(s0, dtype=float)


@dataclass(frozen=True)
class CircleData:
    center: np.ndarray
    radius: float
    plane_normal: np.ndarray


def circle_of(C: SkewMatrix3, s0, tol: float = TOL) -> CircleData:
    """Circle swept by ``exp(tC) s0``: centre on the rotation axis."""
    b = C.norm()
    if b <= tol:
        raise DegenerateRotation(f"rotation rate {b:g} is zero; the flow is stationary")
    n = C.axis / b
    s0 = np.asarray(s0, dtype=float)
    h = float(s0 @ n)
    return CircleData(center=h * n, radius=math.sqrt(max(0.0, 1.0 - h * h)), plane_normal=n)


def trajectory_circle(nf: NormalFormData, s0, u: float, tol: float = TOL) -> CircleData:
    return circle_of(generator(nf, u), s0, tol)


@dataclass(frozen=True)
class ClosedFormSolution:
    """Eigenbasis expansion ``s(t) = c1 v1 + c2 (cos v2 - sin v3) + c3 (cos v3 + sin v2)``.

    For ``u = 0`` the basis is ``v1 = e3``, ``v2 = e2``, ``v3 = -e1`` with
    rate ``a``. For ``u != 0`` (requires ``alpha > 0``)::

        v1 = (u b3, -u b2, a + u b1)
        v2 = (-b3 (a + u b1), b2 (a + u b1), u alpha) / (u alpha)
        v3 = -(b2, b3, 0) * beta / (u alpha)

    where ``v2 + i v3`` spans the ``+i beta`` eigenspace of ``C``.
    """

    u: float
    beta: float
    axis: np.ndarray
    v2: np.ndarray
    v3: np.ndarray
    c1: float
    c2: float
    c3: float
    s0: np.ndarray

    def __call__(self, t: float) -> np.ndarray:
        c, s = math.cos(self.beta * t), math.sin(self.beta * t)
        return (self.c1 * self.axis
                + self.c2 * (c * self.v2 - s * self.v3)
                + self.c3 * (c * self.v3 + s * self.v2))


def closed_form_solution(nf: NormalFormData, s0, u: float) -> ClosedFormSolution:
    s0 = np.asarray(s0, dtype=float)
    if u == 0.0:
        axis = np.array([0.0, 0.0, 1.0])
        v2 = np.array([0.0, 1.0, 0.0])
        v3 = np.array([-1.0, 0.0, 0.0])
        rate = nf.a
    else:
        if nf.alpha <= 0.0:
            raise BracketVanishes("eigenbasis expansion needs b2^2 + b3^2 > 0")
        p = nf.a + u * nf.b1
        rate = beta(nf, u)
        ua = u * nf.alpha
        axis = np.array([u * nf.b3, -u * nf.b2, p])
        v2 = np.array([-nf.b3 * p / ua, nf.b2 * p / ua, 1.0])
        v3 = np.array([-nf.b2 * rate / ua, -nf.b3 * rate / ua, 0.0])
    c1, c2, c3 = np.linalg.solve(np.column_stack([axis, v2, v3]), s0)
    return ClosedFormSolution(u=u, beta=rate, axis=axis, v2=v2, v3=v3,
                              c1=float(c1), c2=float(c2), c3=float(c3), s0=s0)


@dataclass(frozen=True)
class PoleManeuver:
    """A constant control whose circle joins an equator anchor to a pole.

    Riding ``u_star`` from ``anchor`` the height follows
    ``hemisphere_sign * (1 - cos(beta t)) / 2``: the pole is reached at
    ``half_period`` and the anchor again at ``period``.
    """

    u_star: float
    beta: float
    period: float
    half_period: float
    anchor: np.ndarray
    pole: np.ndarray
    hemisphere_sign: int
    case: int


def pole_controls(nf: NormalFormData) -> dict[int, float]:
    """Both controls ``u`` satisfying ``u**2 alpha == (a + u b1)**2``.

    Case 1 is ``a / (sqrt(alpha) - b1)`` and exists when the denominator is
    nonzero. Case 2 is ``-a / (sqrt(alpha) + b1)``, which reduces to
    ``-a / (2 sqrt(alpha))`` when ``b1 == sqrt(alpha)``.
    """
    r = math.sqrt(nf.alpha)
    out = {}
    if r - nf.b1 != 0.0:
        out[1] = nf.a / (r - nf.b1)
    if r + nf.b1 != 0.0:
        out[2] = -nf.a / (r + nf.b1)
    return out


def _choose_case(nf: NormalFormData, tol: float) -> int:
    # the larger denominator keeps |u*| <= a / sqrt(alpha), hence beta <= sqrt(2) a
    r = math.sqrt(nf.alpha)
    d1, d2 = abs(r - nf.b1), abs(r + nf.b1)
    if d1 > tol and d1 >= d2:
        return 1
    return 2


def pole_maneuver(
    nf: NormalFormData, target_pole: int, tol: float = TOL, case: int | None = None
) -> PoleManeuver:
    """Control, timing and equator anchor that reach the pole ``(0, 0, target_pole)``.

    ``case=None`` picks whichever of the two pole controls is better
    conditioned; pass ``1`` or ``2`` to force one.
    """
    if target_pole not in (1, -1):
        raise ValueError("target_pole must be +1 or -1")
    if nf.alpha <= tol:
        raise BracketVanishes(f"b2^2 + b3^2 = {nf.alpha:g}")
    if abs(nf.b3) <= tol:
        raise DegenerateB3(f"|b3| = {abs(nf.b3):g}; call ensure_b3_nonzero first")
    if case is None:
        case = _choose_case(nf, tol)
    r = math.sqrt(nf.alpha)
    if case == 1:
        if abs(r - nf.b1) <= tol:
            raise ValueError("case 1 needs sqrt(alpha) != b1")
        u = nf.a / (r - nf.b1)
    elif case == 2:
        u = -nf.a / (r + nf.b1)
    else:
        raise ValueError("case must be 1 or 2")
    b = beta(nf, u)
    half = math.pi / b
    base = np.array([nf.b3 / r, -nf.b2 / r, 0.0])
    # case 1 lifts the base anchor north, case 2 sends it south
    lift = 1 if case == 1 else -1
    anchor = base * (lift * target_pole)
    pole = np.array([0.0, 0.0, float(target_pole)])
    if np.linalg.norm(solve_constant_control(nf, anchor, u, half) - pole) > 1e-9:
        anchor = -anchor
    return PoleManeuver(u_star=u, beta=b, period=TWO_PI / b, half_period=half,
                        anchor=anchor, pole=pole, hemisphere_sign=target_pole, case=case)


def latitude_on_pole_circle(m: PoleManeuver, t: float) -> float:
    return m.hemisphere_sign * math.sin(0.5 * m.beta * t) ** 2


def solve_latitude(m: PoleManeuver, z: float, tol: float = TOL) -> float:
    """Earliest ride time at which the maneuver circle reaches height ``z``.

    Equals ``arccos(1 - 2|z|) / beta``; evaluated as ``2 asin(sqrt|z|) / beta``
    for accuracy near the equator. The second crossing in each period is
    ``period - t`` (see :func:`second_crossing`).
    """
    z = float(z)
    if z * m.hemisphere_sign < 0.0 and abs(z) > tol:
        raise LatitudeOutOfRange(f"height {z} is in the wrong hemisphere for this maneuver")
    if abs(z) > 1.0 + tol:
        raise LatitudeOutOfRange(f"|z| = {abs(z)} > 1")
    w = min(1.0, abs(z)) if z * m.hemisphere_sign >= 0.0 else 0.0
    return 2.0 * math.asin(math.sqrt(w)) / m.beta


def second_crossing(m: PoleManeuver, t: float) -> float:
    return m.period - t


def crossing_time(m: PoleManeuver, s, tol: float = TOL) -> float:
    """Like :func:`solve_latitude` for the height of point ``s``.

    Uses the point's horizontal radius as well as its height, which keeps the
    result accurate close to the pole where height alone is ill-conditioned.
    """
    s = np.asarray(s, dtype=float)
    z = float(s[2])
    if z * m.hemisphere_sign < 0.0 and abs(z) > tol:
        raise LatitudeOutOfRange(f"height {z} is in the wrong hemisphere for this maneuver")
    w = abs(z) if z * m.hemisphere_sign >= 0.0 else 0.0
    rho = math.hypot(s[0], s[1])
    # on the circle: height = sin^2(x), radius = cos(x) sqrt(1 + sin^2(x)), x = beta t / 2
    x = math.atan2(math.sqrt(w), rho / math.sqrt(1.0 + w))
    return 2.0 * x / m.beta
