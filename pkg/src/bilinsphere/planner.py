"""Piecewise-constant steering between two points of the sphere.

The construction works in the normal-form frame, where ``u = 0`` spins
points about the third axis at rate ``a`` (heights are preserved) and a
pole maneuver carries an equator anchor up to a pole and back. A plan is at
most five legs::

    drift -> ride down to the equator -> drift along the equator
          -> ride up to the target height -> drift to the target

with empty legs dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import (
    TWO_PI,
    PoleManeuver,
    crossing_time,
    generator,
    pole_maneuver,
    solve_constant_control,
)
from .errors import InternalValidation
from .linalg3 import SkewMatrix3, as_unit, rotation_exp, skew_extract
from .normal_form import NormalFormData, ensure_b3_nonzero, reduce_system

TOL = 1e-9
PLAN_TOL = 1e-9

# segments that move the state by less than this are no-ops and are dropped
_NEGLIGIBLE_MOVE = 1e-13
# heights below this are frame-change roundoff; treating them as 0 moves the target by less
_EQUATOR_SNAP = 1e-14


@dataclass(frozen=True)
class ControlSegment:
    u: float
    duration: float

    def __post_init__(self):
        if not self.duration >= 0.0:
            raise ValueError(f"segment duration must be >= 0, got {self.duration}")


@dataclass
class SteeringPlan:
    segments: list[ControlSegment]
    waypoints: list[np.ndarray]
    frame: NormalFormData | None
    target: np.ndarray | None = None
    total_time: float = field(init=False)

    def __post_init__(self):
        self.total_time = float(sum(seg.duration for seg in self.segments))
        if self.target is None:
            self.target = self.waypoints[-1]

    @property
    def start(self) -> np.ndarray:
        return self.waypoints[0]

    def to_dict(self) -> dict:
        return {
            "segments": [{"u": s.u, "duration": s.duration} for s in self.segments],
            "waypoints": [np.asarray(w).tolist() for w in self.waypoints],
            "total_time": self.total_time,
            "target": np.asarray(self.target).tolist(),
            "frame": None if self.frame is None else self.frame.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SteeringPlan":
        segments = [ControlSegment(float(s["u"]), float(s["duration"])) for s in d["segments"]]
        waypoints = [np.asarray(w, dtype=float) for w in d["waypoints"]]
        if len(waypoints) != len(segments) + 1:
            raise ValueError("a plan needs exactly one more waypoint than segments")
        frame = d.get("frame")
        target = d.get("target")
        return cls(
            segments=segments,
            waypoints=waypoints,
            frame=None if frame is None else NormalFormData.from_dict(frame),
            target=None if target is None else np.asarray(target, dtype=float),
        )


def _azimuth(p: np.ndarray) -> float:
    return math.atan2(p[1], p[0])


def drift_time(nf: NormalFormData, p_from, p_to) -> float:
    """Time for the drift to carry the azimuth of ``p_from`` onto that of ``p_to``.

    Under the drift the azimuth decreases at rate ``a``. Returns a value in
    ``[0, 2 pi / a)``; points on the axis give 0.
    """
    gap = (_azimuth(p_from) - _azimuth(p_to)) % TWO_PI
    if gap >= TWO_PI - 1e-15:
        gap = 0.0
    return gap / nf.a


class _Builder:
    def __init__(self, nf: NormalFormData, s0: np.ndarray):
        self.nf = nf
        self.point = s0
        self.segments: list[ControlSegment] = []
        self.points = [s0]

    def add(self, u: float, duration: float) -> None:
        if duration <= 0.0:
            return
        nxt = solve_constant_control(self.nf, self.point, u, duration)
        if np.linalg.norm(nxt - self.point) <= _NEGLIGIBLE_MOVE:
            return
        self.segments.append(ControlSegment(float(u), float(duration)))
        self.points.append(nxt)
        self.point = nxt

    def drift_to(self, target) -> None:
        self.add(0.0, drift_time(self.nf, self.point, target))


def _hemisphere(z: float) -> int:
    return 1 if z > 0 else -1


def plan_normal_form(nf: NormalFormData, s0, s1, tol: float = TOL) -> SteeringPlan:
    """Steer ``s0`` to ``s1``; both given in the working frame of ``nf``.

    Needs ``alpha > tol`` and ``|b3| > tol``. The returned plan's waypoints
    are in the working frame.
    """
    s0 = np.asarray(s0, dtype=float)
    s1 = np.asarray(s1, dtype=float)
    z0, z1 = float(s0[2]), float(s1[2])
    if abs(z0) <= _EQUATOR_SNAP:
        z0 = 0.0
    if abs(z1) <= _EQUATOR_SNAP:
        z1 = 0.0
    maneuvers: dict[int, PoleManeuver] = {}

    def maneuver(sign: int) -> PoleManeuver:
        if sign not in maneuvers:
            maneuvers[sign] = pole_maneuver(nf, sign, tol)
        return maneuvers[sign]

    b = _Builder(nf, s0)

    # leg A: leave the start height along the circle through the pole of its hemisphere
    if z0 != 0.0:
        m0 = maneuver(_hemisphere(z0))
        # of the two crossings of height z0, the later one has the shorter ride to the anchor
        ride = crossing_time(m0, s0, tol)
        q0 = rotation_exp(generator(nf, m0.u_star), -ride) @ m0.anchor
        b.drift_to(q0)
        b.add(m0.u_star, ride)

    # leg B: along the equator
    if z1 == 0.0:
        b.drift_to(s1)
    else:
        m1 = maneuver(_hemisphere(z1))
        b.drift_to(m1.anchor)
        # leg C: climb to the target height, then drift onto the target
        b.add(m1.u_star, crossing_time(m1, s1, tol))
        b.drift_to(s1)

    return SteeringPlan(segments=b.segments, waypoints=b.points, frame=nf, target=s1)


def _as_skew(M) -> SkewMatrix3:
    return M if isinstance(M, SkewMatrix3) else skew_extract(M)


def playback(A, B, start, segments) -> list[np.ndarray]:
    """States reached after each segment, computed in the original frame."""
    SA, SB = _as_skew(A), _as_skew(B)
    p = np.asarray(start, dtype=float)
    out = [p]
    for seg in segments:
        p = rotation_exp(SA + SB.scaled(seg.u), seg.duration) @ p
        out.append(p)
    return out


def validate_plan(plan: SteeringPlan, A, B, tol: float = PLAN_TOL) -> float:
    """Largest distance between replayed states and the stored waypoints."""
    replay = playback(A, B, plan.waypoints[0], plan.segments)
    return max(float(np.linalg.norm(r - w)) for r, w in zip(replay, plan.waypoints))


def plan(A, B, start, target, tol: float = TOL, plan_tol: float = PLAN_TOL) -> SteeringPlan:
    """Steering plan for ``s' = A s + u B s`` from ``start`` to ``target``.

    Raises :class:`~bilinsphere.errors.BracketVanishes` when ``[A, B]`` is
    zero and :class:`~bilinsphere.errors.ZeroMatrix` when ``A`` is.
    """
    SA, SB = _as_skew(A), _as_skew(B)
    start = as_unit(start)
    target = as_unit(target)
    nf = ensure_b3_nonzero(reduce_system(SA, SB, tol), tol)
    if np.linalg.norm(start - target) <= _NEGLIGIBLE_MOVE:
        return SteeringPlan(segments=[], waypoints=[start], frame=nf, target=target)

    R = nf.frame
    local = plan_normal_form(nf, R.T @ start, R.T @ target, tol)
    waypoints = [start] + [R @ w for w in local.waypoints[1:]]
    result = SteeringPlan(segments=local.segments, waypoints=waypoints, frame=nf, target=target)

    replay = playback(SA, SB, start, result.segments)
    err = max(float(np.linalg.norm(r - w)) for r, w in zip(replay, waypoints))
    miss = float(np.linalg.norm(replay[-1] - target))
    if err > plan_tol or miss > plan_tol:
        raise InternalValidation(
            f"plan playback deviates by {err:.3g} (target miss {miss:.3g}) > {plan_tol:g}"
        )
    return result
