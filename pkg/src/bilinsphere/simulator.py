"""Fixed-step RK4 integration of the induced system, used as a numerical oracle.

For skew pairs integrated without renormalization the right-hand side is
linear, ``s' = (A + u B) s``, and one RK4 step is exactly multiplication by

    R(hC) = I + hC + (hC)^2/2 + (hC)^3/6 + (hC)^4/24

so long runs are evaluated as matrix powers of that step map instead of a
Python loop. Everything else steps the general field
``h_A(s) + u h_B(s)`` stage by stage.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NonFiniteState
from .induced_fields import SystemPair, induced_field

DEFAULT_STEP = 1e-3
_SANITY_RADIUS = 10.0


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    controls: np.ndarray
    renormalized: bool

    @property
    def endpoint(self) -> np.ndarray:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.times)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "x", "y", "z", "u"])
        for t, s, u in zip(self.times, self.states, self.controls):
            w.writerow([f"{v:.17g}" for v in (t, s[0], s[1], s[2], u)])
        return buf.getvalue()


def rk4_step_matrix(C: np.ndarray, h: float) -> np.ndarray:
    hC = h * np.asarray(C, dtype=float)
    hC2 = hC @ hC
    return np.eye(3) + hC + hC2 / 2.0 + (hC2 @ hC) / 6.0 + (hC2 @ hC2) / 24.0


def _rk4_general(A, B, u, s, h, renormalize):
    def f(x):
        return induced_field(A, x) + u * induced_field(B, x)

    k1 = f(s)
    k2 = f(s + 0.5 * h * k1)
    k3 = f(s + 0.5 * h * k2)
    k4 = f(s + h * k3)
    out = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if renormalize:
        out = out / np.linalg.norm(out)
    return out


def _split(duration: float, step: float) -> tuple[int, float]:
    n = int(duration // step)
    rest = duration - n * step
    # a rounding sliver after at least one full step is not worth its own step
    if n > 0 and rest <= 1e-12 * step:
        rest = 0.0
    if rest >= step * (1.0 - 1e-12):
        n, rest = n + 1, 0.0
    return n, rest


def integrate(
    sys: SystemPair,
    s0,
    schedule: Sequence,
    step: float = DEFAULT_STEP,
    renormalize: bool | None = None,
    record: bool = True,
    linear_shortcut: bool = True,
) -> Trajectory:
    """Classical RK4 through a piecewise-constant control schedule.

    Each segment (anything with ``u`` and ``duration`` attributes) is covered
    by full steps of size ``step`` plus one final partial step that lands on
    the segment boundary. ``renormalize`` defaults to ``not sys.skew``.
    With ``record=False`` only segment boundaries are kept.
    """
    if not step > 0.0:
        raise ValueError("step must be positive")
    if renormalize is None:
        renormalize = not sys.skew
    s = np.asarray(s0, dtype=float).copy()
    linear = sys.skew and not renormalize and linear_shortcut

    first_u = float(schedule[0].u) if len(schedule) else 0.0
    times, states, controls = [0.0], [s.copy()], [first_u]

    def keep(t_, s_, u_):
        times.append(t_)
        states.append(s_)
        controls.append(u_)

    t = 0.0
    for seg in schedule:
        u, duration = float(seg.u), float(seg.duration)
        if duration <= 0.0:
            continue
        n, rest = _split(duration, step)
        t_start = t
        if linear:
            C = sys.A + u * sys.B
            M = rk4_step_matrix(C, step)
            if record:
                for k in range(n):
                    s = M @ s
                    keep(t_start + (k + 1) * step, s, u)
            else:
                s = np.linalg.matrix_power(M, n) @ s
            if rest > 0.0:
                s = rk4_step_matrix(C, rest) @ s
        else:
            for k in range(n):
                s = _rk4_general(sys.A, sys.B, u, s, step, renormalize)
                if not np.all(np.isfinite(s)) or np.linalg.norm(s) > _SANITY_RADIUS:
                    raise NonFiniteState(f"state left the sanity ball at t = {t_start + k * step}")
                if record:
                    keep(t_start + (k + 1) * step, s, u)
            if rest > 0.0:
                s = _rk4_general(sys.A, sys.B, u, s, rest, renormalize)
        t = t_start + duration
        if record and n > 0 and rest == 0.0:
            # the last full step already sits on the boundary; pin its time exactly
            times[-1] = t
        else:
            keep(t, s, u)
    if not np.all(np.isfinite(s)) or np.linalg.norm(s) > _SANITY_RADIUS:
        raise NonFiniteState("integration produced a non-finite state")

    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        controls=np.array(controls),
        renormalized=bool(renormalize),
    )


def endpoint_error(sys: SystemPair, plan, step: float = DEFAULT_STEP) -> float:
    """Distance between the RK4 endpoint of ``plan`` and its target."""
    if not plan.segments:
        return float(np.linalg.norm(np.asarray(plan.waypoints[0]) - np.asarray(plan.target)))
    traj = integrate(sys, plan.waypoints[0], plan.segments, step, record=False)
    return float(np.linalg.norm(traj.endpoint - np.asarray(plan.target)))
