"""Lie algebra rank condition (LARC) checks on the sphere.

Two routes are offered. For general matrices the rank of the bracket
closure is sampled over a deterministic point set; this can refute the
condition but never prove it. For skew pairs the condition holds exactly
when ``[A, B] != 0``, which is decided algebraically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ZeroMatrix
from .induced_fields import SystemPair, bracket_closure, induced_field, matrix_bracket
from .linalg3 import SCALE_TOL, SkewMatrix3, max_abs, rank_at_most_2, rank_at_most_2_batch, skew_extract

DEFAULT_DEPTH = 3
DEFAULT_SAMPLES = 2000

_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
# generic weight for the combination A + c B whose eigenvectors are probed
_MIX = math.sqrt(2.0) - 1.0 / math.pi


class Verdict(str, enum.Enum):
    SATISFIED_SAMPLED = "SATISFIED_SAMPLED"
    SATISFIED_ALGEBRAIC = "SATISFIED_ALGEBRAIC"
    FAILED = "FAILED"

    @property
    def satisfied(self) -> bool:
        return self is not Verdict.FAILED


@dataclass
class LarcReport:
    sample_count: int
    min_rank: int
    verdict: Verdict
    depth: int
    deficient_points: list[tuple[np.ndarray, int]] = field(default_factory=list)

    @property
    def satisfied(self) -> bool:
        return self.verdict.satisfied

    def to_dict(self) -> dict:
        return {
            "sample_count": self.sample_count,
            "min_rank": self.min_rank,
            "verdict": self.verdict.value,
            "depth": self.depth,
            "deficient_points": [
                {"point": p.tolist(), "rank": int(r)} for p, r in self.deficient_points
            ],
        }


def fibonacci_sphere(n: int) -> np.ndarray:
    """Deterministic near-uniform lattice of ``n`` points on the sphere."""
    i = np.arange(n, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = i * _GOLDEN_ANGLE
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


AXIS_POLES = np.array(
    [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], dtype=float
)


def _real_eigen_directions(M: np.ndarray) -> list[np.ndarray]:
    w, V = np.linalg.eig(M)
    out = []
    for k in range(3):
        if abs(w[k].imag) <= 1e-12 * max(1.0, abs(w[k])):
            v = np.real(V[:, k])
            n = np.linalg.norm(v)
            if n > 0:
                out.append(v / n)
                out.append(-v / n)
    return out


def sample_points(sys: SystemPair, n_samples: int) -> np.ndarray:
    """Fibonacci lattice, then the six axis poles, then real eigen-directions.

    Induced fields vanish exactly along eigenvectors, so the eigen-directions
    of ``A``, ``B`` and a generic combination are where rank deficiencies
    concentrate; they are appended so commuting pairs always yield a witness.
    """
    extra = []
    for M in (sys.A, sys.B, sys.A + _MIX * sys.B):
        extra.extend(_real_eigen_directions(M))
    parts = [fibonacci_sphere(n_samples), AXIS_POLES]
    if extra:
        parts.append(np.array(extra))
    return np.vstack(parts)


def larc_at_point(sys: SystemPair, s, depth: int = DEFAULT_DEPTH, tol: float = SCALE_TOL) -> int:
    s = np.asarray(s, dtype=float)
    mats = bracket_closure(sys.A, sys.B, depth)
    return rank_at_most_2([induced_field(M, s) for M in mats], tol)


def larc_global(
    sys: SystemPair,
    n_samples: int = DEFAULT_SAMPLES,
    depth: int = DEFAULT_DEPTH,
    tol: float = SCALE_TOL,
) -> LarcReport:
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    pts = sample_points(sys, n_samples)
    mats = bracket_closure(sys.A, sys.B, depth)
    fields = np.stack([induced_field(M, pts) for M in mats], axis=1)
    ranks = rank_at_most_2_batch(fields, tol)
    bad = np.flatnonzero(ranks < 2)
    deficient = [(pts[k].copy(), int(ranks[k])) for k in bad]
    return LarcReport(
        sample_count=len(pts),
        min_rank=int(ranks.min()),
        verdict=Verdict.FAILED if deficient else Verdict.SATISFIED_SAMPLED,
        depth=depth,
        deficient_points=deficient,
    )


def larc_skew(A, B, tol: float = SCALE_TOL) -> bool:
    """Exact criterion for skew pairs: LARC holds iff ``[A, B] != 0``."""
    SA = A if isinstance(A, SkewMatrix3) else skew_extract(A)
    SB = B if isinstance(B, SkewMatrix3) else skew_extract(B)
    if SA.norm() <= tol:
        raise ZeroMatrix("drift matrix is zero")
    return max_abs(matrix_bracket(SA.matrix, SB.matrix)) > tol


def check_larc(
    sys: SystemPair,
    n_samples: int = DEFAULT_SAMPLES,
    depth: int = DEFAULT_DEPTH,
    tol: float = SCALE_TOL,
) -> LarcReport:
    """Pick the strongest available test for ``sys``.

    Skew pairs with nonzero drift are settled algebraically; when the
    algebraic test fails the sampled check is run to supply witnesses.
    """
    if sys.skew:
        try:
            ok = larc_skew(sys.A, sys.B, tol)
        except ZeroMatrix:
            ok = None
        if ok:
            return LarcReport(sample_count=0, min_rank=2,
                              verdict=Verdict.SATISFIED_ALGEBRAIC, depth=depth)
    return larc_global(sys, n_samples, depth, tol)
