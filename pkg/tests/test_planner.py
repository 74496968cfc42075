import math

import numpy as np
import pytest
from hypothesis import given, settings

from bilinsphere.errors import BracketVanishes, NotOnSphere, NotSkew, ZeroMatrix
from bilinsphere.linalg3 import SkewMatrix3
from bilinsphere.normal_form import ensure_b3_nonzero, reduce_system
from bilinsphere.planner import (
    ControlSegment,
    SteeringPlan,
    drift_time,
    plan,
    plan_normal_form,
    playback,
    validate_plan,
)

from conftest import random_skew, random_unit, skew_matrix, unit_vec

E3 = np.array([0.0, 0.0, 1.0])


def assert_sound(p, A, B, target):
    assert len(p.segments) <= 5
    assert all(seg.duration >= 0.0 for seg in p.segments)
    assert validate_plan(p, A, B) <= 1e-9
    end = playback(A, B, p.start, p.segments)[-1]
    assert np.linalg.norm(end - target) <= 1e-9


def test_pole_to_pole_tilted_pair(tilted_pair):
    A, B = tilted_pair
    p = plan(A, B, E3, -E3)
    assert_sound(p, A, B, -E3)
    u, half = 1.0 / math.sqrt(2.0), math.pi / math.sqrt(2.0)
    got = [(s.u, s.duration) for s in p.segments]
    assert len(got) == 3
    assert got[0] == pytest.approx((u, half))
    assert got[1] == pytest.approx((0.0, math.pi))
    assert got[2] == pytest.approx((u, half))


def test_same_point_gives_empty_plan(tilted_pair):
    A, B = tilted_pair
    p = plan(A, B, E3, E3)
    assert p.segments == [] and p.total_time == 0.0
    assert validate_plan(p, A, B) == 0.0


def test_random_pairs(rng):
    for _ in range(200):
        SA, SB = random_skew(rng), random_skew(rng)
        s0, s1 = random_unit(rng), random_unit(rng)
        p = plan(SA.matrix, SB.matrix, s0, s1)
        assert_sound(p, SA.matrix, SB.matrix, s1)
        assert p.total_time == pytest.approx(sum(s.duration for s in p.segments))


@settings(max_examples=150, deadline=None)
@given(unit_vec, unit_vec)
def test_plan_property(s0, s1):
    A = skew_matrix(0.3, -1.2, 0.5)
    B = skew_matrix(1.0, 0.4, -0.7)
    assert_sound(plan(A, B, s0, s1), A, B, s1)


def test_equator_and_pole_endpoints(rotation_pair):
    A, B = rotation_pair
    nf = ensure_b3_nonzero(reduce_system(A, B))
    F = nf.frame
    pts = [F @ v for v in ([0, 0, 1], [0, 0, -1], [1, 0, 0], [0, -1, 0],
                           [0.6, 0.0, 0.8], [0.0, 0.6, -0.8])]
    for s0 in pts:
        for s1 in pts:
            assert_sound(plan(A, B, s0, s1), A, B, s1)


def test_pole_start_skips_first_drift(tilted_pair):
    A, B = tilted_pair
    p = plan(A, B, E3, np.array([0.0, 0.6, 0.8]))
    # a drift from the pole is a no-op and must not appear first
    assert p.segments[0].u != 0.0


def test_near_pole_and_near_equator(tilted_pair):
    A, B = tilted_pair
    for eps in (1e-15, 1e-12, 1e-8, 1e-4):
        for s0 in ([math.sqrt(1 - eps * eps), 0.0, eps], [eps, 0.0, math.sqrt(1 - eps * eps)]):
            s1 = np.array([0.0, -math.sqrt(1 - eps), -math.sqrt(eps)])
            assert_sound(plan(A, B, s0, s1), A, B, s1)


def test_large_drift_scale(rng):
    for scale in (1e-2, 1e2):
        SA = random_skew(rng, scale)
        SB = random_skew(rng)
        s0, s1 = random_unit(rng), random_unit(rng)
        assert_sound(plan(SA.matrix, SB.matrix, s0, s1), SA.matrix, SB.matrix, s1)


def test_plan_accepts_skew_objects(rng):
    SA, SB = random_skew(rng), random_skew(rng)
    s0, s1 = random_unit(rng), random_unit(rng)
    assert_sound(plan(SA, SB, s0, s1), SA, SB, s1)


def test_frame_invariance(rng):
    # conjugating the system by R and moving the endpoints by R gives the same controls
    SA, SB = random_skew(rng), random_skew(rng)
    s0, s1 = random_unit(rng), random_unit(rng)
    R, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    if np.linalg.det(R) < 0:
        R[:, 0] *= -1
    A2, B2 = R @ SA.matrix @ R.T, R @ SB.matrix @ R.T
    p1 = plan(SA.matrix, SB.matrix, s0, s1)
    p2 = plan(A2, B2, R @ s0, R @ s1)
    assert_sound(p2, A2, B2, R @ s1)
    # different frames may take different but equally valid routes; replay p1 in the new frame
    end = playback(A2, B2, R @ s0, p1.segments)[-1]
    np.testing.assert_allclose(end, R @ s1, atol=1e-9)


def test_perturbed_plan_is_detected(tilted_pair):
    A, B = tilted_pair
    p = plan(A, B, E3, np.array([0.6, 0.0, -0.8]))
    segs = list(p.segments)
    segs[0] = ControlSegment(segs[0].u, segs[0].duration + 0.1)
    bad = SteeringPlan(segments=segs, waypoints=p.waypoints, frame=p.frame, target=p.target)
    assert validate_plan(bad, A, B) > 1e-3


def test_errors(rotation_pair):
    A, B = rotation_pair
    with pytest.raises(BracketVanishes):
        plan(A, 2 * A, E3, -E3)
    with pytest.raises(ZeroMatrix):
        plan(np.zeros((3, 3)), B, E3, -E3)
    with pytest.raises(NotSkew):
        plan(np.eye(3), B, E3, -E3)
    with pytest.raises(NotOnSphere):
        plan(A, B, [0.0, 0.0, 2.0], -E3)


def test_negative_duration_rejected():
    with pytest.raises(ValueError):
        ControlSegment(1.0, -0.5)


def test_drift_time():
    nf = reduce_system(SkewMatrix3(2.0, 0, 0), SkewMatrix3(0, 0, 1.0))
    # azimuth decreases at rate a = 2
    assert drift_time(nf, [1, 0, 0], [0, -1, 0]) == pytest.approx(math.pi / 4)
    assert drift_time(nf, [1, 0, 0], [0, 1, 0]) == pytest.approx(3 * math.pi / 4)
    assert drift_time(nf, [1, 0, 0], [1, 0, 0]) == 0.0
    assert drift_time(nf, [0, 0, 1], [1, 0, 0]) >= 0.0


def test_plan_normal_form_waypoints_in_working_frame():
    nf = ensure_b3_nonzero(reduce_system(SkewMatrix3(1, 0, 0), SkewMatrix3(0, 1, 1)))
    p = plan_normal_form(nf, E3, np.array([1.0, 0.0, 0.0]))
    np.testing.assert_allclose(p.waypoints[-1], [1, 0, 0], atol=1e-12)


def test_plan_dict_round_trip(tilted_pair):
    A, B = tilted_pair
    p = plan(A, B, E3, np.array([0.0, 0.6, -0.8]))
    q = SteeringPlan.from_dict(p.to_dict())
    assert q.segments == p.segments
    assert q.total_time == p.total_time
    np.testing.assert_array_equal(q.target, p.target)
    assert validate_plan(q, A, B) <= 1e-9
    d = p.to_dict()
    d["waypoints"].pop()
    with pytest.raises(ValueError):
        SteeringPlan.from_dict(d)
