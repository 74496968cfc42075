import numpy as np
import pytest
from hypothesis import strategies as st

from bilinsphere.linalg3 import SkewMatrix3

# lines appended by the acceptance tests, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_unit(rng, n=None):
    shape = (3,) if n is None else (n, 3)
    v = rng.standard_normal(shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def random_skew(rng, scale=1.0):
    return SkewMatrix3(*(scale * rng.standard_normal(3)))


def skew_matrix(p1, p2, p3):
    return SkewMatrix3(p1, p2, p3).matrix


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def rotation_pair():
    # rotation about the third axis against rotation about the first
    return skew_matrix(1.0, 0.0, 0.0), skew_matrix(0.0, 0.0, 1.0)


@pytest.fixture
def tilted_pair():
    A = skew_matrix(1.0, 0.0, 0.0)
    B = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [-1.0, -1.0, 0.0]])
    return A, B


finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
vec3 = st.tuples(finite, finite, finite)
unit_vec = vec3.filter(lambda v: np.linalg.norm(v) > 1e-3).map(
    lambda v: np.asarray(v) / np.linalg.norm(v)
)
