import math
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from teichpoisson.foliation import MappingClass, MeasuredFoliation, ProjectiveClass
from teichpoisson.teich import TorusPoint

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

points = st.builds(
    TorusPoint,
    st.floats(-5.0, 5.0),
    st.floats(math.log(0.05), math.log(20.0)).map(math.exp),
)
weights = st.floats(-10.0, 10.0).filter(lambda v: abs(v) > 1e-3)
foliations = st.builds(MeasuredFoliation, weights, weights)
slopes = st.builds(ProjectiveClass, st.floats(-50.0, 50.0))
positive = st.floats(1e-3, 1e3)

_GENERATORS = (MappingClass(1, 1, 0, 1), MappingClass(1, 0, 1, 1),
               MappingClass(0, -1, 1, 0), MappingClass(-1, 0, 0, -1))


def _word(letters):
    g = MappingClass.identity()
    for k in letters:
        g = g @ _GENERATORS[k]
    return g


mapping_classes = st.lists(st.integers(0, len(_GENERATORS) - 1), max_size=6).map(_word)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240601)
