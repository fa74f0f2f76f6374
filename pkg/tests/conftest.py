import os
import sys

# Allow running the suite from a source checkout without installation;
# the compiled kernel is picked up when built in place, otherwise the
# pure-Python fallback kicks in.
_SRC = os.path.join(os.path.dirname(__file__), os.pardir, "src")
if os.path.isdir(_SRC):
    sys.path.insert(0, os.path.abspath(_SRC))

import pytest  # noqa: E402

try:
    from hypothesis import HealthCheck, settings

    settings.register_profile(
        "ci",
        deadline=None,
        max_examples=60,
        derandomize=True,
        suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow],
    )
    settings.load_profile("ci")
except ImportError:
    pass


@pytest.fixture(scope="session")
def paper_params():
    """The reference parameter pair used across all figure runs."""
    return 1.5, 0.018
