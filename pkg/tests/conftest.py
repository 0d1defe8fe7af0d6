import pytest

from pdmqi.analytic import make_bound_state
from pdmqi.info import build_report
from pdmqi.model import ModelParams

LEVELS = (0, 1, 2)
WIDTHS = (2.0, 4.0, 6.0)


def preset(a: float = 1.0, v1: float = 1.0, v2: float = 1.0) -> ModelParams:
    """Unit-kappa configuration (the table preset) at width a."""
    return ModelParams.with_unit_kappa(a, v1, v2)


@pytest.fixture(scope="session")
def preset_states():
    """BoundState for every (n, a) cell of the reference tables."""
    return {(n, a): make_bound_state(preset(a), n)
            for n in LEVELS for a in WIDTHS}


@pytest.fixture(scope="session")
def preset_reports(preset_states):
    """InfoReport for every (n, a) cell, computed once per session."""
    return {key: build_report(state) for key, state in preset_states.items()}
