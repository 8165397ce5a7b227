import pytest

from nablavar.expr import lagrangian_from_expression
from nablavar.state import TimeScale
from nablavar.timescale import custom_scale, make_lattice
from nablavar.variational import VariationalProblem, build_problem


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch: pytest.MonkeyPatch) -> None:
    # Keep a developer's .env or shell settings out of the tests.
    for name in ("NABLAVAR_SEED", "NABLAVAR_LOG_LEVEL", "NABLAVAR_TRIALS"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setattr("dotenv.load_dotenv", lambda *args, **kwargs: False)


@pytest.fixture
def integers() -> TimeScale:
    """Z on [0, 4]."""
    return make_lattice("integer_lattice", None, 0.0, 4.0)


@pytest.fixture
def half_lattice() -> TimeScale:
    """0.5 Z on [0, 3]."""
    return make_lattice("h_lattice", {"h": 0.5}, 0.0, 3.0)


@pytest.fixture
def geometric() -> TimeScale:
    """2^N on [1, 64]."""
    return make_lattice("q_lattice", {"q": 2.0}, 1.0, 64.0)


@pytest.fixture
def irregular() -> TimeScale:
    """Custom points without an affine backward jump."""
    return custom_scale([0.0, 0.3, 1.0, 1.2, 2.5, 3.0])


@pytest.fixture
def dirichlet(integers: TimeScale) -> VariationalProblem:
    """Minimize int u1^2 on Z[0,4] with y(0)=0, y(4)=4."""
    return build_problem(integers, 1, lagrangian_from_expression("u1^2", 1), [0.0], [4.0])
