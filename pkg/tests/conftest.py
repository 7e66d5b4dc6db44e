import pytest
from hypothesis import settings

from nswave.euler_waves import WaveConfig
from nswave.profiles import ApproxRarefaction, WeightFunction, solve_shock_profile

settings.register_profile("nswave", deadline=None, max_examples=60)
settings.load_profile("nswave")


@pytest.fixture(scope="session")
def cfg():
    return WaveConfig.from_states(5.0 / 3.0, 1.0, 0.0, 0.9, 0.8)


@pytest.fixture(scope="session")
def gas(cfg):
    return cfg.gas


@pytest.fixture(scope="session")
def profile(cfg):
    return solve_shock_profile(cfg)


@pytest.fixture(scope="session")
def rare(cfg):
    return ApproxRarefaction.from_config(cfg)


@pytest.fixture(scope="session")
def weight(profile):
    return WeightFunction.default(profile)


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def report(request):
    """Record one ``criterion N: PASS|FAIL`` line for the terminal summary."""
    def _report(criterion, name, passed, measured, bound, elapsed=None):
        line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'} {name} measured={measured:.6g} bound={bound:.6g}"
        if elapsed is not None:
            line += f" runtime={elapsed:.2f}s"
        request.config.acceptance_lines.append(line)
        print(line)
        return passed
    return _report
