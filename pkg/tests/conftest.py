import numpy as np
import pytest

from statfrob.model import BUILTIN_MODELS, ExponentialFamilyModel, builtin_model


@pytest.fixture
def bernoulli():
    return builtin_model("bernoulli")


@pytest.fixture
def trinomial():
    return builtin_model("trinomial")


@pytest.fixture
def independence():
    return builtin_model("independence-2x2")


@pytest.fixture
def random6():
    return builtin_model("random-n3m6-seed0")


@pytest.fixture(params=BUILTIN_MODELS)
def any_model(request):
    return builtin_model(request.param)


def weighted_bernoulli():
    return ExponentialFamilyModel.from_matrix([[0, 1]], base_measure=[1.0, 2.0], name="weighted")


def seeded_points(model, count=20, seed=0):
    return np.random.default_rng(seed).uniform(-2, 2, size=(count, model.n))


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record and print one pass/fail line for an acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
