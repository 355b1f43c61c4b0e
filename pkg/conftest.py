import pytest

from config import reload_settings
from constructions import bacon_shor, small_inner_codes, surface_code

ENV_VARS = (
    "LOCALITY_MAX_QUBITS",
    "LOCALITY_TILING_ATTEMPTS",
    "LOCALITY_SWEEP_MAX_STEPS",
    "LOCALITY_LOG_LEVEL",
)


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    reload_settings()
    yield
    monkeypatch.undo()
    reload_settings()


@pytest.fixture(scope="session")
def bs2():
    return bacon_shor(2)


@pytest.fixture(scope="session")
def bs3():
    return bacon_shor(3)


@pytest.fixture(scope="session")
def surface3():
    return surface_code(3)


@pytest.fixture(scope="session")
def five_qubit():
    return small_inner_codes("five_one_three")


@pytest.fixture(scope="session")
def steane():
    return small_inner_codes("steane")


@pytest.fixture(scope="session")
def small_codes(bs2, bs3, surface3, five_qubit, steane):
    return {
        "bs2": bs2,
        "bs3": bs3,
        "surface2": surface_code(2),
        "surface3": surface3,
        "five_one_three": five_qubit,
        "steane": steane,
        "repetition3": small_inner_codes("repetition(3)"),
    }
