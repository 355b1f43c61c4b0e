import logging

import pytest

from config import LOG_FORMAT, configure_logging, get_settings, reload_settings


def test_defaults():
    settings = get_settings()
    assert settings.max_qubits == 4096
    assert settings.tiling_attempts == 10000
    assert settings.sweep_max_steps == 1_000_000
    assert settings.log_level == "INFO"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("LOCALITY_MAX_QUBITS", "64")
    monkeypatch.setenv("LOCALITY_LOG_LEVEL", "debug")
    settings = reload_settings()
    assert settings.max_qubits == 64
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize(
    "name, value",
    [("LOCALITY_MAX_QUBITS", "0"), ("LOCALITY_TILING_ATTEMPTS", "many"), ("LOCALITY_LOG_LEVEL", "LOUD")],
)
def test_invalid_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValueError):
        reload_settings()


def test_configure_logging():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    try:
        configure_logging("warning")
        assert root.level == logging.WARNING
        assert root.handlers[0].formatter._fmt == LOG_FORMAT
    finally:
        root.handlers[:] = handlers
        root.setLevel(level)
