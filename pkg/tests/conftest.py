"""Shared fixtures for the QGT lab tests."""

from __future__ import annotations

import logging
import os

import numpy as np
import pytest
import structlog

from src.core.bitmatrix import BitMatrix
from src.core.model import Instance, ItemSet, generate_instance, outcome


@pytest.fixture(autouse=True, scope="session")
def quiet_logging() -> None:
    structlog.configure(
        processors=[structlog.processors.add_log_level, structlog.dev.ConsoleRenderer()],
        wrapper_class=structlog.make_filtering_bound_logger(logging.WARNING),
        cache_logger_on_first_use=False,
    )


@pytest.fixture(autouse=True)
def restore_logging_config():
    """Undo configure_logging() calls (e.g. from CLI tests) that bind a captured stderr."""
    saved = structlog.get_config()
    yield
    structlog.configure(**saved)


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch: pytest.MonkeyPatch, tmp_path) -> None:
    """Keep QGT_* variables, .env and config/lab.yaml of the checkout out of the tests."""
    for key in list(os.environ):
        if key.startswith("QGT_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def three_items() -> tuple[BitMatrix, np.ndarray]:
    """A = [[1,0,1],[0,1,1]] with D = {0}, so y = (1, 0)."""
    A = BitMatrix.from_dense([[1, 0, 1], [0, 1, 1]])
    return A, outcome(A, ItemSet((0,)))


@pytest.fixture
def desk_instance() -> Instance:
    return generate_instance(n=64, k=8, m=32, seed=7)


@pytest.fixture
def generous_instance() -> Instance:
    """m well above the m-Thresholding threshold for n=256, k=8."""
    return generate_instance(n=256, k=8, m=200, seed=11)
