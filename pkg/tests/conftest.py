from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from asmsynth import (
    Catalog,
    TaxonomyContext,
    load_workspace,
    toyarm_dir,
)

ACCEPTANCE_RESULTS: list[tuple[int, str, bool]] = []


def record_acceptance(number: int, name: str, ok: bool) -> None:
    ACCEPTANCE_RESULTS.append((number, name, ok))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number} ({name}): {verdict}")


@pytest.fixture(scope="session")
def toy_workspace() -> tuple[TaxonomyContext, Catalog]:
    return load_workspace(Path(str(toyarm_dir())))


@pytest.fixture(scope="session")
def toy_ctx(toy_workspace) -> TaxonomyContext:
    return toy_workspace[0]


@pytest.fixture(scope="session")
def toy_catalog(toy_workspace) -> Catalog:
    return toy_workspace[1]
