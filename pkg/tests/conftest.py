from pathlib import Path

import pytest

from kstab import DEFAULT_CORPUS, load_case


def corpus_case(case_id: str):
    return load_case(Path(DEFAULT_CORPUS) / f"{case_id}.toml")


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return Path(DEFAULT_CORPUS)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(n))
