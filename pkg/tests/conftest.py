import os
from pathlib import Path

import numpy as np
import pytest

from chordnet.annotations import load_corpus
from chordnet.config import demo_config

GOLDEN_DIR = Path(__file__).parent / "golden"
ACCEPTANCE_RESULTS: list[tuple[str, str, str]] = []


def pytest_addoption(parser):
    parser.addoption("--update-golden", action="store_true", help="rewrite tests/golden from the current code")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, status, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{criterion:<6} {status:<5} {detail}")


@pytest.fixture(scope="session")
def demo_cfg():
    return demo_config()


@pytest.fixture(scope="session")
def mini(demo_cfg):
    corpus, report = load_corpus(demo_cfg.input, demo_cfg.columns, demo_cfg.periods)
    return corpus


@pytest.fixture(scope="session")
def mini_report(demo_cfg):
    return load_corpus(demo_cfg.input, demo_cfg.columns, demo_cfg.periods)[1]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def write_tsv(path: Path, header: list[str], rows: list[list[str]]) -> Path:
    lines = ["\t".join(header)] + ["\t".join(r) for r in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def tsv_writer(tmp_path):
    def _write(header, rows, name="annotations.tsv"):
        return write_tsv(tmp_path / name, header, rows)

    return _write


def abc_corpus_path():
    path = os.environ.get("CHORDNET_ABC_CORPUS")
    return Path(path) if path and Path(path).exists() else None
