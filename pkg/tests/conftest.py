import numpy as np
import pytest

from mhtext import synth
from mhtext.config import PreparedDataset, prepare_dataset


@pytest.fixture(scope="session")
def synthetic_csv(tmp_path_factory) -> str:
    path = tmp_path_factory.mktemp("corpus") / "synthetic.csv"
    synth.make_corpus_file(str(path), 260, seed=101)
    return str(path)


@pytest.fixture(scope="session")
def prepared_binary(synthetic_csv) -> PreparedDataset:
    return prepare_dataset(synthetic_csv, scheme_kind="binary", seed=5)


@pytest.fixture(scope="session")
def prepared_multiclass(synthetic_csv) -> PreparedDataset:
    return prepare_dataset(synthetic_csv, scheme_kind="multiclass", seed=5)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        from test_acceptance import CHECKLIST
    except ImportError:
        return
    if CHECKLIST:
        terminalreporter.section("acceptance checklist")
        for line in CHECKLIST:
            terminalreporter.write_line(line)
