import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from andrewsplot import dataset, pipeline


@pytest.fixture(scope="session")
def registry():
    return pipeline.load_registry()


@pytest.fixture(scope="session")
def iris(registry):
    entry = registry["iris"]
    return dataset.load_csv(entry.path, entry.label_spec)


@pytest.fixture(scope="session")
def breast_cancer(registry):
    entry = registry["breast-cancer"]
    return dataset.load_csv(entry.path, entry.label_spec)


@pytest.fixture(scope="session")
def diabetes(registry):
    entry = registry["diabetes"]
    return dataset.load_csv(entry.path, entry.label_spec)
