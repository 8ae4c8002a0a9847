import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hypapprox import build_approximation
from hypapprox.fixtures import default_corpus


@pytest.fixture(scope="session")
def corpus():
    return default_corpus()


@pytest.fixture(scope="session")
def corpus_graphs(corpus):
    """Approximation graphs of every corpus space at the default r."""
    return {name: build_approximation(sp, 1 / 6) for name, sp in corpus.items()}
