import numpy as np
import pytest

from robustht.config import CORPUS_SIZE
from robustht.dist import Dist
from robustht.experiments import dirichlet_corpus, jump_pair


@pytest.fixture
def jump():
    """Factory for the three-symbol jump family pair at ``eps``"""
    return jump_pair


@pytest.fixture
def simple_pair():
    return Dist([0.6, 0.4]), Dist([0.4, 0.6])


@pytest.fixture(scope="session")
def corpus():
    """Seeded Dirichlet corpus of ``(p, q, eps)`` with ``eps <= tv/4``"""
    return dirichlet_corpus(CORPUS_SIZE, seed=20240601)


@pytest.fixture(scope="session")
def small_corpus(corpus):
    return corpus[:200]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
