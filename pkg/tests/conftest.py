from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for tests.helpers as "helpers"

from crowdsent.lexicons import load_default_bundle
from crowdsent.normalize import (
    NormalizationConfig,
    load_acronyms,
    load_known_words,
    load_lemma_exceptions,
)
from crowdsent.lexicons import data_path

FIXTURES = Path(__file__).parent / "fixtures"
E2E = FIXTURES / "e2e"


@pytest.fixture(scope="session")
def bundle():
    return load_default_bundle()


@pytest.fixture(scope="session")
def norm_config():
    return NormalizationConfig(
        acronyms=load_acronyms(data_path("acronyms.tsv")),
        known_words=load_known_words(data_path("known_words.txt")),
        lemma_exceptions=load_lemma_exceptions(data_path("lemma_exceptions.tsv")),
    )


@pytest.fixture(scope="session")
def e2e_dir():
    return E2E
