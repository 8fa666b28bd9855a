import pytest

from dativekit import VerbLexicon
from dativekit.synth import (
    dative_fixture_set,
    gave_do_tree,
    gave_po_tree,
    green_melon_tree,
    mixed_fixture_corpus,
)


@pytest.fixture(scope="session")
def gave_do():
    return gave_do_tree()


@pytest.fixture(scope="session")
def gave_po():
    return gave_po_tree()


@pytest.fixture(scope="session")
def melon_tree():
    return green_melon_tree()


@pytest.fixture(scope="session")
def fixtures():
    return dative_fixture_set()


@pytest.fixture(scope="session")
def mixed_corpus():
    return mixed_fixture_corpus()


@pytest.fixture(scope="session")
def lexicon():
    return VerbLexicon.bundled()
