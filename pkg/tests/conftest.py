import pathlib

import pytest

from soma_kit import load_episode, load_library

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

SEED_LIBRARY = DATA / "seed_library.json"
POURING_EPISODE = DATA / "pouring_episode.json"
AMBIGUOUS_EPISODE = DATA / "pouring_ambiguous_episode.json"


@pytest.fixture(scope="session")
def seed():
    store, library = load_library(SEED_LIBRARY)
    return store, library


@pytest.fixture(scope="session")
def seed_store(seed):
    return seed[0]


@pytest.fixture(scope="session")
def seed_library(seed):
    return seed[1]


@pytest.fixture(scope="session")
def pouring_episode():
    return load_episode(POURING_EPISODE)


@pytest.fixture(scope="session")
def ambiguous_episode():
    return load_episode(AMBIGUOUS_EPISODE)
