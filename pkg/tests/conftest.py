import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rmcorr.corpus import BUNDLED, load_corpus
from rmcorr.frames import enumerate_frames
from rmcorr.pipeline import correspondent
from rmcorr.syntax import parse


@pytest.fixture(scope="session")
def small_frames():
    """All valid frames with one or two worlds."""
    return list(enumerate_frames(1)) + list(enumerate_frames(2))


@pytest.fixture(scope="session")
def corpus_entries():
    return load_corpus(BUNDLED)


@pytest.fixture(scope="session")
def corpus_runs(corpus_entries):
    """Pipeline results for every bundled axiom, computed once per session."""
    return {entry.name: (parse(entry.formula), correspondent(parse(entry.formula)))
            for entry in corpus_entries}
