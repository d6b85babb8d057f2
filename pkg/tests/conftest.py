import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

LABELS = ["a", "b", "c", "d", "e", "f"]


@st.composite
def maximal_face_lists(draw, labels=LABELS, max_faces=5):
    faces = draw(
        st.lists(
            st.sets(st.sampled_from(labels), min_size=1, max_size=len(labels)),
            max_size=max_faces,
        )
    )
    return [sorted(f) for f in faces]


@st.composite
def covers(draw, max_samples=8, max_labels=5):
    n_samples = draw(st.integers(1, max_samples))
    n_labels = draw(st.integers(1, max_labels))
    samples = list(range(n_samples))
    sets = {
        f"u{i}": draw(st.sets(st.sampled_from(samples), max_size=n_samples))
        for i in range(n_labels)
    }
    # every sample lands somewhere
    for s in samples:
        if not any(s in v for v in sets.values()):
            sets[draw(st.sampled_from(sorted(sets)))].add(s)
    return sets


@pytest.fixture
def data_dir():
    return Path(__file__).parent.parent / "src" / "modecomplex" / "data"


@pytest.fixture
def golden_dir():
    return Path(__file__).parent / "golden"


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
