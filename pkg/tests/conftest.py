import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def words_10k():
    from fuzzyfind.lexicon import read_word_list

    return read_word_list(DATA / "words_10k.txt")


@pytest.fixture(scope="session")
def words_100k():
    from fuzzyfind.lexicon import read_word_list

    return read_word_list(DATA / "words_100k.txt")


@pytest.fixture(scope="session")
def store_10k(words_10k):
    from fuzzyfind.lexicon import index_words

    return index_words(words_10k)


@pytest.fixture(scope="session")
def built_table(tmp_path_factory):
    """One full single-threaded build shared by every table-mode test."""
    from fuzzyfind import ffd

    path = tmp_path_factory.mktemp("table") / "ffd.bin"
    report = ffd.build_table(path, threads=1)
    return path, report


@pytest.fixture(scope="session")
def table(built_table):
    from fuzzyfind import ffd

    t = ffd.FfdTable(built_table[0])
    yield t
    t.close()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
