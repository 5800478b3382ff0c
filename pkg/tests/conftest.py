import pathlib

import pytest

from pretence import parse_kb, parse_scenario

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def load_corpus(name):
    kb_text = (CORPUS / f"{name}.kb").read_text()
    scn_text = (CORPUS / f"{name}.scn").read_text()
    kb, diags = parse_kb(kb_text, f"{name}.kb")
    assert kb is not None, [str(d) for d in diags]
    scn, diags = parse_scenario(scn_text, kb, f"{name}.scn")
    assert scn is not None, [str(d) for d in diags]
    return kb, scn


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS


@pytest.fixture(scope="session")
def example1():
    return load_corpus("example1")


@pytest.fixture(scope="session")
def example2():
    return load_corpus("example2")


@pytest.fixture(scope="session")
def example3():
    return load_corpus("example3")
