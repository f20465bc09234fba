import pytest

from oretk.fixtures import atom_variant, example_graph, gen_jstor
from oretk.service import Service, ServiceStore


@pytest.fixture
def fig2():
    """The minimal worked example: three resources, map metadata."""
    return example_graph()


JSTOR_BASE = "http://archive.example/jstor"
JSTOR_PARAMS = dict(journals=2, issues_per=2, articles_per=3, pages_per=4,
                    citation_density=0.1, seed=7)


@pytest.fixture(scope="session")
def jstor_corpus():
    return gen_jstor(JSTOR_BASE, **JSTOR_PARAMS)


@pytest.fixture(scope="session")
def jstor_service(jstor_corpus):
    graphs, _manifest = jstor_corpus
    store = ServiceStore()
    for g in graphs:
        store.publish([g, atom_variant(g)])
    return Service(store, "http://archive.example")
