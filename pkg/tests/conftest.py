import pytest
from click.testing import CliRunner

from mixed_moore import create_app
from mixed_moore.constructions import almost_moore_212, h_graph
from mixed_moore.mgf import to_mgf


@pytest.fixture(scope="session")
def app():
    """Session-wide toolkit configured for testing."""
    return create_app(config_name="testing")


@pytest.fixture
def runner(app):
    """A click runner for the CLI commands."""
    return CliRunner(env={"MIXED_MOORE_CONFIG": "testing"})


@pytest.fixture(scope="session")
def h_graphs(app):
    """H1..H7 keyed by index (H4..H7 may carry parallel arcs)."""
    return {i: h_graph(i) for i in range(1, 8)}


@pytest.fixture(scope="session")
def am212(app):
    """The order-10 (2,1,2) almost Moore mixed graph."""
    return almost_moore_212()


@pytest.fixture
def mgf_file(tmp_path):
    """Write a graph (or raw text) to a temporary .mgf file and return its path."""

    def _mgf_file(graph_or_text, name="graph.mgf"):
        path = tmp_path / name
        text = graph_or_text if isinstance(graph_or_text, str) else to_mgf(graph_or_text)
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _mgf_file
