import numpy as np
import pytest


@pytest.fixture
def k3_flows() -> np.ndarray:
    """Complete 3-node digraph with unit weights."""
    values = np.ones((3, 3))
    np.fill_diagonal(values, 0.0)
    return values


@pytest.fixture
def two_cycle() -> np.ndarray:
    return np.array([[0.0, 1.0], [1.0, 0.0]])


@pytest.fixture
def diamond_flows() -> np.ndarray:
    """0 feeds 1 and 2, both feed 3; equal weights, plus a return edge 3->0
    so every node has an outgoing flow."""
    v = np.zeros((4, 4))
    v[0, 1] = v[0, 2] = v[1, 3] = v[2, 3] = v[3, 0] = 1.0
    return v


@pytest.fixture
def write_file(tmp_path):
    def _write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
