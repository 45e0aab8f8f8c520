import numpy as np
import pytest

from aflab.geometry import ball, default_grid, ellipse, random_radial_graph, random_support_body


@pytest.fixture(scope="session")
def grid1():
    return default_grid(1)


@pytest.fixture(scope="session")
def grid2():
    return default_grid(2)


@pytest.fixture(scope="session")
def ellipse21():
    return ellipse(2.0, 1.0)


@pytest.fixture(scope="session")
def offcenter_ball():
    return ball(1.0, [0.3, 0.0, 0.0], dim=2)


@pytest.fixture(scope="session")
def offcenter_circle():
    return ball(1.0, [0.3, 0.0], dim=1)


@pytest.fixture(scope="session")
def convex_bodies():
    rng = np.random.default_rng(2024)
    return [random_support_body(rng, 2) for _ in range(3)] + [random_support_body(rng, 1)
                                                               for _ in range(3)]


@pytest.fixture(scope="session")
def radial_graphs():
    rng = np.random.default_rng(77)
    return [random_radial_graph(rng, 2) for _ in range(2)] + [random_radial_graph(rng, 1)
                                                               for _ in range(2)]
