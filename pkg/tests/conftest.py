from __future__ import annotations

import numpy as np
import pytest

import minksurf as mk


@pytest.fixture(scope="session")
def eu():
    return mk.euclidean_norm()


@pytest.fixture(scope="session")
def lp4():
    return mk.lp_norm(4.0)


@pytest.fixture(scope="session")
def ell_norm():
    A = np.array([[2.0, 0.3, 0.0], [0.3, 1.5, 0.2], [0.0, 0.2, 1.0]])
    return mk.ellipsoid_norm(A)


@pytest.fixture(scope="session")
def ellipsoid_std():
    return mk.ellipsoid(1.0, 1.3, 0.8)


@pytest.fixture(scope="session")
def sphere2():
    return mk.euclidean_sphere(2.0)


@pytest.fixture(scope="session")
def torus_fat():
    # r > R/2, so the mean-curvature zero locus is nonempty
    return mk.torus(2.0, 1.2)


@pytest.fixture(scope="session")
def catenoid_std():
    return mk.catenoid(1.0)
