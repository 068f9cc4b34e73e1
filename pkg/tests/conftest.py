import numpy as np
import pytest

from wiretap.instances import reference_problem


@pytest.fixture(scope="session")
def ref_j1():
    return reference_problem(1)


@pytest.fixture(scope="session")
def ref_j2():
    return reference_problem(2)


@pytest.fixture(scope="session")
def ref_j3():
    return reference_problem(3)


def random_psd(rng, n, scale=1.0, ridge=0.0):
    b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = b @ b.conj().T * (scale / n)
    m = m + ridge * scale * np.eye(n)
    return (m + m.conj().T) / 2.0
