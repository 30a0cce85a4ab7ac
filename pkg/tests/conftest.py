import numpy as np
import pytest

from corings.extensions import Extension
from corings.rings import RingHom, make_quotient_ring, zmod_ring


def simple_extension(base, top):
    """Extension with eta = unit embedding and the native basis of the top."""
    eta = RingHom(base, top, np.outer(top.one, base.one) % top.n)
    basis = np.eye(top.rank, dtype=np.int64)
    return Extension(base, top, eta, basis)


@pytest.fixture(scope="session")
def f2():
    return zmod_ring(2)


@pytest.fixture(scope="session")
def f4():
    return make_quotient_ring(2, [1, 1, 1])


@pytest.fixture(scope="session")
def f4_over_f2(f2, f4):
    return simple_extension(f2, f4)


@pytest.fixture(scope="session")
def f2x2_over_f2(f2):
    top = make_quotient_ring(2, [0, 1, 1])  # x^2 + x: F2 x F2 with idempotent x
    return simple_extension(f2, top)


@pytest.fixture(scope="session")
def gr42_over_z4():
    z4 = zmod_ring(4)
    gr = make_quotient_ring(4, [1, 1, 1])  # Galois ring GR(4, 2)
    return simple_extension(z4, gr)


@pytest.fixture(scope="session")
def z2sq_over_f2(f2):
    top = make_quotient_ring(2, [0, 0, 1])  # F2[x]/(x^2), split via x -> 0
    return simple_extension(f2, top)
