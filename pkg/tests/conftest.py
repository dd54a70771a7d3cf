import pytest

from qtomo import TomographyClient
from qtomo.lib.grid import make_axis
from qtomo.services import states, transforms
from qtomo.services.tomography import uniform_angles

# Small enough to keep the suite quick, fine enough for the Gaussian oracles
EXTENT = 8.0
COUNT = 128
ANGLES = 64


@pytest.fixture(scope="session")
def axis():
    return make_axis(EXTENT, COUNT)


@pytest.fixture(scope="session")
def angles():
    return uniform_angles(ANGLES)


@pytest.fixture(scope="session")
def kernels(axis):
    vacuum = states.pure_kernel(states.fock_state(0, axis))
    one = states.pure_kernel(states.fock_state(1, axis))
    return {
        "fock:0": vacuum,
        "fock:1": one,
        "fock:2": states.pure_kernel(states.fock_state(2, axis)),
        "coherent:1": states.pure_kernel(states.coherent_state(1.0, axis)),
        "mix": states.mix([(0.5, vacuum), (0.5, one)]),
    }


@pytest.fixture(scope="session")
def chars(kernels):
    return {name: transforms.char_from_kernel(kernel) for name, kernel in kernels.items()}


@pytest.fixture()
def setup_client():
    client = TomographyClient(extent=EXTENT, count=COUNT, angles=ANGLES, threads=2)
    return client
