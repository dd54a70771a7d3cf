import math

import numpy as np
import pytest

from qtomo.lib.exceptions import AxisMismatchException, InvalidGridException
from qtomo.lib.grid import Axis, SampledField, integrate, make_axis
from qtomo.lib.utils import Utils
from qtomo.services import transforms
from qtomo.services.states import coherent_state, fock_state, pure_kernel
from qtomo.services.transforms import (
    CharFunction,
    char_axes,
    char_from_kernel,
    char_from_wigner,
    frft,
    kernel_from_char,
    rotate_kernel,
    wigner_from_char,
)


def test_char_axes(axis):
    x_axis, y_axis = char_axes(axis, 4)
    assert x_axis.count == 4 * axis.count
    assert x_axis.is_symmetric
    assert y_axis.step == axis.step
    assert y_axis.count % 2 == 0
    assert y_axis.count >= 2 * axis.count
    assert y_axis.count >= 2 * math.pi / axis.step ** 2


def test_char_axes_need_even_symmetric_grid():
    with pytest.raises(InvalidGridException):
        char_axes(make_axis(8.0, 127))
    with pytest.raises(InvalidGridException):
        char_axes(Axis(-7.0, 0.125, 128))
    with pytest.raises(InvalidGridException):
        char_axes(make_axis(8.0, 128), oversampling=1)


def test_vacuum_char_function(chars):
    cf = chars["fock:0"]
    x, y = cf.field.coordinate_grids()
    assert cf.value_at_origin() == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(cf.f - np.exp(-(x ** 2 + y ** 2) / 4))) < 1e-8


def test_char_function_at_origin_is_trace(chars):
    for name in ("fock:1", "fock:2", "mix"):
        assert chars[name].value_at_origin() == pytest.approx(1.0, abs=1e-10)


def test_source_axis(axis, chars):
    assert chars["fock:0"].source_axis().matches(axis)


@pytest.mark.parametrize("name", ["fock:0", "fock:2", "coherent:1", "mix"])
def test_kernel_roundtrip(kernels, chars, name):
    back = kernel_from_char(chars[name])
    assert back.q_axis.matches(kernels[name].q_axis)
    assert Utils.relative_l2(back.rho, kernels[name].rho) < 1e-10


def test_kernel_from_char_checks_lattice(chars):
    cf = chars["fock:0"]
    cropped = SampledField([cf.x_axis, Axis(cf.y_axis.min, cf.y_axis.step, cf.y_axis.count - 2)], cf.f[:, :-2])
    with pytest.raises(AxisMismatchException):
        kernel_from_char(CharFunction(cropped))


def test_char_function_is_2d(axis):
    with pytest.raises(AxisMismatchException):
        CharFunction(SampledField([axis], np.ones(axis.count)))


def test_vacuum_wigner_function(chars):
    w = wigner_from_char(chars["fock:0"])
    q, p = w.field.coordinate_grids()
    assert np.max(np.abs(w.w - 2 * np.exp(-(q ** 2 + p ** 2)))) < 1e-8
    assert w.source_axis().matches(chars["fock:0"].source_axis())


@pytest.mark.parametrize("name", ["fock:1", "coherent:1", "mix"])
def test_wigner_mass_and_reality(chars, name):
    w = wigner_from_char(chars[name])
    assert np.max(np.abs(w.w.imag)) < 1e-9
    assert integrate(w.field).real == pytest.approx(2 * math.pi, abs=1e-6)


def test_fock_wigner_at_origin(chars):
    # W_n(0, 0) = 2 (-1)^n in this normalization
    for name, expected in (("fock:0", 2.0), ("fock:1", -2.0), ("fock:2", 2.0)):
        w = wigner_from_char(chars[name])
        i, j = w.q_axis.count // 2, w.p_axis.count // 2
        assert w.w[i, j].real == pytest.approx(expected, abs=1e-6)


def test_char_wigner_roundtrip(chars):
    cf = chars["coherent:1"]
    back = char_from_wigner(wigner_from_char(cf))
    assert back.x_axis.matches(cf.x_axis)
    assert Utils.relative_l2(back.f, cf.f) < 1e-10


def test_frft_keeps_fock_moduli(axis):
    for m in range(4):
        state = fock_state(m, axis)
        for alpha in (0.7, 2.0, -1.1, math.pi / 2):
            rotated = frft(state, alpha)
            assert np.max(np.abs(np.abs(rotated.psi) - np.abs(state.psi))) < 1e-6


def test_frft_restores_norm(axis):
    state = coherent_state(1.0 + 0.5j, axis)
    assert frft(state, 0.4).norm() == pytest.approx(state.norm(), abs=1e-12)


def test_frft_identity_and_parity(axis):
    state = coherent_state(1.0, axis)
    assert np.allclose(frft(state, 0.0).psi, state.psi)
    assert np.allclose(frft(state, 2 * math.pi).psi, state.psi)

    flipped = frft(state, math.pi)
    mirror = axis.mirror_index()
    inside = mirror >= 0
    assert np.max(np.abs(flipped.psi[inside] - state.psi[mirror[inside]])) < 1e-12


def test_frft_composes(axis):
    state = coherent_state(1.0 + 0.5j, axis)
    stepped = frft(frft(state, 0.3), 0.5)
    direct = frft(state, 0.8)
    assert abs(stepped.inner(direct)) == pytest.approx(1.0, abs=1e-6)


def test_frft_quarter_turn_moves_coherent_state(axis):
    # alpha -> alpha * exp(-i pi/2) takes Im(alpha) into the position mean
    state = frft(coherent_state(1.0j, axis), math.pi / 2)
    q = axis.samples
    mean_q = float(np.sum(q * np.abs(state.psi) ** 2) * axis.step)
    assert abs(mean_q) == pytest.approx(math.sqrt(2), abs=1e-6)


def test_rotate_kernel(kernels):
    for name in ("fock:0", "fock:2"):
        rotated = rotate_kernel(kernels[name], 1.3)
        assert rotated.hermitian
        assert np.max(np.abs(rotated.diagonal() - kernels[name].diagonal())) < 1e-6


def test_rotated_kernel_matches_rotated_state(axis):
    state = coherent_state(0.8 - 0.3j, axis)
    rotated = rotate_kernel(pure_kernel(state), 0.9)
    expected = np.abs(frft(state, 0.9).psi) ** 2
    assert np.max(np.abs(rotated.diagonal() - expected)) < 1e-6


def test_service_uses_client_oversampling(setup_client, kernels):
    setup_client.oversampling = 2
    cf = setup_client.transforms.char(kernels["fock:0"])
    assert cf.oversampling == 2
    assert cf.x_axis.count == 2 * kernels["fock:0"].q_axis.count
    assert isinstance(setup_client.transforms.wigner(cf), transforms.WignerFunction)
