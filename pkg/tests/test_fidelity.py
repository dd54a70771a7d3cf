import logging
import math

import numpy as np
import pytest

from qtomo.lib.exceptions import AxisMismatchException, InvalidGridException, NumericalContractViolation
from qtomo.lib.grid import make_axis
from qtomo.services import fidelity
from qtomo.services.fidelity import (
    Route,
    calibrate_normalization,
    char_overlap,
    transition_char,
    transition_direct,
    transition_matrix,
    transition_tomographic,
)
from qtomo.services.states import coherent_state, fock_state, pure_kernel
from qtomo.services.tomography import tomogram_from_char, uniform_angles
from qtomo.services.transforms import char_from_kernel


@pytest.fixture(scope="module")
def calibration():
    return calibrate_normalization(8.0, 128)


def test_calibration_picks_inverse_two_pi(calibration):
    assert calibration.candidate == "1/(2pi)"
    assert calibration.constant == pytest.approx(1 / (2 * math.pi))
    assert calibration.measured == pytest.approx(1 / (2 * math.pi), rel=1e-8)


def test_calibration_is_stable_under_refinement(calibration):
    finer = calibrate_normalization(10.0, 160)
    assert abs(finer.measured / calibration.measured - 1.0) < 1e-3


def test_direct_route(kernels, axis):
    assert transition_direct(kernels["fock:0"], kernels["fock:0"]).value == pytest.approx(1.0, abs=1e-12)
    assert abs(transition_direct(kernels["fock:0"], kernels["fock:1"]).value) < 1e-12
    coherent = pure_kernel(coherent_state(1.5, axis))
    assert transition_direct(kernels["fock:0"], coherent).value == pytest.approx(math.exp(-1.5 ** 2), abs=1e-10)
    assert transition_direct(kernels["mix"], kernels["mix"]).value == pytest.approx(0.5, abs=1e-12)


def test_direct_route_checks_axes(kernels):
    other = pure_kernel(fock_state(0, make_axis(6.0, 128)))
    with pytest.raises(AxisMismatchException):
        transition_direct(kernels["fock:0"], other)


def test_direct_route_rejects_complex_results(kernels):
    with pytest.raises(NumericalContractViolation):
        transition_direct(kernels["fock:0"], kernels["fock:0"].scaled(1j))


def test_char_overlap_is_two_pi_direct(kernels, chars):
    raw = char_overlap(chars["coherent:1"], chars["mix"]).real
    direct = transition_direct(kernels["coherent:1"], kernels["mix"]).value
    assert raw == pytest.approx(2 * math.pi * direct, abs=1e-9)


@pytest.mark.parametrize("first, second", [("fock:0", "fock:0"), ("fock:1", "mix"), ("coherent:1", "fock:2")])
def test_char_route_matches_direct(kernels, chars, calibration, first, second):
    result = transition_char(chars[first], chars[second], calibration)
    assert result.route is Route.CHARACTERISTIC
    assert result.normalization_constant == calibration.constant
    assert result.value == pytest.approx(transition_direct(kernels[first], kernels[second]).value, abs=1e-8)


def test_char_route_checks_lattice(chars, calibration):
    other = char_from_kernel(pure_kernel(fock_state(0, make_axis(8.0, 64))))
    with pytest.raises(AxisMismatchException):
        transition_char(chars["fock:0"], other, calibration)


def test_tomographic_route_matches_direct(kernels, chars, angles, calibration):
    toms = {name: tomogram_from_char(chars[name], angles) for name in ("fock:0", "coherent:1", "mix")}
    for first, second in (("fock:0", "fock:0"), ("fock:0", "coherent:1"), ("mix", "coherent:1")):
        result = transition_tomographic(toms[first], toms[second], calibration)
        direct = transition_direct(kernels[first], kernels[second]).value
        assert result.route is Route.TOMOGRAPHIC
        assert result.value == pytest.approx(direct, abs=5e-3)


def test_tomographic_route_accepts_full_turn(chars, calibration):
    half = tomogram_from_char(chars["fock:1"], uniform_angles(16))
    full = tomogram_from_char(chars["fock:1"], uniform_angles(32, full_turn=True))
    a = transition_tomographic(half, half, calibration).value
    b = transition_tomographic(full, full, calibration).value
    assert a == pytest.approx(b, abs=1e-10)


def test_tomographic_route_needs_angles(chars, calibration):
    tom = tomogram_from_char(chars["fock:0"], uniform_angles(7))
    with pytest.raises(InvalidGridException):
        transition_tomographic(tom, tom, calibration)


def test_tomographic_route_warns_on_uneven_angles(chars, calibration, caplog):
    angles = np.concatenate([uniform_angles(16)[:-1], [math.pi - 0.05]])
    tom = tomogram_from_char(chars["fock:0"], angles)
    with caplog.at_level(logging.WARNING):
        transition_tomographic(tom, tom, calibration)
    assert "not uniform" in caplog.text


def test_tomographic_route_checks_angles(chars, calibration):
    a = tomogram_from_char(chars["fock:0"], uniform_angles(8))
    b = tomogram_from_char(chars["fock:0"], uniform_angles(9))
    with pytest.raises(AxisMismatchException):
        transition_tomographic(a, b, calibration)


def test_route_parse():
    assert Route.parse("direct") is Route.DIRECT
    assert Route.parse("char") is Route.CHARACTERISTIC
    assert Route.parse("tomo") is Route.TOMOGRAPHIC
    assert Route.parse("tomographic") is Route.TOMOGRAPHIC
    with pytest.raises(InvalidGridException):
        Route.parse("bogus")


def test_transition_matrix(kernels, angles, calibration):
    names = ["fock:0", "fock:1", "coherent:1", "mix"]
    selected = [kernels[name] for name in names]
    direct = transition_matrix(selected)
    char = transition_matrix(selected, Route.CHARACTERISTIC, threads=2, calibration=calibration)
    tomo = transition_matrix(selected, Route.TOMOGRAPHIC, angles, threads=2, calibration=calibration)

    assert np.allclose(direct, direct.T, atol=1e-12)
    assert np.allclose(np.diag(direct)[:3], 1.0, atol=1e-12)
    assert np.max(np.abs(direct - char)) < 1e-8
    assert np.max(np.abs(direct - tomo)) < 5e-3


def test_normalization_candidates():
    assert set(fidelity.NORMALIZATION_CANDIDATES) == {"1", "1/(2pi)"}


def test_service_direct(setup_client, kernels):
    result = setup_client.fidelity.direct(kernels["fock:1"], kernels["fock:1"])
    assert result.route is Route.DIRECT
    assert result.normalization_constant == 1.0
    assert result.value == pytest.approx(1.0, abs=1e-12)


def test_routes_are_homogeneous(kernels, chars, calibration):
    scale = 0.3
    scaled = kernels["mix"].scaled(scale)
    direct = transition_direct(kernels["coherent:1"], kernels["mix"]).value
    assert transition_direct(kernels["coherent:1"], scaled).value == pytest.approx(scale * direct, rel=1e-12)

    cf = char_from_kernel(scaled)
    by_char = transition_char(chars["coherent:1"], cf, calibration).value
    assert by_char == pytest.approx(scale * transition_char(chars["coherent:1"], chars["mix"], calibration).value, rel=1e-10)
