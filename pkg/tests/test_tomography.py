import math

import numpy as np
import pytest

from qtomo.lib.exceptions import (
    AngleNotFoundException,
    AxisMismatchException,
    InvalidGridException,
    NumericalContractViolation,
)
from qtomo.lib.grid import make_axis
from qtomo.lib.utils import Utils
from qtomo.services.states import coherent_state, fock_state, pure_kernel
from qtomo.services.tomography import (
    Tomogram,
    char_from_tomogram,
    char_slice_from_tomogram,
    folded_rows,
    kernel_from_tomogram,
    slice_char,
    tomogram_from_char,
    tomogram_from_rotated_kernel,
    tomogram_from_state,
    tomogram_from_wigner,
    uniform_angles,
)
from qtomo.services.transforms import CharFunction, char_from_kernel, wigner_from_char

few_angles = uniform_angles(8)


def sup(a, b):
    return float(np.max(np.abs(a - b)))


def test_uniform_angles():
    assert np.allclose(uniform_angles(4), [0, math.pi / 4, math.pi / 2, 3 * math.pi / 4])
    assert uniform_angles(4, full_turn=True)[-1] == pytest.approx(1.5 * math.pi)
    with pytest.raises(InvalidGridException):
        uniform_angles(0)


def test_tomogram_validation(axis):
    rows = np.zeros((2, axis.count))
    with pytest.raises(InvalidGridException):
        Tomogram(axis, [0.5, 0.5], rows)
    with pytest.raises(InvalidGridException):
        Tomogram(axis, [0.5, 7.0], rows)
    with pytest.raises(AxisMismatchException):
        Tomogram(axis, [0.1, 0.2], np.zeros((2, axis.count - 1)))


def test_tomogram_lookup(axis):
    tom = Tomogram(axis, [0.0, 1.0], np.ones((2, axis.count)))
    assert tom.index_of(1.0) == 1
    assert np.all(tom.row(0.0) == 1)
    with pytest.raises(AngleNotFoundException):
        tom.row(0.5)


def test_slice_passes_through_origin(chars):
    radial = slice_char(chars["fock:0"], 0.4)
    t = radial.t_axis.samples
    assert radial.t_axis.matches(chars["fock:0"].source_axis().conjugate())
    assert sup(radial.values, np.exp(-(t ** 2) / 4)) < 1e-7
    assert radial.l1_norm() == pytest.approx(2 * math.sqrt(math.pi), abs=1e-6)


def test_vacuum_tomogram(chars, angles):
    tom = tomogram_from_char(chars["fock:0"], angles, threads=2)
    x = tom.x_axis.samples
    assert sup(tom.omega, np.exp(-(x ** 2)) / math.sqrt(math.pi)) < 1e-6


def test_char_route_normalization(chars, angles):
    for name in ("fock:1", "coherent:1", "mix"):
        tom = tomogram_from_char(chars[name], angles)
        assert sup(tom.normalization(), 1.0) < 1e-6


def assert_routes_agree(kernel, cf, angles):
    by_char = tomogram_from_char(cf, angles)
    by_wigner = tomogram_from_wigner(wigner_from_char(cf), angles)
    by_kernel = tomogram_from_rotated_kernel(kernel, angles)
    assert sup(by_char.omega, by_kernel.omega) < 1e-4
    assert sup(by_wigner.omega, by_kernel.omega) < 5e-3
    assert sup(by_wigner.omega, by_char.omega) < 5e-3


@pytest.mark.parametrize("name", ["fock:1", "coherent:1", "mix"])
def test_routes_agree(kernels, chars, name):
    assert_routes_agree(kernels[name], chars[name], few_angles)


def test_routes_agree_without_parity_symmetry(axis):
    # momentum and position offsets make omega(x, a) differ from omega(-x, a)
    kernel = pure_kernel(coherent_state(1 + 0.5j, axis))
    cf = char_from_kernel(kernel)
    angles = uniform_angles(8, full_turn=True)
    assert_routes_agree(kernel, cf, angles)

    by_wigner = tomogram_from_wigner(wigner_from_char(cf), [0.0])
    x = by_wigner.x_axis.samples
    assert x[np.argmax(by_wigner.omega[0])] == pytest.approx(math.sqrt(2.0), abs=by_wigner.x_axis.step)


def test_tomograms_are_non_negative(kernels, chars):
    for name in ("coherent:1", "mix", "fock:2"):
        assert tomogram_from_char(chars[name], few_angles).omega.min() >= -1e-5
        assert tomogram_from_rotated_kernel(kernels[name], few_angles).omega.min() >= -1e-5


def test_second_differences_shrink_under_refinement():
    def curvature(count):
        axis = make_axis(8.0, count)
        tom = tomogram_from_rotated_kernel(pure_kernel(fock_state(1, axis)), [0.0, 0.7])
        return float(np.max(np.abs(np.diff(tom.omega, n=2, axis=1))))

    # a continuous, twice differentiable omega loses a factor ~4 per halving of the step
    assert curvature(128) / curvature(256) > 3.0


def test_pure_state_tomogram(axis, kernels):
    direct = tomogram_from_state(fock_state(2, axis), few_angles)
    rotated = tomogram_from_rotated_kernel(kernels["fock:2"], few_angles)
    assert sup(direct.omega, rotated.omega) < 1e-6


def test_rotated_kernel_on_other_axis(kernels, axis):
    coarse = make_axis(6.0, 96)
    tom = tomogram_from_rotated_kernel(kernels["fock:0"], few_angles, x_axis=coarse)
    x = coarse.samples
    assert tom.x_axis.matches(coarse)
    assert sup(tom.omega, np.exp(-(x ** 2)) / math.sqrt(math.pi)) < 1e-6


def test_angle_symmetry(chars):
    full = uniform_angles(8, full_turn=True)
    tom = tomogram_from_char(chars["coherent:1"], full)
    mirror = tom.x_axis.mirror_index()
    inside = mirror >= 0
    for k in range(4):
        shifted = tom.omega[k + 4][inside]
        assert sup(shifted, tom.omega[k][mirror[inside]]) < 1e-6


def test_thread_count_does_not_change_bytes(chars, angles):
    single = tomogram_from_char(chars["mix"], angles, threads=1)
    pooled = tomogram_from_char(chars["mix"], angles, threads=4)
    assert single.omega.tobytes() == pooled.omega.tobytes()


def test_imaginary_residue_is_a_contract(axis, chars):
    cf = chars["fock:0"]
    skewed = CharFunction(cf.field.with_data(cf.f * (1 + 0.1j)))
    with pytest.raises(NumericalContractViolation):
        tomogram_from_char(skewed, few_angles)


def test_char_slice_inverts_the_char_route(chars):
    cf = chars["coherent:1"]
    tom = tomogram_from_char(cf, few_angles)
    for alpha in few_angles[:3]:
        recovered = char_slice_from_tomogram(tom, alpha)
        expected = slice_char(cf, alpha)
        assert recovered.t_axis.matches(expected.t_axis)
        assert sup(recovered.values, expected.values) < 1e-8


def test_char_slice_oversampling_refines_lambda(chars):
    tom = tomogram_from_char(chars["fock:0"], few_angles)
    fine = char_slice_from_tomogram(tom, 0.0, oversampling=4)
    coarse = char_slice_from_tomogram(tom, 0.0)
    assert fine.t_axis.count == 4 * coarse.t_axis.count
    assert fine.t_axis.step == pytest.approx(coarse.t_axis.step / 4)
    with pytest.raises(InvalidGridException):
        char_slice_from_tomogram(tom, 0.0, oversampling=0)


def test_folded_rows_keep_lower_half(chars):
    full = uniform_angles(8, full_turn=True)
    tom = tomogram_from_char(chars["coherent:1"], full)
    angles, rows = folded_rows(tom)
    assert np.allclose(angles, uniform_angles(4))
    assert np.array_equal(rows, tom.omega[:4])


def test_folded_rows_reflect_upper_half(axis):
    x = axis.samples
    tom = Tomogram(axis, [math.pi + 0.1], np.exp(-((x - 1.0) ** 2))[None, :])
    angles, rows = folded_rows(tom)
    mirror = axis.mirror_index()
    inside = mirror >= 0
    assert angles[0] == pytest.approx(0.1)
    assert np.allclose(rows[0][inside], tom.omega[0][mirror[inside]])


@pytest.mark.parametrize("name", ["fock:0", "fock:1", "mix"])
def test_reconstruction(kernels, chars, angles, name):
    tom = tomogram_from_char(chars[name], angles, threads=2)
    kernel = kernel_from_tomogram(tom)
    assert kernel.q_axis.matches(kernels[name].q_axis)
    assert Utils.relative_l2(kernel.rho, kernels[name].rho) < 1e-2
    assert abs(kernel.trace() - 1.0) < 1e-3


def test_polar_assembly_needs_angles(chars):
    tom = tomogram_from_char(chars["fock:0"], uniform_angles(3))
    with pytest.raises(InvalidGridException):
        char_from_tomogram(tom)


def test_polar_assembly_of_vacuum(chars, angles):
    tom = tomogram_from_char(chars["fock:0"], angles)
    cf = char_from_tomogram(tom)
    x, y = cf.field.coordinate_grids()
    assert cf.x_axis.matches(chars["fock:0"].x_axis)
    assert sup(cf.f, np.exp(-(x ** 2 + y ** 2) / 4)) < 2e-3


def test_service_uses_client_angles(setup_client, kernels):
    tom = setup_client.tomography.from_kernel(kernels["fock:0"])
    assert tom.angles.size == setup_client.angles
    assert tom.x_axis.matches(setup_client.axis)
