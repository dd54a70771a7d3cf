"""
fidelity.py
====================================
Transition probability P12 = Tr(rho1 rho2) by three routes: the kernels
directly, the characteristic functions, and the tomograms.

The characteristic and tomographic integrals are computed as displayed,
without a 2pi factor, then multiplied by a normalization constant fixed by
`calibrate_normalization` against the direct route.
"""

import enum
import functools
import math
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..config import Config
from ..lib import constants
from ..lib.exceptions import AxisMismatchException, InvalidGridException, NumericalContractViolation
from ..lib.grid import Axis, make_axis
from ..lib.logger import SDKLogger
from ..lib.parallel import ordered_map
from ..lib.service import Service
from .states import DensityKernel, fock_state, pure_kernel
from .tomography import Tomogram, char_slice_from_tomogram, folded_rows, tomogram_from_char, uniform_angles
from .transforms import CharFunction, char_from_kernel

logger = SDKLogger.getLogger(__name__)

NORMALIZATION_CANDIDATES = {
    "1": constants.normalization_candidates[0],
    "1/(2pi)": constants.normalization_candidates[1],
}


class Route(enum.Enum):
    DIRECT = "direct"
    CHARACTERISTIC = "characteristic"
    TOMOGRAPHIC = "tomographic"

    @classmethod
    def parse(cls, name: str) -> "Route":
        aliases = {"char": cls.CHARACTERISTIC, "tomo": cls.TOMOGRAPHIC}
        if name in aliases:
            return aliases[name]
        try:
            return cls(name)
        except ValueError:
            raise InvalidGridException(message=f"Unknown route {name!r}")


class TransitionResult(NamedTuple):
    value: float
    route: Route
    normalization_constant: float


class Calibration(NamedTuple):
    constant: float
    measured: float
    candidate: str


def _real_value(value: complex, route: Route) -> float:
    if abs(value.imag) > constants.imaginary_residue_tolerance:
        raise NumericalContractViolation(
            message=f"Transition probability from the {route.value} route has an imaginary residue of {value.imag:.3e}"
        )
    return float(value.real)


def transition_direct(k1: DensityKernel, k2: DensityKernel) -> TransitionResult:
    """
    P12 = integral rho1(q, q') rho2(q', q) dq dq'

    :param k1: First kernel
    :param k2: Second kernel, on the same axis

    Example::

        transition_direct(pure_kernel(vacuum), pure_kernel(coherent)).value
    """
    if not k1.q_axis.matches(k2.q_axis):
        raise AxisMismatchException(message=f"Kernels live on {k1.q_axis!r} and {k2.q_axis!r}")
    value = complex(np.sum(k1.rho * k2.rho.T) * k1.q_axis.step ** 2)
    return TransitionResult(_real_value(value, Route.DIRECT), Route.DIRECT, 1.0)


def _char_overlap(f1: np.ndarray, f2_reflected: np.ndarray, cell: float) -> complex:
    return complex(np.sum(f1 * f2_reflected) * cell)


def char_overlap(cf1: CharFunction, cf2: CharFunction) -> complex:
    """The raw integral of f1(x, y) f2(-x, -y), before normalization."""
    if not (cf1.x_axis.matches(cf2.x_axis) and cf1.y_axis.matches(cf2.y_axis)):
        raise AxisMismatchException(message=f"Characteristic functions {cf1!r} and {cf2!r} differ in axes")
    return _char_overlap(cf1.f, cf2.field.reflected().data, cf1.field.cell_volume)


@functools.lru_cache(maxsize=None)
def calibrate_normalization(
    extent: float = Config.calibration_extent, count: int = Config.calibration_count
) -> Calibration:
    """
    Fix the normalization of the characteristic and tomographic routes from
    the vacuum pair: measured = direct / raw integral. The measured ratio must
    be within 1% of one of `NORMALIZATION_CANDIDATES`, which is then used.

    :param extent: Calibration grid half width
    :param count: Calibration grid node count
    """
    vacuum = pure_kernel(fock_state(0, make_axis(extent, count)))
    cf = char_from_kernel(vacuum)
    direct = transition_direct(vacuum, vacuum).value
    measured = direct / char_overlap(cf, cf).real

    for label, candidate in NORMALIZATION_CANDIDATES.items():
        if abs(measured / candidate - 1.0) <= constants.calibration_tolerance:
            logger.info(f"Normalization calibrated to {label} (measured {measured:.12g}) on extent {extent}, count {count}")
            return Calibration(candidate, measured, label)

    raise NumericalContractViolation(
        message=f"Measured normalization {measured:.6g} matches none of {sorted(NORMALIZATION_CANDIDATES)}"
    )


def transition_char(
    cf1: CharFunction, cf2: CharFunction, calibration: Optional[Calibration] = None
) -> TransitionResult:
    """
    P12 = c * integral f1(x, y) f2(-x, -y) dx dy, c from the calibration.

    :param cf1: First characteristic function
    :param cf2: Second characteristic function, same lattice
    :param calibration: Normalization to use, `calibrate_normalization()` by default
    """
    calibration = calibration or calibrate_normalization()
    value = char_overlap(cf1, cf2) * calibration.constant
    return TransitionResult(_real_value(value, Route.CHARACTERISTIC), Route.CHARACTERISTIC, calibration.constant)


def _tomographic_slices(tom: Tomogram, oversampling: int) -> Tuple[Axis, np.ndarray]:
    angles, rows = folded_rows(tom)
    if angles.size < constants.minimum_transition_angles:
        raise InvalidGridException(
            message=f"The tomographic route needs at least {constants.minimum_transition_angles} angles, got {angles.size}"
        )
    spacing = np.diff(np.concatenate([angles, [angles[0] + math.pi]]))
    if np.ptp(spacing) > 1e-9:
        logger.warning("Tomogram angles are not uniform over [0, pi), the angle quadrature assumes they are")

    folded = Tomogram(tom.x_axis, angles, rows)
    slices = [char_slice_from_tomogram(folded, alpha, oversampling) for alpha in angles]
    return slices[0].t_axis, np.stack([radial.values for radial in slices])


def _tomographic_overlap(g1: np.ndarray, g2: np.ndarray, lambda_axis: Axis) -> complex:
    # Per angle: h * sum |lambda| G + (h^2/6) G(0), the endpoint correction for the kink of |lambda|
    h = lambda_axis.step
    product = g1 * np.conj(g2)
    weight = np.abs(lambda_axis.samples)
    origin = lambda_axis.count // 2
    per_angle = h * (product @ weight) + (h ** 2 / 6.0) * product[:, origin]
    return complex(np.sum(per_angle) * (math.pi / g1.shape[0]))


def transition_tomographic(
    t1: Tomogram,
    t2: Tomogram,
    calibration: Optional[Calibration] = None,
    oversampling: int = Config.char_oversampling,
) -> TransitionResult:
    """
    P12 = c * integral d(alpha) d(lambda) |lambda| g1(lambda) conj(g2(lambda)),
    g_i(lambda) = integral exp(i lambda x) omega_i(x, alpha) dx, angles over [0, pi).

    :param t1: First tomogram
    :param t2: Second tomogram, same axis and angles
    :param calibration: Normalization to use, `calibrate_normalization()` by default
    :param oversampling: Zero-padding of x, refining the lambda grid
    """
    if not t1.matches(t2):
        raise AxisMismatchException(message=f"Tomograms {t1!r} and {t2!r} differ in axes or angles")
    calibration = calibration or calibrate_normalization()

    lambda_axis, g1 = _tomographic_slices(t1, oversampling)
    _, g2 = _tomographic_slices(t2, oversampling)
    value = _tomographic_overlap(g1, g2, lambda_axis) * calibration.constant
    return TransitionResult(_real_value(value, Route.TOMOGRAPHIC), Route.TOMOGRAPHIC, calibration.constant)


def transition_matrix(
    kernels: Sequence[DensityKernel],
    route: Route = Route.DIRECT,
    angles: Optional[Sequence[float]] = None,
    threads: Optional[int] = None,
    calibration: Optional[Calibration] = None,
) -> np.ndarray:
    """
    P_ij for every pair of kernels by one route. Intermediate characteristic
    functions and tomograms are computed once per kernel.

    :param kernels: Kernels on one axis
    :param route: Route to use
    :param angles: Angle list for the tomographic route, `Config.default_angles` uniform angles by default
    :param threads: Worker count
    :param calibration: Normalization for the non-direct routes
    """
    kernels = list(kernels)
    size = len(kernels)
    values = np.zeros((size, size))

    if route is Route.DIRECT:
        for i in range(size):
            for j in range(size):
                values[i, j] = transition_direct(kernels[i], kernels[j]).value
        return values

    calibration = calibration or calibrate_normalization()
    cfs: List[CharFunction] = ordered_map(char_from_kernel, kernels, threads)

    if route is Route.CHARACTERISTIC:
        reflected = [cf.field.reflected().data for cf in cfs]
        cell = cfs[0].field.cell_volume
        for i in range(size):
            for j in range(size):
                raw = _char_overlap(cfs[i].f, reflected[j], cell)
                values[i, j] = _real_value(raw * calibration.constant, route)
        return values

    angles = uniform_angles(Config.default_angles) if angles is None else angles
    toms = [tomogram_from_char(cf, angles, threads=threads) for cf in cfs]
    slices = [_tomographic_slices(tom, Config.char_oversampling) for tom in toms]
    for i in range(size):
        for j in range(size):
            raw = _tomographic_overlap(slices[i][1], slices[j][1], slices[i][0])
            values[i, j] = _real_value(raw * calibration.constant, route)
    return values


class FidelityService(Service):
    def calibration(self) -> Calibration:
        return calibrate_normalization()

    def direct(self, k1: DensityKernel, k2: DensityKernel) -> TransitionResult:
        """
        Transition probability from the kernels.

        Example::

          client.fidelity.direct(k1, k2).value
        """
        return transition_direct(k1, k2)

    def char(self, cf1: CharFunction, cf2: CharFunction) -> TransitionResult:
        return transition_char(cf1, cf2)

    def tomographic(self, t1: Tomogram, t2: Tomogram) -> TransitionResult:
        return transition_tomographic(t1, t2, oversampling=self.client.oversampling)

    def matrix(self, kernels: Sequence[DensityKernel], route: Route = Route.DIRECT) -> np.ndarray:
        return transition_matrix(kernels, route, self.angles(), self.threads)
