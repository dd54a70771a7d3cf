"""
tomography.py
====================================
Optical tomograms omega(x, alpha) by three independent routes, and the
inversion from a tomogram back to the density kernel.

* From the characteristic function: radial slice, then a 1-D Fourier transform.
* From the Wigner function: rotate-and-sum Radon transform.
* From the kernel: diagonal of the fractionally rotated kernel.
"""

import math
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from ..config import Config
from ..lib import constants
from ..lib.exceptions import (
    AngleNotFoundException,
    AxisMismatchException,
    InvalidGridException,
    NumericalContractViolation,
)
from ..lib.grid import Axis, FieldInterpolator, SampledField, continuous_ft, resample
from ..lib.logger import SDKLogger
from ..lib.parallel import ordered_map
from ..lib.service import Service
from ..lib.utils import ProgressBar
from .states import DensityKernel, PureState
from .transforms import (
    CharFunction,
    WignerFunction,
    char_axes,
    frft,
    kernel_from_char,
    rotate_kernel,
)

logger = SDKLogger.getLogger(__name__)

_angle_tolerance = 1e-12


class RadialSlice(object):
    """F_alpha(t) = f(t cos alpha, t sin alpha)

    :param angle: Slice angle
    :param t_axis: Radial axis, signed
    :param values: Complex samples on `t_axis`
    """

    def __init__(self, angle: float, t_axis: Axis, values):
        self.angle = float(angle)
        self.field = SampledField([t_axis], values)

    @property
    def t_axis(self) -> Axis:
        return self.field.axes[0]

    @property
    def values(self) -> np.ndarray:
        return self.field.data

    def l1_norm(self) -> float:
        """Integral of |F_alpha(t)| dt, finite for traces of regular functions."""
        return float(np.sum(np.abs(self.values)) * self.t_axis.step)

    def __repr__(self):
        return f"RadialSlice(angle={self.angle!r}, t_axis={self.t_axis!r})"


class Tomogram(object):
    """Real samples omega(x, alpha), one row per angle.

    :param x_axis: Position axis
    :param angles: Strictly increasing angles in [0, 2pi]
    :param omega: Real array of shape (len(angles), x_axis.count)
    """

    def __init__(self, x_axis: Axis, angles: Sequence[float], omega):
        angles = np.array(angles, dtype=np.float64).reshape(-1)
        omega = np.array(omega, dtype=np.float64)

        if angles.size == 0:
            raise InvalidGridException(message="A tomogram needs at least one angle")
        if np.any(np.diff(angles) <= 0):
            raise InvalidGridException(message="Tomogram angles must be strictly increasing")
        if angles[0] < -_angle_tolerance or angles[-1] > 2 * math.pi + _angle_tolerance:
            raise InvalidGridException(message="Tomogram angles must lie in [0, 2pi]")
        if omega.shape != (angles.size, x_axis.count):
            raise AxisMismatchException(
                message=f"Tomogram samples have shape {omega.shape}, expected {(angles.size, x_axis.count)}"
            )

        angles.setflags(write=False)
        omega.setflags(write=False)
        self.x_axis = x_axis
        self.angles = angles
        self.omega = omega

    def index_of(self, alpha: float) -> int:
        index = int(np.argmin(np.abs(self.angles - alpha)))
        if abs(self.angles[index] - alpha) > _angle_tolerance:
            raise AngleNotFoundException(message=f"Angle {alpha} is not part of this tomogram")
        return index

    def row(self, alpha: float) -> np.ndarray:
        return self.omega[self.index_of(alpha)]

    def normalization(self) -> np.ndarray:
        """Integral of omega over x, per angle."""
        return self.omega.sum(axis=1) * self.x_axis.step

    def matches(self, other: "Tomogram") -> bool:
        return (
            self.x_axis.matches(other.x_axis)
            and self.angles.size == other.angles.size
            and bool(np.all(np.abs(self.angles - other.angles) <= _angle_tolerance))
        )

    def __repr__(self):
        return f"Tomogram(x_axis={self.x_axis!r}, angles={self.angles.size})"


def uniform_angles(count: int, full_turn: bool = False) -> np.ndarray:
    """
    `count` uniform angles in [0, pi), or [0, 2pi) with `full_turn`.

    :param count: Number of angles
    :param full_turn: Cover the whole circle
    """
    if count < 1:
        raise InvalidGridException(message=f"Angle count must be positive, got {count}")
    span = 2 * math.pi if full_turn else math.pi
    return np.arange(count) * (span / count)


def _angle_list(angles: Iterable[float]) -> np.ndarray:
    angles = np.unique(np.asarray(list(angles), dtype=np.float64))
    if angles.size == 0:
        raise InvalidGridException(message="The angle list is empty")
    return angles


def _real_rows(rows: Sequence[np.ndarray], route: str) -> np.ndarray:
    omega = np.stack(rows)
    residue = float(np.max(np.abs(omega.imag))) if omega.size else 0.0
    logger.debug(f"{route} route imaginary residue {residue:.3e}")
    if residue > constants.imaginary_residue_tolerance:
        raise NumericalContractViolation(
            message=f"Tomogram from the {route} route has an imaginary residue of {residue:.3e}"
        )
    return omega.real


def slice_char(
    cf: CharFunction,
    alpha: float,
    t_axis: Optional[Axis] = None,
    order: int = Config.slice_interpolation_order,
    interpolator: Optional[FieldInterpolator] = None,
) -> RadialSlice:
    """
    Sample f along the line through the origin at angle alpha.

    :param cf: Characteristic function
    :param alpha: Slice angle
    :param t_axis: Radial axis, by default every P-th x node over the inscribed disk
    :param order: Spline order of the interpolation
    :param interpolator: Prebuilt interpolator of `cf.field`, for repeated slicing
    """
    if t_axis is None:
        t_axis = cf.source_axis().conjugate()
    if interpolator is None:
        interpolator = FieldInterpolator(cf.field, order)

    t = t_axis.samples
    points = np.stack([t * math.cos(alpha), t * math.sin(alpha)], axis=1)
    return RadialSlice(alpha, t_axis, interpolator(points))


def tomogram_from_char(
    cf: CharFunction,
    angles: Iterable[float],
    x_axis: Optional[Axis] = None,
    threads: Optional[int] = None,
    progress: bool = False,
) -> Tomogram:
    """
    omega(x, alpha) = (1/2pi) integral exp(-i x t) F_alpha(t) dt

    :param cf: Characteristic function
    :param angles: Angle list
    :param x_axis: Output position axis, the source kernel's axis by default
    :param threads: Worker count for the per-angle loop
    :param progress: Show a progress bar
    """
    angles = _angle_list(angles)
    if x_axis is None:
        x_axis = cf.source_axis()
    t_axis = x_axis.conjugate()
    interpolator = FieldInterpolator(cf.field, Config.slice_interpolation_order)

    def row(alpha):
        radial = slice_char(cf, alpha, t_axis, interpolator=interpolator)
        return continuous_ft(radial.field, sign=-1, out_axes={0: x_axis}).data

    with ProgressBar("char route", angles.size, progress) as bar:
        rows = ordered_map(row, angles, threads, bar)
    return Tomogram(x_axis, angles, _real_rows(rows, "characteristic"))


def tomogram_from_wigner(
    w: WignerFunction,
    angles: Iterable[float],
    x_axis: Optional[Axis] = None,
    threads: Optional[int] = None,
    progress: bool = False,
) -> Tomogram:
    """
    Radon transform (1/2pi) integral W(-(x cos a - v sin a), -(x sin a + v cos a)) dv,
    evaluated by resampling W on the rotated lattice and summing along v.

    W built from the Baker pair is the point reflection of the usual Wigner
    function, so the line is reflected through the origin before integrating.

    :param w: Wigner function
    :param angles: Angle list
    :param x_axis: Output position axis, also used for the line coordinate v
    :param threads: Worker count for the per-angle loop
    :param progress: Show a progress bar
    """
    angles = _angle_list(angles)
    if x_axis is None:
        x_axis = w.source_axis()
    interpolator = FieldInterpolator(w.field, Config.radon_interpolation_order)

    x = x_axis.samples[:, None]
    v = x_axis.samples[None, :]

    def row(alpha):
        cosine, sine = math.cos(alpha), math.sin(alpha)
        q = v * sine - x * cosine
        p = -(x * sine + v * cosine)
        values = interpolator(np.stack([q.ravel(), p.ravel()], axis=1)).reshape(q.shape)
        return values.sum(axis=1) * (x_axis.step / (2.0 * math.pi))

    with ProgressBar("wigner route", angles.size, progress) as bar:
        rows = ordered_map(row, angles, threads, bar)
    return Tomogram(x_axis, angles, _real_rows(rows, "wigner"))


def tomogram_from_rotated_kernel(
    kernel: DensityKernel,
    angles: Iterable[float],
    x_axis: Optional[Axis] = None,
    threads: Optional[int] = None,
    progress: bool = False,
) -> Tomogram:
    """
    omega(x, alpha) = rho_alpha(x, x), the diagonal of the rotated kernel.

    :param kernel: Density kernel
    :param angles: Angle list
    :param x_axis: Output axis, the kernel axis by default; other axes are resampled
    :param threads: Worker count for the per-angle loop
    :param progress: Show a progress bar
    """
    angles = _angle_list(angles)
    axis = kernel.q_axis

    def row(alpha):
        diagonal = rotate_kernel(kernel, alpha).diagonal()
        if x_axis is None or x_axis.matches(axis):
            return diagonal
        field = SampledField([axis], diagonal)
        return resample(field, x_axis.samples[:, None], order=Config.slice_interpolation_order)

    with ProgressBar("rotation route", angles.size, progress) as bar:
        rows = ordered_map(row, angles, threads, bar)
    return Tomogram(x_axis or axis, angles, _real_rows(rows, "rotation"))


def tomogram_from_state(
    state: PureState,
    angles: Iterable[float],
    threads: Optional[int] = None,
) -> Tomogram:
    """
    omega(x, alpha) = |F_alpha psi (x)|^2 for a pure state.

    :param state: Wavefunction
    :param angles: Angle list
    """
    angles = _angle_list(angles)
    rows = ordered_map(lambda alpha: np.abs(frft(state, alpha).psi) ** 2, angles, threads)
    return Tomogram(state.axis, angles, np.stack(rows))


def _padded(tom: Tomogram, oversampling: int) -> Tuple[Axis, np.ndarray]:
    count = tom.x_axis.count
    left = ((oversampling - 1) * count) // 2
    axis = Axis(tom.x_axis.min - left * tom.x_axis.step, tom.x_axis.step, oversampling * count)
    omega = np.zeros((tom.angles.size, axis.count))
    omega[:, left:left + count] = tom.omega
    return axis, omega


def char_slice_from_tomogram(tom: Tomogram, alpha: float, oversampling: int = 1) -> RadialSlice:
    """
    f(lambda cos alpha, lambda sin alpha) = integral exp(i x lambda) omega(x, alpha) dx

    :param tom: Tomogram
    :param alpha: One of `tom.angles`
    :param oversampling: Zero-padding factor of x; 1 inverts `tomogram_from_char` exactly
    """
    index = tom.index_of(alpha)
    if oversampling < 1:
        raise InvalidGridException(message=f"Oversampling must be at least 1, got {oversampling}")
    axis, omega = _padded(tom, oversampling)
    transformed = continuous_ft(SampledField([axis], omega[index]), sign=+1)
    return RadialSlice(tom.angles[index], transformed.axes[0], transformed.data)


def folded_rows(tom: Tomogram) -> Tuple[np.ndarray, np.ndarray]:
    """
    Angles folded into [0, pi) with their rows, using
    omega(x, alpha + pi) = omega(-x, alpha). An angle already present below
    pi wins over its folded partner.

    :param tom: Tomogram
    """
    mirror = tom.x_axis.mirror_index()
    folded = {}
    for alpha, row in zip(tom.angles, tom.omega):
        base, turns = float(alpha), 0
        while base >= math.pi - _angle_tolerance:
            base -= math.pi
            turns += 1
        base = max(base, 0.0)
        if turns % 2:
            row = np.where(mirror >= 0, row[np.maximum(mirror, 0)], 0.0)

        key = round(base, 12)
        if key not in folded or turns < folded[key][0]:
            folded[key] = (turns, base, row)

    keys = sorted(folded)
    angles = np.array([folded[key][1] for key in keys])
    rows = np.stack([folded[key][2] for key in keys])
    return angles, rows


def char_from_tomogram(tom: Tomogram, oversampling: int = Config.char_oversampling) -> CharFunction:
    """
    Assemble f(x, y) on the characteristic lattice of `tom.x_axis` from polar
    slices. Each node maps to a signed radius lambda and an angle in [0, pi),
    linear in angle between the two nearest slices and linear in lambda.
    Radii beyond the sampled disk give 0.

    :param tom: Tomogram with at least 4 distinct angles modulo pi
    :param oversampling: Lattice oversampling, also the x zero-padding of the slices
    """
    angles, rows = folded_rows(tom)
    if angles.size < constants.minimum_polar_angles:
        raise InvalidGridException(
            message=f"Polar assembly needs at least {constants.minimum_polar_angles} angles, got {angles.size}"
        )

    folded = Tomogram(tom.x_axis, angles, rows)
    slices = [char_slice_from_tomogram(folded, alpha, oversampling) for alpha in angles]
    lambda_axis = slices[0].t_axis
    g = np.stack([radial.values for radial in slices])

    # Wrap around: the slice at a_last - pi is the last slice reflected in lambda
    mirror = lambda_axis.mirror_index()
    reflect = lambda values: np.where(mirror >= 0, values[np.maximum(mirror, 0)], 0.0)
    extended_angles = np.concatenate([[angles[-1] - math.pi], angles, [angles[0] + math.pi]])
    extended = np.vstack([reflect(g[-1]), g, reflect(g[0])])
    sinogram = SampledField([Axis(0.0, 1.0, extended.shape[0]), lambda_axis], extended)

    x_axis, y_axis = char_axes(tom.x_axis, oversampling)
    x, y = np.meshgrid(x_axis.samples, y_axis.samples, indexing="ij")
    radius = np.hypot(x, y)
    theta = np.arctan2(y, x)
    negative = (theta < 0) | (theta >= math.pi)
    theta = np.where(theta < 0, theta + math.pi, theta)
    theta = np.where(theta >= math.pi, theta - math.pi, theta)
    radius = np.where(negative, -radius, radius)

    bracket = np.clip(np.searchsorted(extended_angles, theta, side="right") - 1, 0, extended_angles.size - 2)
    weight = (theta - extended_angles[bracket]) / np.diff(extended_angles)[bracket]
    points = np.stack([(bracket + weight).ravel(), radius.ravel()], axis=1)

    logger.debug(f"Polar assembly over {angles.size} angles onto {x_axis.count}x{y_axis.count} nodes")
    values = FieldInterpolator(sinogram, order=1)(points).reshape(x.shape)
    return CharFunction(SampledField([x_axis, y_axis], values), oversampling)


def kernel_from_tomogram(tom: Tomogram, oversampling: int = Config.char_oversampling) -> DensityKernel:
    return kernel_from_char(char_from_tomogram(tom, oversampling))


class TomographyService(Service):
    def from_char(self, cf: CharFunction, angles=None, x_axis: Optional[Axis] = None) -> Tomogram:
        """
        Tomogram through the characteristic function route.

        Example::

          tom = client.tomography.from_char(cf)
        """
        return tomogram_from_char(
            cf, self.angles() if angles is None else angles, x_axis, self.threads, self.progress
        )

    def from_wigner(self, w: WignerFunction, angles=None, x_axis: Optional[Axis] = None) -> Tomogram:
        return tomogram_from_wigner(
            w, self.angles() if angles is None else angles, x_axis, self.threads, self.progress
        )

    def from_kernel(self, kernel: DensityKernel, angles=None, x_axis: Optional[Axis] = None) -> Tomogram:
        return tomogram_from_rotated_kernel(
            kernel, self.angles() if angles is None else angles, x_axis, self.threads, self.progress
        )

    def from_state(self, state: PureState, angles=None) -> Tomogram:
        return tomogram_from_state(state, self.angles() if angles is None else angles, self.threads)

    def char_slice(self, tom: Tomogram, alpha: float, oversampling: int = 1) -> RadialSlice:
        return char_slice_from_tomogram(tom, alpha, oversampling)

    def char(self, tom: Tomogram) -> CharFunction:
        return char_from_tomogram(tom, self.client.oversampling)

    def reconstruct(self, tom: Tomogram) -> DensityKernel:
        """
        Full inversion from a tomogram to the density kernel.

        Example::

          kernel = client.tomography.reconstruct(tom)
        """
        return kernel_from_tomogram(tom, self.client.oversampling)
