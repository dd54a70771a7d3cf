"""
grid.py
====================================
Uniform grids, quadrature, continuous Fourier transforms built on the FFT,
and interpolation. Every other module computes on top of these.

Fourier convention::

    forward (sign=-1):  F[f](x) = (2*pi)**-k * integral exp(-i x.y) f(y) dy
    inverse (sign=+1):  f(y)    =              integral exp(+i x.y) F(x) dx
"""

import math
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import fft as sp_fft
from scipy import ndimage

from .constants import hermitian_tolerance, real_valued_tolerance
from .exceptions import AxisMismatchException, InvalidGridException
from .logger import SDKLogger

logger = SDKLogger.getLogger(__name__)


class Axis(object):
    """A uniform grid ``min + k*step`` for ``k = 0..count-1``.

    :param min: First sample
    :param step: Spacing between samples, > 0
    :param count: Number of samples, >= 2
    """

    def __init__(self, min: float, step: float, count: int):
        if not (math.isfinite(min) and math.isfinite(step)):
            raise InvalidGridException(message=f"Axis bounds must be finite, got min={min}, step={step}")
        if step <= 0:
            raise InvalidGridException(message=f"Axis step must be positive, got {step}")
        if int(count) != count or count < 2:
            raise InvalidGridException(message=f"Axis needs an integer count >= 2, got {count}")

        self.min = float(min)
        self.step = float(step)
        self.count = int(count)

    @property
    def max(self) -> float:
        return self.min + (self.count - 1) * self.step

    @property
    def samples(self) -> np.ndarray:
        return self.min + np.arange(self.count) * self.step

    @property
    def is_symmetric(self) -> bool:
        """True for the half-open symmetric grids produced by `make_axis`."""
        centered = -(self.count // 2) * self.step
        return abs(self.min - centered) <= 1e-9 * self.step

    def conjugate(self, min: Optional[float] = None) -> "Axis":
        """
        The Fourier-dual axis: same count, step 2*pi/(count*step). Symmetric
        unless an explicit origin is given.

        :param min: Optional origin for the dual axis
        """
        step = 2.0 * math.pi / (self.count * self.step)
        if min is None:
            min = -(self.count // 2) * step
        return Axis(min, step, self.count)

    def fractional_index(self, values) -> np.ndarray:
        return (np.asarray(values, dtype=np.float64) - self.min) / self.step

    def mirror_index(self) -> np.ndarray:
        """Index of -x for every sample x; -1 where the mirror is not on the grid."""
        exact = self.fractional_index(-self.samples)
        index = np.rint(exact).astype(np.int64)
        index[(index < 0) | (index >= self.count) | (np.abs(exact - index) > 1e-9)] = -1
        return index

    def matches(self, other: "Axis", rtol: float = 1e-9) -> bool:
        if other is None or self.count != other.count:
            return False
        scale = max(abs(self.min), self.step)
        return (
            abs(self.step - other.step) <= rtol * self.step
            and abs(self.min - other.min) <= rtol * scale
        )

    def __eq__(self, other):
        return isinstance(other, Axis) and self.matches(other)

    def __hash__(self):
        return hash((round(self.min, 9), round(self.step, 12), self.count))

    def __repr__(self):
        return f"Axis(min={self.min!r}, step={self.step!r}, count={self.count})"


def make_axis(extent: float, count: int) -> Axis:
    """
    Symmetric half-open axis covering [-extent, extent - step] with
    step = 2*extent/count.

    :param extent: Half width of the grid
    :param count: Number of samples

    Example::

        make_axis(8.0, 4).samples  # [-8, -4, 0, 4]
    """
    if not (isinstance(extent, (int, float)) and math.isfinite(extent)) or extent <= 0:
        raise InvalidGridException(message=f"Extent must be a positive finite number, got {extent}")
    if int(count) != count or count < 2:
        raise InvalidGridException(message=f"Count must be an integer >= 2, got {count}")

    step = 2.0 * extent / count
    return Axis(-float(extent), step, int(count))


class SampledField(object):
    """Complex samples over one or two uniform axes, stored row-major.

    `is_real_valued` and `is_hermitian_kernel` are computed from the data on
    construction and are only set when the property holds within tolerance.
    """

    def __init__(self, axes: Sequence[Axis], data):
        axes = tuple(axes)
        if not 1 <= len(axes) <= 2:
            raise AxisMismatchException(message=f"Fields have 1 or 2 axes, got {len(axes)}")

        shape = tuple(axis.count for axis in axes)
        values = np.array(data, dtype=np.complex128)
        if values.size != int(np.prod(shape)):
            raise AxisMismatchException(
                message=f"Data of size {values.size} does not fit axes of shape {shape}"
            )
        values = values.reshape(shape)
        values.setflags(write=False)

        self.axes = axes
        self.data = values
        self.is_real_valued = self._verify_real()
        self.is_hermitian_kernel = self._verify_hermitian()

    def _verify_real(self) -> bool:
        if self.data.size == 0:
            return True
        return bool(np.max(np.abs(self.data.imag)) <= real_valued_tolerance)

    def _verify_hermitian(self) -> bool:
        if self.ndim != 2 or not self.axes[0].matches(self.axes[1]):
            return False
        deviation = np.max(np.abs(self.data - self.data.conj().T))
        return bool(deviation < hermitian_tolerance)

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def cell_volume(self) -> float:
        return float(np.prod([axis.step for axis in self.axes]))

    def coordinate_grids(self):
        return np.meshgrid(*[axis.samples for axis in self.axes], indexing="ij")

    def with_data(self, data) -> "SampledField":
        return SampledField(self.axes, data)

    def reflected(self) -> "SampledField":
        """f(-x) on the same grid, zero where -x falls off the grid."""
        points = np.stack([-grid.ravel() for grid in self.coordinate_grids()], axis=1)
        return self.with_data(resample(self, points).reshape(self.shape))

    def __repr__(self):
        return f"SampledField(axes={self.axes!r})"


def integrate(field: SampledField) -> complex:
    """
    Midpoint Riemann sum of the samples times the cell volume.

    :param field: The field to integrate
    """
    if field.data.size == 0:
        raise AxisMismatchException(message="Cannot integrate an empty field")
    return complex(np.sum(field.data) * field.cell_volume)


def _normalize_dims(field: SampledField, dims: Optional[Iterable[int]]) -> Tuple[int, ...]:
    if dims is None:
        return tuple(range(field.ndim))
    dims = tuple(sorted(set(int(d) for d in dims)))
    for dim in dims:
        if not 0 <= dim < field.ndim:
            raise AxisMismatchException(
                message=f"Dimension {dim} out of range for a {field.ndim}-D field"
            )
    return dims


def _transform_along(data: np.ndarray, dim: int, source: Axis, target: Axis, sign: int) -> np.ndarray:
    # out[m] = step * exp(s i b_m a_0) * sum_k g[k] exp(s i k da b_0) exp(s 2 pi i k m / n)
    n = source.count
    shape = [1] * data.ndim
    shape[dim] = n

    pre = np.exp(sign * 1j * np.arange(n) * source.step * target.min).reshape(shape)
    post = np.exp(sign * 1j * target.samples * source.min).reshape(shape)

    if sign < 0:
        core = sp_fft.fft(data * pre, axis=dim)
    else:
        core = sp_fft.ifft(data * pre, axis=dim, norm="forward")

    prefactor = 1.0 / (2.0 * math.pi) if sign < 0 else 1.0
    return prefactor * source.step * post * core


def continuous_ft(
    field: SampledField,
    dims: Optional[Iterable[int]] = None,
    sign: int = -1,
    out_axes: Optional[Dict[int, Axis]] = None,
) -> SampledField:
    """
    Approximate the continuous Fourier transform over `dims` with the FFT,
    including the phase corrections for non-zero input and output origins.

    :param field: Field to transform
    :param dims: Dimensions to transform, all of them by default
    :param sign: -1 for the forward transform (1/(2*pi) per dim), +1 for the inverse
    :param out_axes: Optional output axis per transformed dim. Each must be the
        conjugate of the input axis up to its origin.

    Example::

        spectrum = continuous_ft(field)
        back = continuous_ft(spectrum, sign=+1)
    """
    if sign not in (-1, 1):
        raise InvalidGridException(message=f"Fourier sign must be -1 or +1, got {sign}")

    dims = _normalize_dims(field, dims)
    out_axes = dict(out_axes or {})
    axes = list(field.axes)
    data = field.data

    for dim in dims:
        source = field.axes[dim]
        target = out_axes.get(dim)
        if target is None:
            target = source.conjugate()
        elif not target.matches(source.conjugate(min=target.min)):
            raise AxisMismatchException(
                message=f"Output axis {target!r} is not conjugate to {source!r}"
            )
        data = _transform_along(data, dim, source, target, sign)
        axes[dim] = target

    return SampledField(axes, data)


def partial_ft(
    field: SampledField,
    dims: Iterable[int],
    sign: int = -1,
    out_axes: Optional[Dict[int, Axis]] = None,
) -> SampledField:
    """
    `continuous_ft` restricted to a strict, non-empty subset J of the dims.

    :param field: Field to transform
    :param dims: The dimension set J
    :param sign: -1 forward, +1 inverse
    :param out_axes: Optional output axes, as in `continuous_ft`
    """
    dims = _normalize_dims(field, dims)
    if len(dims) == 0 or len(dims) == field.ndim:
        raise AxisMismatchException(
            message="Partial transforms need a strict non-empty dim set, use continuous_ft instead"
        )
    return continuous_ft(field, dims, sign, out_axes)


class FieldInterpolator(object):
    """Spline interpolation of a field at arbitrary points, with an exact zero
    outside the grid hull. Spline coefficients are computed once, so one
    interpolator serves many point batches.

    :param field: Field to interpolate
    :param order: 1 for bilinear (default), up to 5 for splines
    """

    def __init__(self, field: SampledField, order: int = 1):
        if not 0 <= order <= 5:
            raise InvalidGridException(message=f"Interpolation order must be in 0..5, got {order}")
        self.field = field
        self.order = order
        self._real = self._coefficients(field.data.real)
        self._imag = None if field.is_real_valued else self._coefficients(field.data.imag)

    def _coefficients(self, values: np.ndarray) -> np.ndarray:
        values = np.ascontiguousarray(values, dtype=np.float64)
        if self.order <= 1:
            return values
        return ndimage.spline_filter(values, order=self.order, output=np.float64, mode="mirror")

    def __call__(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, self.field.ndim)
        if points.shape[-1] != self.field.ndim:
            raise AxisMismatchException(
                message=f"Points have {points.shape[-1]} coordinates, field has {self.field.ndim} dims"
            )

        coords = np.empty((self.field.ndim, points.shape[0]))
        inside = np.ones(points.shape[0], dtype=bool)
        for dim, axis in enumerate(self.field.axes):
            index = axis.fractional_index(points[:, dim])
            # Snap round-off so grid nodes on the hull boundary stay inside
            nearest = np.rint(index)
            index = np.where(np.abs(index - nearest) < 1e-9, nearest, index)
            inside &= (index >= 0) & (index <= axis.count - 1)
            coords[dim] = index

        values = np.zeros(points.shape[0], dtype=np.complex128)
        if not np.any(inside):
            return values

        coords = coords[:, inside]
        real = ndimage.map_coordinates(self._real, coords, order=self.order, mode="mirror", prefilter=False)
        if self._imag is None:
            values[inside] = real
        else:
            imag = ndimage.map_coordinates(self._imag, coords, order=self.order, mode="mirror", prefilter=False)
            values[inside] = real + 1j * imag
        return values


def resample(field: SampledField, points, order: int = 1) -> np.ndarray:
    """
    Interpolate `field` at `points` (one coordinate tuple per point).
    Bilinear by default; points outside the grid hull return exactly 0,
    as every field of interest decays.

    :param field: Field to sample
    :param points: Sequence of coordinate tuples, or an array of shape (P, ndim)
    :param order: Interpolation order (1 = bilinear)
    """
    return FieldInterpolator(field, order)(points)
