"""
transforms.py
====================================
Kernel <-> characteristic function (Baker formula and its inverse),
characteristic function <-> Wigner function, and the fractional Fourier
transform with its action on kernels.

The characteristic function of a kernel on an even, symmetric grid (count N,
step s) lives on a fixed lattice:

* y has step s and count ``max(2N, even ceil(2*pi/s**2))``, so the Wigner
  momentum step is close to s.
* x is conjugate to a t line of ``P*N`` nodes with step s, where P is
  ``Config.char_oversampling``.
* Rows with even y/s integrate over t nodes on the q lattice, rows with odd
  y/s over t nodes shifted by s/2. Every (t, y) node is then an exact
  (q, q') node, so no interpolation happens in either direction.
"""

import math
from typing import Optional, Tuple

import numpy as np
from scipy import signal

from ..config import Config
from ..lib import constants
from ..lib.exceptions import AxisMismatchException, InvalidGridException
from ..lib.grid import Axis, SampledField, continuous_ft, partial_ft
from ..lib.logger import SDKLogger
from ..lib.service import Service
from .states import DensityKernel, PureState

logger = SDKLogger.getLogger(__name__)


class CharFunction(object):
    """f(x, y) sampled on the characteristic-function lattice.

    :param field: 2-D field over (x, y)
    :param oversampling: Zero-padding factor P of the t lines
    """

    def __init__(self, field: SampledField, oversampling: int = Config.char_oversampling):
        if field.ndim != 2:
            raise AxisMismatchException(message=f"Characteristic functions are 2-D, got {field.ndim} axes")
        self.field = field
        self.oversampling = int(oversampling)

    @property
    def x_axis(self) -> Axis:
        return self.field.axes[0]

    @property
    def y_axis(self) -> Axis:
        return self.field.axes[1]

    @property
    def f(self) -> np.ndarray:
        return self.field.data

    def value_at_origin(self) -> complex:
        i = self.x_axis.count // 2
        j = self.y_axis.count // 2
        return complex(self.f[i, j])

    def source_axis(self) -> Axis:
        """The position axis of the kernel this lattice belongs to."""
        step = self.y_axis.step
        count = self.x_axis.count // self.oversampling
        return Axis(-(count // 2) * step, step, count)

    def __repr__(self):
        return f"CharFunction(x_axis={self.x_axis!r}, y_axis={self.y_axis!r})"


class WignerFunction(object):
    """W(q, p), complex storage. Real within 1e-9 for hermitian sources.

    :param field: 2-D field over (q, p)
    :param oversampling: Oversampling of the characteristic function it came from
    """

    def __init__(self, field: SampledField, oversampling: int = Config.char_oversampling):
        if field.ndim != 2:
            raise AxisMismatchException(message=f"Wigner functions are 2-D, got {field.ndim} axes")
        self.field = field
        self.oversampling = int(oversampling)

    @property
    def q_axis(self) -> Axis:
        return self.field.axes[0]

    @property
    def p_axis(self) -> Axis:
        return self.field.axes[1]

    @property
    def w(self) -> np.ndarray:
        return self.field.data

    def source_axis(self) -> Axis:
        step = self.q_axis.step
        count = self.q_axis.count // self.oversampling
        return Axis(-(count // 2) * step, step, count)

    def __repr__(self):
        return f"WignerFunction(q_axis={self.q_axis!r}, p_axis={self.p_axis!r})"


def _require_lattice(axis: Axis):
    if axis.count % 2 or not axis.is_symmetric:
        raise InvalidGridException(
            message=f"Kernel transforms need an even, symmetric grid, got {axis!r}"
        )


def _y_count(axis: Axis) -> int:
    count = math.ceil(2.0 * math.pi / axis.step ** 2)
    count += count % 2
    return max(2 * axis.count, count)


def _t_axis(axis: Axis, oversampling: int) -> Axis:
    count = oversampling * axis.count
    return Axis(-(count // 2) * axis.step, axis.step, count)


def char_axes(axis: Axis, oversampling: int = Config.char_oversampling) -> Tuple[Axis, Axis]:
    """
    The (x, y) axes of the characteristic function of a kernel on `axis`.

    :param axis: Kernel position axis, even count and symmetric
    :param oversampling: Zero-padding factor P >= 2 of the t lines
    """
    _require_lattice(axis)
    if oversampling < 2:
        raise InvalidGridException(message=f"Oversampling must be at least 2, got {oversampling}")
    y_count = _y_count(axis)
    y_axis = Axis(-(y_count // 2) * axis.step, axis.step, y_count)
    return _t_axis(axis, oversampling).conjugate(), y_axis


def _lattice_rows(x_axis: Axis, y_axis: Axis) -> Tuple[np.ndarray, np.ndarray]:
    # Row index r = y/s, and the phase exp(i x s/2) of the half-shifted t nodes on odd rows
    rows = np.arange(y_axis.count) - y_axis.count // 2
    shift = np.exp(0.5j * x_axis.samples * y_axis.step)[:, None]
    odd = (rows % 2 != 0)[None, :]
    return rows, np.where(odd, shift, 1.0)


def _warn_on_edge_mass(kernel: DensityKernel):
    rho = np.abs(kernel.rho)
    peak = rho.max()
    if peak == 0:
        return
    edge = max(rho[0].max(), rho[-1].max(), rho[:, 0].max(), rho[:, -1].max())
    if edge > 1e-6 * peak:
        logger.warning(
            f"Kernel reaches {edge / peak:.1e} of its peak on the grid boundary, "
            "rotated supports will leave the grid"
        )


def char_from_kernel(kernel: DensityKernel, oversampling: int = Config.char_oversampling) -> CharFunction:
    """
    f(x, y) = integral exp(i x t) rho(t + y/2, t - y/2) dt, with no prefactor.

    :param kernel: Kernel on an even, symmetric grid
    :param oversampling: Zero-padding factor of the t lines

    Example::

        cf = char_from_kernel(pure_kernel(fock_state(0, make_axis(8.0, 256))))
    """
    axis = kernel.q_axis
    x_axis, y_axis = char_axes(axis, oversampling)
    t_axis = _t_axis(axis, oversampling)
    _warn_on_edge_mass(kernel)

    n = axis.count
    offset = n // 2 - t_axis.count // 2
    rows, shift = _lattice_rows(x_axis, y_axis)
    j = np.arange(t_axis.count)[:, None]
    first = j + offset + (rows[None, :] + 1) // 2
    second = j + offset - rows[None, :] // 2
    inside = (first >= 0) & (first < n) & (second >= 0) & (second < n)

    lines = np.where(
        inside,
        kernel.rho[np.clip(first, 0, n - 1), np.clip(second, 0, n - 1)],
        0.0,
    )
    logger.debug(f"Characteristic lattice {t_axis.count}x{y_axis.count} for a {n}-node kernel")

    transformed = partial_ft(SampledField([t_axis, y_axis], lines), [0], sign=+1, out_axes={0: x_axis})
    return CharFunction(transformed.with_data(transformed.data * shift), oversampling)


def kernel_from_char(cf: CharFunction) -> DensityKernel:
    """
    rho(q, q') = (1/2pi) integral exp(-i x t) f(x, y) dx at t = (q + q')/2,
    y = q - q'. Exact inverse of `char_from_kernel` on its lattice.

    :param cf: Characteristic function on the lattice of `char_axes`
    """
    axis = cf.source_axis()
    expected_x, expected_y = char_axes(axis, cf.oversampling)
    if not (cf.x_axis.matches(expected_x) and cf.y_axis.matches(expected_y)):
        raise AxisMismatchException(
            message=f"{cf!r} is not on the characteristic lattice of {axis!r}"
        )

    t_axis = _t_axis(axis, cf.oversampling)
    rows, shift = _lattice_rows(cf.x_axis, cf.y_axis)
    lines = partial_ft(cf.field.with_data(cf.f / shift), [0], sign=-1, out_axes={0: t_axis})

    n = axis.count
    offset = n // 2 - t_axis.count // 2
    a, b = np.indices((n, n))
    difference = a - b
    rho = lines.data[a - offset - (difference + 1) // 2, difference + cf.y_axis.count // 2]
    return DensityKernel(SampledField([axis, axis], rho))


def wigner_from_char(cf: CharFunction) -> WignerFunction:
    """W(q, p) = (1/2pi) integral exp(i(qx + py)) f(x, y) dx dy"""
    transformed = continuous_ft(cf.field, sign=+1)
    return WignerFunction(transformed.with_data(transformed.data / (2.0 * math.pi)), cf.oversampling)


def char_from_wigner(w: WignerFunction) -> CharFunction:
    transformed = continuous_ft(w.field, sign=-1)
    return CharFunction(transformed.with_data(transformed.data * (2.0 * math.pi)), w.oversampling)


def wigner_from_kernel(kernel: DensityKernel, oversampling: int = Config.char_oversampling) -> WignerFunction:
    return wigner_from_char(char_from_kernel(kernel, oversampling))


def _parity(data: np.ndarray, axis: Axis) -> np.ndarray:
    mirror = axis.mirror_index()
    shape = (axis.count,) + (1,) * (data.ndim - 1)
    return np.where((mirror >= 0).reshape(shape), data[np.maximum(mirror, 0)], 0.0)


def _chirp_transform(data: np.ndarray, axis: Axis, alpha: float) -> np.ndarray:
    # chirp(x) / sqrt(2 pi |sin|) * sum_q exp(-i q x / sin) chirp(q) data(q) dq, with
    # the sum over x/sin evaluated as a chirp z-transform
    sine = math.sin(alpha)
    cotangent = math.cos(alpha) / sine
    q = axis.samples
    shape = (axis.count,) + (1,) * (data.ndim - 1)

    chirp = np.exp(0.5j * cotangent * q ** 2).reshape(shape)
    u_step = axis.step / sine
    u = q / sine
    core = signal.czt(
        data * chirp,
        m=axis.count,
        w=np.exp(-1j * axis.step * u_step),
        a=np.exp(1j * axis.step * u[0]),
        axis=0,
    )
    phase = np.exp(-1j * axis.min * u).reshape(shape)
    return chirp * phase * core * (axis.step / math.sqrt(2.0 * math.pi * abs(sine)))


def _frft_array(data: np.ndarray, axis: Axis, alpha: float) -> np.ndarray:
    """
    Linear fractional Fourier action along dim 0 of `data`. Angles with
    |cot| > 1 go through alpha - pi/2 then pi/2, which agrees with the
    direct kernel up to a global phase.
    """
    alpha = math.remainder(alpha, 2.0 * math.pi)
    sine = math.sin(alpha)

    if abs(sine) < constants.singular_sine:
        if abs(alpha) < math.pi / 2:
            return np.array(data, dtype=np.complex128)
        return _parity(np.asarray(data, dtype=np.complex128), axis)

    if abs(math.cos(alpha)) > abs(sine):
        half = _chirp_transform(data, axis, alpha - math.pi / 2)
        return _chirp_transform(half, axis, math.pi / 2)

    return _chirp_transform(data, axis, alpha)


def frft(state: PureState, alpha: float) -> PureState:
    """
    Fractional Fourier transform of a wavefunction. The global phase is
    unspecified; the norm of the input is restored on the grid.

    :param state: Input wavefunction
    :param alpha: Rotation angle, any real

    Example::

        momentum = frft(fock_state(2, axis), math.pi / 2)
    """
    values = _frft_array(state.psi, state.axis, alpha)
    norm_in = state.norm()
    norm_out = float(np.sum(np.abs(values) ** 2) * state.axis.step)
    if norm_out > 0:
        logger.debug(f"frft({alpha}) norm drift {abs(norm_out - norm_in):.3e}")
        values = values * math.sqrt(norm_in / norm_out)
    return PureState(state.axis, values)


def rotate_kernel(kernel: DensityKernel, alpha: float) -> DensityKernel:
    """
    rho_alpha = F_alpha (x) F_-alpha [rho], i.e. A rho A^dagger for the
    fractional Fourier matrix A.

    :param kernel: Kernel to rotate
    :param alpha: Rotation angle
    """
    axis = kernel.q_axis
    left = _frft_array(kernel.rho, axis, alpha)
    rotated = _frft_array(left.conj().T, axis, alpha).conj().T
    return DensityKernel(kernel.field.with_data(rotated))


class TransformsService(Service):
    def char(self, kernel: DensityKernel) -> CharFunction:
        """
        Characteristic function of a kernel.

        Example::

          cf = client.transforms.char(kernel)
        """
        return char_from_kernel(kernel, self.client.oversampling)

    def kernel(self, cf: CharFunction) -> DensityKernel:
        return kernel_from_char(cf)

    def wigner(self, source) -> WignerFunction:
        """
        Wigner function of a kernel or a characteristic function.

        :param source: DensityKernel or CharFunction
        """
        if isinstance(source, DensityKernel):
            return wigner_from_kernel(source, self.client.oversampling)
        return wigner_from_char(source)

    def char_from_wigner(self, w: WignerFunction) -> CharFunction:
        return char_from_wigner(w)

    def frft(self, state: PureState, alpha: float) -> PureState:
        return frft(state, alpha)

    def rotate(self, kernel: DensityKernel, alpha: float) -> DensityKernel:
        return rotate_kernel(kernel, alpha)
