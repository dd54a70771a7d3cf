"""
states.py
====================================
Analytic test states and density kernels. Units are hbar = m = omega = 1.
"""

import math
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from ..lib import constants
from ..lib.exceptions import AxisMismatchException, StateConstructionException
from ..lib.grid import Axis, SampledField
from ..lib.logger import SDKLogger
from ..lib.service import Service

logger = SDKLogger.getLogger(__name__)


class PureState(object):
    """A wavefunction psi(q) sampled on a position axis.

    :param axis: Position axis
    :param psi: Complex samples, one per node of `axis`
    """

    def __init__(self, axis: Axis, psi):
        self.field = SampledField([axis], psi)

    @property
    def axis(self) -> Axis:
        return self.field.axes[0]

    @property
    def psi(self) -> np.ndarray:
        return self.field.data

    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.axis.step)

    def inner(self, other: "PureState") -> complex:
        """<self|other> by quadrature."""
        if not self.axis.matches(other.axis):
            raise AxisMismatchException(message=f"States live on {self.axis!r} and {other.axis!r}")
        return complex(np.sum(np.conj(self.psi) * other.psi) * self.axis.step)

    def renormalized(self) -> "PureState":
        norm = self.norm()
        if norm == 0:
            raise StateConstructionException(message="Cannot normalize a state with zero norm on this grid")
        drift = abs(norm - 1.0)
        if drift > 0:
            logger.debug(f"Renormalizing state, grid norm drift {drift:.3e}")
        return PureState(self.axis, self.psi / math.sqrt(norm))

    def __repr__(self):
        return f"PureState(axis={self.axis!r})"


class DensityKernel(object):
    """A kernel rho(q, q') on equal position axes. `hermitian` is only True
    when verified to 1e-10. Positivity is never enforced.

    :param field: 2-D field over (q, q')
    :param trace_hint: Precomputed trace, integrated from the diagonal when omitted
    """

    def __init__(self, field: SampledField, trace_hint: Optional[complex] = None):
        if field.ndim != 2 or not field.axes[0].matches(field.axes[1]):
            raise AxisMismatchException(message=f"Kernels need two equal axes, got {field.axes!r}")
        self.field = field
        self.trace_hint = complex(self.trace() if trace_hint is None else trace_hint)

    @classmethod
    def from_array(cls, axis: Axis, rho) -> "DensityKernel":
        return cls(SampledField([axis, axis], rho))

    @property
    def q_axis(self) -> Axis:
        return self.field.axes[0]

    @property
    def qprime_axis(self) -> Axis:
        return self.field.axes[1]

    @property
    def rho(self) -> np.ndarray:
        return self.field.data

    @property
    def hermitian(self) -> bool:
        return self.field.is_hermitian_kernel

    def diagonal(self) -> np.ndarray:
        return np.diagonal(self.rho).copy()

    def trace(self) -> complex:
        return complex(np.sum(np.diagonal(self.rho)) * self.q_axis.step)

    def apply(self, state: PureState) -> PureState:
        """(rho psi)(q) = integral rho(q, q') psi(q') dq'"""
        if not self.q_axis.matches(state.axis):
            raise AxisMismatchException(message=f"Kernel on {self.q_axis!r}, state on {state.axis!r}")
        return PureState(state.axis, self.rho @ state.psi * self.q_axis.step)

    def scaled(self, factor: complex) -> "DensityKernel":
        return DensityKernel(self.field.with_data(self.rho * factor), self.trace_hint * factor)

    def __repr__(self):
        return f"DensityKernel(axis={self.q_axis!r}, trace={self.trace_hint:.6g}, hermitian={self.hermitian})"


def _hermite_functions(m: int, q: np.ndarray) -> np.ndarray:
    current = np.pi ** -0.25 * np.exp(-(q ** 2) / 2.0)
    if m == 0:
        return current
    previous, current = current, math.sqrt(2.0) * q * current
    for k in range(1, m):
        previous, current = current, (
            math.sqrt(2.0 / (k + 1)) * q * current - math.sqrt(k / (k + 1)) * previous
        )
    return current


def fock_state(m: int, axis: Axis) -> PureState:
    """
    The m-th harmonic oscillator eigenstate, via the Hermite function
    recurrence, renormalized on the grid.

    :param m: Excitation number, 0 <= m <= 60
    :param axis: Position axis

    Example::

        vacuum = fock_state(0, make_axis(8.0, 256))
    """
    if int(m) != m or m < 0:
        raise StateConstructionException(message=f"Fock index must be a non-negative integer, got {m}")
    if m > constants.max_fock_index:
        raise StateConstructionException(
            message=f"Fock index {m} exceeds the recurrence limit {constants.max_fock_index}"
        )
    if m * axis.step ** 2 > 1.0:
        logger.warning(f"Grid step {axis.step} is too coarse to resolve Fock state {m}")

    return PureState(axis, _hermite_functions(int(m), axis.samples)).renormalized()


def coherent_state(alpha: complex, axis: Axis) -> PureState:
    """
    Coherent state |alpha>, a displaced vacuum centred at sqrt(2) Re(alpha).

    :param alpha: Complex amplitude
    :param axis: Position axis
    """
    alpha = complex(alpha)
    center = math.sqrt(2.0) * alpha.real
    extent = axis.count * axis.step / 2.0

    if math.sqrt(2.0) * abs(alpha) > extent / 2.0:
        logger.warning(f"Coherent state alpha={alpha} sits near the grid boundary (extent {extent})")

    # |psi|^2 is a unit Gaussian around `center`
    outside = 0.5 * special.erfc(center - axis.min) + 0.5 * special.erfc(axis.max - center)
    if outside > constants.coherent_mass_tolerance:
        raise StateConstructionException(
            message=f"Coherent state alpha={alpha} leaves {outside:.2e} of its mass outside the grid"
        )

    q = axis.samples
    psi = np.pi ** -0.25 * np.exp(
        -((q - center) ** 2) / 2.0
        + 1j * math.sqrt(2.0) * alpha.imag * q
        - 1j * alpha.real * alpha.imag
    )
    return PureState(axis, psi).renormalized()


def box_state(halfwidth: float, axis: Axis) -> PureState:
    """
    Flat state 1/sqrt(2*halfwidth) on |q| <= halfwidth. Nodes exactly on the
    edge carry half weight, so the grid norm matches the continuum one.

    :param halfwidth: Half width, 0 < halfwidth < extent
    :param axis: Position axis
    """
    extent = axis.count * axis.step / 2.0
    if not 0 < halfwidth < extent:
        raise StateConstructionException(message=f"Box half width must lie in (0, {extent}), got {halfwidth}")

    q = axis.samples
    distance = np.abs(q) - halfwidth
    edge = np.abs(distance) <= 1e-9 * axis.step
    psi = np.where(distance < 0, 1.0, 0.0)
    psi[edge] = math.sqrt(0.5)
    return PureState(axis, psi / math.sqrt(2.0 * halfwidth)).renormalized()


def pure_kernel(state: PureState) -> DensityKernel:
    """rho(q, q') = psi(q) conj(psi(q'))"""
    rho = np.outer(state.psi, np.conj(state.psi))
    return DensityKernel(SampledField([state.axis, state.axis], rho))


def mix(parts: Iterable[Tuple[float, DensityKernel]], allow_negative: bool = False) -> DensityKernel:
    """
    Weighted sum of kernels.

    :param parts: (weight, kernel) pairs
    :param allow_negative: Accept negative weights, for non-convex combinations
    """
    parts = list(parts)
    if not parts:
        raise StateConstructionException(message="A mixture needs at least one component")

    axis = parts[0][1].q_axis
    rho = np.zeros((axis.count, axis.count), dtype=np.complex128)
    trace = 0j
    for weight, kernel in parts:
        if weight < 0 and not allow_negative:
            raise StateConstructionException(message=f"Negative mixture weight {weight}")
        if not kernel.q_axis.matches(axis):
            raise AxisMismatchException(message=f"Mixture components live on {axis!r} and {kernel.q_axis!r}")
        rho = rho + weight * kernel.rho
        trace += weight * kernel.trace_hint

    return DensityKernel(SampledField([axis, axis], rho), trace)


class StatesService(Service):
    def fock(self, m: int, axis: Optional[Axis] = None) -> PureState:
        """
        Fock state on the client's grid.

        :param m: Excitation number

        Example::

          client.states.fock(3)
        """
        return fock_state(m, axis or self.axis())

    def coherent(self, alpha: complex, axis: Optional[Axis] = None) -> PureState:
        return coherent_state(alpha, axis or self.axis())

    def box(self, halfwidth: float, axis: Optional[Axis] = None) -> PureState:
        return box_state(halfwidth, axis or self.axis())

    def kernel(self, state: PureState) -> DensityKernel:
        return pure_kernel(state)

    def mix(self, parts: Sequence[Tuple[float, DensityKernel]], allow_negative: bool = False) -> DensityKernel:
        return mix(parts, allow_negative=allow_negative)
