"""
sobolev.py
====================================
Discrete diagnostics for membership in W_2^nu and in
V = W_2^{n+1} intersected with F[W_2^{n+1}].

A finite grid cannot decide membership, so `membership_report` follows the
trend of the seminorm over nested refinement levels cut from the given
field. Level l of K crops the field to extent E / sqrt(2)^(K-1-l) and keeps
frequencies below pi / (s * sqrt(2)^(K-1-l)), so each finer level has
sqrt(2) more extent and sqrt(2) more bandwidth.
"""

import enum
import json
import math
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from ..config import Config
from ..lib import constants
from ..lib.exceptions import InvalidGridException
from ..lib.grid import Axis, SampledField, continuous_ft
from ..lib.logger import SDKLogger
from ..lib.service import Service
from ..lib.utils import ProgressBar
from .states import DensityKernel

logger = SDKLogger.getLogger(__name__)


class Verdict(enum.Enum):
    STABLE = "stable"
    DIVERGING = "diverging"
    INCONCLUSIVE = "inconclusive"


class RegularityReport(NamedTuple):
    nu: float
    norm_estimates: List[Tuple[int, float]]
    fourier_side_estimates: List[Tuple[int, float]]
    verdict: Verdict
    fourier_verdict: Verdict
    growth_ratio: float
    fourier_growth_ratio: float

    @property
    def stable(self) -> bool:
        return self.verdict is Verdict.STABLE and self.fourier_verdict is Verdict.STABLE

    def json_lines(self) -> List[str]:
        lines = []
        for side, estimates, verdict, ratio in (
            ("direct", self.norm_estimates, self.verdict, self.growth_ratio),
            ("fourier", self.fourier_side_estimates, self.fourier_verdict, self.fourier_growth_ratio),
        ):
            for count, value in estimates:
                lines.append(json.dumps({"side": side, "nu": self.nu, "count": count, "seminorm": value}))
            lines.append(
                json.dumps({"side": side, "nu": self.nu, "verdict": verdict.value, "growth_ratio": ratio})
            )
        return lines


def _check_nu(nu: float):
    if not nu >= 0:
        raise InvalidGridException(message=f"Sobolev order must be non-negative, got {nu}")


def _weighted_spectrum(field: SampledField, nu: float) -> Tuple[SampledField, np.ndarray, np.ndarray]:
    spectrum = continuous_ft(field)
    radius2 = sum(grid ** 2 for grid in spectrum.coordinate_grids())
    weight = radius2 ** nu if nu > 0 else np.ones_like(radius2)
    return spectrum, np.abs(spectrum.data) ** 2 * weight, radius2


def sobolev_seminorm(field: SampledField, nu: float) -> float:
    """
    Integral of |xi|^(2 nu) |F[f](xi)|^2 over the full forward transform.

    :param field: 1-D or 2-D field
    :param nu: Order, >= 0

    Example::

        sobolev_seminorm(fock_state(0, axis).field, 0.0)  # 1/(2pi)
    """
    _check_nu(nu)
    spectrum, density, _ = _weighted_spectrum(field, nu)
    return float(np.sum(density) * spectrum.cell_volume)


def sobolev_band_split(field: SampledField, nu: float, radius: float = 1.0) -> Tuple[float, float]:
    """
    The seminorm split into the parts with |xi| < radius and |xi| >= radius.

    :param field: 1-D or 2-D field
    :param nu: Order, >= 0
    :param radius: Split radius in frequency
    """
    _check_nu(nu)
    spectrum, density, radius2 = _weighted_spectrum(field, nu)
    inner = radius2 < radius ** 2
    cell = spectrum.cell_volume
    return float(np.sum(density[inner]) * cell), float(np.sum(density[~inner]) * cell)


def _crop(field: SampledField, shrink: float) -> SampledField:
    axes = []
    selection = []
    for axis in field.axes:
        extent = axis.count * axis.step / 2.0 / shrink
        samples = axis.samples
        keep = np.nonzero((samples >= -extent - 1e-9 * axis.step) & (samples < extent - 1e-9 * axis.step))[0]
        if keep.size < 2:
            raise InvalidGridException(message=f"Refinement level leaves fewer than 2 nodes on {axis!r}")
        axes.append(Axis(samples[keep[0]], axis.step, keep.size))
        selection.append(slice(keep[0], keep[-1] + 1))
    return SampledField(axes, field.data[tuple(selection)])


def _level_seminorm(field: SampledField, nu: float, shrink: float) -> Tuple[int, float]:
    cropped = _crop(field, shrink)
    spectrum, density, _ = _weighted_spectrum(cropped, nu)
    band = np.ones(density.shape, dtype=bool)
    for grid, axis in zip(spectrum.coordinate_grids(), field.axes):
        band &= np.abs(grid) < math.pi / (axis.step * shrink)
    return cropped.axes[0].count, float(np.sum(density[band]) * spectrum.cell_volume)


def _verdict(values: List[float]) -> Tuple[Verdict, float]:
    ratios = []
    for previous, current in zip(values, values[1:]):
        if previous == 0:
            ratios.append(1.0 if current == 0 else math.inf)
        else:
            ratios.append(current / previous)

    final = ratios[-1]
    if all(abs(ratio - 1.0) <= constants.stable_band for ratio in ratios):
        return Verdict.STABLE, final
    if final > constants.diverging_ratio:
        return Verdict.DIVERGING, final
    return Verdict.INCONCLUSIVE, final


def _estimates(field: SampledField, nu: float, refinements: int, bar: ProgressBar) -> List[Tuple[int, float]]:
    estimates = []
    for level in range(refinements):
        shrink = math.sqrt(2.0) ** (refinements - 1 - level)
        estimates.append(_level_seminorm(field, nu, shrink))
        bar.update()
    return estimates


def membership_report(
    field: SampledField,
    nu: float,
    refinements: int = Config.refinements,
    progress: bool = False,
) -> RegularityReport:
    """
    Refinement trend of the seminorm of `field` and of its Fourier transform.

    :param field: 1-D or 2-D field that resolves the function it samples
    :param nu: Order, >= 0
    :param refinements: Number of levels, >= 3
    :param progress: Show a progress bar
    """
    _check_nu(nu)
    if refinements < constants.minimum_refinements:
        raise InvalidGridException(
            message=f"Membership needs at least {constants.minimum_refinements} refinements, got {refinements}"
        )

    with ProgressBar("regularity", 2 * refinements, progress) as bar:
        direct = _estimates(field, nu, refinements, bar)
        fourier = _estimates(continuous_ft(field), nu, refinements, bar)

    verdict, ratio = _verdict([value for _, value in direct])
    fourier_verdict, fourier_ratio = _verdict([value for _, value in fourier])
    logger.debug(f"nu={nu}: direct {verdict.value} ({ratio:.4g}), fourier {fourier_verdict.value} ({fourier_ratio:.4g})")
    return RegularityReport(nu, direct, fourier, verdict, fourier_verdict, ratio, fourier_ratio)


def v_gate_field(field: SampledField, refinements: int = Config.refinements) -> Tuple[bool, RegularityReport]:
    """
    Membership in V for a field over (R^n)^2: nu = n + 1 on both sides.

    :param field: 2-D field
    :param refinements: Number of levels
    """
    if field.ndim != 2:
        raise InvalidGridException(message=f"The V gate takes 2-D fields, got {field.ndim} axes")
    report = membership_report(field, nu=2.0, refinements=refinements)
    return report.stable, report


def v_gate(kernel: DensityKernel, refinements: int = Config.refinements) -> Tuple[bool, RegularityReport]:
    """
    Whether the kernel passes the regularity hypothesis of the tomogram
    formulas. A False result is a warning for callers, not an error.

    :param kernel: Density kernel
    :param refinements: Number of levels
    """
    return v_gate_field(kernel.field, refinements)


class SobolevService(Service):
    def seminorm(self, field: SampledField, nu: float) -> float:
        return sobolev_seminorm(field, nu)

    def report(self, field: SampledField, nu: float, refinements: Optional[int] = None) -> RegularityReport:
        """
        Membership report on the client's refinement count.

        Example::

          client.sobolev.report(kernel.field, nu=2.0).verdict
        """
        return membership_report(field, nu, refinements or Config.refinements, self.progress)

    def v_gate(self, kernel: DensityKernel) -> Tuple[bool, RegularityReport]:
        passed, report = v_gate(kernel)
        if not passed:
            logger.warning(
                f"Kernel fails the regularity gate (direct {report.verdict.value}, fourier {report.fourier_verdict.value}), "
                "tomogram formulas are not guaranteed"
            )
        return passed, report
