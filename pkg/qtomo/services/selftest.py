"""
selftest.py
====================================
The acceptance suite behind ``qtcli selftest``. Every check compares a
computed quantity with a closed form or with another route, on the default
rig (extent 8, count 256, 64 angles).
"""

import math
import os
from typing import Callable, List, NamedTuple, Optional

import numpy as np

from ..config import Config
from ..lib import constants, fileio
from ..lib.grid import SampledField, continuous_ft, integrate, make_axis
from ..lib.logger import SDKLogger
from ..lib.utils import ProgressBar, Utils
from . import fidelity, sobolev, states, tomography, transforms

logger = SDKLogger.getLogger(__name__)


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str


class Rig(object):
    """Lazily built states and transforms shared by the checks."""

    def __init__(self, extent: float, count: int, angles: int, threads: Optional[int]):
        self.axis = make_axis(extent, count)
        self.angles = tomography.uniform_angles(angles)
        self.threads = threads
        self._kernels = {}
        self._chars = {}

    def state(self, name: str) -> states.PureState:
        kind, _, value = name.partition(":")
        if kind == "fock":
            return states.fock_state(int(value), self.axis)
        return states.coherent_state(complex(value), self.axis)

    def kernel(self, name: str) -> states.DensityKernel:
        if name not in self._kernels:
            if name == "mix":
                self._kernels[name] = states.mix([(0.5, self.kernel("fock:0")), (0.5, self.kernel("fock:1"))])
            elif name == "mix:coherent":
                self._kernels[name] = states.mix([(0.3, self.kernel("fock:2")), (0.7, self.kernel("coherent:0.5"))])
            else:
                self._kernels[name] = states.pure_kernel(self.state(name))
        return self._kernels[name]

    def char(self, name: str) -> transforms.CharFunction:
        if name not in self._chars:
            self._chars[name] = transforms.char_from_kernel(self.kernel(name))
        return self._chars[name]


def _sup(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def check_fourier(rig: Rig) -> Check:
    rng = np.random.default_rng(7)
    field = SampledField([rig.axis, rig.axis], rng.normal(size=(rig.axis.count,) * 2) + 0j)
    back = continuous_ft(continuous_ft(field), sign=+1)
    roundtrip = Utils.relative_l2(back.data, field.data)

    psi = rig.state("fock:3").field
    spectrum = continuous_ft(psi)
    plancherel = abs(2 * math.pi * integrate(spectrum.with_data(np.abs(spectrum.data) ** 2)).real - 1.0)
    passed = roundtrip < 1e-12 and plancherel < 1e-10
    return Check("fourier", passed, f"roundtrip {roundtrip:.2e}, plancherel {plancherel:.2e}")


def check_baker(rig: Rig) -> Check:
    worst = 0.0
    for name in ("fock:0", "fock:1", "fock:2", "fock:3", "coherent:1"):
        kernel = rig.kernel(name)
        back = transforms.kernel_from_char(rig.char(name))
        worst = max(worst, Utils.relative_l2(back.rho, kernel.rho))
    return Check("baker roundtrip", worst < 1e-6, f"worst relative L2 {worst:.2e}")


def check_routes(rig: Rig) -> Check:
    names = ["fock:%d" % m for m in range(6)] + ["coherent:1", "mix"]
    worst = normalization = symmetry = 0.0
    full_turn = np.concatenate([rig.angles[:8], rig.angles[:8] + math.pi])
    mirror = rig.axis.mirror_index()
    inner = mirror >= 0

    for name in names:
        cf = rig.char(name)
        by_char = tomography.tomogram_from_char(cf, rig.angles, threads=rig.threads)
        by_wigner = tomography.tomogram_from_wigner(transforms.wigner_from_char(cf), rig.angles, threads=rig.threads)
        by_kernel = tomography.tomogram_from_rotated_kernel(rig.kernel(name), rig.angles, threads=rig.threads)
        worst = max(
            worst,
            _sup(by_char.omega, by_wigner.omega),
            _sup(by_char.omega, by_kernel.omega),
            _sup(by_wigner.omega, by_kernel.omega),
        )
        normalization = max(normalization, float(np.max(np.abs(by_char.normalization() - 1.0))))

        turned = tomography.tomogram_from_char(cf, full_turn, threads=rig.threads)
        for k in range(8):
            flipped = turned.omega[k + 8][inner]
            symmetry = max(symmetry, _sup(flipped, turned.omega[k][mirror[inner]]))

    passed = worst < 1e-3 and normalization < 1e-6 and symmetry < 1e-6
    return Check(
        "route equivalence",
        passed,
        f"max pairwise {worst:.2e}, normalization {normalization:.2e}, angle symmetry {symmetry:.2e}",
    )


def check_pure_states(rig: Rig) -> Check:
    angles = tomography.uniform_angles(8)
    worst = 0.0
    for m in range(4):
        state = rig.state(f"fock:{m}")
        rotated = tomography.tomogram_from_rotated_kernel(rig.kernel(f"fock:{m}"), angles)
        direct = tomography.tomogram_from_state(state, angles)
        worst = max(worst, _sup(rotated.omega, direct.omega))
    return Check("pure-state tomograms", worst < 1e-6, f"sup difference {worst:.2e}")


def check_gaussian(rig: Rig) -> Check:
    cf = rig.char("fock:0")
    tom = tomography.tomogram_from_char(cf, rig.angles, threads=rig.threads)
    x = tom.x_axis.samples
    tomogram_error = _sup(tom.omega, np.broadcast_to(np.exp(-(x ** 2)) / math.sqrt(math.pi), tom.omega.shape))

    w = transforms.wigner_from_char(cf)
    q, p = w.field.coordinate_grids()
    wigner_error = _sup(w.w, 2 * np.exp(-(q ** 2 + p ** 2)))

    mass = 0.0
    for name in ("fock:1", "coherent:1", "mix"):
        mass = max(mass, abs(integrate(transforms.wigner_from_char(rig.char(name)).field) - 2 * math.pi))

    passed = tomogram_error < 1e-6 and wigner_error < 1e-6 and mass < 1e-6
    return Check(
        "gaussian oracles",
        passed,
        f"tomogram {tomogram_error:.2e}, wigner {wigner_error:.2e}, wigner mass {mass:.2e}",
    )


def check_reconstruction(rig: Rig) -> Check:
    worst = trace = 0.0
    for name in ("fock:0", "fock:1", "fock:2", "fock:3", "mix"):
        tom = tomography.tomogram_from_char(rig.char(name), rig.angles, threads=rig.threads)
        kernel = tomography.kernel_from_tomogram(tom)
        worst = max(worst, Utils.relative_l2(kernel.rho, rig.kernel(name).rho))
        trace = max(trace, abs(kernel.trace() - 1.0))
    passed = worst < 1e-2 and trace < 1e-3
    return Check("reconstruction", passed, f"worst relative L2 {worst:.2e}, trace {trace:.2e}")


def check_transition(rig: Rig) -> Check:
    coarse = fidelity.calibrate_normalization(Config.calibration_extent, Config.calibration_count)
    fine = fidelity.calibrate_normalization(10.0, 320)
    drift = abs(fine.measured / coarse.measured - 1.0)

    names = [
        "fock:0", "fock:1", "fock:2", "fock:3",
        "coherent:0.5", "coherent:1", "coherent:1+0.5j", "coherent:1.5",
        "mix", "mix:coherent",
    ]
    kernels = [rig.kernel(name) for name in names]
    direct = fidelity.transition_matrix(kernels, fidelity.Route.DIRECT)
    char = fidelity.transition_matrix(kernels, fidelity.Route.CHARACTERISTIC, threads=rig.threads)
    tomo = fidelity.transition_matrix(kernels, fidelity.Route.TOMOGRAPHIC, rig.angles, rig.threads)
    char_gap = float(np.max(np.abs(direct - char)))
    tomo_gap = float(np.max(np.abs(direct - tomo)))

    overlap = abs(direct[0, names.index("coherent:1.5")] - math.exp(-1.5 ** 2))
    passed = drift < 1e-3 and char_gap < 1e-6 and tomo_gap < 5e-3 and overlap < 1e-7
    return Check(
        "transition probability",
        passed,
        f"constant {coarse.candidate} (drift {drift:.2e}), char gap {char_gap:.2e}, "
        f"tomographic gap {tomo_gap:.2e}, coherent overlap {overlap:.2e}",
    )


def check_regularity(rig: Rig) -> Check:
    verdicts = []
    for name in ("fock:0", "fock:1"):
        verdicts.append(sobolev.v_gate(rig.kernel(name))[0])
    box = sobolev.membership_report(states.box_state(1.0, rig.axis).field, nu=2.0)
    diverging = box.verdict is sobolev.Verdict.DIVERGING and box.growth_ratio > constants.diverging_ratio
    passed = all(verdicts) and diverging
    return Check("regularity", passed, f"fock gates {verdicts}, box {box.verdict.value} ({box.growth_ratio:.3g})")


def write_outputs(rig: Rig, workdir: str, threads: Optional[int]) -> List[str]:
    os.makedirs(workdir, exist_ok=True)
    kernel = rig.kernel("mix")
    cf = rig.char("mix")
    tom = tomography.tomogram_from_char(cf, rig.angles, threads=threads)
    digests = [
        fileio.write_output(os.path.join(workdir, "mix.qtf"), fileio.encode_field(kernel.field), replace=True),
        fileio.write_output(os.path.join(workdir, "mix-char.qtf"), fileio.encode_field(cf.field), replace=True),
        fileio.write_output(
            os.path.join(workdir, "mix.qtg"), fileio.encode_tomogram(tom.x_axis, tom.angles, tom.omega), replace=True
        ),
    ]
    return digests


def check_determinism(rig: Rig, workdir: Optional[str]) -> Check:
    cf = rig.char("mix")
    single = tomography.tomogram_from_char(cf, rig.angles, threads=1)
    pooled = tomography.tomogram_from_char(cf, rig.angles, threads=max(2, Config.default_concurrency))
    same = fileio.encode_tomogram(single.x_axis, single.angles, single.omega) == fileio.encode_tomogram(
        pooled.x_axis, pooled.angles, pooled.omega
    )
    detail = "tomogram bytes identical across thread counts" if same else "tomogram bytes differ across thread counts"
    if workdir:
        digests = write_outputs(rig, workdir, rig.threads)
        detail += ", digests " + " ".join(digests)
    return Check("determinism", same, detail)


CHECKS: List[Callable[[Rig], Check]] = [
    check_fourier,
    check_baker,
    check_routes,
    check_pure_states,
    check_gaussian,
    check_reconstruction,
    check_transition,
    check_regularity,
]


def run_selftest(
    workdir: Optional[str] = None,
    threads: Optional[int] = None,
    progress: bool = False,
    extent: float = Config.default_extent,
    count: int = Config.default_count,
    angles: int = Config.default_angles,
) -> List[Check]:
    """
    Run every acceptance check and return the results in a fixed order.

    :param workdir: Directory for the determinism outputs, skipped when None
    :param threads: Worker count
    :param progress: Show a progress bar
    """
    rig = Rig(extent, count, angles, threads)
    results = []
    with ProgressBar("selftest", len(CHECKS) + 1, progress) as bar:
        for check in CHECKS:
            result = check(rig)
            logger.info(f"{result.name}: {'pass' if result.passed else 'FAIL'} ({result.detail})")
            results.append(result)
            bar.update()
        results.append(check_determinism(rig, workdir))
        bar.update()
    return results
