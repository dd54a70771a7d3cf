"""
client.py
====================================
The core module of qtomo
"""

from typing import Optional

import numpy as np

from .config import Config
from .lib import ClientVersion
from .lib.grid import Axis, make_axis


class TomographyClient(object):
    """Holds the grid, angle and threading defaults shared by every service.

    :param extent: Half width of the position grid
    :param count: Nodes of the position grid, even
    :param angles: Number of uniform angles in [0, pi)
    :param threads: Worker count for per-angle loops
    :param progress: Show progress bars
    :param oversampling: Characteristic-function lattice oversampling

    Example::

        client = TomographyClient(extent=8.0, count=256)
        kernel = client.states.kernel(client.states.fock(1))
        tom = client.tomography.from_kernel(kernel)
    """

    def __init__(
        self,
        extent: float = Config.default_extent,
        count: int = Config.default_count,
        angles: int = Config.default_angles,
        threads: int = Config.default_concurrency,
        progress: bool = False,
        oversampling: int = Config.char_oversampling,
    ):
        self.extent = extent
        self.count = count
        self.angles = angles
        self.threads = threads
        self.progress = progress
        self.oversampling = oversampling

    @property
    def axis(self) -> Axis:
        return make_axis(self.extent, self.count)

    def angle_grid(self, count: Optional[int] = None) -> np.ndarray:
        from .services.tomography import uniform_angles

        return uniform_angles(count or self.angles)

    def _version(self):
        return ClientVersion.version()

    @property
    def states(self):
        from .services import StatesService

        return StatesService(self)

    @property
    def transforms(self):
        from .services import TransformsService

        return TransformsService(self)

    @property
    def tomography(self):
        from .services import TomographyService

        return TomographyService(self)

    @property
    def fidelity(self):
        from .services import FidelityService

        return FidelityService(self)

    @property
    def sobolev(self):
        from .services import SobolevService

        return SobolevService(self)

    @property
    def files(self):
        from .services import FilesService

        return FilesService(self)
