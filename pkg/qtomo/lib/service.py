from typing import TYPE_CHECKING, Optional

from .grid import Axis, make_axis

if TYPE_CHECKING:
    from ..client import TomographyClient


class Service(object):
    def __init__(self, client: "TomographyClient"):
        self.client = client

    @property
    def threads(self) -> int:
        return self.client.threads

    def axis(self, extent: Optional[float] = None, count: Optional[int] = None) -> Axis:
        """The client's default position axis, with optional overrides."""
        return make_axis(
            self.client.extent if extent is None else extent,
            self.client.count if count is None else count,
        )

    def angles(self, count: Optional[int] = None):
        return self.client.angle_grid(count)

    @property
    def progress(self) -> bool:
        return self.client.progress
