import os
from typing import Optional, Sequence

from ..lib import fileio
from ..lib.exceptions import AxisMismatchException
from ..lib.grid import SampledField
from ..lib.logger import SDKLogger
from ..lib.service import Service
from .states import DensityKernel, PureState, pure_kernel
from .tomography import Tomogram
from .transforms import CharFunction, WignerFunction

logger = SDKLogger.getLogger(__name__)


def csv_path(path: str) -> str:
    root, _ = os.path.splitext(path)
    return root + ".csv"


class FilesService(Service):
    """QTF/QTG files for every domain type. Writes follow the output policy of
    `fileio.write_output`: identical files are skipped, different ones are
    only replaced when asked to.
    """

    def write_field(
        self,
        path: str,
        field: SampledField,
        replace: bool = False,
        csv: bool = False,
        names: Optional[Sequence[str]] = None,
    ) -> str:
        """
        Write a field as QTF, and as CSV next to it when `csv` is set.

        :param path: Destination .qtf file
        :param field: Field to write
        :param replace: Replace an existing file with different contents
        :param csv: Also export one row per grid point
        :param names: Coordinate column names for the CSV export

        Example::

          digest = client.files.write_field("vacuum.qtf", state.field)
        """
        digest = fileio.write_field(path, field, replace=replace)
        if csv:
            fileio.write_csv(csv_path(path), fileio.field_csv_rows(field, names))
        return digest

    def write(self, path: str, value, replace: bool = False, csv: bool = False) -> str:
        """Write any domain object: state, kernel, characteristic or Wigner function, or tomogram."""
        if isinstance(value, Tomogram):
            return self.write_tomogram(path, value, replace=replace, csv=csv)
        names = {
            PureState: ("q",),
            DensityKernel: ("q", "q_prime"),
            CharFunction: ("x", "y"),
            WignerFunction: ("q", "p"),
        }.get(type(value))
        return self.write_field(path, value.field, replace=replace, csv=csv, names=names)

    def read_field(self, path: str) -> SampledField:
        return fileio.read_field(path)

    def read_state(self, path: str) -> PureState:
        field = self.read_field(path)
        if field.ndim != 1:
            raise AxisMismatchException(message=f"{path} holds a {field.ndim}-D field, expected a wavefunction")
        return PureState(field.axes[0], field.data)

    def read_kernel(self, path: str) -> DensityKernel:
        """
        Read a kernel; a 1-D file is read as a pure state and turned into its kernel.

        :param path: QTF file
        """
        field = self.read_field(path)
        if field.ndim == 1:
            logger.info(f"{path} holds a wavefunction, using its pure kernel")
            return pure_kernel(PureState(field.axes[0], field.data))
        return DensityKernel(field)

    def read_char(self, path: str) -> CharFunction:
        return CharFunction(self.read_field(path), self.client.oversampling)

    def read_wigner(self, path: str) -> WignerFunction:
        return WignerFunction(self.read_field(path), self.client.oversampling)

    def write_tomogram(self, path: str, tom: Tomogram, replace: bool = False, csv: bool = False) -> str:
        payload = fileio.encode_tomogram(tom.x_axis, tom.angles, tom.omega)
        digest = fileio.write_output(path, payload, replace=replace)
        if csv:
            fileio.write_csv(csv_path(path), fileio.tomogram_csv_rows(tom.x_axis, tom.angles, tom.omega))
        return digest

    def read_tomogram(self, path: str) -> Tomogram:
        x_axis, angles, omega = fileio.decode_tomogram(fileio.read_payload(path))
        return Tomogram(x_axis, angles, omega)
