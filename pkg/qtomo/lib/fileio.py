"""
fileio.py
====================================
Binary field files (QTF), tomogram files (QTG), CSV export, and the output
policy shared by every writer.

QTF layout, little-endian::

    b"QTF1" | u32 ndim | ndim x (f64 min, f64 step, u64 count) | u8 dtype | payload

dtype 0 is f64, dtype 1 is complex f64 interleaved (re, im). The payload is
row-major over the axes.

QTG layout, little-endian::

    b"QTG1" | u64 angle count | f64 angles | f64 min, f64 step, u64 count | f64 payload

The QTG payload holds one row of x samples per angle.
"""

import csv
import os
import struct
from typing import Optional, Sequence, Tuple

import numpy as np
from send2trash import send2trash

from .constants import dtype_codes, field_magic, tomogram_magic
from .exceptions import FieldFormatException, OutputExistsException
from .grid import Axis, SampledField
from .logger import SDKLogger
from .utils import FormatTypes, Utils

logger = SDKLogger.getLogger(__name__)

_axis_record = struct.Struct("<ddQ")


def _pack_axis(axis: Axis) -> bytes:
    return _axis_record.pack(axis.min, axis.step, axis.count)


def _unpack_axis(payload: bytes, offset: int) -> Tuple[Axis, int]:
    try:
        minimum, step, count = _axis_record.unpack_from(payload, offset)
    except struct.error:
        raise FieldFormatException(message="Truncated axis record")
    return Axis(minimum, step, count), offset + _axis_record.size


def encode_field(field: SampledField) -> bytes:
    """
    Serialize a field to QTF bytes. Fields whose imaginary part is exactly
    zero are stored as f64.

    :param field: Field to encode
    """
    parts = [field_magic, struct.pack("<I", field.ndim)]
    parts.extend(_pack_axis(axis) for axis in field.axes)

    if not np.any(field.data.imag):
        parts.append(struct.pack("<B", dtype_codes["f64"]))
        parts.append(np.ascontiguousarray(field.data.real, dtype="<f8").tobytes())
    else:
        parts.append(struct.pack("<B", dtype_codes["c128"]))
        parts.append(np.ascontiguousarray(field.data, dtype="<c16").tobytes())

    return b"".join(parts)


def decode_field(payload: bytes) -> SampledField:
    """
    Parse QTF bytes back into a field.

    :param payload: Bytes as produced by `encode_field`
    """
    if payload[:4] != field_magic:
        raise FieldFormatException(message=f"Bad magic {payload[:4]!r}, expected {field_magic!r}")
    try:
        (ndim,) = struct.unpack_from("<I", payload, 4)
    except struct.error:
        raise FieldFormatException(message="Truncated header")
    if ndim not in (1, 2):
        raise FieldFormatException(message=f"Unsupported dimension count {ndim}")

    offset = 8
    axes = []
    for _ in range(ndim):
        axis, offset = _unpack_axis(payload, offset)
        axes.append(axis)

    if offset >= len(payload):
        raise FieldFormatException(message="Missing dtype byte")
    dtype_code = payload[offset]
    offset += 1

    if dtype_code == dtype_codes["f64"]:
        dtype = np.dtype("<f8")
    elif dtype_code == dtype_codes["c128"]:
        dtype = np.dtype("<c16")
    else:
        raise FieldFormatException(message=f"Unknown dtype code {dtype_code}")

    count = int(np.prod([axis.count for axis in axes]))
    expected = count * dtype.itemsize
    if len(payload) - offset != expected:
        raise FieldFormatException(
            message=f"Payload holds {len(payload) - offset} bytes, axes need {expected}"
        )

    data = np.frombuffer(payload, dtype=dtype, count=count, offset=offset)
    return SampledField(axes, data)


def encode_tomogram(x_axis: Axis, angles: Sequence[float], omega: np.ndarray) -> bytes:
    """
    Serialize a tomogram to QTG bytes.

    :param x_axis: Position axis
    :param angles: Angle list
    :param omega: Real samples of shape (len(angles), x_axis.count)
    """
    angles = np.asarray(angles, dtype="<f8")
    omega = np.ascontiguousarray(omega, dtype="<f8")
    if omega.shape != (angles.size, x_axis.count):
        raise FieldFormatException(
            message=f"Tomogram samples have shape {omega.shape}, expected {(angles.size, x_axis.count)}"
        )
    return b"".join(
        [
            tomogram_magic,
            struct.pack("<Q", angles.size),
            angles.tobytes(),
            _pack_axis(x_axis),
            omega.tobytes(),
        ]
    )


def decode_tomogram(payload: bytes) -> Tuple[Axis, np.ndarray, np.ndarray]:
    """
    Parse QTG bytes into ``(x_axis, angles, omega)``.

    :param payload: Bytes as produced by `encode_tomogram`
    """
    if payload[:4] != tomogram_magic:
        raise FieldFormatException(message=f"Bad magic {payload[:4]!r}, expected {tomogram_magic!r}")
    try:
        (angle_count,) = struct.unpack_from("<Q", payload, 4)
    except struct.error:
        raise FieldFormatException(message="Truncated header")

    offset = 12
    if len(payload) < offset + 8 * angle_count:
        raise FieldFormatException(message="Truncated angle list")
    angles = np.frombuffer(payload, dtype="<f8", count=angle_count, offset=offset).copy()
    offset += 8 * angle_count

    x_axis, offset = _unpack_axis(payload, offset)
    expected = 8 * angle_count * x_axis.count
    if len(payload) - offset != expected:
        raise FieldFormatException(
            message=f"Payload holds {len(payload) - offset} bytes, tomogram needs {expected}"
        )
    omega = np.frombuffer(payload, dtype="<f8", offset=offset).reshape(angle_count, x_axis.count).copy()
    return x_axis, angles, omega


def write_output(path: str, payload: bytes, replace: bool = False) -> str:
    """
    Write `payload` to `path` and return its xxhash64 digest.

    An existing file with the same checksum is left as is. One with a
    different checksum is sent to the trash and rewritten when `replace` is
    True, otherwise `OutputExistsException` is raised.

    :param path: Destination file
    :param payload: Bytes to write
    :param replace: Allow replacing a different existing file
    """
    digest = Utils.calculate_bytes_hash(payload)

    if os.path.isfile(path):
        disk_digest = Utils.calculate_hash(path)
        logger.debug(f"Output: {digest}; Disk {disk_digest}")
        if disk_digest == digest:
            logger.info(f"{path} already exists and checksum matches. Skipping write.")
            return digest
        if not replace:
            raise OutputExistsException(
                message=f"{path} already exists with a different checksum, pass replace=True to overwrite it."
            )
        logger.warning(f"{path} exists with a different checksum and replace=True, moving it to the trash.")
        send2trash(path)

    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "wb") as handle:
        handle.write(payload)

    logger.info(f"Wrote {path} ({Utils.format_value(len(payload), type=FormatTypes.SIZE)})")
    return digest


def read_payload(path: str) -> bytes:
    with open(path, "rb") as handle:
        return handle.read()


def write_field(path: str, field: SampledField, replace: bool = False) -> str:
    return write_output(path, encode_field(field), replace=replace)


def read_field(path: str) -> SampledField:
    return decode_field(read_payload(path))


def field_csv_rows(field: SampledField, names: Optional[Sequence[str]] = None):
    names = list(names or [f"x{dim}" for dim in range(field.ndim)])
    yield names + ["re", "im"]
    grids = field.coordinate_grids()
    for index in np.ndindex(*field.shape):
        value = field.data[index]
        yield [repr(float(grid[index])) for grid in grids] + [repr(float(value.real)), repr(float(value.imag))]


def tomogram_csv_rows(x_axis: Axis, angles: Sequence[float], omega: np.ndarray):
    yield ["x", "alpha", "omega"]
    samples = x_axis.samples
    for row, alpha in enumerate(angles):
        for column, x in enumerate(samples):
            yield [repr(float(x)), repr(float(alpha)), repr(float(omega[row, column]))]


def write_csv(path: str, rows) -> None:
    """
    Write CSV rows as produced by `field_csv_rows` or `tomogram_csv_rows`.

    :param path: Destination file
    :param rows: Iterable of rows, header first
    """
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        for row in rows:
            writer.writerow(row)
