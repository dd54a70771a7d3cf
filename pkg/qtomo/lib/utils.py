import enum
from typing import Any, Optional

import enlighten
import numpy as np
import xxhash

KB = 1024
MB = KB * KB


class FormatTypes(enum.Enum):
    SIZE = 1


class Utils:
    @staticmethod
    def format_value(value: int, type: FormatTypes = FormatTypes.SIZE) -> str:
        """
        Convert bytes to KB/MB/GB/TB

        :param value: a numeric value
        :param type: the FormatType specified
        """
        power = 2 ** 10
        n = 0
        power_labels = {0: "B", 1: "KB", 2: "MB", 3: "GB", 4: "TB"}

        while value > power and n < 4:
            value /= power
            n += 1

        return " ".join((str(round(value, 2)), power_labels[n]))

    @staticmethod
    def calculate_hash(file_path: str, progress_callback: Optional[Any] = None) -> str:
        """
        Calculate an xx64hash of a file on disk

        :param file_path: The path on your system to the file you'd like to checksum
        :param progress_callback: Called with the number of bytes read per block
        """
        xxh64_hash = xxhash.xxh64()
        b = bytearray(MB * 8)
        with open(file_path, "rb") as f:
            while True:
                numread = f.readinto(b)
                if not numread:
                    break

                xxh64_hash.update(b[:numread])

                if progress_callback:
                    progress_callback(float(numread))

        return xxh64_hash.hexdigest()

    @staticmethod
    def calculate_bytes_hash(payload: bytes) -> str:
        return xxhash.xxh64(payload).hexdigest()

    @staticmethod
    def relative_l2(candidate, reference) -> float:
        """
        ||candidate - reference||_2 / ||reference||_2 over raw sample arrays.

        :param candidate: Approximation
        :param reference: Reference values, must not be identically zero
        """
        candidate = np.asarray(candidate)
        reference = np.asarray(reference)
        return float(np.linalg.norm(candidate - reference) / np.linalg.norm(reference))


class ProgressBar(object):
    """Console progress for long per-angle or per-level loops. A disabled bar
    accepts the same calls and prints nothing.

    :param description: Label shown next to the bar
    :param total: Number of steps
    :param enabled: Draw the bar when True
    """

    def __init__(self, description: str = "", total: int = 0, enabled: bool = False):
        self.description = description
        self.total = total
        self.enabled = enabled
        self.manager = None
        self.counter = None

    def __enter__(self):
        if self.enabled:
            self.manager = enlighten.get_manager()
            self.counter = self.manager.counter(total=self.total, desc=self.description, unit="steps")
        return self

    def update(self, steps: int = 1):
        if self.counter is not None:
            self.counter.update(steps)

    def __exit__(self, *exc):
        if self.manager is not None:
            self.counter.close()
            self.manager.stop()
        return False
