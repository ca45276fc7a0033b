"""PGM (portable graymap) loader."""

import logging
from pathlib import Path
from typing import Optional

import numpy as np

from ..exceptions import PGMParseError
from ..models.field import ScalarField

logger = logging.getLogger(__name__)

_WHITESPACE = b" \t\n\r\v\f"
MAX_MAXVAL = 65535


class PGMLoader:
    """
    Loads grayscale images in the PGM formats.

    Supports:
    - P2 (ASCII samples)
    - P5 (binary samples, 8-bit or 16-bit big-endian)
    - ``#`` comments anywhere in the header
    """

    def __init__(self, spacing: float = 1.0, origin: Optional[tuple[float, float]] = None):
        """
        Initialize the loader.

        Args:
            spacing: World units per pixel of the loaded fields
            origin: World position of pixel (0, 0); centred when omitted
        """
        self.spacing = spacing
        self.origin = origin

    def load(self, file_path: str | Path) -> ScalarField:
        """
        Load a PGM file.

        Args:
            file_path: Path to the image

        Returns:
            ScalarField with intensities divided by maxval
        """
        file_path = Path(file_path)
        with open(file_path, "rb") as f:
            data = f.read()
        field = self.load_bytes(data)
        logger.debug("Loaded %s (%dx%d)", file_path, field.width, field.height)
        return field

    def load_bytes(self, data: bytes) -> ScalarField:
        """Parse PGM bytes into a ScalarField."""
        reader = _HeaderReader(data)
        magic = reader.token()
        if magic not in (b"P2", b"P5"):
            raise PGMParseError(f"unsupported PGM magic {magic!r}", 0)
        width = reader.integer("width")
        height = reader.integer("height")
        maxval = reader.integer("maxval")
        if width < 1 or height < 1:
            raise PGMParseError(f"image size must be positive, got {width}x{height}", reader.pos)
        if not 1 <= maxval <= MAX_MAXVAL:
            raise PGMParseError(f"maxval must lie in [1, {MAX_MAXVAL}], got {maxval}", reader.pos)

        count = width * height
        if magic == b"P5":
            samples = self._binary_samples(data, reader.raster_start(), count, maxval)
        else:
            samples = self._ascii_samples(reader, count)

        over = np.flatnonzero(samples > maxval)
        if over.size:
            raise PGMParseError(f"sample {int(samples[over[0]])} exceeds maxval {maxval}", reader.pos)

        values = samples.reshape(height, width).astype(float) / maxval
        return ScalarField(width, height, values, self.spacing, self.origin)

    @staticmethod
    def _binary_samples(data: bytes, start: int, count: int, maxval: int) -> np.ndarray:
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        needed = count * dtype.itemsize
        available = len(data) - start
        if available < needed:
            raise PGMParseError(
                f"truncated raster: expected {needed} bytes, found {available}", len(data)
            )
        return np.frombuffer(data, dtype=dtype, count=count, offset=start).astype(np.int64)

    @staticmethod
    def _ascii_samples(reader: "_HeaderReader", count: int) -> np.ndarray:
        samples = np.empty(count, dtype=np.int64)
        for i in range(count):
            samples[i] = reader.integer(f"sample {i}")
        return samples


class _HeaderReader:
    """Whitespace/comment-aware tokenizer over PGM bytes."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _skip(self) -> None:
        data = self.data
        while self.pos < len(data):
            byte = data[self.pos:self.pos + 1]
            if byte in _WHITESPACE and byte:
                self.pos += 1
            elif byte == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            else:
                break

    def token(self) -> bytes:
        """Next whitespace-delimited token."""
        self._skip()
        start = self.pos
        data = self.data
        while self.pos < len(data) and data[self.pos:self.pos + 1] not in _WHITESPACE + b"#":
            self.pos += 1
        if start == self.pos:
            raise PGMParseError("unexpected end of data", start)
        return data[start:self.pos]

    def integer(self, what: str) -> int:
        """Next token as a non-negative integer."""
        start = self.pos
        token = self.token()
        if not token.isdigit():
            raise PGMParseError(f"invalid {what} {token!r}", start)
        return int(token)

    def raster_start(self) -> int:
        """Offset of the binary raster: one whitespace byte after maxval."""
        if self.pos >= len(self.data) or self.data[self.pos:self.pos + 1] not in _WHITESPACE:
            raise PGMParseError("missing whitespace before raster", self.pos)
        return self.pos + 1
