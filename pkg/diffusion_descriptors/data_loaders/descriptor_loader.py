"""Loader for descriptor files (JSON header plus float32 payload)."""

import json
import logging
from pathlib import Path

import numpy as np

from ..exceptions import ConfigError
from ..models.descriptor import Descriptor, DescriptorKind, DescriptorParams
from ..models.field import GridSpec

logger = logging.getLogger(__name__)


class DescriptorLoader:
    """Reads descriptors written by ReportGenerator.save_descriptor."""

    def load(self, payload_path: str | Path) -> Descriptor:
        """
        Load a descriptor.

        Args:
            payload_path: Path of the binary payload; the header sits next to it with ``.json`` appended

        Returns:
            Descriptor
        """
        payload_path = Path(payload_path)
        header_path = payload_path.with_name(payload_path.name + ".json")
        with open(header_path, "r", encoding="utf-8") as f:
            header = json.load(f)

        shape = tuple(header["shape"])
        expected = int(np.prod(shape))
        raw = payload_path.read_bytes()
        if len(raw) != 4 * expected:
            raise ConfigError(
                f"{payload_path}: expected {4 * expected} payload bytes, found {len(raw)}", "payload"
            )
        values = np.frombuffer(raw, dtype=np.dtype(header.get("dtype", "<f4"))).reshape(shape)

        descriptor = Descriptor(
            kind=DescriptorKind(header["kind"]),
            values=values.astype(float),
            beta_centers=np.asarray(header["beta_centers"], dtype=float),
            grid=GridSpec.from_dict(header["grid"]),
            params=DescriptorParams.from_dict(header["params"]),
        )
        logger.debug("Loaded %s descriptor %s from %s", descriptor.kind.value, shape, payload_path)
        return descriptor
