"""Candidate transform set loader."""

import json
import logging
from pathlib import Path
from typing import Any

from ..exceptions import ConfigError, DescriptorError
from ..models.field import AffineTransform, SimilarityTransform, Transform
from ..models.matching import Candidate, CandidateSet

logger = logging.getLogger(__name__)


class CandidateLoader:
    """
    Loads candidate transform sets from JSON.

    Accepted layouts:
    - a list of entries ``{"label", "type": "similarity", "alpha", "s", "b"}``
      or ``{"label", "type": "affine", "A", "b"}``
    - an object ``{"candidates": [...]}`` holding such a list
    - an object ``{"grid": {"alphas", "log_scales", "translations"}}``
    """

    def load(self, file_path: str | Path) -> CandidateSet:
        """
        Load a candidate set from a JSON file.

        Args:
            file_path: Path to the JSON file

        Returns:
            CandidateSet
        """
        file_path = Path(file_path)
        with open(file_path, "r", encoding="utf-8") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{file_path}: invalid JSON ({e})") from e
        candidates = self.load_data(data)
        logger.debug("Loaded %d candidates from %s", len(candidates), file_path)
        return candidates

    def load_data(self, data: Any) -> CandidateSet:
        """Build a CandidateSet from parsed JSON."""
        if isinstance(data, dict) and "grid" in data:
            grid = data["grid"]
            try:
                return CandidateSet.grid(
                    alphas=tuple(grid.get("alphas", [0.0])),
                    log_scales=tuple(grid.get("log_scales", [0.0])),
                    translations=tuple(tuple(b) for b in grid.get("translations", [[0.0, 0.0]])),
                )
            except (TypeError, ValueError) as e:
                raise ConfigError(f"invalid candidate grid: {e}", "grid") from e
        if isinstance(data, dict):
            data = data.get("candidates", [])
        if not isinstance(data, list):
            raise ConfigError("candidates must be a list of transforms")

        entries = [self._parse_entry(entry, i) for i, entry in enumerate(data)]
        try:
            return CandidateSet(entries)
        except DescriptorError as e:
            raise ConfigError(str(e), "candidates") from e

    def _parse_entry(self, entry: dict, index: int) -> Candidate:
        """Parse a single candidate entry."""
        if not isinstance(entry, dict):
            raise ConfigError(f"candidate {index} must be an object", f"candidates[{index}]")
        label = str(entry.get("label", f"c{index}"))
        kind = entry.get("type", "similarity")
        try:
            transform: Transform
            if kind == "similarity":
                transform = SimilarityTransform(
                    alpha=float(entry.get("alpha", 0.0)),
                    s=float(entry.get("s", 0.0)),
                    b=tuple(entry.get("b", (0.0, 0.0))),
                )
            elif kind == "affine":
                transform = AffineTransform(A=entry["A"], b=tuple(entry.get("b", (0.0, 0.0))))
            else:
                raise ConfigError(f"candidate {index}: unknown transform type {kind!r}", f"candidates[{index}].type")
        except (KeyError, TypeError, ValueError, IndexError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(f"candidate {index}: {e}", f"candidates[{index}]") from e
        return Candidate(transform, label)
