"""JSON configuration loader."""

import json
import logging
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

from ..exceptions import ConfigError, DescriptorError
from ..models.descriptor import DescriptorParams
from ..models.homotopy import CostGridSpec, DiffusionSchedule
from ..models.matching import ScoreMode

logger = logging.getLogger(__name__)


def _reject_unknown(section: str, data: dict, known: set[str]) -> None:
    unknown = sorted(set(data) - known)
    if unknown:
        dotted = f"{section}.{unknown[0]}" if section else unknown[0]
        raise ConfigError(f"unknown configuration key {dotted!r}", dotted)


@dataclass
class MatchingOptions:
    """Options of the match command."""
    score: ScoreMode = ScoreMode.CORRELATION

    def to_dict(self) -> dict:
        """Convert to dictionary format."""
        return {"score": self.score.value}


@dataclass
class HomotopyOptions:
    """Options of the toy continuation and landscape commands."""
    schedule: Optional[DiffusionSchedule] = None
    lam: float = 1.0
    grid: CostGridSpec = field(default_factory=CostGridSpec)
    start: tuple[float, float] = (0.0, 0.0)

    @property
    def resolved_schedule(self) -> DiffusionSchedule:
        """Configured schedule, or the default geometric one."""
        return self.schedule or DiffusionSchedule.default()

    def to_dict(self) -> dict:
        """Convert to dictionary format."""
        return {
            "schedule": list(self.resolved_schedule.sigmas),
            "lambda": self.lam,
            "grid": self.grid.to_dict(),
            "start": list(self.start),
        }


@dataclass
class IOOptions:
    """Output locations."""
    out_dir: str = "out"
    write_csv: bool = False

    def to_dict(self) -> dict:
        """Convert to dictionary format."""
        return {"out_dir": self.out_dir, "write_csv": self.write_csv}


@dataclass
class Config:
    """Resolved configuration of one run."""
    descriptor: DescriptorParams = field(default_factory=DescriptorParams)
    matching: MatchingOptions = field(default_factory=MatchingOptions)
    homotopy: HomotopyOptions = field(default_factory=HomotopyOptions)
    io: IOOptions = field(default_factory=IOOptions)
    seed: int = 42

    def to_dict(self) -> dict:
        """Convert to dictionary format."""
        return {
            "descriptor": self.descriptor.to_dict(),
            "matching": self.matching.to_dict(),
            "homotopy": self.homotopy.to_dict(),
            "io": self.io.to_dict(),
            "seed": self.seed,
        }


class ConfigLoader:
    """
    Loads run configuration from a single JSON file.

    Sections: ``descriptor`` (DescriptorParams fields), ``matching``
    (score), ``homotopy`` (schedule, lambda, grid, start), ``io``
    (out_dir, write_csv) and a top-level ``seed``. Missing sections take
    defaults; unknown keys are rejected with their dotted name.
    """

    SECTIONS = {"descriptor", "matching", "homotopy", "io", "seed"}

    def load(self, file_path: str | Path) -> Config:
        """
        Load configuration from a JSON file.

        Args:
            file_path: Path to the JSON file

        Returns:
            Validated Config
        """
        file_path = Path(file_path)
        with open(file_path, "r", encoding="utf-8") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{file_path}: invalid JSON ({e})") from e
        logger.debug("Loaded configuration from %s", file_path)
        return self.load_dict(data)

    def load_dict(self, data: dict[str, Any]) -> Config:
        """Validate and convert a configuration dictionary."""
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        _reject_unknown("", data, self.SECTIONS)
        seed = data.get("seed", 42)
        if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2 ** 64:
            raise ConfigError(f"seed must be a non-negative 64-bit integer, got {seed!r}", "seed")
        return Config(
            descriptor=self._descriptor(data.get("descriptor", {})),
            matching=self._matching(data.get("matching", {})),
            homotopy=self._homotopy(data.get("homotopy", {})),
            io=self._io(data.get("io", {})),
            seed=seed,
        )

    def _descriptor(self, data: dict) -> DescriptorParams:
        try:
            return DescriptorParams.from_dict(data)
        except ConfigError as e:
            dotted = f"descriptor.{e.field}" if e.field else "descriptor"
            if str(e).startswith("unknown"):
                raise ConfigError(f"unknown configuration key {dotted!r}", dotted) from e
            raise ConfigError(f"{dotted}: {e}", dotted) from e
        except (TypeError, DescriptorError, ValueError) as e:
            raise ConfigError(f"descriptor: {e}", "descriptor") from e

    def _matching(self, data: dict) -> MatchingOptions:
        known = {f.name for f in fields(MatchingOptions)}
        _reject_unknown("matching", data, known)
        try:
            return MatchingOptions(score=ScoreMode(data.get("score", ScoreMode.CORRELATION.value)))
        except ValueError as e:
            raise ConfigError(f"matching.score: {e}", "matching.score") from e

    def _homotopy(self, data: dict) -> HomotopyOptions:
        _reject_unknown("homotopy", data, {"schedule", "lambda", "grid", "start"})
        options = HomotopyOptions()
        try:
            if data.get("schedule") is not None:
                options.schedule = DiffusionSchedule(tuple(data["schedule"]))
        except (TypeError, DescriptorError) as e:
            raise ConfigError(f"homotopy.schedule: {e}", "homotopy.schedule") from e

        lam = data.get("lambda", 1.0)
        if not isinstance(lam, (int, float)) or not lam > 0:
            raise ConfigError(f"homotopy.lambda must be positive, got {lam!r}", "homotopy.lambda")
        options.lam = float(lam)

        grid = data.get("grid", {})
        _reject_unknown("homotopy.grid", grid, {f.name for f in fields(CostGridSpec)})
        try:
            options.grid = CostGridSpec(**grid)
        except (TypeError, DescriptorError) as e:
            raise ConfigError(f"homotopy.grid: {e}", "homotopy.grid") from e

        start = data.get("start", [0.0, 0.0])
        if not isinstance(start, (list, tuple)) or len(start) != 2:
            raise ConfigError(f"homotopy.start must be a pair, got {start!r}", "homotopy.start")
        options.start = (float(start[0]), float(start[1]))
        return options

    def _io(self, data: dict) -> IOOptions:
        _reject_unknown("io", data, {f.name for f in fields(IOOptions)})
        return IOOptions(
            out_dir=str(data.get("out_dir", "out")),
            write_csv=bool(data.get("write_csv", False)),
        )
