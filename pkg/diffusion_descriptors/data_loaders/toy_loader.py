"""Loader for the 1D toy matching instance."""

import json
import logging
from importlib import resources
from pathlib import Path
from typing import Any, Optional

from ..exceptions import ConfigError, DescriptorError
from ..models.field import ScalarField
from ..models.homotopy import ToyProblem

logger = logging.getLogger(__name__)

TOY_RESOURCE = "data/toy_instance.json"


class ToyLoader:
    """
    Loads a ToyProblem from JSON.

    Layout: ``{"signal": {"origin", "spacing", "values"}, "templates":
    [{"label", "origin", "spacing", "values"}, ...], "lambda"}`` with
    exactly two templates.
    """

    def load_default(self, lam: Optional[float] = None) -> ToyProblem:
        """Load the instance shipped with the package."""
        text = resources.files("diffusion_descriptors").joinpath(TOY_RESOURCE).read_text(encoding="utf-8")
        return self.load_data(json.loads(text), lam)

    def load(self, file_path: str | Path, lam: Optional[float] = None) -> ToyProblem:
        """
        Load a toy instance from a JSON file.

        Args:
            file_path: Path to the JSON file
            lam: Penalty weight overriding the file's value

        Returns:
            ToyProblem
        """
        with open(Path(file_path), "r", encoding="utf-8") as f:
            data = json.load(f)
        return self.load_data(data, lam)

    def load_data(self, data: dict[str, Any], lam: Optional[float] = None) -> ToyProblem:
        """Build a ToyProblem from parsed JSON."""
        try:
            signal = self._signal(data["signal"])
            templates = [self._signal(t) for t in data["templates"]]
            if len(templates) != 2:
                raise ConfigError(f"toy instance needs exactly 2 templates, got {len(templates)}", "templates")
            problem = ToyProblem(
                f=signal,
                p1=templates[0],
                p2=templates[1],
                lam=float(data.get("lambda", 1.0) if lam is None else lam),
            )
        except KeyError as e:
            raise ConfigError(f"toy instance is missing {e}", str(e)) from e
        except ConfigError:
            raise
        except (TypeError, DescriptorError) as e:
            raise ConfigError(f"invalid toy instance: {e}") from e
        logger.debug(
            "Toy instance: signal of %d samples, templates of %d samples, lambda %.3g",
            problem.f.width, problem.p1.width, problem.lam,
        )
        return problem

    @staticmethod
    def _signal(entry: dict) -> ScalarField:
        return ScalarField.from_array(
            entry["values"],
            spacing=float(entry["spacing"]),
            origin=(float(entry["origin"]), 0.0),
        )
