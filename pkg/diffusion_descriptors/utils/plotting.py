"""
Figures of the exported CSV results.

Reads the landscape, trajectory and identity CSVs written by
``ReportGenerator`` and renders PNG figures. Needs the ``viz`` extra
(pandas and matplotlib); both are imported on first use.
"""

import logging
from pathlib import Path
from typing import Optional

from ..exceptions import ConfigError

logger = logging.getLogger(__name__)

# Exact identity hits would vanish on a log axis.
_ERROR_FLOOR = 1e-17


def _viz_modules():
    try:
        import pandas as pd
        from matplotlib.figure import Figure
    except ImportError as e:
        raise ConfigError(
            f"plotting needs the viz extra (pip install 'diffusion-descriptors[viz]'): {e}", "viz"
        ) from e
    return pd, Figure


class PlotGenerator:
    """Renders landscapes, continuation paths and identity errors as PNG files."""

    def __init__(self, dpi: int = 120):
        """
        Initialize the plot generator.

        Args:
            dpi: Resolution of the saved figures
        """
        self.dpi = dpi

    def load_landscape(self, landscape_csv: str | Path):
        """Landscape CSV as a DataFrame with c1 rows and theta columns."""
        pd, _ = _viz_modules()
        frame = pd.read_csv(landscape_csv)
        missing = {"c1", "theta", "value"} - set(frame.columns)
        if missing:
            raise ConfigError(f"{landscape_csv}: missing columns {sorted(missing)}", "landscape")
        return frame.pivot(index="c1", columns="theta", values="value").sort_index()

    def plot_landscape(
        self,
        landscape_csv: str | Path,
        output_path: str | Path,
        trajectory_csv: Optional[str | Path] = None,
    ) -> Path:
        """
        Heat map of one cost landscape, optionally with the continuation path.

        Args:
            landscape_csv: c1,theta,value rows
            output_path: PNG to write
            trajectory_csv: stage,sigma,c1,theta,cost rows drawn on top

        Returns:
            Path of the written figure
        """
        pd, Figure = _viz_modules()
        table = self.load_landscape(landscape_csv)
        thetas = table.columns.to_numpy(dtype=float)
        c1s = table.index.to_numpy(dtype=float)

        fig = Figure(figsize=(7.0, 4.5))
        ax = fig.subplots()
        image = ax.imshow(
            table.to_numpy(),
            origin="lower",
            aspect="auto",
            extent=(thetas[0], thetas[-1], c1s[0], c1s[-1]),
            cmap="viridis",
        )
        fig.colorbar(image, ax=ax, label="cost")
        if trajectory_csv is not None:
            path = pd.read_csv(trajectory_csv)
            ax.plot(path["theta"], path["c1"], "o-", color="white", markersize=4, label="continuation")
            ax.plot(path["theta"].iloc[-1], path["c1"].iloc[-1], "*", color="red", markersize=12, label="final")
            ax.legend(loc="upper right")
        ax.set_xlabel("theta")
        ax.set_ylabel("c1")
        ax.set_title(Path(landscape_csv).stem)
        fig.tight_layout()
        return self._save(fig, output_path)

    def plot_verification(self, identities_csv: str | Path, output_path: str | Path) -> Path:
        """Relative error of every identity draw, one column per suite, log scale."""
        pd, Figure = _viz_modules()
        frame = pd.read_csv(identities_csv)
        suites = list(dict.fromkeys(frame["identity_name"]))

        fig = Figure(figsize=(8.0, 4.5))
        ax = fig.subplots()
        for k, suite in enumerate(suites):
            errors = frame.loc[frame["identity_name"] == suite, "rel_err"].astype(float)
            ax.scatter([k] * len(errors), errors.clip(lower=_ERROR_FLOOR), s=10, alpha=0.6)
        ax.set_yscale("log")
        ax.set_xticks(range(len(suites)))
        ax.set_xticklabels(suites, rotation=30, ha="right")
        ax.set_ylabel("relative error")
        ax.set_title("Closed forms against quadrature")
        fig.tight_layout()
        return self._save(fig, output_path)

    def plot_output_dir(self, out_dir: str | Path) -> list[Path]:
        """
        Render every recognised CSV in a results directory.

        Landscapes get the trajectory overlay when ``trajectory.csv`` is present.

        Returns:
            Paths of the written figures, landscapes first
        """
        out_dir = Path(out_dir)
        trajectory = out_dir / "trajectory.csv"
        written = [
            self.plot_landscape(csv_path, csv_path.with_suffix(".png"),
                                trajectory if trajectory.exists() else None)
            for csv_path in sorted(out_dir.glob("landscape_*.csv"))
        ]
        identities = out_dir / "identities.csv"
        if identities.exists():
            written.append(self.plot_verification(identities, out_dir / "identities.png"))
        logger.info("Rendered %d figure(s) in %s", len(written), out_dir)
        return written

    def _save(self, fig, output_path: str | Path) -> Path:
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(output_path, dpi=self.dpi)
        logger.debug("Saved figure to %s", output_path)
        return output_path
