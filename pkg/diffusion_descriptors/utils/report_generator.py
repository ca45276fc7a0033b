"""
Report generation module.

Writes every artefact the CLI produces (descriptor payloads, field images,
landscape and trajectory CSVs, verification reports) and formats the text
summaries printed to stdout.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from ..analytics.identities import IdentityCheck
from ..models.descriptor import Descriptor
from ..models.field import ScalarField
from ..models.homotopy import CostGrid, TrajectoryPoint
from ..models.matching import MatchResult

logger = logging.getLogger(__name__)

PGM_MAXVAL = 255


def _writer(f):
    return csv.writer(f, lineterminator="\n")


def _dump_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


class ReportGenerator:
    """Writes result files and builds console summaries."""

    # ------------------------------------------------------------------
    # Descriptors
    # ------------------------------------------------------------------

    def save_descriptor(self, descriptor: Descriptor, output_path: str | Path, csv_export: bool = False) -> list[Path]:
        """
        Save a descriptor as a little-endian float32 payload plus JSON header.

        Args:
            descriptor: Descriptor to save
            output_path: Payload path; the header goes to ``<output_path>.json``
            csv_export: Also write ``<output_path>.csv`` with beta,y,x,value rows

        Returns:
            Paths written
        """
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)

        payload = np.ascontiguousarray(descriptor.values, dtype="<f4")
        output_path.write_bytes(payload.tobytes(order="C"))
        header_path = output_path.with_name(output_path.name + ".json")
        header_path.write_text(_dump_json(descriptor.header()), encoding="utf-8")
        written = [output_path, header_path]

        if csv_export:
            csv_path = output_path.with_name(output_path.name + ".csv")
            self.save_descriptor_csv(descriptor, csv_path)
            written.append(csv_path)

        logger.info("Saved %s descriptor %s to %s", descriptor.kind.value, descriptor.values.shape, output_path)
        return written

    def save_descriptor_csv(self, descriptor: Descriptor, output_path: str | Path) -> Path:
        """One row per (beta, y, x) with world coordinates."""
        output_path = Path(output_path)
        xs, ys = descriptor.grid.xs, descriptor.grid.ys
        with open(output_path, "w", newline="", encoding="utf-8") as f:
            writer = _writer(f)
            writer.writerow(["beta", "y", "x", "value"])
            for b, beta in enumerate(descriptor.beta_centers):
                for iy, y in enumerate(ys):
                    for ix, x in enumerate(xs):
                        writer.writerow([float(beta), float(y), float(x), float(descriptor.values[b, iy, ix])])
        return output_path

    # ------------------------------------------------------------------
    # Fields
    # ------------------------------------------------------------------

    def save_field_pgm(self, field: ScalarField, output_path: str | Path, binary: bool = False) -> Path:
        """
        Save a field as an 8-bit PGM image.

        Args:
            field: Field with values in [0, 1]
            output_path: Destination path
            binary: Write P5 instead of plain P2

        Returns:
            Path written
        """
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        levels = np.rint(field.values * PGM_MAXVAL).astype(np.uint8)
        header = f"{'P5' if binary else 'P2'}\n{field.width} {field.height}\n{PGM_MAXVAL}\n"

        if binary:
            output_path.write_bytes(header.encode("ascii") + levels.tobytes())
        else:
            rows = "\n".join(" ".join(str(v) for v in row) for row in levels)
            output_path.write_text(header + rows + "\n", encoding="ascii")
        logger.debug("Saved %dx%d field to %s", field.width, field.height, output_path)
        return output_path

    def save_field_csv(self, field: ScalarField, output_path: str | Path) -> Path:
        """One row per node: x,y,value."""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        xs, ys = field.grid.xs, field.grid.ys
        with open(output_path, "w", newline="", encoding="utf-8") as f:
            writer = _writer(f)
            writer.writerow(["x", "y", "value"])
            for iy, y in enumerate(ys):
                for ix, x in enumerate(xs):
                    writer.writerow([float(x), float(y), float(field.values[iy, ix])])
        return output_path

    # ------------------------------------------------------------------
    # Matching
    # ------------------------------------------------------------------

    def generate_match_json(self, result: MatchResult) -> str:
        """MatchResult as JSON, with non-finite scores written as null."""
        data = result.to_dict()
        data["scores"] = _finite_or_none(result.scores)
        if result.distances is not None:
            data["distances"] = _finite_or_none(result.distances)
        data["best"] = {
            "candidate": result.labels[result.j_star] if result.labels else result.j_star,
            "template": result.template_names[result.k_star] if result.template_names else result.k_star,
            "score": result.best_score,
        }
        return _dump_json(data)

    def generate_match_summary(self, result: MatchResult) -> str:
        """Console summary of a matching run."""
        best = result.labels[result.j_star] if result.labels else str(result.j_star)
        template = result.template_names[result.k_star] if result.template_names else str(result.k_star)
        lines = [
            "=" * 60,
            "TEMPLATE MATCHING",
            "=" * 60,
            f"  Candidates:     {result.scores.shape[0]}",
            f"  Templates:      {result.scores.shape[1]}",
            f"  Best candidate: {best}",
            f"  Best template:  {template}",
            f"  Score:          {result.best_score:.6g}",
            "=" * 60,
        ]
        return "\n".join(lines)

    # ------------------------------------------------------------------
    # Homotopy
    # ------------------------------------------------------------------

    def save_cost_grid_csv(self, grid: CostGrid, output_path: str | Path) -> Path:
        """Landscape as c1,theta,value rows (c1 outer, theta inner)."""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w", newline="", encoding="utf-8") as f:
            writer = _writer(f)
            writer.writerow(["c1", "theta", "value"])
            for i, c1 in enumerate(grid.c1_axis):
                for j, theta in enumerate(grid.theta_axis):
                    writer.writerow([float(c1), float(theta), float(grid.values[i, j])])
        logger.debug("Saved sigma %.4g landscape to %s", grid.sigma, output_path)
        return output_path

    def save_trajectory_csv(self, trajectory: Sequence[TrajectoryPoint], output_path: str | Path) -> Path:
        """Continuation trajectory as stage,sigma,c1,theta,cost rows."""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w", newline="", encoding="utf-8") as f:
            writer = _writer(f)
            writer.writerow(["stage", "sigma", "c1", "theta", "cost"])
            for point in trajectory:
                writer.writerow([point.stage, point.sigma, point.c1, point.theta, point.cost])
        return output_path

    def generate_trajectory_summary(self, trajectory: Sequence[TrajectoryPoint]) -> str:
        """Console summary of a continuation run."""
        lines = [
            "=" * 60,
            "DIFFUSION CONTINUATION",
            "=" * 60,
            f"  {'stage':>5}  {'sigma':>10}  {'c1':>9}  {'theta':>9}  {'cost':>12}",
        ]
        for p in trajectory:
            lines.append(f"  {p.stage:>5}  {p.sigma:>10.4g}  {p.c1:>9.4f}  {p.theta:>9.4f}  {p.cost:>12.6g}")
        if trajectory:
            final = trajectory[-1]
            lines.extend(["", f"  Final (c1, theta): ({final.c1:.4f}, {final.theta:.4f})"])
        lines.append("=" * 60)
        return "\n".join(lines)

    # ------------------------------------------------------------------
    # Verification
    # ------------------------------------------------------------------

    def save_verification_csv(self, checks: Iterable[IdentityCheck], output_path: str | Path) -> Path:
        """Identity report: identity_name,params_json,closed_form,oracle,rel_err."""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w", newline="", encoding="utf-8") as f:
            writer = _writer(f)
            writer.writerow(["identity_name", "params_json", "closed_form", "oracle", "rel_err"])
            for check in checks:
                row = check.to_dict()
                writer.writerow([
                    row["identity_name"],
                    json.dumps(row["params"], sort_keys=True),
                    row["closed_form"],
                    row["oracle"],
                    row["rel_err"],
                ])
        return output_path

    def generate_verification_summary(self, checks: Sequence[IdentityCheck]) -> str:
        """Per-identity pass counts and worst errors."""
        lines = [
            "=" * 60,
            "IDENTITY VERIFICATION",
            "=" * 60,
        ]
        names = sorted({c.identity_name for c in checks})
        for name in names:
            group = [c for c in checks if c.identity_name == name]
            passed = sum(c.passed for c in group)
            worst = max(c.error for c in group)
            lines.append(f"  {name:<28} {passed:>4}/{len(group):<4} worst {worst:.3e}")
        failed = [c for c in checks if not c.passed]
        lines.extend(["", f"  Failures: {len(failed)}", "=" * 60])
        return "\n".join(lines)

    # ------------------------------------------------------------------
    # Configuration
    # ------------------------------------------------------------------

    def save_resolved_config(self, config: dict, output_dir: str | Path, extra: Optional[dict] = None) -> Path:
        """Write resolved_config.json (sorted keys, 2-space indent)."""
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        data = dict(config)
        if extra:
            data.update(extra)
        path = output_dir / "resolved_config.json"
        path.write_text(_dump_json(data), encoding="utf-8")
        return path

    def save_json(self, data: dict, output_path: str | Path) -> Path:
        """Write a JSON document with the same formatting as every other output."""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(_dump_json(data), encoding="utf-8")
        return output_path


def _finite_or_none(values: np.ndarray) -> list:
    return [[float(v) if np.isfinite(v) else None for v in row] for row in np.atleast_2d(values)]
