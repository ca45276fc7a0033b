"""Sample data generator for testing and demonstration."""

import logging
import math
from pathlib import Path
from typing import Optional

import numpy as np

from ..models.field import AffineTransform, GridSpec, ScalarField, rotation_matrix
from ..models.homotopy import ToyProblem
from ..models.matching import CandidateSet

logger = logging.getLogger(__name__)


class SampleDataGenerator:
    """
    Generates synthetic fields for descriptor and matching experiments.

    Creates:
    - Ramps, tanh edges, Gaussian blobs and checkerboards
    - Two stroke glyphs ("A" and "B") with small random affine jitter
    - The two-bump toy instance used by the continuation optimiser
    - A small matching scene with templates and a candidate grid
    """

    # Stroke polylines in pixel units, glyph centred on the origin
    GLYPH_STROKES = {
        "A": [
            [(-7.0, 10.0), (0.0, -10.0), (7.0, 10.0)],
            [(-3.5, 2.0), (3.5, 2.0)],
        ],
        "B": [
            [(-6.0, -10.0), (-6.0, 10.0)],
            [(-6.0, -10.0), (-2.0, -10.0)]
            + [(-2.0 + 5.0 * math.cos(t), -5.0 + 5.0 * math.sin(t)) for t in np.linspace(-math.pi / 2, math.pi / 2, 13)]
            + [(-6.0, 0.0)],
            [(-6.0, 0.0), (-1.0, 0.0)]
            + [(-1.0 + 5.0 * math.cos(t), 5.0 + 5.0 * math.sin(t)) for t in np.linspace(-math.pi / 2, math.pi / 2, 13)]
            + [(-6.0, 10.0)],
        ],
    }

    STROKE_WIDTH = 1.2
    GLYPH_LOW = 0.1
    GLYPH_HIGH = 0.8

    # Two-bump toy signal: (amplitude, centre, width) per bump
    TOY_BUMPS = ((0.6, -0.5, 0.35), (0.45, 0.6, 0.3))
    TOY_SPACING = 0.01
    TOY_SIGNAL_RANGE = (-2.0, 2.0)
    TOY_TEMPLATE_RANGE = (-1.2, 1.2)
    TOY_SHIFT = 0.25
    TOY_GAIN = 1.25

    def __init__(self, seed: Optional[int] = None):
        """
        Initialize the generator.

        Args:
            seed: Seed for numpy's default_rng; every random draw goes through it
        """
        self.seed = seed
        self.rng = np.random.default_rng(seed)

    # ------------------------------------------------------------------
    # Elementary fields
    # ------------------------------------------------------------------

    @staticmethod
    def ramp(size: int, gx: float, gy: float, base: float = 0.5, spacing: float = 1.0) -> ScalarField:
        """Linear ramp base + gx*x + gy*y on a centred size x size grid."""
        grid = GridSpec.centered(size, size, spacing)
        xy = grid.coordinates()
        return ScalarField(size, size, base + gx * xy[..., 0] + gy * xy[..., 1], spacing, grid.origin)

    @staticmethod
    def edge(size: int, angle: float, width: float = 2.0, contrast: float = 0.4,
             level: float = 0.5, spacing: float = 1.0) -> ScalarField:
        """Straight tanh edge whose gradient points along ``angle``."""
        grid = GridSpec.centered(size, size, spacing)
        xy = grid.coordinates()
        u = xy[..., 0] * math.cos(angle) + xy[..., 1] * math.sin(angle)
        return ScalarField(size, size, level + contrast * np.tanh(u / width), spacing, grid.origin)

    @staticmethod
    def blob(size: int, sigma: float, center: tuple[float, float] = (0.0, 0.0),
             amplitude: float = 0.8, background: float = 0.1, spacing: float = 1.0) -> ScalarField:
        """Isotropic Gaussian blob on a constant background."""
        grid = GridSpec.centered(size, size, spacing)
        xy = grid.coordinates()
        r2 = (xy[..., 0] - center[0]) ** 2 + (xy[..., 1] - center[1]) ** 2
        return ScalarField(size, size, background + amplitude * np.exp(-r2 / (2.0 * sigma**2)), spacing, grid.origin)

    @staticmethod
    def checkerboard(size: int, cell: int, low: float = 0.2, high: float = 0.8) -> ScalarField:
        """Two-tone checkerboard with square cells of ``cell`` pixels."""
        j, i = np.indices((size, size))
        tiles = ((i // cell) + (j // cell)) % 2
        return ScalarField.from_array(np.where(tiles == 0, low, high))

    # ------------------------------------------------------------------
    # Glyphs
    # ------------------------------------------------------------------

    def glyph(self, letter: str, size: int = 32, transform: Optional[AffineTransform] = None) -> ScalarField:
        """
        Render a stroke glyph.

        Intensity falls off as a Gaussian of the distance to the nearest stroke.
        With ``transform`` the glyph is seen through that warp, i.e. pixel x shows
        the clean glyph at transform(x).

        Args:
            letter: "A" or "B"
            size: Side of the square centred grid in pixels
            transform: Optional view warp

        Returns:
            ScalarField
        """
        if letter not in self.GLYPH_STROKES:
            raise ValueError(f"unknown glyph {letter!r}; expected one of {sorted(self.GLYPH_STROKES)}")
        grid = GridSpec.centered(size, size)
        points = grid.coordinates().reshape(-1, 2)
        if transform is not None:
            points = transform.apply(points)

        segments = []
        for stroke in self.GLYPH_STROKES[letter]:
            segments.extend(zip(stroke[:-1], stroke[1:]))
        d2 = np.min([_segment_distance_sq(points, a, b) for a, b in segments], axis=0)

        values = self.GLYPH_LOW + self.GLYPH_HIGH * np.exp(-d2 / (2.0 * self.STROKE_WIDTH**2))
        return ScalarField(size, size, values.reshape(size, size), 1.0, grid.origin)

    def jitter(self, epsilon: float = 0.02, max_rotation: float = math.radians(2.0),
               max_shift: float = 0.3) -> AffineTransform:
        """Random near-identity affine warp R(I + epsilon*M) x + b."""
        m = self.rng.uniform(-1.0, 1.0, size=(2, 2))
        alpha = self.rng.uniform(-max_rotation, max_rotation)
        b = self.rng.uniform(-max_shift, max_shift, size=2)
        A = rotation_matrix(alpha) @ (np.eye(2) + epsilon * m)
        return AffineTransform(A=A.tolist(), b=(float(b[0]), float(b[1])))

    def glyph_view(self, letter: str, size: int = 32, **jitter_kwargs) -> ScalarField:
        """A glyph seen through a fresh random jitter."""
        return self.glyph(letter, size, self.jitter(**jitter_kwargs))

    # ------------------------------------------------------------------
    # Toy continuation instance
    # ------------------------------------------------------------------

    def toy_signal(self, x: np.ndarray) -> np.ndarray:
        """The two-bump signal f evaluated at x."""
        x = np.asarray(x, dtype=float)
        return sum(a * np.exp(-((x - m) ** 2) / (2.0 * w**2)) for a, m, w in self.TOY_BUMPS)

    def toy_instance_data(self, lam: float = 1.0) -> dict:
        """
        Build the toy instance in the JSON layout read by ToyLoader.

        p1(x) = f(x - 0.25) and p2(x) = 1.25 f(x), both windowed to
        [-1.2, 1.2]; values are rounded to 10 decimals.
        """
        h = self.TOY_SPACING
        lo, hi = self.TOY_SIGNAL_RANGE
        xs = lo + h * np.arange(int(round((hi - lo) / h)) + 1)
        t_lo, t_hi = self.TOY_TEMPLATE_RANGE
        ts = t_lo + h * np.arange(int(round((t_hi - t_lo) / h)) + 1)

        def entry(values: np.ndarray, origin: float, label: Optional[str] = None) -> dict:
            data = {"origin": origin, "spacing": h, "values": [round(float(v), 10) for v in values]}
            if label is not None:
                data["label"] = label
            return data

        return {
            "description": "Two-bump signal with a shifted and a rescaled template.",
            "lambda": lam,
            "signal": entry(self.toy_signal(xs), lo),
            "templates": [
                entry(self.toy_signal(ts - self.TOY_SHIFT), t_lo, "p1"),
                entry(self.TOY_GAIN * self.toy_signal(ts), t_lo, "p2"),
            ],
        }

    def toy_problem(self, lam: float = 1.0) -> ToyProblem:
        """The toy instance as a ToyProblem."""
        data = self.toy_instance_data(lam)

        def signal(entry: dict) -> ScalarField:
            return ScalarField.from_array(entry["values"], entry["spacing"], (entry["origin"], 0.0))

        p1, p2 = (signal(t) for t in data["templates"])
        return ToyProblem(f=signal(data["signal"]), p1=p1, p2=p2, lam=lam)

    # ------------------------------------------------------------------
    # Matching scene
    # ------------------------------------------------------------------

    def generate_scene(self, size: int = 64, template_size: int = 33) -> dict:
        """
        Build a matching scene: a field holding a blob and an edge, two
        templates cut at the origin, and a translation candidate grid.

        Returns:
            Dictionary with field, templates (name -> ScalarField), candidates
            and the translation that aligns the blob
        """
        offset = (float(self.rng.integers(-6, 7)), float(self.rng.integers(-6, 7)))
        blob = self.blob(size, 4.0, center=offset, amplitude=0.6, background=0.1)
        shading = self.edge(size, angle=float(self.rng.uniform(0, 2 * math.pi)), width=6.0, contrast=0.1, level=0.5)
        field = blob.with_values(np.clip(blob.values + shading.values - 0.5, 0.0, 1.0))

        templates = {
            "blob": self.blob(template_size, 4.0, amplitude=0.6, background=0.1),
            "edge": self.edge(template_size, angle=0.0, width=2.0),
        }
        shifts = (-6.0, -3.0, 0.0, 3.0, 6.0)
        translations = sorted({(x, y) for x in shifts for y in shifts} | {offset})
        candidates = CandidateSet.grid(alphas=(0.0,), log_scales=(0.0,), translations=tuple(translations))
        return {"field": field, "templates": templates, "candidates": candidates, "offset": offset}

    def export_sample_data(self, output_dir: str | Path, report=None) -> dict:
        """
        Export a matching scene and a default config.

        Writes field.pgm, templates/<name>.pgm, candidates.json and config.json.

        Args:
            output_dir: Directory to write files
            report: ReportGenerator used for the PGM writer (a fresh one if None)

        Returns:
            The generated scene
        """
        from .report_generator import ReportGenerator

        report = report or ReportGenerator()
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        scene = self.generate_scene()

        report.save_field_pgm(scene["field"], output_dir / "field.pgm")
        for name, template in scene["templates"].items():
            report.save_field_pgm(template, output_dir / "templates" / f"{name}.pgm")
        report.save_json({"candidates": scene["candidates"].to_list()}, output_dir / "candidates.json")
        report.save_json(
            {
                "descriptor": {"sigma_r": 0.4, "sigma_d": 2.0},
                "matching": {"score": "correlation"},
                "seed": self.seed if self.seed is not None else 42,
            },
            output_dir / "config.json",
        )

        logger.info("Exported sample scene to %s (blob offset %s)", output_dir, scene["offset"])
        return scene


def _segment_distance_sq(points: np.ndarray, a: tuple[float, float], b: tuple[float, float]) -> np.ndarray:
    """Squared distance from each point to segment ab."""
    a_ = np.asarray(a, dtype=float)
    ab = np.asarray(b, dtype=float) - a_
    ap = points - a_
    denom = float(ab @ ab)
    t = np.zeros(len(points)) if denom == 0.0 else np.clip(ap @ ab / denom, 0.0, 1.0)
    diff = ap - t[:, None] * ab
    return np.einsum("ij,ij->i", diff, diff)
