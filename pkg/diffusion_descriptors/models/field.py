"""Image field, sampling grid and geometric transform models."""

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from ..exceptions import DomainError

TWO_PI = 2.0 * math.pi

# Values this far outside [0, 1] are rounding noise from interpolation and get clipped.
_RANGE_SLACK = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Regular lattice of sample points in world coordinates."""

    width: int
    height: int
    spacing: float = 1.0
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise DomainError(f"grid size must be positive, got {self.width}x{self.height}")
        if not self.spacing > 0:
            raise DomainError(f"grid spacing must be positive, got {self.spacing}")
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

    @classmethod
    def centered(cls, width: int, height: int, spacing: float = 1.0) -> "GridSpec":
        """Grid whose centre node sits at the world origin."""
        origin = (-(width - 1) / 2.0 * spacing, -(height - 1) / 2.0 * spacing)
        return cls(width=width, height=height, spacing=spacing, origin=origin)

    @property
    def xs(self) -> np.ndarray:
        """World x coordinate of each column."""
        return self.origin[0] + np.arange(self.width) * self.spacing

    @property
    def ys(self) -> np.ndarray:
        """World y coordinate of each row."""
        return self.origin[1] + np.arange(self.height) * self.spacing

    @property
    def size(self) -> int:
        """Number of nodes."""
        return self.width * self.height

    @property
    def cell_measure(self) -> float:
        """Riemann weight of one node (a length for 1-row signals, an area otherwise)."""
        return self.spacing if self.height == 1 else self.spacing ** 2

    def coordinates(self) -> np.ndarray:
        """World coordinates of all nodes, shape (height, width, 2)."""
        gx, gy = np.meshgrid(self.xs, self.ys)
        return np.stack([gx, gy], axis=-1)

    def to_dict(self) -> dict:
        """Convert to dictionary format."""
        return {
            "width": self.width,
            "height": self.height,
            "spacing": self.spacing,
            "origin": list(self.origin),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GridSpec":
        """Build from the dictionary produced by ``to_dict``."""
        origin = data.get("origin")
        if origin is None:
            return cls.centered(int(data["width"]), int(data["height"]), float(data.get("spacing", 1.0)))
        return cls(
            width=int(data["width"]),
            height=int(data["height"]),
            spacing=float(data.get("spacing", 1.0)),
            origin=(float(origin[0]), float(origin[1])),
        )


@dataclass(frozen=True, eq=False)
class ScalarField:
    """
    Grayscale image or patch sampled on a regular grid.

    Values live in [0, 1] and are stored row-major with shape (height, width);
    row j, column i sits at world position origin + (i, j) * spacing. When no
    origin is given the field is centred on the world origin.
    """

    width: int
    height: int
    values: np.ndarray
    spacing: float = 1.0
    origin: Optional[tuple[float, float]] = None
    coverage: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise DomainError(f"field size must be positive, got {self.width}x{self.height}")
        if not self.spacing > 0:
            raise DomainError(f"field spacing must be positive, got {self.spacing}")

        values = np.array(self.values, dtype=float)
        if values.size != self.width * self.height:
            raise DomainError(
                f"expected {self.width * self.height} values for a {self.width}x{self.height} field, "
                f"got {values.size}"
            )
        values = values.reshape(self.height, self.width)
        if not np.all(np.isfinite(values)):
            raise DomainError("field values must be finite")
        if values.min() < -_RANGE_SLACK or values.max() > 1.0 + _RANGE_SLACK:
            raise DomainError(
                f"field values must lie in [0, 1], got range [{values.min():.6g}, {values.max():.6g}]"
            )
        values = np.clip(values, 0.0, 1.0)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

        if self.origin is None:
            grid = GridSpec.centered(self.width, self.height, self.spacing)
            object.__setattr__(self, "origin", grid.origin)
        else:
            object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

        if self.coverage is not None:
            coverage = np.array(self.coverage, dtype=bool).reshape(self.height, self.width)
            coverage.flags.writeable = False
            object.__setattr__(self, "coverage", coverage)

    @classmethod
    def from_array(
        cls,
        array: np.ndarray,
        spacing: float = 1.0,
        origin: Optional[tuple[float, float]] = None,
    ) -> "ScalarField":
        """Wrap a 2D array (rows = y) or a 1D signal as a field."""
        array = np.asarray(array, dtype=float)
        if array.ndim == 1:
            array = array[np.newaxis, :]
        height, width = array.shape
        return cls(width=width, height=height, values=array, spacing=spacing, origin=origin)

    @property
    def grid(self) -> GridSpec:
        """Sampling grid of this field."""
        return GridSpec(self.width, self.height, self.spacing, self.origin)

    @property
    def is_signal(self) -> bool:
        """True for 1-row fields used as 1D signals."""
        return self.height == 1

    @property
    def domain(self) -> tuple[float, float, float, float]:
        """Axis-aligned hull of the nodes as (x_min, x_max, y_min, y_max)."""
        x0, y0 = self.origin
        return (
            x0,
            x0 + (self.width - 1) * self.spacing,
            y0,
            y0 + (self.height - 1) * self.spacing,
        )

    @property
    def area(self) -> float:
        """Total Riemann measure of the field's cells."""
        return self.width * self.height * self.grid.cell_measure

    @property
    def coverage_fraction(self) -> float:
        """Share of nodes sampled inside the source domain (1.0 when not warped)."""
        if self.coverage is None:
            return 1.0
        return float(np.mean(self.coverage))

    def with_values(self, values: np.ndarray) -> "ScalarField":
        """Same grid, new values."""
        return ScalarField(self.width, self.height, values, self.spacing, self.origin)


def rotation_matrix(alpha: float) -> np.ndarray:
    """2x2 counter-clockwise rotation by alpha radians."""
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class SimilarityTransform:
    """Warp x -> e^s R_alpha x + b."""

    alpha: float = 0.0
    s: float = 0.0
    b: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "b", (float(self.b[0]), float(self.b[1])))

    @classmethod
    def identity(cls) -> "SimilarityTransform":
        """The identity warp."""
        return cls()

    @classmethod
    def translation(cls, bx: float, by: float) -> "SimilarityTransform":
        """Pure translation by (bx, by)."""
        return cls(b=(bx, by))

    @property
    def matrix(self) -> np.ndarray:
        """Linear part e^s R_alpha."""
        return math.exp(self.s) * rotation_matrix(self.alpha)

    @property
    def det(self) -> float:
        """Determinant of the linear part (always positive)."""
        return math.exp(2.0 * self.s)

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map points of shape (..., 2)."""
        points = np.asarray(points, dtype=float)
        return points @ self.matrix.T + np.asarray(self.b)

    def inverse(self) -> "SimilarityTransform":
        """Inverse warp."""
        back = math.exp(-self.s) * rotation_matrix(-self.alpha)
        b = -(back @ np.asarray(self.b))
        return SimilarityTransform(alpha=-self.alpha, s=-self.s, b=(b[0], b[1]))

    def compose(self, inner: "SimilarityTransform") -> "SimilarityTransform":
        """Return self o inner, i.e. x -> self(inner(x))."""
        b = self.matrix @ np.asarray(inner.b) + np.asarray(self.b)
        return SimilarityTransform(alpha=self.alpha + inner.alpha, s=self.s + inner.s, b=(b[0], b[1]))

    def as_affine(self) -> "AffineTransform":
        """Same warp as an AffineTransform."""
        return AffineTransform(A=self.matrix, b=self.b)

    def to_dict(self) -> dict:
        """Convert to dictionary format."""
        return {"type": "similarity", "alpha": self.alpha, "s": self.s, "b": list(self.b)}


@dataclass(frozen=True, eq=False)
class AffineTransform:
    """Warp x -> A x + b."""

    A: np.ndarray = field(default_factory=lambda: np.eye(2))
    b: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        A = np.array(self.A, dtype=float).reshape(2, 2)
        A.flags.writeable = False
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", (float(self.b[0]), float(self.b[1])))

    @property
    def matrix(self) -> np.ndarray:
        """Linear part A."""
        return self.A

    @property
    def det(self) -> float:
        """Determinant of A."""
        return float(np.linalg.det(self.A))

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map points of shape (..., 2)."""
        points = np.asarray(points, dtype=float)
        return points @ self.A.T + np.asarray(self.b)

    def inverse(self) -> "AffineTransform":
        """Inverse warp; singular A is a domain error."""
        if abs(self.det) < 1e-12:
            raise DomainError("affine transform is singular (det(A) = 0)")
        inv = np.linalg.inv(self.A)
        b = -(inv @ np.asarray(self.b))
        return AffineTransform(A=inv, b=(b[0], b[1]))

    def to_dict(self) -> dict:
        """Convert to dictionary format."""
        return {"type": "affine", "A": self.A.tolist(), "b": list(self.b)}


Transform = Union[SimilarityTransform, AffineTransform]


@dataclass(frozen=True)
class GradientSample:
    """Image gradient at one point, with derived magnitude and orientation."""

    gx: float
    gy: float
    magnitude: float = field(init=False)
    orientation: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "magnitude", math.hypot(self.gx, self.gy))
        orientation = math.atan2(self.gy, self.gx) % TWO_PI
        if orientation >= TWO_PI:
            orientation = 0.0
        object.__setattr__(self, "orientation", orientation)
