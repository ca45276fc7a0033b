"""Models for the toy matching problem and its diffused cost landscapes."""

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import DomainError
from .field import ScalarField


@dataclass(frozen=True)
class ToyProblem:
    """
    1D signal matching through shift.

    ``f`` is sampled on X = [-2, 2], the templates ``p1`` and ``p2`` on
    X1 = X2 = [-1.2, 1.2]; all three are 1-row fields. ``lam`` weighs the
    quadratic penalty replacing the c1 + c2 = 1 constraint.
    """

    f: ScalarField
    p1: ScalarField
    p2: ScalarField
    lam: float = 1.0

    def __post_init__(self):
        for name in ("f", "p1", "p2"):
            if not getattr(self, name).is_signal:
                raise DomainError(f"toy problem signal {name} must be a 1-row field")
        if not self.lam > 0:
            raise DomainError(f"penalty weight must be positive, got {self.lam}")

    @property
    def templates(self) -> tuple[ScalarField, ScalarField]:
        """Both templates in order."""
        return (self.p1, self.p2)


@dataclass(frozen=True)
class CostGridSpec:
    """Uniform (c1, theta) sampling of the toy landscape."""

    c1_min: float = -0.5
    c1_max: float = 1.5
    n_c1: int = 81
    theta_min: float = -1.0
    theta_max: float = 1.0
    n_theta: int = 201

    def __post_init__(self):
        if self.n_c1 < 4 or self.n_theta < 4:
            raise DomainError("cost grid needs at least 4 samples per axis")
        if not (self.c1_max > self.c1_min and self.theta_max > self.theta_min):
            raise DomainError("cost grid axis bounds must be increasing")

    @property
    def c1_axis(self) -> np.ndarray:
        """Sample positions along c1."""
        return np.linspace(self.c1_min, self.c1_max, self.n_c1)

    @property
    def theta_axis(self) -> np.ndarray:
        """Sample positions along theta."""
        return np.linspace(self.theta_min, self.theta_max, self.n_theta)

    def to_dict(self) -> dict:
        """Convert to dictionary format."""
        return {
            "c1_min": self.c1_min,
            "c1_max": self.c1_max,
            "n_c1": self.n_c1,
            "theta_min": self.theta_min,
            "theta_max": self.theta_max,
            "n_theta": self.n_theta,
        }


@dataclass(eq=False)
class CostGrid:
    """Sampled landscape, values indexed [c1][theta]."""

    c1_axis: np.ndarray
    theta_axis: np.ndarray
    values: np.ndarray
    sigma: float = 0.0

    def __post_init__(self):
        self.c1_axis = np.asarray(self.c1_axis, dtype=float)
        self.theta_axis = np.asarray(self.theta_axis, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        for name, axis in (("c1", self.c1_axis), ("theta", self.theta_axis)):
            if axis.ndim != 1 or len(axis) < 2 or np.any(np.diff(axis) <= 0):
                raise DomainError(f"{name} axis must be strictly increasing")
        if self.values.shape != (len(self.c1_axis), len(self.theta_axis)):
            raise DomainError(
                f"cost values have shape {self.values.shape}, "
                f"expected {(len(self.c1_axis), len(self.theta_axis))}"
            )
        if not np.all(np.isfinite(self.values)):
            raise DomainError("cost values must be finite")
        if self.sigma < 0:
            raise DomainError(f"diffusion level must be non-negative, got {self.sigma}")

    @property
    def c1_step(self) -> float:
        """Spacing of the c1 axis."""
        return float(self.c1_axis[1] - self.c1_axis[0])

    @property
    def theta_step(self) -> float:
        """Spacing of the theta axis."""
        return float(self.theta_axis[1] - self.theta_axis[0])

    def argmin(self) -> tuple[int, int]:
        """Grid indices of the smallest value (first in row-major order on ties)."""
        i, j = np.unravel_index(int(np.argmin(self.values)), self.values.shape)
        return int(i), int(j)

    def with_values(self, values: np.ndarray, sigma: float) -> "CostGrid":
        """Same axes, new values."""
        return CostGrid(self.c1_axis, self.theta_axis, values, sigma)


@dataclass(frozen=True)
class DiffusionSchedule:
    """Strictly decreasing diffusion levels ending at 0."""

    sigmas: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        sigmas = tuple(float(s) for s in self.sigmas)
        if not sigmas:
            raise DomainError("diffusion schedule must not be empty")
        if sigmas[-1] != 0.0:
            raise DomainError("diffusion schedule must end at sigma = 0")
        if any(s <= 0 for s in sigmas[:-1]):
            raise DomainError("diffusion levels before the last must be positive")
        if any(a <= b for a, b in zip(sigmas, sigmas[1:])):
            raise DomainError("diffusion schedule must be strictly decreasing")
        object.__setattr__(self, "sigmas", sigmas)

    @classmethod
    def default(cls, sigma0: float = 1.0, stages: int = 8) -> "DiffusionSchedule":
        """Geometric schedule sigma0 * 2^-k for k < stages, then 0."""
        return cls(tuple(sigma0 * 0.5 ** k for k in range(stages)) + (0.0,))

    @classmethod
    def parse(cls, text: str) -> "DiffusionSchedule":
        """Parse a comma-separated list such as ``1,0.5,0``."""
        try:
            sigmas = tuple(float(part) for part in text.split(",") if part.strip())
        except ValueError as e:
            raise DomainError(f"invalid schedule {text!r}: {e}") from e
        return cls(sigmas)

    @property
    def is_plain_descent(self) -> bool:
        """True for the single-stage schedule [0] (no diffusion at all)."""
        return len(self.sigmas) == 1

    def __len__(self) -> int:
        return len(self.sigmas)


@dataclass(frozen=True)
class TrajectoryPoint:
    """Minimiser reached at one continuation stage, with its raw cost."""

    stage: int
    sigma: float
    c1: float
    theta: float
    cost: float

    def to_dict(self) -> dict:
        """Convert to dictionary format."""
        return {
            "stage": self.stage,
            "sigma": self.sigma,
            "c1": self.c1,
            "theta": self.theta,
            "cost": self.cost,
        }
