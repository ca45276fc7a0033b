"""Descriptor parameter and result models."""

import math
from dataclasses import dataclass, fields
from enum import Enum
from typing import Optional

import numpy as np

from ..exceptions import ConfigError, DomainError
from .field import GridSpec, TWO_PI


class DescriptorKind(Enum):
    """Descriptor variants."""
    SIFT = "sift"
    DSP_SAMPLED = "dsp_sampled"
    DSP_CLOSED_INNER = "dsp_closed_inner"
    DSP_CLOSED_BOTH = "dsp_closed_both"
    HEAT = "heat"
    DF = "df"
    RAW_DENSITY = "raw_density"

    @property
    def signed(self) -> bool:
        """Whether values may be negative."""
        return self in (DescriptorKind.DSP_CLOSED_INNER, DescriptorKind.DSP_CLOSED_BOTH)

    @property
    def periodic(self) -> bool:
        """Whether the first axis is an angle (every kind except DF)."""
        return self is not DescriptorKind.DF


@dataclass
class DescriptorParams:
    """
    Parameters shared by all descriptor variants.

    Lengths are in world units of the field. ``sigma_s`` is the std of the
    log-scale for the closed forms and of sigma_d itself for the sampled
    variant. ``sigma_d0`` falls back to ``sigma_d`` and ``sigma_r`` to one
    bin width when left unset.
    """

    sigma_r: Optional[float] = None
    sigma_d: float = 2.0
    sigma_d0: Optional[float] = None
    sigma_s: float = 0.2
    sigma_a: float = 0.5
    sigma_l: float = 0.1
    n_beta_bins: int = 8
    n_levels: int = 16
    n_scale_samples: int = 9
    eps_grad: float = 1e-6
    eps_x: float = 1e-6
    wraps: int = 4
    grid: Optional[GridSpec] = None
    heat_full_constant: bool = False

    SIGMA_FIELDS = ("sigma_r", "sigma_d", "sigma_d0", "sigma_s", "sigma_a", "sigma_l")

    def __post_init__(self):
        if self.n_beta_bins < 2:
            raise ConfigError(f"n_beta_bins must be at least 2, got {self.n_beta_bins}", "n_beta_bins")
        if self.sigma_r is None:
            self.sigma_r = TWO_PI / self.n_beta_bins
        for name in self.SIGMA_FIELDS:
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ConfigError(f"{name} must be positive, got {value}", name)
        if self.n_levels < 2:
            raise ConfigError(f"n_levels must be at least 2, got {self.n_levels}", "n_levels")
        if self.n_scale_samples < 1:
            raise ConfigError(
                f"n_scale_samples must be positive, got {self.n_scale_samples}", "n_scale_samples"
            )
        if not self.eps_grad > 0:
            raise ConfigError(f"eps_grad must be positive, got {self.eps_grad}", "eps_grad")
        if not self.eps_x > 0:
            raise ConfigError(f"eps_x must be positive, got {self.eps_x}", "eps_x")
        if self.wraps < 1:
            raise ConfigError(f"wraps must be at least 1, got {self.wraps}", "wraps")

    @property
    def nominal_sigma_d(self) -> float:
        """Centre of the domain-size pooling (sigma_d0, or sigma_d when unset)."""
        return self.sigma_d0 if self.sigma_d0 is not None else self.sigma_d

    @property
    def beta_step(self) -> float:
        """Width of one orientation bin."""
        return TWO_PI / self.n_beta_bins

    @property
    def beta_centers(self) -> np.ndarray:
        """Orientation bin centres, starting at 0."""
        return np.arange(self.n_beta_bins) * self.beta_step

    @property
    def levels(self) -> np.ndarray:
        """Intensity levels used by distribution fields."""
        return np.linspace(0.0, 1.0, self.n_levels)

    @property
    def descriptor_grid(self) -> GridSpec:
        """Spatial sample grid; defaults to 16x16 nodes spanning [-3 sigma_d0, 3 sigma_d0]^2."""
        if self.grid is not None:
            return self.grid
        half_width = 3.0 * self.nominal_sigma_d
        return GridSpec.centered(16, 16, 2.0 * half_width / 15.0)

    def to_dict(self) -> dict:
        """Convert to dictionary format."""
        data = {}
        for f in fields(self):
            value = getattr(self, f.name)
            data[f.name] = value.to_dict() if isinstance(value, GridSpec) else value
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "DescriptorParams":
        """Build from a dictionary, rejecting unknown keys."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown descriptor parameter(s): {', '.join(unknown)}", unknown[0])
        kwargs = dict(data)
        if kwargs.get("grid") is not None:
            kwargs["grid"] = GridSpec.from_dict(kwargs["grid"])
        return cls(**kwargs)


@dataclass(eq=False)
class Descriptor:
    """Sampled density h(beta, x) over a first axis (orientation or level) and a spatial grid."""

    kind: DescriptorKind
    values: np.ndarray
    beta_centers: np.ndarray
    grid: GridSpec
    params: DescriptorParams

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.beta_centers = np.asarray(self.beta_centers, dtype=float)
        expected = (len(self.beta_centers), self.grid.height, self.grid.width)
        if self.values.shape != expected:
            raise DomainError(f"descriptor values have shape {self.values.shape}, expected {expected}")
        if not np.all(np.isfinite(self.values)):
            raise DomainError(f"{self.kind.value} descriptor has non-finite values")
        if not self.kind.signed and self.values.min() < -1e-12:
            raise DomainError(f"{self.kind.value} descriptor must be non-negative")

    @property
    def n_beta(self) -> int:
        """Number of samples on the first axis."""
        return len(self.beta_centers)

    @property
    def beta_step(self) -> float:
        """Spacing of the first axis."""
        if self.kind.periodic:
            return TWO_PI / self.n_beta
        return float(self.beta_centers[1] - self.beta_centers[0])

    @property
    def cell_weight(self) -> float:
        """Riemann weight of one (beta, x) cell."""
        return self.beta_step * self.grid.cell_measure

    def norm(self) -> float:
        """L2 norm under the Riemann weights."""
        return math.sqrt(float(np.sum(self.values ** 2)) * self.cell_weight)

    def beta_index(self, beta: float) -> int:
        """Index of the first-axis sample nearest to beta (2pi-periodic for angles)."""
        offset = (beta - self.beta_centers[0]) / self.beta_step
        index = int(np.floor(offset + 0.5))
        if self.kind.periodic:
            return index % self.n_beta
        return min(max(index, 0), self.n_beta - 1)

    def value_at(self, beta: float, ix: int, iy: int) -> float:
        """Value at first-axis coordinate beta and grid node (ix, iy)."""
        return float(self.values[self.beta_index(beta), iy, ix])

    def beta_profile(self) -> np.ndarray:
        """Spatially integrated profile over the first axis."""
        return self.values.sum(axis=(1, 2)) * self.grid.cell_measure

    def header(self) -> dict:
        """JSON header describing the binary payload."""
        return {
            "kind": self.kind.value,
            "params": self.params.to_dict(),
            "grid": self.grid.to_dict(),
            "beta_centers": self.beta_centers.tolist(),
            "shape": list(self.values.shape),
            "dtype": "<f4",
            "order": "beta,y,x",
        }
