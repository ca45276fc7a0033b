"""Data models for diffusion descriptors."""

from .field import (
    AffineTransform,
    GradientSample,
    GridSpec,
    ScalarField,
    SimilarityTransform,
    Transform,
)
from .descriptor import Descriptor, DescriptorKind, DescriptorParams
from .matching import Candidate, CandidateSet, MatchResult, ScoreMode
from .homotopy import CostGrid, CostGridSpec, DiffusionSchedule, ToyProblem, TrajectoryPoint

__all__ = [
    "AffineTransform",
    "GradientSample",
    "GridSpec",
    "ScalarField",
    "SimilarityTransform",
    "Transform",
    "Descriptor",
    "DescriptorKind",
    "DescriptorParams",
    "Candidate",
    "CandidateSet",
    "MatchResult",
    "ScoreMode",
    "CostGrid",
    "CostGridSpec",
    "DiffusionSchedule",
    "ToyProblem",
    "TrajectoryPoint",
]
