"""Candidate transform sets and matching results."""

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Iterator, Optional

import numpy as np

from ..exceptions import DomainError, MatchingError
from .field import SimilarityTransform, Transform


class ScoreMode(Enum):
    """How candidate/template pairs are scored."""
    CORRELATION = "correlation"
    DISTANCE = "distance"


@dataclass(frozen=True)
class Candidate:
    """One hypothesised transform."""
    transform: Transform
    label: str


@dataclass
class CandidateSet:
    """Finite set of candidate transforms with unique labels."""

    entries: list[Candidate] = field(default_factory=list)

    def __post_init__(self):
        if not self.entries:
            raise DomainError("candidate set must not be empty")
        labels = [c.label for c in self.entries]
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        if duplicates:
            raise DomainError(f"candidate labels must be unique, duplicated: {', '.join(duplicates)}")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Candidate]:
        return iter(self.entries)

    def __getitem__(self, index: int) -> Candidate:
        return self.entries[index]

    @property
    def labels(self) -> list[str]:
        """Candidate labels in order."""
        return [c.label for c in self.entries]

    @classmethod
    def single(cls, transform: Transform, label: str = "identity") -> "CandidateSet":
        """Set holding one candidate."""
        return cls([Candidate(transform, label)])

    @classmethod
    def grid(
        cls,
        alphas: tuple[float, ...] = (0.0,),
        log_scales: tuple[float, ...] = (0.0,),
        translations: tuple[tuple[float, float], ...] = ((0.0, 0.0),),
    ) -> "CandidateSet":
        """
        Cartesian grid of similarity candidates.

        Args:
            alphas: Rotation angles in radians
            log_scales: Log-scale values s
            translations: Translation vectors b

        Returns:
            CandidateSet labelled ``a{alpha}_s{s}_b{bx},{by}``
        """
        entries = []
        for alpha, s, (bx, by) in product(alphas, log_scales, translations):
            label = f"a{alpha:g}_s{s:g}_b{bx:g},{by:g}"
            entries.append(Candidate(SimilarityTransform(alpha=alpha, s=s, b=(bx, by)), label))
        return cls(entries)

    def to_list(self) -> list[dict]:
        """Serialisable form, one dict per candidate."""
        return [{"label": c.label, **c.transform.to_dict()} for c in self.entries]


@dataclass
class MatchResult:
    """Winner-take-all outcome over a candidates x templates score matrix."""

    j_star: int
    k_star: int
    scores: np.ndarray
    labels: list[str] = field(default_factory=list)
    template_names: list[str] = field(default_factory=list)
    distances: Optional[np.ndarray] = None

    @classmethod
    def from_scores(
        cls,
        scores: np.ndarray,
        labels: list[str],
        template_names: list[str],
        distances: Optional[np.ndarray] = None,
    ) -> "MatchResult":
        """Pick the argmax, breaking ties by the lowest (j, k)."""
        scores = np.asarray(scores, dtype=float)
        finite = np.isfinite(scores)
        if not finite.any():
            raise MatchingError("no finite matching score")
        masked = np.where(finite, scores, -np.inf)
        j_star, k_star = np.unravel_index(int(np.argmax(masked)), scores.shape)
        return cls(
            j_star=int(j_star),
            k_star=int(k_star),
            scores=scores,
            labels=list(labels),
            template_names=list(template_names),
            distances=distances,
        )

    @property
    def best_score(self) -> float:
        """Score of the winning pair."""
        return float(self.scores[self.j_star, self.k_star])

    def to_dict(self) -> dict:
        """Convert to dictionary format."""
        return {
            "j_star": self.j_star,
            "k_star": self.k_star,
            "labels": self.labels,
            "templates": self.template_names,
            "scores": self.scores.tolist(),
            "distances": None if self.distances is None else self.distances.tolist(),
        }
