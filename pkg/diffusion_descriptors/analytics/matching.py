"""Descriptor distances, correlation scores and winner-take-all template matching."""

import logging
import math
from typing import Optional, Union

import numpy as np

from .descriptors import DescriptorEngine
from .field_ops import warp
from ..exceptions import ContractError, DegenerateInputError, DomainError
from ..models.descriptor import Descriptor, DescriptorKind, DescriptorParams
from ..models.field import ScalarField, Transform
from ..models.matching import CandidateSet, MatchResult, ScoreMode

logger = logging.getLogger(__name__)

MIN_COVERAGE = 0.5


def _check_compatible(h1: Descriptor, h2: Descriptor) -> None:
    if h1.grid != h2.grid:
        raise ContractError(f"descriptor grids differ: {h1.grid} vs {h2.grid}")
    if h1.kind.periodic != h2.kind.periodic:
        raise ContractError(
            f"cannot compare a {h1.kind.value} descriptor with a {h2.kind.value} descriptor"
        )
    if h1.beta_centers.shape != h2.beta_centers.shape or not np.allclose(
        h1.beta_centers, h2.beta_centers, rtol=0.0, atol=1e-12
    ):
        raise ContractError("descriptor first axes differ")


def correlation(h_field: Descriptor, h_patch: Descriptor) -> float:
    """Riemann-sum inner product with cell weight d_beta * dx^2."""
    _check_compatible(h_field, h_patch)
    return float(np.sum(h_field.values * h_patch.values)) * h_field.cell_weight


def matching_energy(h_field: Descriptor, h_patch: Descriptor) -> float:
    """Negated dot-product energy; lower is better."""
    return -correlation(h_field, h_patch)


def descriptor_distance(h1: Descriptor, h2: Descriptor) -> float:
    """
    L2 distance between the two descriptors after normalising each to unit norm.

    Returns:
        Distance in [0, 2]

    Raises:
        ContractError: if the axes differ
        DegenerateInputError: if either descriptor has zero norm
    """
    _check_compatible(h1, h2)
    n1, n2 = h1.norm(), h2.norm()
    if n1 == 0.0 or n2 == 0.0:
        raise DegenerateInputError("cannot normalise a zero-norm descriptor")
    diff = h1.values / n1 - h2.values / n2
    distance = math.sqrt(float(np.sum(diff ** 2)) * h1.cell_weight)
    return min(distance, 2.0)


def intensity_energy(field: ScalarField, template: ScalarField, t: Transform) -> float:
    """
    Squared intensity discrepancy of field o t against the template over its grid.

    Nodes mapped outside the field count with intensity 0.

    Raises:
        DomainError: if no template node maps inside the field
    """
    warped = warp(field, t, template.grid)
    coverage = warped.coverage_fraction
    if coverage == 0.0:
        raise DomainError("template grid maps entirely outside the field")
    if coverage < MIN_COVERAGE:
        logger.warning("Only %.0f%% of the template maps inside the field", 100.0 * coverage)
    residual = warped.values - template.values
    return float(np.sum(residual ** 2)) * template.grid.cell_measure


class TemplateMatcher:
    """
    Scores warped copies of a field against templates and keeps the best pair.

    In correlation mode the field-side descriptor of the chosen kind is paired
    with the raw orientation density of each template (distribution fields are
    paired with the template's own distribution field). In distance mode both
    sides use the chosen kind and the score is the negated normalised distance.
    """

    def __init__(
        self,
        params: Optional[DescriptorParams] = None,
        kind: Union[DescriptorKind, str] = DescriptorKind.SIFT,
        score: Union[ScoreMode, str] = ScoreMode.CORRELATION,
    ):
        """
        Initialize the matcher.

        Args:
            params: Descriptor parameters shared by both sides
            kind: Field-side descriptor kind
            score: Scoring mode
        """
        self.engine = DescriptorEngine(params)
        self.kind = DescriptorKind(kind)
        self.score = ScoreMode(score)

    def template_descriptor(self, template: ScalarField) -> Descriptor:
        """Descriptor used for the template side under the current mode."""
        if self.score is ScoreMode.DISTANCE or self.kind is DescriptorKind.DF:
            return self.engine.compute(template, self.kind)
        return self.engine.raw_density_descriptor(template)

    def _score(self, h_field: Descriptor, h_patch: Descriptor) -> tuple[float, float]:
        """Return (score, distance); degenerate pairs give NaN."""
        try:
            distance = descriptor_distance(h_field, h_patch)
        except DegenerateInputError:
            distance = math.nan
        if self.score is ScoreMode.CORRELATION:
            return correlation(h_field, h_patch), distance
        return -distance, distance

    def match(
        self,
        field: ScalarField,
        candidates: CandidateSet,
        templates: list[ScalarField],
        template_names: Optional[list[str]] = None,
    ) -> MatchResult:
        """
        Winner-take-all search over candidates x templates.

        Args:
            field: Image f
            candidates: Transforms theta_j; f_j = f o tau_j is sampled on the template grid
            templates: Patches p_k sharing one grid
            template_names: Optional names reported in the result

        Returns:
            MatchResult with the full score and distance matrices
        """
        if not templates:
            raise DomainError("at least one template is required")
        grid = templates[0].grid
        for k, template in enumerate(templates[1:], start=1):
            if template.grid != grid:
                raise ContractError(f"template {k} does not share the grid of template 0")
        names = template_names or [f"p{k + 1}" for k in range(len(templates))]

        patch_descriptors = [self.template_descriptor(t) for t in templates]
        scores = np.full((len(candidates), len(templates)), np.nan)
        distances = np.full_like(scores, np.nan)

        for j, candidate in enumerate(candidates):
            warped = warp(field, candidate.transform, grid)
            if warped.coverage_fraction < MIN_COVERAGE:
                logger.warning(
                    "Candidate %s covers %.0f%% of the template grid",
                    candidate.label, 100.0 * warped.coverage_fraction,
                )
            h_field = self.engine.compute(warped, self.kind)
            for k, h_patch in enumerate(patch_descriptors):
                scores[j, k], distances[j, k] = self._score(h_field, h_patch)
            logger.debug("Candidate %s scores %s", candidate.label, scores[j])

        result = MatchResult.from_scores(scores, candidates.labels, names, distances)
        logger.info(
            "Best pair: candidate %s with template %s (score %.6g)",
            result.labels[result.j_star], result.template_names[result.k_star], result.best_score,
        )
        return result
