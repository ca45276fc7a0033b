"""Tests for descriptor scores and template matching."""

import math

import numpy as np
import pytest

from diffusion_descriptors.analytics.matching import (
    TemplateMatcher,
    correlation,
    descriptor_distance,
    intensity_energy,
    matching_energy,
)
from diffusion_descriptors.exceptions import ContractError, DegenerateInputError, DomainError, MatchingError
from diffusion_descriptors.models.descriptor import Descriptor, DescriptorKind, DescriptorParams
from diffusion_descriptors.models.field import GridSpec, ScalarField, SimilarityTransform
from diffusion_descriptors.models.matching import CandidateSet, MatchResult, ScoreMode
from diffusion_descriptors.utils.sample_data_generator import SampleDataGenerator

PARAMS = DescriptorParams(n_beta_bins=2, grid=GridSpec.centered(2, 2, 1.0))


def make_descriptor(values, kind=DescriptorKind.SIFT, params=PARAMS):
    """Wrap a (2, 2, 2) array as a descriptor on a unit 2x2 grid."""
    return Descriptor(
        kind=kind,
        values=np.asarray(values, dtype=float).reshape(2, 2, 2),
        beta_centers=params.beta_centers,
        grid=params.descriptor_grid,
        params=params,
    )


class TestDescriptorDistance:
    """Tests for the normalised L2 distance."""

    def test_self_distance(self):
        """A descriptor is at distance 0 from itself."""
        h = make_descriptor(np.arange(1.0, 9.0))
        assert descriptor_distance(h, h) == pytest.approx(0.0, abs=1e-12)

    def test_scale_invariant(self):
        """Positive rescaling does not change the distance."""
        h = make_descriptor(np.arange(1.0, 9.0))
        assert descriptor_distance(h, make_descriptor(3.5 * np.arange(1.0, 9.0))) == pytest.approx(0.0, abs=1e-12)

    def test_opposite_signed(self):
        """A signed descriptor and its negation are at the maximal distance 2."""
        values = np.array([1.0, -2.0, 0.5, 3.0, 0.0, 1.0, -1.0, 2.0])
        h = make_descriptor(values, DescriptorKind.DSP_CLOSED_BOTH)
        minus = make_descriptor(-values, DescriptorKind.DSP_CLOSED_BOTH)
        assert descriptor_distance(h, minus) == pytest.approx(2.0, abs=1e-12)

    def test_zero_norm(self):
        """Zero descriptors cannot be normalised."""
        with pytest.raises(DegenerateInputError):
            descriptor_distance(make_descriptor(np.zeros(8)), make_descriptor(np.ones(8)))

    def test_bounded(self):
        """Distances between non-negative descriptors stay within [0, sqrt(2)]."""
        rng = np.random.default_rng(0)
        for _ in range(20):
            d = descriptor_distance(make_descriptor(rng.random(8)), make_descriptor(rng.random(8)))
            assert 0.0 <= d <= math.sqrt(2.0) + 1e-12

    def test_symmetric(self):
        """d(h1, h2) equals d(h2, h1) exactly."""
        rng = np.random.default_rng(1)
        for _ in range(50):
            h1 = make_descriptor(rng.normal(size=8), DescriptorKind.DSP_CLOSED_BOTH)
            h2 = make_descriptor(rng.normal(size=8), DescriptorKind.DSP_CLOSED_BOTH)
            assert descriptor_distance(h1, h2) == descriptor_distance(h2, h1)

    def test_triangle_inequality(self):
        """d(h1, h3) never exceeds d(h1, h2) + d(h2, h3)."""
        rng = np.random.default_rng(2)
        for _ in range(100):
            h1, h2, h3 = (make_descriptor(rng.normal(size=8), DescriptorKind.DSP_CLOSED_BOTH) for _ in range(3))
            direct = descriptor_distance(h1, h3)
            detour = descriptor_distance(h1, h2) + descriptor_distance(h2, h3)
            assert direct <= detour + 1e-9


class TestCorrelation:
    """Tests for the Riemann-sum inner product."""

    def test_hand_computed(self):
        """ones . arange weighted by pi * 1."""
        h1 = make_descriptor(np.ones(8))
        h2 = make_descriptor(np.arange(8.0))
        assert correlation(h1, h2) == pytest.approx(28 * math.pi, rel=1e-14)
        assert matching_energy(h1, h2) == pytest.approx(-28 * math.pi, rel=1e-14)

    def test_orthogonal(self):
        """Disjoint orientation support gives 0."""
        first = np.zeros((2, 2, 2))
        first[0] = 1.0
        second = np.zeros((2, 2, 2))
        second[1] = 1.0
        assert correlation(make_descriptor(first), make_descriptor(second)) == 0.0

    def test_energy_reverses_ordering(self):
        """Correlation and matching energy rank every pair of patches in opposite order."""
        rng = np.random.default_rng(3)
        for _ in range(200):
            field, first, second = (make_descriptor(rng.random(8)) for _ in range(3))
            c1, c2 = correlation(field, first), correlation(field, second)
            e1, e2 = matching_energy(field, first), matching_energy(field, second)
            assert e1 == -c1 and e2 == -c2
            assert (c1 > c2) == (e1 < e2)
            assert (c1 < c2) == (e1 > e2)

    def test_grid_mismatch(self):
        """Descriptors on different grids are incompatible."""
        other = DescriptorParams(n_beta_bins=2, grid=GridSpec.centered(2, 2, 0.5))
        with pytest.raises(ContractError):
            correlation(make_descriptor(np.ones(8)), make_descriptor(np.ones(8), params=other))

    def test_kind_mismatch(self):
        """Orientation and level axes cannot be mixed."""
        params = DescriptorParams(n_levels=2, grid=GridSpec.centered(2, 2, 1.0))
        df = Descriptor(DescriptorKind.DF, np.ones((2, 2, 2)), params.levels, params.descriptor_grid, params)
        with pytest.raises(ContractError):
            correlation(make_descriptor(np.ones(8)), df)


class TestIntensityEnergy:
    """Tests for the intensity matching energy."""

    def test_identity_cut(self):
        """A template cut from the field matches under the identity."""
        blob = SampleDataGenerator.blob(33, 4.0)
        assert intensity_energy(blob, blob, SimilarityTransform.identity()) == pytest.approx(0.0, abs=1e-20)

    def test_constant_offset(self):
        """A 0.1 offset over unit area costs 0.01."""
        field = ScalarField.from_array(np.full((20, 20), 0.5))
        template = ScalarField.from_array(np.full((10, 10), 0.4), spacing=0.1)
        energy = intensity_energy(field, template, SimilarityTransform.identity())
        assert energy == pytest.approx(0.01, rel=1e-9)

    def test_no_coverage(self):
        """A template mapped entirely outside the field is rejected."""
        blob = SampleDataGenerator.blob(33, 4.0)
        with pytest.raises(DomainError):
            intensity_energy(blob, blob, SimilarityTransform.translation(500.0, 0.0))

    def test_translation_minimum(self):
        """Among integer shifts the true displacement has the lowest energy."""
        field = SampleDataGenerator.blob(65, 4.0, center=(3.0, 0.0))
        template = SampleDataGenerator.blob(33, 4.0)
        energies = {
            bx: intensity_energy(field, template, SimilarityTransform.translation(bx, 0.0))
            for bx in (-3.0, 0.0, 2.0, 3.0, 4.0)
        }
        assert min(energies, key=energies.get) == 3.0
        assert energies[3.0] == pytest.approx(0.0, abs=1e-20)


class TestTemplateMatcher:
    """Tests for winner-take-all matching."""

    @pytest.fixture
    def scene(self):
        """Blob displaced by (3, 0) with a centred template."""
        field = SampleDataGenerator.blob(65, 4.0, center=(3.0, 0.0))
        template = SampleDataGenerator.blob(33, 4.0)
        candidates = CandidateSet.grid(translations=((0.0, 0.0), (-3.0, 0.0), (3.0, 0.0), (0.0, 3.0)))
        return field, template, candidates

    @pytest.mark.parametrize("score", ["correlation", "distance"])
    def test_self_match(self, scene, score):
        """The true displacement wins in both scoring modes."""
        field, template, candidates = scene
        matcher = TemplateMatcher(kind="sift", score=score)
        result = matcher.match(field, candidates, [template], ["blob"])
        assert result.labels[result.j_star] == "a0_s0_b3,0"
        assert result.k_star == 0
        assert result.scores.shape == (4, 1)
        if score == "distance":
            assert result.best_score == pytest.approx(0.0, abs=1e-6)

    def test_distance_ignores_template_scale(self, scene):
        """Halving the template contrast leaves distance scores and the winner unchanged."""
        field, template, candidates = scene
        matcher = TemplateMatcher(kind="sift", score="distance")
        before = matcher.match(field, candidates, [template])
        after = matcher.match(field, candidates, [template.with_values(0.5 * template.values)])
        assert (after.j_star, after.k_star) == (before.j_star, before.k_star)
        np.testing.assert_allclose(after.scores, before.scores, rtol=1e-9, atol=1e-6)

    def test_correlation_argmax_survives_field_scale(self, scene):
        """Halving the field halves every correlation and keeps the winner."""
        field, template, candidates = scene
        matcher = TemplateMatcher(kind="sift", score="correlation")
        before = matcher.match(field, candidates, [template])
        after = matcher.match(field.with_values(0.5 * field.values), candidates, [template])
        assert (after.j_star, after.k_star) == (before.j_star, before.k_star)
        np.testing.assert_allclose(after.scores, 0.5 * before.scores, rtol=1e-9)

    def test_template_choice(self, scene):
        """With two templates the one that fits is chosen."""
        field, template, candidates = scene
        edge = SampleDataGenerator.edge(33, 0.0)
        result = TemplateMatcher(score=ScoreMode.DISTANCE).match(field, candidates, [edge, template])
        assert result.template_names == ["p1", "p2"]
        assert result.k_star == 1

    def test_correlation_pairs_with_raw_density(self):
        """Correlation mode uses the raw density on the template side, except for distribution fields."""
        template = SampleDataGenerator.blob(33, 4.0)
        assert TemplateMatcher(kind="sift").template_descriptor(template).kind is DescriptorKind.RAW_DENSITY
        assert TemplateMatcher(kind="df").template_descriptor(template).kind is DescriptorKind.DF
        matcher = TemplateMatcher(kind="heat", score="distance")
        assert matcher.template_descriptor(template).kind is DescriptorKind.HEAT

    def test_heat_glyphs(self):
        """Heat descriptors pick the right glyph under small jitter."""
        generator = SampleDataGenerator(seed=7)
        matcher = TemplateMatcher(DescriptorParams(sigma_d=3.0), kind="heat", score="distance")
        templates = [generator.glyph_view("A"), generator.glyph_view("B")]
        for k, letter in enumerate("AB"):
            result = matcher.match(generator.glyph(letter), CandidateSet.single(SimilarityTransform.identity()),
                                   templates, ["A", "B"])
            assert result.k_star == k

    def test_no_templates(self, scene):
        """An empty template list is rejected."""
        field, _, candidates = scene
        with pytest.raises(DomainError):
            TemplateMatcher().match(field, candidates, [])

    def test_templates_share_grid(self, scene):
        """Templates on different grids are rejected."""
        field, template, candidates = scene
        with pytest.raises(ContractError):
            TemplateMatcher().match(field, candidates, [template, SampleDataGenerator.blob(21, 4.0)])


class TestCandidateSet:
    """Tests for candidate sets."""

    def test_grid_labels(self):
        """Grid candidates enumerate the product in order."""
        candidates = CandidateSet.grid(alphas=(0.0, 0.1), translations=((0.0, 0.0), (1.0, 2.0)))
        assert len(candidates) == 4
        assert candidates.labels == ["a0_s0_b0,0", "a0_s0_b1,2", "a0.1_s0_b0,0", "a0.1_s0_b1,2"]
        assert candidates[3].transform.alpha == 0.1

    def test_empty(self):
        """Empty sets are rejected."""
        with pytest.raises(DomainError):
            CandidateSet([])

    def test_duplicate_labels(self):
        """Labels must be unique."""
        candidates = CandidateSet.single(SimilarityTransform.identity())
        with pytest.raises(DomainError):
            CandidateSet(candidates.entries * 2)

    def test_to_list(self):
        """Serialised candidates carry their label."""
        [entry] = CandidateSet.single(SimilarityTransform.translation(1.0, 0.0), "shift").to_list()
        assert entry["label"] == "shift"


class TestMatchResult:
    """Tests for winner selection."""

    def test_tie_breaks_low_index(self):
        """Ties go to the lowest (j, k) in row-major order."""
        result = MatchResult.from_scores(np.array([[1.0, 2.0], [2.0, 0.0]]), ["c1", "c2"], ["p1", "p2"])
        assert (result.j_star, result.k_star) == (0, 1)
        assert result.best_score == 2.0

    def test_nan_scores_skipped(self):
        """Non-finite scores never win."""
        result = MatchResult.from_scores(np.array([[np.nan, 0.5]]), ["c1"], ["p1", "p2"])
        assert result.k_star == 1

    def test_all_nan(self):
        """No finite score is an error."""
        with pytest.raises(MatchingError):
            MatchResult.from_scores(np.full((2, 2), np.nan), ["c1", "c2"], ["p1", "p2"])

    def test_to_dict(self):
        """Dictionary form exposes the winner and the matrix."""
        data = MatchResult.from_scores(np.array([[0.1, 0.3]]), ["c1"], ["p1", "p2"]).to_dict()
        assert data["k_star"] == 1
        assert data["templates"] == ["p1", "p2"]
        assert data["scores"] == [[0.1, 0.3]]
