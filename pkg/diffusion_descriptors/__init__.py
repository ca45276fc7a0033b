"""
Diffusion Descriptors

Local image descriptors derived from anisotropic diffusion of the image
(continuous SIFT, domain-size pooling, the affine heat descriptor and
distribution fields), winner-take-all template matching, and Gaussian
diffusion continuation for non-convex alignment costs.
"""

__version__ = "1.0.0"
__author__ = "Diffusion Descriptors Team"

from .models.field import ScalarField, SimilarityTransform, AffineTransform
from .models.descriptor import Descriptor, DescriptorKind, DescriptorParams
from .analytics.descriptors import DescriptorEngine
from .analytics.matching import TemplateMatcher
from .analytics.homotopy import continuation_minimize

__all__ = [
    "ScalarField",
    "SimilarityTransform",
    "AffineTransform",
    "Descriptor",
    "DescriptorKind",
    "DescriptorParams",
    "DescriptorEngine",
    "TemplateMatcher",
    "continuation_minimize",
]
