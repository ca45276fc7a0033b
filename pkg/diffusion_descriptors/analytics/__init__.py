"""Numerical core: kernels, field operations, descriptors, matching and continuation."""

from .descriptors import DescriptorEngine
from .matching import TemplateMatcher, correlation, descriptor_distance, intensity_energy
from .homotopy import continuation_minimize, landscape, smooth_cost, toy_cost
from .identities import IdentityCheck, IdentityVerifier

__all__ = [
    "DescriptorEngine",
    "TemplateMatcher",
    "correlation",
    "descriptor_distance",
    "intensity_energy",
    "continuation_minimize",
    "landscape",
    "smooth_cost",
    "toy_cost",
    "IdentityCheck",
    "IdentityVerifier",
]
