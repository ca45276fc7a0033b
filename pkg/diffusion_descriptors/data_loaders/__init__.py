"""Data loaders for images, configuration, candidates and toy instances."""

from .pgm_loader import PGMLoader
from .config_loader import Config, ConfigLoader, HomotopyOptions, IOOptions, MatchingOptions
from .candidate_loader import CandidateLoader
from .toy_loader import ToyLoader
from .descriptor_loader import DescriptorLoader

__all__ = [
    "PGMLoader",
    "Config",
    "ConfigLoader",
    "HomotopyOptions",
    "IOOptions",
    "MatchingOptions",
    "CandidateLoader",
    "ToyLoader",
    "DescriptorLoader",
]
