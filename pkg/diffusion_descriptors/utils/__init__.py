"""Utility modules for report writing and synthetic data."""

from .sample_data_generator import SampleDataGenerator
from .report_generator import ReportGenerator
from .plotting import PlotGenerator

__all__ = [
    "SampleDataGenerator",
    "ReportGenerator",
    "PlotGenerator",
]
