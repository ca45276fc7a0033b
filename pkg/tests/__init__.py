"""Tests for the diffusion descriptors package."""
