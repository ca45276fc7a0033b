"""Setup configuration for diffusion-descriptors package."""

from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="diffusion-descriptors",
    version="1.0.0",
    author="Diffusion Descriptors Team",
    description="Diffusion-based local image descriptors, template matching and Gaussian continuation",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="https://github.com/example/diffusion-descriptors",
    packages=find_packages(include=["diffusion_descriptors*"]),
    package_data={"diffusion_descriptors": ["data/*.json"]},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Image Recognition",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0.0",
            "pytest-cov>=4.0.0",
            "black>=23.0.0",
            "mypy>=1.0.0",
            "ruff>=0.1.0",
        ],
        "viz": [
            "matplotlib>=3.7.0",
            "pandas>=2.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "diffusion-descriptors=diffusion_descriptors.cli:main",
        ],
    },
)
