"""Setup configuration for stokes-unfold."""

from setuptools import setup

# Configuration is in pyproject.toml
setup()
