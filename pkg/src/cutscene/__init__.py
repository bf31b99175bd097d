"""Headless cutscene authoring toolkit and benchmark evaluators."""

__version__ = "0.1.0"
