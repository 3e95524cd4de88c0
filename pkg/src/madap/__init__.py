"""Discipline mapping from academic-profile and bibliographic data."""

__version__ = "0.1.0"
