"""Periodic two-fluid interfaces near a splash singularity."""

__version__ = "0.1.0"
