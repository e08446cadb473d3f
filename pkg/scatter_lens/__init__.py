"""Direct and inverse scattering for matrix Schrödinger operators on the half-line."""

__version__ = "0.1.0"
