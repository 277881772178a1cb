"""Mixed spectral data for Schrodinger operators on the unit interval."""

__version__ = "0.1.0"
