"""Urban-microcell channel statistics: path-loss fitting, spread metrics and
Monte Carlo generation for the 6.75 GHz and 16.95 GHz campaign data."""

__version__ = "0.1.0"
