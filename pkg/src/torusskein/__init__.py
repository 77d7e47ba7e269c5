"""Skein modules of torus bundles, quadratic Gauss sums and torus TQFT evaluations."""
__version__ = "0.1.0"
