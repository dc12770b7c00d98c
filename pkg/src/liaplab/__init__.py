"""Numerical laboratory for Liapunov stability of a damped, non-autonomous
third-order wave equation on ]0, pi[."""

__version__ = "0.1.0"
