"""Exact rational computations for QFT operads, their E-infinity resolutions
and homotopy invariants of theories on orthogonal categories."""

__version__ = "0.1.0"
