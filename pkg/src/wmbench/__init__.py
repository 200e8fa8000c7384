"""Spatial, DCT and wavelet image watermarking with a robustness bench."""

__version__ = "0.1.0"
