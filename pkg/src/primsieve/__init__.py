"""Modified prime sieve for primitive elements avoiding affine hyperplanes."""

__version__ = "0.1.0"
