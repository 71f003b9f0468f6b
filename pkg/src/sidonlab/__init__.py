"""Construction, verification and exact search for Sidon sets and B*_h[g] sets."""

__version__ = "0.1.0"
