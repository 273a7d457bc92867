"""Exact SDP dual certificates for cross-intersecting families of subspaces."""
__version__ = "0.1.0"
