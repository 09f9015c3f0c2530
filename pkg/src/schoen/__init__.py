"""schoen: certified homology, periods and extended Gamma-class invariants
of fibre products of rational elliptic surfaces over the projective line."""

__version__ = "0.1.0"
