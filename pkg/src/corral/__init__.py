"""corral: monoids, corners and b-cotangent fibres, computed exactly where possible."""

__version__ = "0.1.0"
