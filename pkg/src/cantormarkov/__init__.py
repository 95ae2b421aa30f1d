"""Countable Markov partitions, first-return coding and thermodynamic formalism
for a family of piecewise-hyperbolic maps of the unit square."""
from __future__ import annotations

from importlib.metadata import PackageNotFoundError, version

from .model import DEFAULT_SPEC, ModelSpec, Point, apply, verify_conditions

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

__all__ = ["DEFAULT_SPEC", "ModelSpec", "Point", "apply", "verify_conditions", "__version__"]
