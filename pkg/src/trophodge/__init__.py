"""Exact-arithmetic tropical cohomology of smooth toric varieties.

Subpackages:
  exactla    -- rational/integer linear algebra (ranks, kernels, SNF, wedges)
  fans       -- cones, fans, orbit lattices, star subdivision, built-in zoo
  tropspace  -- the compactified fan space as a stratified cell complex
  cohomology -- cellular tropical cohomology with a Cech oracle
  weightss   -- the weight spectral sequence of a smooth toric variety
  cycles     -- Minkowski weights, cycle classes, and intersection pairings
  cli        -- command-line interface
"""

from trophodge._core import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
