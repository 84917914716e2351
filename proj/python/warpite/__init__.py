"""Python bindings for the warpite C++ core."""

from ._core import Manifold, Pair, WarpiteError, difference_symbol

__all__ = ["Manifold", "Pair", "WarpiteError", "difference_symbol"]
