"""Exact polynomial algebra: arithmetic, standard bases, modules, Fitting ideals."""
from .ideal import INFINITE, Ideal, ideal_equal_local, ideal_witness
from .matrix import PolyMatrix
from .mode import get_mode, set_mode, using_mode
from .modules import minimal_columns, module_kernel, prune_presentation, syzygies
from .orders import MonomialOrder
from .polynomial import NotDivisible, PolyRing, Polynomial, RingMismatch, parse_polynomial

__all__ = [
    "INFINITE", "Ideal", "MonomialOrder", "NotDivisible", "PolyMatrix", "PolyRing",
    "Polynomial", "RingMismatch", "get_mode", "ideal_equal_local", "ideal_witness",
    "minimal_columns", "module_kernel", "parse_polynomial", "prune_presentation",
    "set_mode", "syzygies", "using_mode",
]
