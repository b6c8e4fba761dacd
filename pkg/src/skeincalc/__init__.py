"""Exact computations with Frobenius systems, 2d TQFTs and surface skein
modules."""

from .algebra import AlgElem, Algebra, TensorElem
from .builtins import barnatan, builtin, gadnaot, group_algebra, universal
from .errors import SkeinError
from .frobenius import FrobeniusSystem, make_system, verify_axioms
from .patterns import Pattern, StateSumResult, Vertex, forget_projection, state_sum, tubing_difference
from .ring import RingDescriptor, RingElem
from .skein import (
    ColoredCobordism,
    Component,
    SkeinElement,
    SurfaceCombination,
    compose,
    map_to_skein,
    normal_form,
    skein_equal,
    skein_to_map,
)
from .tqft import CobordismWord, Gen, LinearMap, apply_word, word_to_map, word_to_surface

__all__ = [
    "AlgElem", "Algebra", "TensorElem", "barnatan", "builtin", "gadnaot", "group_algebra",
    "universal", "SkeinError", "FrobeniusSystem", "make_system", "verify_axioms", "Pattern",
    "StateSumResult", "Vertex", "forget_projection", "state_sum", "tubing_difference",
    "RingDescriptor", "RingElem", "ColoredCobordism", "Component", "SkeinElement",
    "SurfaceCombination", "compose", "map_to_skein", "normal_form", "skein_equal", "skein_to_map",
    "CobordismWord", "Gen", "LinearMap", "apply_word", "word_to_map", "word_to_surface",
]
