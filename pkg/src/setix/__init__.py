"""Word-packed and dynamic set intersection structures, plus triangle listing."""
from .emptiness import EmptinessStructure, SizeClass
from .errors import (
    CapacityError,
    DuplicateElementError,
    ElementNotFoundError,
    FieldRangeError,
    GraphParseError,
    LayoutMismatchError,
    SetixError,
    UnknownSetError,
)
from .fully_dynamic import IntersectionTree
from .packed_sets import PackedFamily
from .triangle_enum import Graph, count_triangles, enumerate_triangles, orient
from .witness import WitnessStructure
from .word_ops import LAYOUT32, LAYOUT64, Layout, PackedList

__version__ = "0.1.0"

__all__ = [
    "EmptinessStructure",
    "Graph",
    "IntersectionTree",
    "LAYOUT32",
    "LAYOUT64",
    "Layout",
    "PackedFamily",
    "PackedList",
    "SizeClass",
    "WitnessStructure",
    "count_triangles",
    "enumerate_triangles",
    "orient",
    "CapacityError",
    "DuplicateElementError",
    "ElementNotFoundError",
    "FieldRangeError",
    "GraphParseError",
    "LayoutMismatchError",
    "SetixError",
    "UnknownSetError",
]
