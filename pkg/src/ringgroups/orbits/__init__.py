"""Orbit enumeration of unimodular rows over finite rings."""
from .finite import FiniteRingEnum, enum_um, generates_unit_ideal
from .kernels import HAVE_NUMBA, default_backend, orbit_labels
from .table import (
    OrbitTable,
    complete_relative,
    generator_matrices,
    inverses,
    is_associative,
    is_commutative,
    orbit_bfs,
    orbit_group,
    table_identity,
)

__all__ = [
    "FiniteRingEnum", "HAVE_NUMBA", "OrbitTable", "complete_relative", "default_backend",
    "enum_um", "generates_unit_ideal", "generator_matrices", "inverses", "is_associative", "is_commutative",
    "orbit_bfs", "orbit_group", "orbit_labels", "table_identity",
]
