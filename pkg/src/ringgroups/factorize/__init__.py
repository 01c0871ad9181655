"""Constructive reductions: unimodular completion, local and Euclidean factorization,
relative words, commutator splitting, homotopies and the even orthogonal group."""
from .euclid import reduce_euclidean
from .local import reduce_local
from .orthogonal import (
    SquareClass,
    conjugate_by_diagonal,
    reflection,
    so_decompose_local,
    spinor_norm,
    square_in_eo,
    torus_square_word,
    whitehead_orth,
)
from .relative import (
    HomotopyWitness,
    commutator_split,
    graded_homotopy,
    homotopy_commutator,
    relativize_excision,
)
from .unimodular import complete_unimodular

__all__ = [
    "HomotopyWitness", "SquareClass", "commutator_split", "complete_unimodular",
    "conjugate_by_diagonal", "graded_homotopy", "homotopy_commutator", "reduce_euclidean",
    "reduce_local", "reflection", "relativize_excision", "so_decompose_local", "spinor_norm",
    "square_in_eo", "torus_square_word", "whitehead_orth",
]
