"""Value types: structure-constant algebras and permutation groups."""
from .algebra import Algebra, BlockInfo, BlockRole, SubspaceConstraint
from .permutation import PermGroup, Permutation

__all__ = [
    "Algebra",
    "BlockInfo",
    "BlockRole",
    "SubspaceConstraint",
    "PermGroup",
    "Permutation",
]
