"""Finite-scale laboratory for Silver conditions, localization trees and the chase."""

__version__ = "0.1.0"

from silverchase.chase import chase, gen_psi, oracle_search
from silverchase.psi import (
    LabeledTree,
    PartialAssignment,
    PsiTable,
    localization_tree,
    psi_star,
)
from silverchase.silver import SilverCondition

__all__ = [
    "LabeledTree",
    "PartialAssignment",
    "PsiTable",
    "SilverCondition",
    "chase",
    "gen_psi",
    "localization_tree",
    "oracle_search",
    "psi_star",
]
