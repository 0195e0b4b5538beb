"""
Labels, images and localization trees
=====================================

A table labels every nonempty string of length at most D; a string's image
collects the labels of its nonempty prefixes.
"""

import numpy as np

from silverchase import PartialAssignment, PsiTable, localization_tree, psi_star
from silverchase.chase import gen_psi
from silverchase.psi import branching_profile, equiv_horizon, equiv_star, is_k_ary

psi = PsiTable.from_mapping(2, 2, {
    (0,): 5, (1,): 5,
    (0, 0): 1, (0, 1): 2, (1, 0): 3, (1, 1): 4,
})
print(psi_star(psi, (1, 0)))

# tables are stored level by level, most significant symbol first
for m, level in enumerate(psi.levels, start=1):
    print("level", m, level)

# nothing fixed: every image shows up, node <5> has four children
full = localization_tree(psi, PartialAssignment(2, 0, {}), 2)
print(full.sorted_nodes(), branching_profile(full))

# fixing position 1 to 0 leaves a binary tree
xi = PartialAssignment(2, 2, {1: 0})
tree = localization_tree(psi, xi, 2)
print(tree.sorted_nodes(), "binary:", is_k_ary(tree, 2))

# <0> and <1> share an image; they are not interchangeable further down
print("~ :", equiv_star(psi, (0,), (1,)), " horizon-equivalent:", equiv_horizon(psi, (0,), (1,)))

# generated tables: constant ones give chains, level-injective ones full binary trees
const = gen_psi(7, 2, 4, 5, "constant")
inj = gen_psi(7, 2, 4, 8, "level_injective")
empty = PartialAssignment(2, 0, {})
print("constant:", branching_profile(localization_tree(const, empty, 4)))
print("injective:", branching_profile(localization_tree(inj, empty, 4)))
print("distinct labels per level:", [len(np.unique(lv)) for lv in inj.levels])
