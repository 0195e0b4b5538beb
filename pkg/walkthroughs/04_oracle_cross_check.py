"""
Brute force against the chase
=============================

oracle_search tries every assignment with a given number of free positions.
Whatever the chase produces must be in that list.
"""

from silverchase import PartialAssignment, chase, gen_psi, localization_tree, oracle_search
from silverchase.psi import branching_profile

psi = gen_psi(3, 2, 5, 4, "collapsing")

# the unconstrained assignment is not enough: level 2 has four distinct labels
empty = PartialAssignment(2, 2, {})
print(branching_profile(localization_tree(psi, empty, 2)))
print("empty in listing:", empty in oracle_search(psi, 2, 2, 2))

run = chase(psi, 16)
for stage in run.stages:
    hits = oracle_search(psi, stage.frontier, len(stage.free), 2)
    print(f"stage {stage.index}: N={stage.frontier} free={stage.free} "
          f"in listing of {len(hits)}: {stage.assignment in hits}")
