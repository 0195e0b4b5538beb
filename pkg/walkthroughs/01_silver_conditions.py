"""
Silver conditions by hand
=========================

Build a few conditions, move their free points around, and compare them.
"""

from silverchase import silver
from silverchase.formats import encode_condition
from silverchase.silver import SilverCondition

# positions 0, 2, 3 are decided; 1 and everything from 5 on are free
f = SilverCondition(2, 5, {0: 1, 2: 0, 3: 1})
print(encode_condition(f))
print("first free points:", silver.free_points(f, 4))

# filling the first two free points with 1, 1
g = silver.star(f, (1, 1))
print("f * <1,1> =", encode_condition(g))
print("FP_0 of g =", silver.free_point(g, 0), "= FP_2 of f =", silver.free_point(f, 2))

# star in two steps or one gives the same condition
print(silver.star(silver.star(f, (0,)), (1,)) == silver.star(f, (0, 1)))

# <=*_i freezes the first floor(i/4) free points
e = silver.empty(2)
h = SilverCondition.tight(2, {1: 0})
for i in (0, 4, 8):
    print(f"empty <=*_{i} h:", silver.leq_star(i, e, h))

# union is defined exactly when the two conditions agree where both decide
a, b = SilverCondition.tight(2, {0: 1}), SilverCondition.tight(2, {1: 0})
print("compatible:", silver.compatible(a, b), "->", encode_condition(silver.union(a, b)))
try:
    silver.union(a, SilverCondition.tight(2, {0: 0}))
except silver.ClashError as exc:
    print("clash at position", exc.position)
