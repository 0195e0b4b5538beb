"""
Running the chase
=================

The chase fixes positions stage by stage so that the localization tree stays
binary. Each representative either equalizes its two successors or, failing
that, separates them.
"""

from collections import Counter

from silverchase import chase, gen_psi
from silverchase.formats import chase_to_text, load_psi, tree_to_dot

psi0 = load_psi("""psi a=2 D=2
0 5
1 5
00 1
01 2
10 3
11 4
""")
run = chase(psi0, 3)
print(chase_to_text(run).split("table")[0])
print(tree_to_dot(run.final_tree))

# a constant table takes the cheapest equalizing step every time
run = chase(gen_psi(7, 2, 7, 5, "constant"), 10)
print([s.frontier for s in run.stages], run.final.free)

# random tables at a fixed horizon: how many stages, and how often the horizon runs out
for D in (4, 6, 8):
    stages, status = Counter(), Counter()
    for seed in range(200):
        r = chase(gen_psi(seed, 2, D, 4), 64)
        stages[len(r.stages) - 1] += 1
        status[r.status.kind] += 1
    print(f"D={D}", dict(sorted(stages.items())), dict(status))
