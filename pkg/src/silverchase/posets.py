"""Small finite posets, up to isomorphism.

Every poset has a linear extension, so each isomorphism class has a member in
which ``x <= y`` implies ``x <= y`` as integers.  We enumerate those upper
triangular relations, keep the transitive ones and deduplicate by a canonical
form (lexicographically least relabeled matrix).
"""

from __future__ import annotations

import json
from importlib import resources
from itertools import permutations, product

import numpy as np

from silverchase.game import FinitePoset

SHIPPED = "posets_upto5.json"


def _canonical(m: np.ndarray, perms) -> bytes:
    return min(m[np.ix_(p, p)].tobytes() for p in perms)


def posets_up_to_iso(size: int) -> list[np.ndarray]:
    """One order matrix per isomorphism class of ``size``-element posets."""
    pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
    perms = [list(p) for p in permutations(range(size))]
    seen = {}
    for bits in product((False, True), repeat=len(pairs)):
        m = np.eye(size, dtype=bool)
        for (i, j), b in zip(pairs, bits):
            m[i, j] = b
        mi = m.astype(np.int64)
        if ((mi @ mi > 0) & ~m).any():
            continue
        key = _canonical(m, perms)
        seen.setdefault(key, m)
    return [seen[k] for k in sorted(seen)]


def write_corpus(path, max_size: int = 5) -> None:
    doc = {
        "format_version": 1,
        "max_size": max_size,
        "posets": [m.astype(int).tolist() for k in range(1, max_size + 1) for m in posets_up_to_iso(k)],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, separators=(",", ":"))
        fh.write("\n")


def shipped_posets() -> list[FinitePoset]:
    """The in-repo corpus of all posets with 1 to 5 elements up to isomorphism."""
    text = resources.files("silverchase").joinpath("data").joinpath(SHIPPED).read_text()
    return [FinitePoset(m) for m in json.loads(text)["posets"]]
