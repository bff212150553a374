"""Regenerate src/convwalk/data/s4_irreps.json and print its sha256.

Elements are indexed like ``symmetric:4``: lexicographic permutation tuples
with composition ``(p.q)(i) = p[q[i]]``.
"""

import hashlib
import itertools
import json
from pathlib import Path

import numpy as np
from scipy import linalg

from convwalk.fourier import Representation
from convwalk.group import symmetric

OUT = Path(__file__).resolve().parents[1] / "src" / "convwalk" / "data" / "s4_irreps.json"
PAIRINGS = [frozenset({frozenset({0, 1}), frozenset({2, 3})}),
            frozenset({frozenset({0, 2}), frozenset({1, 3})}),
            frozenset({frozenset({0, 3}), frozenset({1, 2})})]


def perm_matrix(p):
    n = len(p)
    m = np.zeros((n, n))
    m[list(p), range(n)] = 1.0
    return m


def sum_zero_block(p):
    basis = linalg.null_space(np.ones((1, len(p))))
    return basis.T @ perm_matrix(p) @ basis


def on_pairings(p):
    moved = [frozenset(frozenset(p[i] for i in pair) for pair in P) for P in PAIRINGS]
    return tuple(PAIRINGS.index(m) for m in moved)


def main():
    perms = list(itertools.permutations(range(4)))
    sign = [round(np.linalg.det(perm_matrix(p))) for p in perms]
    mats = {
        "trivial": [np.ones((1, 1)) for _ in perms],
        "sign": [np.full((1, 1), s) for s in sign],
        "pairings": [sum_zero_block(on_pairings(p)) for p in perms],
        "standard": [sum_zero_block(p) for p in perms],
        "standard-x-sign": [s * sum_zero_block(p) for p, s in zip(perms, sign)],
    }
    G = symmetric(4)
    reps = []
    for label, ms in mats.items():
        rep = Representation(G, ms[0].shape[0], np.array(ms), label).validate()
        reps.append(rep.to_dict())
    payload = {"group": {"family": "symmetric", "n": 4}, "representations": reps}
    raw = json.dumps(payload, indent=1, sort_keys=True).encode() + b"\n"
    OUT.write_bytes(raw)
    print(hashlib.sha256(raw).hexdigest())


if __name__ == "__main__":
    main()
