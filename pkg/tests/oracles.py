"""Independent oracles used to cross-check the production algorithms.

Everything here is deliberately naive: textbook column reduction without
any optimization, exhaustive enumeration of matchings and surjections,
plain-Python arithmetic.  None of it shares code with the package
implementations it verifies.
"""

from __future__ import annotations

from itertools import combinations, permutations, product

import numpy as np


def naive_reduction_pairs(filtration):
    """Textbook left-to-right column reduction over Z/2, no clearing/twist."""
    sims = filtration.simplices
    index_of = {s.vertices: j for j, s in enumerate(sims)}
    boundaries = []
    for s in sims:
        verts = s.vertices
        if len(verts) == 1:
            boundaries.append(set())
        else:
            boundaries.append(
                {index_of[verts[:k] + verts[k + 1:]] for k in range(len(verts))}
            )
    reduced: list[set[int]] = []
    low_owner: dict[int, int] = {}
    pairs = []
    for j, col0 in enumerate(boundaries):
        col = set(col0)
        while col:
            low = max(col)
            k = low_owner.get(low)
            if k is None:
                break
            col ^= reduced[k]
        reduced.append(col)
        if col:
            low = max(col)
            low_owner[low] = j
            pairs.append((low, j))
    return pairs


def naive_barcode(filtration):
    """Bars as sorted (dim, birth, death, essential) tuples from the naive reduction."""
    sims = filtration.simplices
    pairs = naive_reduction_pairs(filtration)
    bars = []
    for i, j in pairs:
        if sims[j].value > sims[i].value:
            bars.append((sims[i].dim, sims[i].value, sims[j].value, False))
    paired = {i for i, _ in pairs} | {j for _, j in pairs}
    for j, s in enumerate(sims):
        if j in paired:
            continue
        if s.dim <= filtration.dim_cap - 1 and s.value < filtration.t_max:
            bars.append((s.dim, s.value, filtration.t_max, True))
    return sorted(bars)


def bars_as_tuples(barcode):
    return sorted(
        (b.dim, b.birth, b.death, b.essential_at_cutoff) for b in barcode.bars
    )


def brute_bottleneck(A, B) -> float:
    """Bottleneck distance by enumerating every partial matching."""
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    B = np.asarray(B, dtype=float).reshape(-1, 2)
    n, m = len(A), len(B)
    half_a = [(d - b) / 2.0 for b, d in A]
    half_b = [(d - b) / 2.0 for b, d in B]
    best = float("inf")
    for k in range(min(n, m) + 1):
        for asub in combinations(range(n), k):
            a_rest = [i for i in range(n) if i not in asub]
            for bsub in permutations(range(m), k):
                b_rest = [j for j in range(m) if j not in bsub]
                cost = 0.0
                for i, j in zip(asub, bsub):
                    cost = max(
                        cost,
                        abs(A[i, 0] - B[j, 0]),
                        abs(A[i, 1] - B[j, 1]),
                    )
                for i in a_rest:
                    cost = max(cost, half_a[i])
                for j in b_rest:
                    cost = max(cost, half_b[j])
                best = min(best, cost)
    return best


def brute_gh(V, W) -> float:
    """Exact surjection distortion with plain loops (tiny clouds only)."""
    V = np.asarray(V, dtype=float)
    W = np.asarray(W, dtype=float)
    n, m = len(V), len(W)

    def dist(X, a, b):
        return float(np.sqrt(((X[a] - X[b]) ** 2).sum()))

    best = float("inf")
    for c in product(range(m), repeat=n):
        if len(set(c)) != m:
            continue
        worst = 0.0
        for a in range(n):
            for b in range(a + 1, n):
                worst = max(worst, abs(dist(V, a, b) - dist(W, c[a], c[b])))
        best = min(best, worst)
    return best


def euler_identity_gap(filtration, barcode, t: float) -> int:
    """chi(bars alive at t) - chi(simplices present at t); zero when consistent."""
    bar_side = 0
    for b in barcode.bars:
        alive = b.birth <= t and (t < b.death or b.essential_at_cutoff)
        if alive:
            bar_side += (-1) ** b.dim
    simplex_side = 0
    for s in filtration.simplices:
        if s.value <= t:
            simplex_side += (-1) ** s.dim
    return bar_side - simplex_side


def random_cloud(rng, n: int, d: int, spread: float = 1.0) -> np.ndarray:
    """Uniform cloud with a duplicate-free guarantee via rejection."""
    while True:
        X = rng.uniform(0.0, spread, size=(n, d))
        if len({tuple(row) for row in X}) == n:
            return X
