"""Vietoris-Rips filtrations built by incremental clique expansion.

A simplex enters the filtration at its diameter (largest pairwise
distance among its vertices); enumeration expands cliques of the
distance-threshold graph one vertex at a time, adding only vertices
larger than all current ones, which guarantees closure and a canonical
order by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import BudgetError, ValidationError
from .pointcloud import pairwise_distances, scale_bounds
from .validation import check_point_cloud

#: default ceiling on the number of simplices before construction aborts
DEFAULT_SIMPLEX_BUDGET = 5_000_000


class Simplex(NamedTuple):
    vertices: tuple[int, ...]
    value: float

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class Filtration:
    """Simplices sorted by (value, dimension, lexicographic vertices).

    The sort order puts every face before its cofaces: faces have values
    <= the coface's value, and ties are broken by dimension first.
    """

    simplices: tuple[Simplex, ...]
    t_max: float
    dim_cap: int

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self.simplices)

    def to_lines(self) -> list[str]:
        """Debug dump, one simplex per line: ``value dim v0 v1 ...``."""
        return [
            " ".join([repr(s.value), str(s.dim), *map(str, s.vertices)])
            for s in self.simplices
        ]


def simplex_diameter(vertices: Sequence[int], D: np.ndarray) -> float:
    """Largest pairwise distance among the given vertex indices (0 for a vertex)."""
    verts = list(vertices)
    if len(verts) < 1:
        raise ValidationError("simplex needs at least one vertex")
    n = D.shape[0]
    for v in verts:
        if not 0 <= v < n:
            raise ValidationError(f"vertex index {v} out of range for {n} points")
    best = 0.0
    for a in range(len(verts)):
        for b in range(a + 1, len(verts)):
            d = float(D[verts[a], verts[b]])
            if d > best:
                best = d
    return best


def build_vr_filtration(points, dim_cap: int = 2, t_max: float | None = None,
                        simplex_budget: int = DEFAULT_SIMPLEX_BUDGET) -> Filtration:
    """Build the Vietoris-Rips filtration of a cloud up to scale t_max.

    Contains every simplex on at most ``dim_cap + 1`` vertices whose
    diameter is <= t_max, valued at that diameter (vertices at 0).
    Homology in dimension k needs simplices up to dimension k + 1, so the
    default cap of 2 supports dimensions 0 and 1 (use 3 for dimension 2).
    ``t_max=None`` uses the cloud's stopping scale.  Construction aborts
    with a BudgetError if the simplex count would exceed the budget.
    """
    X = check_point_cloud(points)
    if dim_cap < 0:
        raise ValidationError(f"dim_cap must be >= 0, got {dim_cap}")
    if t_max is None:
        t_max = scale_bounds(X).t_max
    t_max = float(t_max)
    if not t_max > 0:
        raise ValidationError(f"t_max must be positive, got {t_max}")
    if simplex_budget < 1:
        raise ValidationError("simplex budget must be positive")

    D = pairwise_distances(X)
    n = X.shape[0]
    # neighbors above each vertex in the threshold graph, ascending
    above = [np.flatnonzero(D[i, i + 1:] <= t_max) + i + 1 for i in range(n)]

    out: list[Simplex] = []

    def emit(verts: tuple[int, ...], value: float) -> None:
        if len(out) >= simplex_budget:
            raise BudgetError(
                f"simplex budget of {simplex_budget} exceeded at scale {t_max}"
            )
        out.append(Simplex(verts, value))

    def grow(verts: tuple[int, ...], value: float, cands: Sequence[int]) -> None:
        for pos, w in enumerate(cands):
            roww = D[w]
            val = value
            for u in verts:
                duw = roww[u]
                if duw > val:
                    val = duw
            new = verts + (int(w),)
            emit(new, float(val))
            if len(new) <= dim_cap:  # dimension of `new` is len(new)-1
                nxt = [x for x in cands[pos + 1:] if roww[x] <= t_max]
                if nxt:
                    grow(new, float(val), nxt)

    for i in range(n):
        emit((i,), 0.0)
        if dim_cap >= 1:
            grow((i,), 0.0, above[i].tolist())

    out.sort(key=lambda s: (s.value, len(s.vertices), s.vertices))
    return Filtration(simplices=tuple(out), t_max=t_max, dim_cap=dim_cap)
