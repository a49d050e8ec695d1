"""Persistence barcodes via boundary-matrix reduction over Z/2.

The reduction is the standard left-to-right column algorithm with the
clearing optimization (dimensions processed top down; a column known to
be a paired birth is skipped), which produces exactly the same pairing
as the unoptimized algorithm.  Columns are big-int bitmasks over the
per-dimension filtration ranks, so column addition is a single XOR.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, ValidationError
from .filtration import Filtration
from .pointcloud import pairwise_distances, scale_bounds
from .validation import check_point_cloud

SCALE_CONVENTION = "diameter"


@dataclass(frozen=True)
class Bar:
    """One bar [birth, death) of the barcode.

    ``essential_at_cutoff`` marks a homology class still alive when the
    filtration was truncated; such bars die at the truncation scale by
    convention.  Zero-length bars are not representable (birth < death).
    """

    dim: int
    birth: float
    death: float
    essential_at_cutoff: bool = False

    def __post_init__(self):
        if self.dim < 0:
            raise ValidationError(f"bar dimension must be >= 0, got {self.dim}")
        if not (math.isfinite(self.birth) and math.isfinite(self.death)):
            raise ValidationError("bar endpoints must be finite")
        if not self.birth < self.death:
            raise ValidationError(
                f"bar must satisfy birth < death, got [{self.birth}, {self.death})"
            )

    @property
    def length(self) -> float:
        return self.death - self.birth


def _bar_key(b: Bar):
    return (b.dim, b.birth, b.death, b.essential_at_cutoff)


@dataclass(frozen=True)
class Barcode:
    """Multiset of bars together with the truncation scale of the source filtration.

    Bars are kept in canonical (dim, birth, death) order so equal
    barcodes serialize identically.
    """

    bars: tuple[Bar, ...]
    t_max: float

    def __post_init__(self):
        if not self.t_max > 0:
            raise ValidationError(f"t_max must be positive, got {self.t_max}")
        bars = tuple(sorted(self.bars, key=_bar_key))
        for b in bars:
            if b.death > self.t_max:
                raise ValidationError(
                    f"bar death {b.death} exceeds the filtration cutoff {self.t_max}"
                )
            if b.essential_at_cutoff and b.death != self.t_max:
                raise ValidationError("essential bars must die at the cutoff scale")
        object.__setattr__(self, "bars", bars)

    def __len__(self) -> int:
        return len(self.bars)

    def lengths(self) -> list[float]:
        return [b.length for b in self.bars]

    def to_json(self) -> str:
        return json.dumps(
            {
                "t_max": self.t_max,
                "scale_convention": SCALE_CONVENTION,
                "bars": [
                    {
                        "dim": b.dim,
                        "birth": b.birth,
                        "death": b.death,
                        "essential": b.essential_at_cutoff,
                    }
                    for b in self.bars
                ],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "Barcode":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid barcode JSON: {exc}") from None
        if not isinstance(doc, dict) or "t_max" not in doc or "bars" not in doc:
            raise FormatError("barcode JSON must carry 't_max' and 'bars'")
        if doc.get("scale_convention") != SCALE_CONVENTION:
            raise FormatError(
                f"unsupported scale convention {doc.get('scale_convention')!r}"
            )
        try:
            bars = tuple(
                Bar(
                    dim=int(rec["dim"]),
                    birth=float(rec["birth"]),
                    death=float(rec["death"]),
                    essential_at_cutoff=bool(rec["essential"]),
                )
                for rec in doc["bars"]
            )
            return cls(bars=bars, t_max=float(doc["t_max"]))
        except (KeyError, TypeError, ValidationError) as exc:
            raise FormatError(f"invalid barcode JSON: {exc}") from None


def restrict_dim(barcode: Barcode, k: int) -> Barcode:
    """Keep only bars of dimension k (may be empty); t_max is preserved."""
    if k < 0:
        raise ValidationError(f"dimension must be >= 0, got {k}")
    return Barcode(
        bars=tuple(b for b in barcode.bars if b.dim == k), t_max=barcode.t_max
    )


def compute_barcode(filt: Filtration) -> Barcode:
    """Reduce the filtration's boundary matrix and read off the barcode.

    Each pair (sigma, tau) with value(sigma) < value(tau) yields a bar
    [value(sigma), value(tau)) in dim(sigma); equal-value pairs are
    dropped.  Positive simplices of dimension <= dim_cap - 1 left
    unpaired yield essential bars [value, t_max) -- higher-dimensional
    classes are unreliable at the cap and are not reported.
    """
    sims = filt.simplices
    if not sims:
        raise ValidationError("cannot compute a barcode from an empty filtration")
    max_dim = max(s.dim for s in sims)

    by_dim: list[list[int]] = [[] for _ in range(max_dim + 1)]
    rank_in_dim = np.empty(len(sims), dtype=np.int64)
    index_of: dict[tuple[int, ...], int] = {}
    for j, s in enumerate(sims):
        rank_in_dim[j] = len(by_dim[s.dim])
        by_dim[s.dim].append(j)
        index_of[s.vertices] = j

    pairs: list[tuple[int, int]] = []
    cleared: set[int] = set()

    for d in range(max_dim, 0, -1):
        low_owner: dict[int, int] = {}  # pivot row rank -> reduced column mask
        for j in by_dim[d]:
            if j in cleared:
                continue
            verts = sims[j].vertices
            mask = 0
            for drop in range(len(verts)):
                facet = verts[:drop] + verts[drop + 1:]
                mask ^= 1 << int(rank_in_dim[index_of[facet]])
            while mask:
                low = mask.bit_length() - 1
                other = low_owner.get(low)
                if other is None:
                    break
                mask ^= other
            if mask:
                low = mask.bit_length() - 1
                low_owner[low] = mask
                gi = by_dim[d - 1][low]
                pairs.append((gi, j))
                cleared.add(gi)

    bars: list[Bar] = []
    for gi, gj in pairs:
        birth, death = sims[gi].value, sims[gj].value
        if death > birth:
            bars.append(Bar(dim=sims[gi].dim, birth=birth, death=death))

    deaths = {gj for _, gj in pairs}
    births = {gi for gi, _ in pairs}
    for j, s in enumerate(sims):
        if j in deaths or j in births:
            continue
        if s.dim <= filt.dim_cap - 1 and s.value < filt.t_max:
            bars.append(
                Bar(dim=s.dim, birth=s.value, death=filt.t_max, essential_at_cutoff=True)
            )
    return Barcode(bars=tuple(bars), t_max=filt.t_max)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:  # path compression
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def dim0_barcode_unionfind(points, t_max: float | None = None) -> Barcode:
    """Dimension-0 barcode by Kruskal's algorithm (independent of the reduction).

    One bar per point born at 0; finite deaths are the minimum-spanning-
    tree edge weights, and every component still separate at t_max yields
    an essential bar.
    """
    X = check_point_cloud(points)
    if t_max is None:
        t_max = scale_bounds(X).t_max
    t_max = float(t_max)
    if not t_max > 0:
        raise ValidationError(f"t_max must be positive, got {t_max}")
    D = pairwise_distances(X)
    n = X.shape[0]
    edges = sorted(
        (float(D[i, j]), i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if D[i, j] <= t_max
    )
    uf = _UnionFind(n)
    bars: list[Bar] = []
    merges = 0
    for w, i, j in edges:
        if uf.union(i, j):
            bars.append(Bar(dim=0, birth=0.0, death=w))
            merges += 1
            if merges == n - 1:
                break
    components = n - merges
    bars.extend(
        Bar(dim=0, birth=0.0, death=t_max, essential_at_cutoff=True)
        for _ in range(components)
    )
    return Barcode(bars=tuple(bars), t_max=t_max)
