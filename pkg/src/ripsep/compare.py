"""Diagram and cloud comparison: bottleneck distance, finite
Gromov-Hausdorff distortion, and perturbation stability reports.

The bottleneck distance is exact: the optimum is always one of the
finitely many candidate costs (pairwise infinity-norm distances plus
half-persistences), so a binary search over candidates with a bipartite
perfect-matching feasibility check returns it with no tolerance.

``gh_distortion`` implements the finite-cloud quantity
``2*d_GH(V, W) = min over surjections c: V -> W of
max |d(p, p') - d(c(p), c(p'))|``.  As written this is asymmetric
(surjections from V onto W only); it is computed exactly as stated.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import permutations, product

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .entropy import persistent_entropy
from .errors import StabilityError, ValidationError
from .filtration import build_vr_filtration
from .persistence import Barcode, compute_barcode
from .pointcloud import pairwise_distances, perturb, scale_bounds
from .validation import check_diagram, check_point_cloud

#: exact enumeration over surjections is only a desk-scale oracle
GH_MAX_POINTS = 9

#: slack for the stability inequality check (pure floating-point headroom)
STABILITY_TOL = 1e-9


def diagram_from_barcode(barcode: Barcode, dim: int) -> np.ndarray:
    """(birth, death) points of the dim-k bars; essential bars die at t_max."""
    pts = [(b.birth, b.death) for b in barcode.bars if b.dim == dim]
    return check_diagram(np.array(pts) if pts else np.empty((0, 2)))


def _halves(diag: np.ndarray) -> np.ndarray:
    """Cost of matching each point to the diagonal: half its persistence."""
    return (diag[:, 1] - diag[:, 0]) / 2.0


def bottleneck_distance(A, B) -> float:
    """Exact bottleneck distance between two finite diagrams.

    Minimum over matchings (points may be sent to the diagonal at half
    their persistence) of the maximum infinity-norm displacement.
    """
    A = check_diagram(A)
    B = check_diagram(B)
    n, m = len(A), len(B)
    if n == 0 and m == 0:
        return 0.0
    if n == 0:
        return float(_halves(B).max())
    if m == 0:
        return float(_halves(A).max())

    cross = np.maximum(
        np.abs(A[:, 0, None] - B[None, :, 0]),
        np.abs(A[:, 1, None] - B[None, :, 1]),
    )
    half_a, half_b = _halves(A), _halves(B)
    candidates = np.unique(np.concatenate([[0.0], cross.ravel(), half_a, half_b]))

    def feasible(lam: float) -> bool:
        # left: A points then B diagonal slots; right: B points then A slots
        size = n + m
        dense = np.zeros((size, size), dtype=bool)
        dense[:n, :m] = cross <= lam
        dense[np.arange(n), m + np.arange(n)] = half_a <= lam
        dense[n + np.arange(m), np.arange(m)] = half_b <= lam
        dense[n:, m:] = True  # unused diagonal slots pair up for free
        match = maximum_bipartite_matching(csr_matrix(dense), perm_type="column")
        return int((match >= 0).sum()) == size

    lo, hi = 0, len(candidates) - 1
    # all-diagonal matching is feasible at the largest candidate by construction
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(float(candidates[mid])):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def _min_distortion(DV: np.ndarray, DW: np.ndarray, maps: np.ndarray) -> float:
    n = DV.shape[0]
    iu, ju = np.triu_indices(n, 1)
    base = DV[iu, ju]
    worst = np.abs(base[None, :] - DW[maps[:, iu], maps[:, ju]]).max(axis=1)
    return float(worst.min())


def gh_distortion(V, W) -> float:
    """Exact minimum distortion 2*d_GH over all surjections V -> W.

    Factorial enumeration: |V| must not exceed 9 (use
    :func:`identity_distortion` for larger equal-size clouds) and |V|
    must be at least |W| or no surjection exists.
    """
    V = check_point_cloud(V)
    W = check_point_cloud(W)
    n, m = V.shape[0], W.shape[0]
    if n < m:
        raise ValidationError(f"no surjection from {n} points onto {m}")
    if n > GH_MAX_POINTS:
        raise ValidationError(
            f"exact enumeration is capped at {GH_MAX_POINTS} points, got {n}; "
            "use identity_distortion for an upper bound"
        )
    DV, DW = pairwise_distances(V), pairwise_distances(W)
    best = np.inf
    chunk: list[tuple[int, ...]] = []
    if n == m:
        source = permutations(range(m))
    else:
        source = (c for c in product(range(m), repeat=n) if len(set(c)) == m)
    for c in source:
        chunk.append(c)
        if len(chunk) == 8192:
            best = min(best, _min_distortion(DV, DW, np.array(chunk)))
            chunk.clear()
    if chunk:
        best = min(best, _min_distortion(DV, DW, np.array(chunk)))
    return best


def identity_distortion(V, W) -> float:
    """Distortion of the identity correspondence between equal-size clouds.

    Upper bound on the exact surjection minimum; for a cloud perturbed by
    delta this is at most 2*delta by the triangle inequality.
    """
    V = check_point_cloud(V)
    W = check_point_cloud(W)
    if V.shape[0] != W.shape[0]:
        raise ValidationError(
            f"identity correspondence needs equal sizes, got {V.shape[0]} and {W.shape[0]}"
        )
    return float(np.abs(pairwise_distances(V) - pairwise_distances(W)).max())


@dataclass(frozen=True)
class StabilityRecord:
    delta: float
    distortion: float
    distortion_exact: bool
    bottleneck: tuple[float, ...]  # per homology dimension 0 .. dim_cap-1
    entropy_delta: float


@dataclass(frozen=True)
class StabilityReport:
    records: tuple[StabilityRecord, ...]
    entropy_trend_ok: bool
    seed: int
    dim_cap: int

    def to_json(self) -> str:
        import json

        return json.dumps(
            [
                {
                    "delta": r.delta,
                    "distortion": r.distortion,
                    "distortion_exact": r.distortion_exact,
                    "bottleneck": {str(k): v for k, v in enumerate(r.bottleneck)},
                    "entropy_delta": r.entropy_delta,
                }
                for r in self.records
            ],
            indent=2,
        )

    def to_text(self) -> str:
        dims = range(self.dim_cap)
        header = ["delta", "distortion", "exact", *[f"d_b[dim {k}]" for k in dims],
                  "|dE|"]
        rows = [
            [
                repr(r.delta),
                repr(r.distortion),
                "yes" if r.distortion_exact else "no",
                *[repr(v) for v in r.bottleneck],
                repr(r.entropy_delta),
            ]
            for r in self.records
        ]
        widths = [len(h) for h in header]
        for row in rows:
            for k, cell in enumerate(row):
                widths[k] = max(widths[k], len(cell))
        lines = ["  ".join(h.ljust(widths[k]) for k, h in enumerate(header)).rstrip()]
        lines += [
            "  ".join(c.ljust(widths[k]) for k, c in enumerate(row)).rstrip()
            for row in rows
        ]
        if not self.entropy_trend_ok:
            lines.append("warning: |dE| did not shrink from the largest to the "
                         "smallest delta on this seed")
        return "\n".join(lines) + "\n"


def stability_report(points, deltas, seed: int = 0, dim_cap: int = 2) -> StabilityReport:
    """Perturb a cloud at several radii and measure the stability chain.

    For each delta: build the perturbed cloud, compute both barcodes at a
    matched cutoff (the larger of the two stopping scales -- truncating
    each filtration at its own scale would break the comparison near the
    cutoff), and record the correspondence distortion (exact 2*d_GH for
    clouds of at most 9 points, the identity upper bound otherwise), the
    per-dimension bottleneck distances, and the entropy gap.

    Raises StabilityError if any bottleneck distance exceeds the exact
    distortion (the stability inequality).  The entropy trend (smaller
    delta, smaller |dE|) is only flagged: continuity does not promise
    per-sample monotonicity, so a violation is a warning, not a failure.
    """
    X = check_point_cloud(points)
    ds = [float(d) for d in deltas]
    if not ds:
        raise ValidationError("need at least one delta")
    if any(d < 0 for d in ds):
        raise ValidationError("deltas must be non-negative")
    if ds != sorted(ds):
        raise ValidationError("deltas must be sorted increasing")
    exact = X.shape[0] <= GH_MAX_POINTS
    records: list[StabilityRecord] = []
    for delta in ds:
        Wc = perturb(X, delta, seed)
        t = max(scale_bounds(X).t_max, scale_bounds(Wc).t_max)
        bv = compute_barcode(build_vr_filtration(X, dim_cap=dim_cap, t_max=t))
        bw = compute_barcode(build_vr_filtration(Wc, dim_cap=dim_cap, t_max=t))
        dist = gh_distortion(X, Wc) if exact else identity_distortion(X, Wc)
        per_dim = []
        for k in range(dim_cap):
            db = bottleneck_distance(
                diagram_from_barcode(bv, k), diagram_from_barcode(bw, k)
            )
            if exact and db > dist + STABILITY_TOL:
                raise StabilityError(
                    f"bottleneck distance {db!r} in dimension {k} exceeds the "
                    f"distortion {dist!r} at delta={delta!r}"
                )
            per_dim.append(db)
        de = abs(persistent_entropy(bv.lengths()) - persistent_entropy(bw.lengths()))
        records.append(
            StabilityRecord(
                delta=delta,
                distortion=dist,
                distortion_exact=exact,
                bottleneck=tuple(per_dim),
                entropy_delta=de,
            )
        )
    trend_ok = True
    if len(records) >= 2 and records[0].delta < records[-1].delta:
        trend_ok = records[0].entropy_delta <= records[-1].entropy_delta
    if not trend_ok:
        warnings.warn(
            "entropy gap did not shrink with the perturbation radius on this seed",
            stacklevel=2,
        )
    return StabilityReport(
        records=tuple(records), entropy_trend_ok=trend_ok, seed=seed, dim_cap=dim_cap
    )
