"""Scikit-learn style estimators wrapping the functional core.

``RipsBarcode`` is a transformer from a point cloud (one sample per
point) to an array of persistence bars; ``EntropyFeatureSeparator`` is a
clusterer-style estimator labelling each bar as topological feature (1)
or noise (0).  Both follow the usual conventions (``get_params`` /
``set_params`` / ``clone`` friendly ``__init__``), so they compose with
pipelines and model-selection tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin

from .errors import ValidationError
from .filtration import DEFAULT_SIMPLEX_BUDGET, build_vr_filtration
from .persistence import Bar, Barcode, compute_barcode
from .pointcloud import scale_bounds
from .separation import MAX_ITERATIONS, _separate_barcode_indexed
from .validation import check_point_cloud


def bars_to_array(barcode: Barcode) -> np.ndarray:
    """Encode a barcode as a float array with columns (dim, birth, death, essential)."""
    if not barcode.bars:
        return np.empty((0, 4))
    return np.array(
        [[b.dim, b.birth, b.death, float(b.essential_at_cutoff)] for b in barcode.bars]
    )


def array_to_bars(X) -> list[Bar]:
    """Decode an array with columns (dim, birth, death[, essential]) into bars."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.shape[1] not in (3, 4):
        raise ValidationError(
            f"bar array must have columns (dim, birth, death[, essential]), got shape {arr.shape}"
        )
    bars = []
    for row in arr:
        essential = bool(row[3]) if arr.shape[1] == 4 else False
        bars.append(Bar(int(row[0]), float(row[1]), float(row[2]), essential))
    return bars


class RipsBarcode(BaseEstimator, TransformerMixin):
    """Vietoris-Rips persistence of a point cloud as a transformer.

    Parameters
    ----------
    dim_cap : int, default=2
        Largest simplex dimension in the filtration; bars are reported in
        dimensions up to ``dim_cap - 1``.
    t_max : float or None, default=None
        Filtration cutoff (simplex diameter).  None uses the cloud's
        stopping scale ``min_i max_j d(v_i, v_j)``.
    simplex_budget : int, default=5_000_000
        Abort with a BudgetError past this many simplices.

    Attributes
    ----------
    barcode_ : Barcode fitted on the last cloud passed to ``fit``.
    t_max_, r_min_ : floats, the scale bounds actually used.
    """

    def __init__(self, dim_cap: int = 2, t_max: float | None = None,
                 simplex_budget: int = DEFAULT_SIMPLEX_BUDGET):
        self.dim_cap = dim_cap
        self.t_max = t_max
        self.simplex_budget = simplex_budget

    def _compute(self, X) -> Barcode:
        X = check_point_cloud(np.asarray(X, dtype=float))
        filt = build_vr_filtration(
            X, dim_cap=self.dim_cap, t_max=self.t_max,
            simplex_budget=self.simplex_budget,
        )
        return compute_barcode(filt)

    def fit(self, X, y=None):
        X = check_point_cloud(np.asarray(X, dtype=float))
        self.n_features_in_ = X.shape[1]
        bounds = scale_bounds(X)
        self.barcode_ = self._compute(X)
        self.t_max_ = self.barcode_.t_max
        self.r_min_ = bounds.r_min
        return self

    def transform(self, X) -> np.ndarray:
        return bars_to_array(self._compute(X))

    def fit_transform(self, X, y=None) -> np.ndarray:
        return bars_to_array(self.fit(X).barcode_)


class EntropyFeatureSeparator(BaseEstimator, ClusterMixin):
    """Label persistence bars as features (1) or noise (0).

    Accepts a ``Barcode`` or a bar array as produced by ``RipsBarcode``
    (columns dim, birth, death[, essential]).  ``labels_`` aligns with
    the input row order; with ``dims`` set, bars of other dimensions are
    excluded from the analysis and labelled 0.

    Attributes
    ----------
    labels_ : int array, 1 for feature and 0 for noise.
    result_ : the full SeparationResult with the audit trace.
    """

    def __init__(self, dims: int | None = None, max_iterations: int = MAX_ITERATIONS):
        self.dims = dims
        self.max_iterations = max_iterations

    def fit(self, X, y=None):
        if isinstance(X, Barcode):
            bars = list(X.bars)
            t_max = X.t_max
        else:
            bars = array_to_bars(X)
            if not bars:
                raise ValidationError("cannot separate an empty bar set")
            t_max = max(b.death for b in bars)
        if self.dims is None:
            positions = list(range(len(bars)))
        else:
            positions = [p for p, b in enumerate(bars) if b.dim == self.dims]
        if len(positions) < 3:
            raise ValidationError(
                f"separation needs at least 3 bars, got {len(positions)}"
            )
        sub = Barcode(bars=tuple(bars[p] for p in positions), t_max=t_max)
        # Barcode normalizes bar order, so map back through the sorted order.
        sorted_pos = sorted(positions, key=lambda p: _sort_key(bars[p]))
        result, feat_idx = _separate_barcode_indexed(sub, self.max_iterations)
        labels = np.zeros(len(bars), dtype=int)
        for local, orig in enumerate(sorted_pos):
            if local in feat_idx:
                labels[orig] = 1
        self.labels_ = labels
        self.result_ = result
        self.feature_lengths_ = result.feature_lengths
        self.n_iterations_ = len(result.iterations)
        return self


def _sort_key(b: Bar):
    return (b.dim, b.birth, b.death, b.essential_at_cutoff)
