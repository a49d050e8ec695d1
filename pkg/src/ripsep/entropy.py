"""Persistent entropy and its extremal bounds.

Conventions: natural logarithm everywhere (the neutralization transform
divides by ``exp(E)``, which is only consistent with base e), and
compensated summation (``math.fsum`` / a Neumaier loop) so the documented
1e-12 tolerance budgets hold.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .validation import check_lengths

#: alpha values within this distance of 1 take the uniform branch of the
#: feature-count bound (the closed formula is 0/0 at alpha = 1).
ALPHA_UNIFORM_TOL = 1e-12


def persistent_entropy(lengths) -> float:
    """Shannon entropy of the normalized bar lengths p_i = l_i / sum(l).

    Always in [0, log(n)] up to rounding: 0 for a single bar, log(n) for n
    equal bars.
    """
    arr = check_lengths(lengths)
    total = math.fsum(arr.tolist())
    probs = (arr / total).tolist()
    ent = -math.fsum(p * math.log(p) for p in probs)
    return ent + 0.0  # normalize -0.0 from the single-bar case


class NeutralizationState(NamedTuple):
    """Result of replacing the first ``i`` lengths by the entropy-maximizing value."""

    i: int
    replaced_value: float
    tail_sum: float
    tail_entropy: float
    total: float


def neutralize_prefix(lengths, i: int) -> NeutralizationState:
    """Replace the first ``i`` lengths by the single value maximizing entropy.

    For the tail ``R = lengths[i:]`` with sum ``P``, the replacement is
    ``P / exp(E(R))``, equivalently the weighted geometric mean
    ``prod(l**(l/P) for l in R)``.  Both forms are computed and
    cross-checked; the positions holding the shortest and longest bars sit
    at the end of the list and are never neutralized, hence ``i <= n - 2``.
    """
    arr = check_lengths(lengths)
    n = arr.size
    if not 1 <= i <= n - 2:
        raise ValidationError(f"prefix length must satisfy 1 <= i <= {n - 2}, got {i}")
    tail = arr[i:]
    tail_sum = math.fsum(tail.tolist())
    tail_entropy = persistent_entropy(tail)
    exp_form = tail_sum / math.exp(tail_entropy)
    log_mean = math.fsum(l * math.log(l) for l in tail.tolist()) / tail_sum
    product_form = math.exp(log_mean)
    if not math.isclose(exp_form, product_form, rel_tol=1e-9):
        raise ArithmeticError(
            f"neutralization formulas disagree: {exp_form!r} vs {product_form!r}"
        )
    if tail.max() == tail.min():
        value = float(tail[0])  # geometric mean of equal values, kept exact
    else:
        value = exp_form
    return NeutralizationState(
        i=i,
        replaced_value=value,
        tail_sum=tail_sum,
        tail_entropy=tail_entropy,
        total=tail_sum + i * value,
    )


def entropy_after_neutralization(lengths, i: int) -> float:
    """Entropy of the list with its first ``i`` entries neutralized (i = 0: no-op)."""
    arr = check_lengths(lengths)
    if i == 0:
        return persistent_entropy(arr)
    state = neutralize_prefix(arr, i)
    replaced = [state.replaced_value] * i + arr[i:].tolist()
    return persistent_entropy(replaced)


def q_bound(n: int, alpha: float) -> int:
    """Number of maximal-length bars in the minimum-entropy barcode.

    ``round(alpha * n * (alpha - 1 - log(alpha)) / (alpha - 1)**2)`` with
    round-half-to-even, clamped to [0, n].  At alpha = 1 the formula is
    0/0 and the value is n by definition (uniform barcode).  Interpreted
    as the maximum number of detectable features for a barcode with n
    bars and length ratio alpha = r/T.
    """
    if n < 2:
        raise ValidationError(f"q_bound needs n >= 2, got {n}")
    if not 0.0 < alpha <= 1.0 + ALPHA_UNIFORM_TOL:
        raise ValidationError(f"alpha must lie in (0, 1], got {alpha}")
    if alpha >= 1.0 - ALPHA_UNIFORM_TOL:
        return n
    q = alpha * n * (alpha - 1.0 - math.log(alpha)) / (alpha - 1.0) ** 2
    return max(0, min(n, round(q)))


def _check_extremes(n: int, T: float, r: float) -> None:
    if n < 2:
        raise ValidationError(f"extremal barcodes need n >= 2, got {n}")
    if not (0.0 < r <= T) or not math.isfinite(T):
        raise ValidationError(f"lengths must satisfy 0 < r <= T, got r={r}, T={T}")


def min_entropy_barcode(n: int, T: float, r: float) -> list[float]:
    """The two-level barcode {T x Q, r x (n-Q)} attaining minimum entropy.

    Q comes from :func:`q_bound`; for r < T it is clamped into [1, n-1] so
    the output genuinely has maximum length T and minimum length r (the
    raw bound can round to 0 when alpha*n is small).
    """
    _check_extremes(n, T, r)
    if r == T:
        return [float(T)] * n
    q = q_bound(n, r / T)
    q = max(1, min(n - 1, q))
    return [float(T)] * q + [float(r)] * (n - q)


def max_entropy_barcode(n: int, T: float, r: float) -> list[float]:
    """The barcode {T, b x (n-2), r} attaining maximum entropy.

    ``b = T * alpha**(alpha / (1 + alpha))`` with alpha = r/T; for r = T
    this degenerates to n equal bars.
    """
    _check_extremes(n, T, r)
    if r == T:
        return [float(T)] * n
    alpha = r / T
    b = T * alpha ** (alpha / (1.0 + alpha))
    return [float(T)] + [b] * (n - 2) + [float(r)]


def relative_entropy(lengths, T: float, r: float) -> float:
    """E(L) / E(M') with M' the maximum-entropy barcode for the same (n, T, r).

    Comparable across barcodes with different bar counts; equals 1 for
    the maximum-entropy barcode itself.  Degenerate denominators (a
    single bar) return 1 by convention.
    """
    arr = check_lengths(lengths)
    actual_T, actual_r = float(arr.max()), float(arr.min())
    if not math.isclose(actual_T, T, rel_tol=1e-12, abs_tol=1e-12):
        raise ValidationError(f"declared T={T} does not match max length {actual_T}")
    if not math.isclose(actual_r, r, rel_tol=1e-12, abs_tol=1e-12):
        raise ValidationError(f"declared r={r} does not match min length {actual_r}")
    if arr.size == 1:
        return 1.0
    denom = persistent_entropy(max_entropy_barcode(arr.size, T, r))
    if denom == 0.0:
        return 1.0
    return persistent_entropy(arr) / denom


class Trajectory(NamedTuple):
    """Per-prefix neutralization quantities for one ordered length list.

    Index i ranges over 0 .. n-2; entry 0 describes the untouched list
    (``replaced`` and ``ratios`` are NaN there).  ``ratios[i]`` is the
    total-sum ratio C_i = S_{i-1} / S_i used as the stopping signal of the
    separation procedure.
    """

    replaced: np.ndarray
    totals: np.ndarray
    entropies: np.ndarray
    ratios: np.ndarray


def _suffix_sums(values: np.ndarray) -> np.ndarray:
    """Compensated (Neumaier) right-to-left partial sums: out[k] = sum(values[k:])."""
    out = np.empty(values.size)
    s = 0.0
    c = 0.0
    for k in range(values.size - 1, -1, -1):
        x = float(values[k])
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        out[k] = s + c
    return out


def neutralization_trajectory(lengths) -> Trajectory:
    """Compute all prefix neutralizations of an ordered list in one O(n) pass.

    Uses the identities ``l'_i = exp(H_i / P_i)`` and
    ``E(L'_i) = log(S_i) - (H_i + i*l'_i*log(l'_i)) / S_i`` where
    ``P_i``/``H_i`` are the suffix sums of ``l`` and ``l*log(l)``; these
    agree with :func:`neutralize_prefix` and
    :func:`entropy_after_neutralization` applied prefix by prefix.
    """
    arr = check_lengths(lengths)
    n = arr.size
    if n < 2:
        raise ValidationError("trajectory needs at least 2 lengths")
    logs = np.log(arr)
    P = _suffix_sums(arr)
    H = _suffix_sums(arr * logs)
    # suffix extrema, used to keep uniform tails exact fixed points
    smin = np.minimum.accumulate(arr[::-1])[::-1]
    smax = np.maximum.accumulate(arr[::-1])[::-1]

    m = n - 1  # entries for i = 0 .. n-2
    replaced = np.full(m, np.nan)
    totals = np.empty(m)
    entropies = np.empty(m)
    ratios = np.full(m, np.nan)

    totals[0] = P[0]
    entropies[0] = math.log(P[0]) - H[0] / P[0]
    if n >= 3:
        idx = np.arange(1, n - 1)
        lp = np.exp(H[idx] / P[idx])
        uniform = smin[idx] == smax[idx]
        lp[uniform] = smax[idx][uniform]
        replaced[1:] = lp
        totals[1:] = P[idx] + idx * lp
        entropies[1:] = np.log(totals[1:]) - (H[idx] + idx * lp * np.log(lp)) / totals[1:]
        ratios[1:] = totals[:-1] / totals[1:]
    return Trajectory(replaced=replaced, totals=totals, entropies=entropies, ratios=ratios)
