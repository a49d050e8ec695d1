"""Iterative entropy-based separation of topological features from noise.

The procedure arranges bar lengths with the shortest and longest bars
pinned to the last two slots, then neutralizes growing prefixes until the
total-sum ratio C = S_{i-1}/S_i drops below 1: shortening a long bar
raises the probability of the longest bar (C > 1), elongating a short
bar lowers it (C < 1), so the first C < 1 marks the feature/noise
boundary.  If more bars were flagged than the feature-count bound Q
allows, the trailing bars are discarded as noise and the loop repeats on
the pruned barcode.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from .entropy import (
    ALPHA_UNIFORM_TOL,
    max_entropy_barcode,
    neutralization_trajectory,
    persistent_entropy,
    q_bound,
)
from .errors import FormatError, ValidationError
from .persistence import Bar, Barcode, _bar_key
from .validation import check_lengths

#: C values within this tolerance of 1 still count as "not below 1";
#: exactly uniform profiles hit C = 1 in exact arithmetic and must not flap.
C_TOL = 1e-12

#: hard cap on the prune-and-repeat loop (termination is guaranteed in
#: theory; the cap turns a would-be hang into a diagnosable error).
MAX_ITERATIONS = 100


@dataclass(frozen=True)
class LengthProfile:
    """Bar lengths arranged for the separation loop.

    ``body`` holds every length except one copy of the maximum and one of
    the minimum, sorted decreasing; the minimum sits in the ``r`` slot and
    the maximum in the ``T`` slot, and those two slots are never
    neutralized.
    """

    body: tuple[float, ...]
    r: float
    T: float

    def __post_init__(self):
        if not (0.0 < self.r <= self.T) or not math.isfinite(self.T):
            raise ValidationError(f"profile needs 0 < r <= T, got r={self.r}, T={self.T}")
        prev = self.T
        for x in self.body:
            if not self.r <= x <= prev:
                raise ValidationError("profile body must be decreasing within [r, T]")
            prev = x

    @property
    def n(self) -> int:
        return len(self.body) + 2

    @property
    def alpha(self) -> float:
        return self.r / self.T

    def lengths(self) -> list[float]:
        return [*self.body, self.r, self.T]


@dataclass(frozen=True)
class SeparationRow:
    index: int
    length: float
    replaced: float
    C: float
    rel_entropy: float
    is_feature: bool


@dataclass(frozen=True)
class SeparationIteration:
    iteration: int
    n_prime: int
    Q: int
    alpha: float
    rel_entropy_start: float
    rows: tuple[SeparationRow, ...]


@dataclass(frozen=True)
class SeparationResult:
    iterations: tuple[SeparationIteration, ...]
    feature_lengths: tuple[float, ...]
    feature_bars: tuple[Bar, ...]
    noise_bars: tuple[Bar, ...]


def arrange_bars(barcode: Barcode) -> list[Bar]:
    """Bars sorted by decreasing length, ties broken by (dim, birth, death).

    The first entry is the T-slot bar, the last the r-slot bar; the rest
    is the profile body in order.
    """
    return sorted(
        barcode.bars, key=lambda b: (-b.length, b.dim, b.birth, b.death)
    )


def prepare_lengths(barcode: Barcode) -> LengthProfile:
    """Arrange a barcode's lengths into a LengthProfile (needs >= 2 bars)."""
    if len(barcode.bars) < 2:
        raise ValidationError(f"need at least 2 bars, got {len(barcode.bars)}")
    arranged = arrange_bars(barcode)
    return LengthProfile(
        body=tuple(b.length for b in arranged[1:-1]),
        r=arranged[-1].length,
        T=arranged[0].length,
    )


def _profile_from_lengths(lengths) -> LengthProfile:
    arr = check_lengths(lengths)
    if arr.size < 2:
        raise ValidationError("need at least 2 lengths")
    dec = sorted(arr.tolist(), reverse=True)
    return LengthProfile(body=tuple(dec[1:-1]), r=dec[-1], T=dec[0])


def run_iteration(profile: LengthProfile, iteration: int = 1) -> SeparationIteration:
    """One pass of the while-loop: neutralize prefixes until C < 1.

    Records a row for each i = 1, 2, ...; rows with C >= 1 (within
    tolerance) are features, and the loop stops at the first row below 1
    or after the whole body (i = n - 2).  Uniform profiles keep C = 1
    throughout and mark everything as feature.
    """
    if profile.n < 3:
        raise ValidationError(f"iteration needs n >= 3, got n={profile.n}")
    L = profile.lengths()
    traj = neutralization_trajectory(L)
    q = q_bound(profile.n, profile.alpha)
    em = persistent_entropy(max_entropy_barcode(profile.n, profile.T, profile.r))
    rows: list[SeparationRow] = []
    for i in range(1, profile.n - 1):
        c = float(traj.ratios[i])
        feature = c >= 1.0 - C_TOL
        rows.append(
            SeparationRow(
                index=i,
                length=L[i - 1],
                replaced=float(traj.replaced[i]),
                C=c,
                rel_entropy=float(traj.entropies[i]) / em,
                is_feature=feature,
            )
        )
        if not feature:
            break
    return SeparationIteration(
        iteration=iteration,
        n_prime=profile.n,
        Q=q,
        alpha=profile.alpha,
        rel_entropy_start=float(traj.entropies[0]) / em,
        rows=tuple(rows),
    )


def _separate_items(items: list[tuple[float, int]], max_iterations: int):
    """Core loop on (length, tag) items already arranged: body desc + [r, T].

    Returns (iterations, feature tags, noise tags).  Tags are opaque
    carriers used to map lengths back to bars or input positions.
    """
    t_item = items[-1]
    r_item = items[-2]
    body = items[:-2]
    discarded: list[tuple[float, int]] = []
    iterations: list[SeparationIteration] = []
    i_last = 0
    for it in range(1, max_iterations + 1):
        profile = LengthProfile(
            body=tuple(x for x, _ in body), r=r_item[0], T=t_item[0]
        )
        step = run_iteration(profile, iteration=it)
        iterations.append(step)
        last = step.rows[-1]
        i_star = last.index
        i_last = i_star if last.is_feature else i_star - 1
        if step.Q >= i_star:
            break
        new_n = i_last + 2
        if new_n == profile.n:
            break  # nothing to prune; repeating would loop forever
        discarded.extend(body[i_last:])
        body = body[:i_last]
        if new_n < 3:
            break  # only the r and T slots remain
    else:
        summary = "; ".join(
            f"iteration {s.iteration}: n'={s.n_prime} Q={s.Q} stop={s.rows[-1].index}"
            for s in iterations
        )
        raise RuntimeError(
            f"separation did not settle within {max_iterations} iterations ({summary})"
        )
    uniform = r_item[0] >= t_item[0] * (1.0 - ALPHA_UNIFORM_TOL)
    features = [t_item, *body[:i_last]]
    noise = [*body[i_last:], *discarded]
    if uniform:
        features.append(r_item)
    else:
        noise.append(r_item)
    return iterations, features, noise


def _separate_barcode_indexed(barcode: Barcode, max_iterations: int):
    if len(barcode.bars) < 3:
        raise ValidationError(f"separation needs at least 3 bars, got {len(barcode.bars)}")
    order = sorted(
        range(len(barcode.bars)),
        key=lambda p: (
            -barcode.bars[p].length,
            _bar_key(barcode.bars[p]),
        ),
    )
    arranged = [(barcode.bars[p].length, p) for p in order]
    items = arranged[1:-1] + [arranged[-1], arranged[0]]  # body, r slot, T slot
    iterations, feat, noise = _separate_items(items, max_iterations)
    feat_idx = {p for _, p in feat}
    result = SeparationResult(
        iterations=tuple(iterations),
        feature_lengths=tuple(x for x, _ in feat),
        feature_bars=tuple(
            sorted((barcode.bars[p] for _, p in feat), key=_bar_key)
        ),
        noise_bars=tuple(
            sorted((barcode.bars[p] for _, p in noise), key=_bar_key)
        ),
    )
    return result, feat_idx


def separate_features(data, max_iterations: int = MAX_ITERATIONS) -> SeparationResult:
    """Run the full prune-and-repeat separation on a barcode or length list.

    After each iteration stopping at index i*: if the feature-count bound
    Q is below i*, the body entries past the last feature row are
    discarded as noise and the loop repeats on the pruned profile;
    otherwise the loop ends and the features are the T bar plus the
    feature-flagged prefix (plus the r bar in the uniform case, where
    every bar is a feature).  Lengths-only input yields a result with
    empty bar tuples.
    """
    if isinstance(data, Barcode):
        result, _ = _separate_barcode_indexed(data, max_iterations)
        return result
    arr = check_lengths(data)
    if arr.size < 3:
        raise ValidationError(f"separation needs at least 3 lengths, got {arr.size}")
    order = sorted(range(arr.size), key=lambda p: (-arr[p], p))
    arranged = [(float(arr[p]), p) for p in order]
    items = arranged[1:-1] + [arranged[-1], arranged[0]]  # body, r slot, T slot
    iterations, feat, noise = _separate_items(items, max_iterations)
    return SeparationResult(
        iterations=tuple(iterations),
        feature_lengths=tuple(x for x, _ in feat),
        feature_bars=(),
        noise_bars=(),
    )


# ---------------------------------------------------------------------------
# Trace rendering: text mirrors the two-block layout of the worked tables
# (header block with n', Q, relative entropy, alpha; then one row per
# neutralization step), JSON and CSV are lossless encodings.
# ---------------------------------------------------------------------------

_HEADER_COLS = ("iteration", "n'", "Q", "E(L')/E(M')", "alpha")
_ROW_COLS = ("l_i", "l'_i", "C", "E(L'_i)/E(M')", "feature?")


def _table(header: tuple[str, ...], rows: list[list[str]]) -> list[str]:
    widths = [len(h) for h in header]
    for row in rows:
        for k, cell in enumerate(row):
            widths[k] = max(widths[k], len(cell))
    lines = ["  ".join(h.ljust(widths[k]) for k, h in enumerate(header)).rstrip()]
    for row in rows:
        lines.append("  ".join(c.ljust(widths[k]) for k, c in enumerate(row)).rstrip())
    return lines


def _bar_label(bar: Bar) -> str:
    flag = " essential" if bar.essential_at_cutoff else ""
    return f"dim={bar.dim} [{bar.birth!r}, {bar.death!r}){flag} length={bar.length!r}"


def render_trace(result: SeparationResult, format: str = "text") -> bytes:
    """Serialize a separation result as text, JSON, or CSV bytes."""
    if format == "text":
        lines: list[str] = []
        for step in result.iterations:
            lines += _table(
                _HEADER_COLS,
                [[
                    str(step.iteration),
                    str(step.n_prime),
                    str(step.Q),
                    repr(step.rel_entropy_start),
                    repr(step.alpha),
                ]],
            )
            lines.append("")
            lines += _table(
                _ROW_COLS,
                [
                    [
                        repr(row.length),
                        repr(row.replaced),
                        repr(row.C),
                        repr(row.rel_entropy),
                        "yes" if row.is_feature else "no",
                    ]
                    for row in step.rows
                ],
            )
            lines.append("")
        lines.append("features:")
        if result.feature_bars:
            lines.extend(f"  {_bar_label(b)}" for b in result.feature_bars)
        else:
            lines.extend(f"  length={x!r}" for x in result.feature_lengths)
        lines.append("")
        return "\n".join(lines).encode("utf-8")

    if format == "json":
        doc = {
            "iterations": [
                {
                    "iteration": s.iteration,
                    "n_prime": s.n_prime,
                    "Q": s.Q,
                    "alpha": s.alpha,
                    "rel_entropy_start": s.rel_entropy_start,
                    "rows": [
                        {
                            "index": r.index,
                            "length": r.length,
                            "replaced": r.replaced,
                            "C": r.C,
                            "rel_entropy": r.rel_entropy,
                            "is_feature": r.is_feature,
                        }
                        for r in s.rows
                    ],
                }
                for s in result.iterations
            ],
            "feature_lengths": list(result.feature_lengths),
            "feature_bars": [_bar_dict(b) for b in result.feature_bars],
            "noise_bars": [_bar_dict(b) for b in result.noise_bars],
        }
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")

    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for s in result.iterations:
            writer.writerow(
                ["iteration", s.iteration, s.n_prime, s.Q, repr(s.alpha),
                 repr(s.rel_entropy_start), ""]
            )
            for r in s.rows:
                writer.writerow(
                    ["row", r.index, repr(r.length), repr(r.replaced), repr(r.C),
                     repr(r.rel_entropy), "yes" if r.is_feature else "no"]
                )
        return buf.getvalue().encode("utf-8")

    raise ValidationError(f"unknown trace format {format!r}")


def _bar_dict(b: Bar) -> dict:
    return {
        "dim": b.dim,
        "birth": b.birth,
        "death": b.death,
        "essential": b.essential_at_cutoff,
    }


def parse_trace_json(payload: bytes | str) -> SeparationResult:
    """Inverse of ``render_trace(..., format="json")``."""
    if isinstance(payload, bytes):
        payload = payload.decode("utf-8")
    try:
        doc = json.loads(payload)
        iterations = tuple(
            SeparationIteration(
                iteration=int(s["iteration"]),
                n_prime=int(s["n_prime"]),
                Q=int(s["Q"]),
                alpha=float(s["alpha"]),
                rel_entropy_start=float(s["rel_entropy_start"]),
                rows=tuple(
                    SeparationRow(
                        index=int(r["index"]),
                        length=float(r["length"]),
                        replaced=float(r["replaced"]),
                        C=float(r["C"]),
                        rel_entropy=float(r["rel_entropy"]),
                        is_feature=bool(r["is_feature"]),
                    )
                    for r in s["rows"]
                ),
            )
            for s in doc["iterations"]
        )
        return SeparationResult(
            iterations=iterations,
            feature_lengths=tuple(float(x) for x in doc["feature_lengths"]),
            feature_bars=tuple(
                Bar(int(b["dim"]), float(b["birth"]), float(b["death"]), bool(b["essential"]))
                for b in doc["feature_bars"]
            ),
            noise_bars=tuple(
                Bar(int(b["dim"]), float(b["birth"]), float(b["death"]), bool(b["essential"]))
                for b in doc["noise_bars"]
            ),
        )
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise FormatError(f"invalid trace JSON: {exc}") from None
