"""Point clouds: CSV I/O, distances, scale bounds, synthetic samplers.

Scale convention used throughout the package: simplices are indexed by
their *diameter* (largest pairwise distance), so the stopping scale is
``t_max = min_i max_j d(v_i, v_j)`` and the shortest 0-dimensional bar
dies at ``r_min = min_{i != j} d(v_i, v_j)``.

All pseudo-random sampling uses numpy's PCG64 generator
(``numpy.random.default_rng``), which is seedable and platform
independent, so samplers are bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import io
import os
from typing import NamedTuple, TextIO, Union

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import FormatError, ValidationError
from .validation import check_point_cloud

PathOrFile = Union[str, os.PathLike, TextIO]


class ScaleBounds(NamedTuple):
    """Diameter-convention stopping scale and minimum pairwise distance."""

    t_max: float
    r_min: float


def pairwise_distances(points) -> np.ndarray:
    """Symmetric matrix of Euclidean distances with an exactly zero diagonal."""
    X = check_point_cloud(points)
    return squareform(pdist(X))


def scale_bounds(points) -> ScaleBounds:
    """Compute (t_max, r_min) for a cloud.

    ``t_max = min_i max_j d(v_i, v_j)`` is the scale past which the Rips
    complex is a cone over some vertex and carries no homology above
    dimension 0; ``r_min`` is the smallest pairwise distance, i.e. the
    death of the shortest 0-dimensional bar.
    """
    D = pairwise_distances(points)
    t_max = float(np.min(np.max(D, axis=1)))
    off = D + np.diag(np.full(len(D), np.inf))
    r_min = float(np.min(off))
    return ScaleBounds(t_max=t_max, r_min=r_min)


# ---------------------------------------------------------------------------
# CSV point format: one point per line, comma-separated decimal literals,
# '#' comment lines ignored, no trailing commas.  Written files round-trip:
# repr() emits the shortest decimal that re-parses to the same double.
# ---------------------------------------------------------------------------

def load_points(source: PathOrFile, format: str = "csv") -> np.ndarray:
    """Parse a point cloud from a CSV path or open text stream."""
    if format != "csv":
        raise ValidationError(f"unsupported point format {format!r}")
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    rows: list[list[float]] = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if any(p.strip() == "" for p in parts):
            raise FormatError(f"line {lineno}: empty coordinate (trailing comma?)")
        try:
            row = [float(p) for p in parts]
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise FormatError(
                f"line {lineno}: expected {width} coordinates, got {len(row)}"
            )
        rows.append(row)
    if len(rows) < 2:
        raise ValidationError(f"need at least 2 points, file has {len(rows)}")
    return check_point_cloud(np.array(rows, dtype=float))


def format_points(points) -> str:
    """Render a cloud in the CSV point format (round-trip exact)."""
    X = check_point_cloud(points)
    lines = [",".join(repr(float(x)) for x in row) for row in X]
    return "\n".join(lines) + "\n"


def save_points(points, dest: PathOrFile) -> None:
    """Write a cloud to a CSV path or open text stream."""
    text = format_points(points)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# Synthetic samplers (uniform in angle; see README for the distribution note)
# ---------------------------------------------------------------------------

def sample_circle(n: int, radius: float = 1.0, jitter: float = 0.0,
                  seed: int = 0) -> np.ndarray:
    """Sample n points on a circle.

    With jitter 0 the points sit at exactly evenly spaced angles 2*pi*k/n
    (no random draws at all).  With jitter > 0, uniform angular noise in
    [-jitter, jitter] is drawn first and uniform radial noise in the same
    interval second, both from PCG64 seeded with ``seed``.
    """
    if n < 3:
        raise ValidationError(f"circle sampler needs n >= 3, got {n}")
    if radius <= 0:
        raise ValidationError("radius must be positive")
    if jitter < 0:
        raise ValidationError("jitter must be non-negative")
    theta = 2.0 * np.pi * np.arange(n) / n
    rad = np.full(n, float(radius))
    if jitter > 0:
        rng = np.random.default_rng(seed)
        theta = theta + rng.uniform(-jitter, jitter, size=n)
        rad = rad + rng.uniform(-jitter, jitter, size=n)
    pts = np.column_stack([rad * np.cos(theta), rad * np.sin(theta)])
    return check_point_cloud(pts)


def sample_torus(n: int, R: float = 2.0, rho: float = 0.5,
                 seed: int = 0) -> np.ndarray:
    """Sample n distinct points on the torus surface in R^3.

    Point for angles (theta, phi):
    ``((R + rho*cos(theta))*cos(phi), (R + rho*cos(theta))*sin(phi), rho*sin(theta))``.
    Angles are drawn uniformly in [0, 2*pi), theta before phi for each
    point; a draw that duplicates an earlier point is rejected and redrawn.
    """
    if n < 2:
        raise ValidationError(f"torus sampler needs n >= 2, got {n}")
    if not (0 < rho < R):
        raise ValidationError(f"torus radii must satisfy 0 < rho < R, got R={R}, rho={rho}")
    rng = np.random.default_rng(seed)
    pts: list[tuple[float, float, float]] = []
    seen: set[tuple[float, float, float]] = set()
    while len(pts) < n:
        theta = rng.uniform(0.0, 2.0 * np.pi)
        phi = rng.uniform(0.0, 2.0 * np.pi)
        w = R + rho * np.cos(theta)
        p = (float(w * np.cos(phi)), float(w * np.sin(phi)), float(rho * np.sin(theta)))
        if p in seen:
            continue
        seen.add(p)
        pts.append(p)
    return check_point_cloud(np.array(pts))


def sample_torus_lattice(n_major: int, n_minor: int, R: float = 2.0,
                         rho: float = 0.5, jitter: float = 0.0, seed: int = 0,
                         twist: float = 0.5) -> np.ndarray:
    """Near-regular lattice of n_major * n_minor points on the torus surface.

    Ring j sits at hole angle ``2*pi*j/n_major``; its n_minor tube angles
    are rotated by ``j * twist`` tube steps against the previous ring
    (``n_major * twist`` must be an integer so the lattice closes), which
    staggers the rings and keeps near-degenerate quadrilaterals from
    producing spurious short loops.  ``jitter`` adds uniform per-ring and
    per-column angular noise of that many lattice steps (PCG64, seeded),
    so small values give a low-jitter structured sample in contrast to
    :func:`sample_torus`'s fully random one.
    """
    if n_major < 3 or n_minor < 3:
        raise ValidationError("lattice needs at least 3 rings and 3 points per ring")
    if not (0 < rho < R):
        raise ValidationError(f"torus radii must satisfy 0 < rho < R, got R={R}, rho={rho}")
    if jitter < 0:
        raise ValidationError("jitter must be non-negative")
    total_twist = n_major * twist
    if abs(total_twist - round(total_twist)) > 1e-9:
        raise ValidationError(
            f"lattice does not close: n_major * twist = {total_twist} is not an integer"
        )
    if jitter > 0:
        rng = np.random.default_rng(seed)
        ring_noise = rng.uniform(-jitter, jitter, size=n_major)
        col_noise = rng.uniform(-jitter, jitter, size=n_minor)
    else:
        ring_noise = np.zeros(n_major)
        col_noise = np.zeros(n_minor)
    pts = []
    for j in range(n_major):
        phi = 2.0 * np.pi * (j + ring_noise[j]) / n_major
        for k in range(n_minor):
            theta = 2.0 * np.pi * (k + col_noise[k] + j * twist) / n_minor
            w = R + rho * np.cos(theta)
            pts.append((w * np.cos(phi), w * np.sin(phi), rho * np.sin(theta)))
    return check_point_cloud(np.array(pts))


_PERTURB_RETRIES = 100


def perturb(points, delta: float, seed: int = 0) -> np.ndarray:
    """Move every point by a pseudo-random vector of norm <= delta.

    Point count and order are preserved.  Displacements are drawn
    uniformly inside the delta-ball (Gaussian direction, radius
    ``delta * u**(1/d)`` shrunk by a hair so rounding can never push the
    norm past delta).  If the perturbed cloud contains duplicates the
    whole draw is retried up to a bounded number of times.
    """
    X = check_point_cloud(points)
    if delta < 0:
        raise ValidationError("delta must be non-negative")
    if delta == 0:
        return X.copy()
    n, d = X.shape
    rng = np.random.default_rng(seed)
    for _ in range(_PERTURB_RETRIES):
        dirs = rng.standard_normal((n, d))
        norms = np.linalg.norm(dirs, axis=1, keepdims=True)
        if np.any(norms == 0.0):
            continue
        radii = delta * (1.0 - 1e-9) * rng.uniform(0.0, 1.0, size=n) ** (1.0 / d)
        W = X + dirs / norms * radii[:, None]
        try:
            return check_point_cloud(W)
        except ValidationError:
            continue
    raise ValidationError(
        f"could not perturb without duplicate points after {_PERTURB_RETRIES} retries"
    )
