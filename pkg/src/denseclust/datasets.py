"""Synthetic scenario generators and flat-file loaders.

Three 2-D scenario families, each with ground truth attached:

* ``blobs`` -- equally dense, well-separated Gaussian blobs. Every
  density-based method should handle these.
* ``varying`` -- clusters whose internal spacing differs by a large
  factor (default 5x), with the two dense clusters adjacent. No single
  global radius suits both density regimes.
* ``embedded`` -- three concentric regions of increasing sparsity with
  no empty moat between them: a dense disk inside a medium annulus
  inside a sparse annulus. Density contrast is the only separator.

Cluster bodies are jittered square lattices (except the Gaussian blobs),
so each region has a well-defined internal spacing; that is what makes
the scenario-defining density ratios sharp. Background noise is sampled
uniformly over the bounding box, rejecting draws too close to cluster
bodies, and is labeled -1.

Randomness comes from numpy's ``default_rng`` (the PCG64 generator), so
a spec's 64-bit seed fully determines the dataset, bit for bit, on any
platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .core import Dataset, validate
from .errors import (
    DatasetValidationError,
    NonFiniteCoordinateError,
    ParameterError,
    ParseError,
)


class Shape(str, Enum):
    BLOBS = "blobs"
    VARYING = "varying"
    EMBEDDED = "embedded"


_MIN_POINTS = {Shape.BLOBS: None, Shape.VARYING: 60, Shape.EMBEDDED: 90}


@dataclass(frozen=True)
class GenSpec:
    """Deterministic recipe for one synthetic dataset.

    ``density_ratio`` defaults per shape (5 for ``varying``, 3 for
    ``embedded``); ``noise_rate`` defaults to 0 for ``blobs`` and 5% for
    the other two shapes.
    """

    shape: Shape
    n: int
    seed: int
    dimension: int = 2
    blob_count: int = 3
    density_ratio: float | None = None
    noise_rate: float | None = None
    jitter: float = 0.17

    def __post_init__(self):
        if self.dimension != 2:
            raise ParameterError("generators are 2-D only")
        shape = Shape(self.shape)
        object.__setattr__(self, "shape", shape)
        minimum = _MIN_POINTS[shape]
        if shape is Shape.BLOBS:
            if self.blob_count < 1:
                raise ParameterError(f"blob_count must be >= 1, got {self.blob_count}")
            minimum = 3 * self.blob_count
        if self.n < minimum:
            raise ParameterError(
                f"shape {shape.value} needs at least {minimum} points, got {self.n}"
            )
        if self.noise_rate is not None and not (0.0 <= self.noise_rate < 1.0):
            raise ParameterError(f"noise_rate must be in [0, 1), got {self.noise_rate}")
        if self.density_ratio is not None and self.density_ratio <= 1.0:
            raise ParameterError(
                f"density_ratio must exceed 1, got {self.density_ratio}"
            )
        if not (0.0 <= self.jitter < 0.5):
            raise ParameterError(f"jitter must be in [0, 0.5), got {self.jitter}")

    def resolved_noise_rate(self) -> float:
        if self.noise_rate is not None:
            return self.noise_rate
        return 0.0 if self.shape is Shape.BLOBS else 0.05

    def resolved_density_ratio(self) -> float:
        if self.density_ratio is not None:
            return self.density_ratio
        return 5.0 if self.shape is Shape.VARYING else 3.0


def _jittered_region(rng, center, spacing, count, jitter, r_in=0.0):
    """``count`` jittered square-lattice points in an annulus [r_in, r_out].

    The lattice is clipped from the inside; the outer radius is whatever
    the count-th nearest candidate lands on, so counts are exact.
    """
    R = math.sqrt(r_in * r_in + count * spacing * spacing * 1.6 / math.pi)
    R += 3.0 * spacing
    while True:
        m = int(R / spacing) + 1
        axis = np.arange(-m, m + 1, dtype=float) * spacing
        gx, gy = np.meshgrid(axis, axis)
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        pts += rng.uniform(-jitter * spacing, jitter * spacing, size=pts.shape)
        dist = np.hypot(pts[:, 0], pts[:, 1])
        mask = dist > r_in
        cand, cd = pts[mask], dist[mask]
        if len(cand) >= count:
            break
        R *= 1.4
    order = np.argsort(cd, kind="stable")[:count]
    sel = cand[order]
    r_out = float(cd[order].max()) if count else r_in
    return sel + np.asarray(center, dtype=float), r_out


def _background(rng, count, lo, hi, keepout_centers, keepout_radii):
    """Uniform points over the box, rejecting draws inside any keepout disk.

    ``lo``/``hi`` may be scalars or per-axis pairs.
    """
    out = []
    centers = np.asarray(keepout_centers, dtype=float)
    radii = np.asarray(keepout_radii, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), (2,))
    hi = np.broadcast_to(np.asarray(hi, dtype=float), (2,))
    while len(out) < count:
        batch = rng.uniform(lo, hi, size=(max(32, 4 * count), 2))
        if len(centers):
            d = np.hypot(
                batch[:, None, 0] - centers[None, :, 0],
                batch[:, None, 1] - centers[None, :, 1],
            )
            batch = batch[(d > radii[None, :]).all(axis=1)]
        out.extend(map(tuple, batch))
    return np.asarray(out[:count], dtype=float)


def _split_counts(total, fractions):
    counts = [int(total * f) for f in fractions]
    counts[0] += total - sum(counts)
    return counts


def _mean_nn(points: np.ndarray) -> float:
    d = np.hypot(
        points[:, None, 0] - points[None, :, 0],
        points[:, None, 1] - points[None, :, 1],
    )
    np.fill_diagonal(d, np.inf)
    return float(d.min(axis=1).mean())


def _gen_blobs(spec: GenSpec, rng) -> tuple[np.ndarray, list[int]]:
    k = spec.blob_count
    sigma = 1.0
    trunc = 3.0
    separation = 16.0 * sigma
    if k == 1:
        centers = np.zeros((1, 2))
    else:
        ring = separation / (2.0 * math.sin(math.pi / k))
        ang = 2.0 * math.pi * np.arange(k) / k
        centers = ring * np.column_stack([np.cos(ang), np.sin(ang)])
    noise_n = round(spec.n * spec.resolved_noise_rate())
    counts = _split_counts(spec.n - noise_n, [1.0 / k] * k)
    rows, truth = [], []
    for b in range(k):
        pts = np.empty((0, 2))
        while len(pts) < counts[b]:
            draw = rng.normal(0.0, sigma, size=(counts[b] * 2, 2))
            draw = draw[np.hypot(draw[:, 0], draw[:, 1]) <= trunc * sigma]
            pts = np.vstack([pts, draw])
        rows.append(pts[: counts[b]] + centers[b])
        truth.extend([b] * counts[b])
    if noise_n:
        pad = 6.0 * sigma
        lo = centers.min(axis=0) - trunc * sigma - pad
        hi = centers.max(axis=0) + trunc * sigma + pad
        rows.append(
            _background(rng, noise_n, lo, hi, centers, [trunc * sigma + 2.0 * sigma] * k)
        )
        truth.extend([-1] * noise_n)
    coords = np.vstack(rows)
    # Scenario check: blobs must stay well separated.
    gaps = [
        np.linalg.norm(centers[i] - centers[j])
        for i in range(k)
        for j in range(i + 1, k)
    ]
    if gaps and min(gaps) < 2.0 * trunc * sigma + 4.0 * sigma:
        raise DatasetValidationError("blob centers are not well separated")
    return coords, truth


def _gen_varying(spec: GenSpec, rng) -> tuple[np.ndarray, list[int]]:
    s = 1.0  # dense internal spacing; everything scales from it
    ratio = spec.resolved_density_ratio()
    sparse = ratio * s
    noise_n = round(spec.n * spec.resolved_noise_rate())
    counts = _split_counts(spec.n - noise_n, [0.28, 0.28, 0.22, 0.22])
    gap = 3.0 * s  # the two dense clusters sit this close together

    a_pts, r_a = _jittered_region(rng, (0.0, 0.0), s, counts[0], spec.jitter)
    b_pts, r_b = _jittered_region(rng, (0.0, 0.0), s, counts[1], spec.jitter)
    b_center = (r_a + r_b + gap, 0.0)
    b_pts += np.asarray(b_center)
    far = 25.0 * s + 2.0 * sparse
    c1_pts, r_c1 = _jittered_region(rng, (0.0, 0.0), sparse, counts[2], spec.jitter)
    c2_pts, r_c2 = _jittered_region(rng, (0.0, 0.0), sparse, counts[3], spec.jitter)
    mid_x = b_center[0] / 2.0
    c1_center = (mid_x, max(r_a, r_b) + r_c1 + far)
    c2_center = (mid_x, -(max(r_a, r_b) + r_c2 + far))
    c1_pts += np.asarray(c1_center)
    c2_pts += np.asarray(c2_center)

    rows = [a_pts, b_pts, c1_pts, c2_pts]
    truth = (
        [0] * counts[0] + [1] * counts[1] + [2] * counts[2] + [3] * counts[3]
    )
    if noise_n:
        all_pts = np.vstack(rows)
        pad = 3.0 * sparse
        lo = all_pts.min(axis=0) - pad
        hi = all_pts.max(axis=0) + pad
        centers = [(0.0, 0.0), b_center, c1_center, c2_center]
        radii = [r + 1.3 * sparse for r in (r_a, r_b, r_c1, r_c2)]
        rows.append(_background(rng, noise_n, lo, hi, centers, radii))
        truth.extend([-1] * noise_n)
    coords = np.vstack(rows)
    # Scenario check: measured spacing ratio between regimes.
    measured = _mean_nn(c1_pts) / _mean_nn(a_pts)
    if measured < 0.7 * ratio:
        raise DatasetValidationError(
            f"density ratio degenerated: measured {measured:.2f}, wanted {ratio}"
        )
    return coords, truth


def _gen_embedded(spec: GenSpec, rng) -> tuple[np.ndarray, list[int]]:
    t1 = 1.0
    rho = spec.resolved_density_ratio()
    t2, t3 = rho * t1, rho * rho * t1
    noise_n = round(spec.n * spec.resolved_noise_rate())
    counts = _split_counts(spec.n - noise_n, [1 / 3, 1 / 3, 1 / 3])

    disk, r1 = _jittered_region(rng, (0.0, 0.0), t1, counts[0], spec.jitter)
    mid, r2 = _jittered_region(
        rng, (0.0, 0.0), t2, counts[1], spec.jitter, r_in=r1 + 0.35 * t2
    )
    outer, r3 = _jittered_region(
        rng, (0.0, 0.0), t3, counts[2], spec.jitter, r_in=r2 + 0.35 * t3
    )
    rows = [disk, mid, outer]
    truth = [0] * counts[0] + [1] * counts[1] + [2] * counts[2]
    if noise_n:
        pad = 3.0 * t3
        lo, hi = -(r3 + pad), r3 + pad
        rows.append(
            _background(rng, noise_n, lo, hi, [(0.0, 0.0)], [r3 + 1.3 * t3])
        )
        truth.extend([-1] * noise_n)
    coords = np.vstack(rows)
    # Scenario check: mean nearest-neighbor distance must grow outward.
    nn = [_mean_nn(disk), _mean_nn(mid), _mean_nn(outer)]
    if not (nn[0] < nn[1] < nn[2]):
        raise DatasetValidationError(f"radial density not monotone: {nn}")
    return coords, truth


def generate(spec: GenSpec) -> Dataset:
    """Generate the dataset a spec describes, ground truth included.

    The same spec always yields the bit-identical dataset.
    """
    rng = np.random.default_rng(spec.seed)
    if spec.shape is Shape.BLOBS:
        coords, truth = _gen_blobs(spec, rng)
    elif spec.shape is Shape.VARYING:
        coords, truth = _gen_varying(spec, rng)
    else:
        coords, truth = _gen_embedded(spec, rng)
    perm = rng.permutation(len(coords))
    coords = coords[perm]
    truth = [truth[i] for i in perm]
    return Dataset.from_coords(coords.tolist(), truth=truth)


# ---------------------------------------------------------------------------
# Flat files


def _coord_names(dimension: int) -> list[str]:
    if dimension <= 3:
        return ["x", "y", "z"][:dimension]
    return [f"x{i}" for i in range(dimension)]


def save(d: Dataset, path) -> None:
    """Write a dataset as CSV; load(save(d)) reproduces it exactly."""
    validate(d)
    names = _coord_names(d.dimension)
    if d.truth is not None:
        names = names + ["label"]
    lines = [",".join(names)]
    for i, p in enumerate(d.points):
        fields = [repr(c) for c in p.coords]
        if d.truth is not None:
            fields.append(str(d.truth[i]))
        lines.append(",".join(fields))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _parse_float(token: str, lineno: int) -> float:
    t = token.strip()
    try:
        v = float(t)
    except ValueError:
        raise ParseError(f"non-numeric coordinate {t!r}", lineno) from None
    if not math.isfinite(v):
        raise NonFiniteCoordinateError(f"line {lineno}: non-finite coordinate {t!r}")
    return v


def _parse_truth(token: str, lineno: int) -> int:
    t = token.strip()
    try:
        v = float(t)
    except ValueError:
        raise ParseError(f"non-numeric label {t!r}", lineno) from None
    if not v.is_integer():
        raise ParseError(f"label {t!r} is not an integer", lineno)
    return int(v)


def load_csv(path) -> Dataset:
    text = Path(path).read_text(encoding="utf-8")
    rows = [
        (i + 1, line.strip())
        for i, line in enumerate(text.splitlines())
        if line.strip()
    ]
    if not rows:
        raise ParseError(f"{path}: empty file")
    header: list[str] | None = None
    first_fields = rows[0][1].split(",")

    def _numeric(tok: str) -> bool:
        try:
            float(tok)
            return True
        except ValueError:
            return False

    if not all(_numeric(f) for f in first_fields):
        header = [f.strip().lower() for f in first_fields]
        rows = rows[1:]
    has_label = header is not None and header and header[-1] == "label"
    coords, truth = [], []
    width = len(header) if header else None
    for lineno, line in rows:
        fields = line.split(",")
        if width is None:
            width = len(fields)
        if len(fields) != width:
            raise ParseError(
                f"expected {width} fields, found {len(fields)}", lineno
            )
        if has_label:
            coords.append([_parse_float(f, lineno) for f in fields[:-1]])
            truth.append(_parse_truth(fields[-1], lineno))
        else:
            coords.append([_parse_float(f, lineno) for f in fields])
    if not coords:
        dim = (width - 1 if has_label else width) if width else 2
        return Dataset.from_coords([], truth=[] if has_label else None, dimension=dim)
    return Dataset.from_coords(coords, truth=truth if has_label else None)


def load_arff(path) -> Dataset:
    """Dense ARFF subset: numeric attributes plus one optional trailing
    nominal class attribute, which becomes ground truth.

    Nominal values map to 0..k-1 in declaration order; the literal value
    ``noise`` maps to -1.
    """
    text = Path(path).read_text(encoding="utf-8")
    attrs: list[tuple[str, str]] = []  # (name, "numeric") or (name, "nominal")
    nominal_values: list[str] | None = None
    in_data = False
    coords, truth = [], []
    saw_any = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        saw_any = True
        low = line.lower()
        if not in_data:
            if low.startswith("@relation"):
                continue
            if low.startswith("@attribute"):
                rest = line[len("@attribute"):].strip()
                if rest.startswith(("'", '"')):
                    quote = rest[0]
                    end = rest.index(quote, 1)
                    name, typ = rest[1:end], rest[end + 1 :].strip()
                else:
                    parts = rest.split(None, 1)
                    if len(parts) != 2:
                        raise ParseError("malformed @attribute", lineno)
                    name, typ = parts
                typ = typ.strip()
                if typ.lower() in ("numeric", "real", "integer"):
                    attrs.append((name, "numeric"))
                elif typ.startswith("{") and typ.endswith("}"):
                    if nominal_values is not None:
                        raise ParseError(
                            "only one nominal class attribute is supported", lineno
                        )
                    nominal_values = [
                        v.strip().strip("'\"") for v in typ[1:-1].split(",")
                    ]
                    attrs.append((name, "nominal"))
                else:
                    raise ParseError(f"unsupported attribute type {typ!r}", lineno)
                continue
            if low.startswith("@data"):
                if not attrs:
                    raise ParseError("@data before any @attribute", lineno)
                if nominal_values is not None and attrs[-1][1] != "nominal":
                    raise ParseError(
                        "nominal class attribute must be declared last", lineno
                    )
                in_data = True
                continue
            raise ParseError(f"unexpected line {line!r}", lineno)
        fields = line.split(",")
        if len(fields) != len(attrs):
            raise ParseError(
                f"expected {len(attrs)} fields, found {len(fields)}", lineno
            )
        row = []
        for (name, typ), tok in zip(attrs, fields):
            tok = tok.strip().strip("'\"")
            if tok == "?":
                raise ParseError("missing values are not supported", lineno)
            if typ == "numeric":
                row.append(_parse_float(tok, lineno))
            else:
                if tok.lower() == "noise":
                    truth.append(-1)
                elif tok in nominal_values:
                    truth.append(nominal_values.index(tok))
                else:
                    raise ParseError(f"undeclared nominal value {tok!r}", lineno)
        coords.append(row)
    if not saw_any:
        raise ParseError(f"{path}: empty file")
    if not in_data:
        raise ParseError(f"{path}: no @data section")
    has_truth = nominal_values is not None
    if not coords:
        dim = len(attrs) - (1 if has_truth else 0)
        return Dataset.from_coords([], truth=[] if has_truth else None, dimension=dim)
    return Dataset.from_coords(coords, truth=truth if has_truth else None)


def load(path, format: str | None = None) -> Dataset:
    """Load a dataset from CSV or ARFF, inferring the format from the
    extension when not given."""
    fmt = format
    if fmt is None:
        fmt = "arff" if str(path).lower().endswith(".arff") else "csv"
    fmt = fmt.lower()
    if fmt == "csv":
        return load_csv(path)
    if fmt == "arff":
        return load_arff(path)
    raise ParameterError(f"unknown format {format!r}")
