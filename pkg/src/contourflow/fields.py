"""Grid and polygon primitives shared by the whole engine.

Conventions used everywhere, without exception:

* a point is (u, v) = (column, row); pixel centers sit at integer
  coordinates and the origin is the top-left pixel
* scalar fields are float64 arrays of shape (height, width), indexed
  ``field[v, u]``; vector fields stack the (u, v) components in a
  trailing axis of size 2
* masks are bool arrays of shape (height, width)
* contours are closed polygons whose node order is normalized to
  positive signed area (shoelace in (u, v)) at construction; the last
  node connects back to the first
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# polygons whose |signed area| falls below this rasterize to nothing
DEGENERATE_AREA = 1e-6


def as_field(values) -> np.ndarray:
    field = np.asarray(values, dtype=np.float64)
    if field.ndim != 2 or field.size == 0:
        raise ValueError(f"expected a non-empty 2-d field, got shape {field.shape}")
    if not np.isfinite(field).all():
        raise ValueError("field contains NaN or Inf")
    return field


def as_mask(bits) -> np.ndarray:
    mask = np.asarray(bits)
    if mask.ndim != 2 or mask.size == 0:
        raise ValueError(f"expected a non-empty 2-d mask, got shape {mask.shape}")
    return mask.astype(bool)


def bilinear_sample_many(field, points) -> np.ndarray:
    """Bilinear interpolation of ``field`` at an (N, 2) array of (u, v) points.

    Points are clamped to the field rectangle, so the lookup is total;
    exact pixel centers return the stored values.
    """
    field = np.asarray(field, dtype=np.float64)
    pts = np.asarray(points, dtype=np.float64)
    if not np.isfinite(pts).all():
        raise ValueError("sample points contain NaN or Inf (corrupted contour state)")
    height, width = field.shape
    u = np.clip(pts[..., 0], 0.0, width - 1.0)
    v = np.clip(pts[..., 1], 0.0, height - 1.0)
    u0 = np.clip(np.floor(u).astype(np.intp), 0, max(width - 2, 0))
    v0 = np.clip(np.floor(v).astype(np.intp), 0, max(height - 2, 0))
    u1 = np.minimum(u0 + 1, width - 1)
    v1 = np.minimum(v0 + 1, height - 1)
    fu = u - u0
    fv = v - v0
    top = field[v0, u0] * (1.0 - fu) + field[v0, u1] * fu
    bottom = field[v1, u0] * (1.0 - fu) + field[v1, u1] * fu
    return top * (1.0 - fv) + bottom * fv


def bilinear_sample(field, point) -> float:
    return float(bilinear_sample_many(field, np.asarray(point, dtype=np.float64).reshape(1, 2))[0])


def central_gradient(field) -> np.ndarray:
    """Per-pixel gradient as an (H, W, 2) array of (d/du, d/dv) components.

    Interior pixels use central differences, border pixels one-sided ones.
    """
    field = as_field(field)
    if field.shape[0] < 2 or field.shape[1] < 2:
        raise ValueError("gradient needs a field of at least 2x2 pixels")
    ddu = np.gradient(field, axis=1)
    ddv = np.gradient(field, axis=0)
    return np.stack([ddu, ddv], axis=-1)


def boundary_mask(mask) -> np.ndarray:
    """Inner boundary: foreground pixels with a 4-neighbor that is background
    or outside the image."""
    mask = as_mask(mask)
    padded = np.pad(mask, 1, mode="constant", constant_values=False)
    has_all_neighbors = (
        padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    )
    return mask & ~has_all_neighbors


def boundary_pixels(mask) -> np.ndarray:
    """(K, 2) int array of boundary (u, v) coordinates, in row-major order."""
    rows, cols = np.nonzero(boundary_mask(mask))
    return np.stack([cols, rows], axis=1)


def signed_area(nodes) -> float:
    pts = np.asarray(nodes, dtype=np.float64)
    u = pts[:, 0]
    v = pts[:, 1]
    return 0.5 * float(np.sum(u * np.roll(v, -1) - np.roll(u, -1) * v))


@dataclass
class Circle:
    center: tuple[float, float]  # (u, v)
    radius: float

    def __post_init__(self):
        cu, cv = self.center
        if not (np.isfinite(cu) and np.isfinite(cv) and np.isfinite(self.radius)):
            raise ValueError("circle parameters must be finite")
        if self.radius <= 0.0:
            raise ValueError("circle radius must be positive")
        self.center = (float(cu), float(cv))
        self.radius = float(self.radius)


@dataclass
class Contour:
    """Closed polygon of sub-pixel (u, v) nodes.

    Construction copies the node array, validates it and normalizes the
    orientation to positive signed area so the outward normal is
    well-defined for the balloon force.
    """

    nodes: np.ndarray

    def __post_init__(self):
        pts = np.array(self.nodes, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
            raise ValueError("a contour needs an (L >= 3, 2) array of (u, v) nodes")
        if not np.isfinite(pts).all():
            raise ValueError("contour nodes contain NaN or Inf")
        if signed_area(pts) < 0.0:
            pts = np.concatenate([pts[:1], pts[-1:0:-1]])  # reverse, keep node 0 first
        self.nodes = pts

    def __len__(self) -> int:
        return self.nodes.shape[0]

    @property
    def area(self) -> float:
        return signed_area(self.nodes)

    @property
    def is_degenerate(self) -> bool:
        return abs(self.area) < DEGENERATE_AREA

    @property
    def perimeter(self) -> float:
        d = np.roll(self.nodes, -1, axis=0) - self.nodes
        return float(np.hypot(d[:, 0], d[:, 1]).sum())

    def clamped(self, width: int, height: int) -> "Contour":
        pts = self.nodes.copy()
        pts[:, 0] = np.clip(pts[:, 0], 0.0, width - 1.0)
        pts[:, 1] = np.clip(pts[:, 1], 0.0, height - 1.0)
        return Contour(pts)


def rasterize(contour, width: int, height: int) -> np.ndarray:
    """Pixel-center even-odd rasterization of a closed polygon.

    A pixel center is inside when an odd number of edges cross the
    horizontal ray extending to its right; an edge contributes over the
    half-open row interval [min(v), max(v)), which resolves
    boundary-grazing centers deterministically (top-left convention).
    Degenerate polygons rasterize to an all-zero mask.
    """
    if isinstance(contour, Contour):
        if contour.is_degenerate:
            return np.zeros((height, width), dtype=bool)
        pts = contour.nodes
    else:
        pts = np.asarray(contour, dtype=np.float64)
        if abs(signed_area(pts)) < DEGENERATE_AREA:
            return np.zeros((height, width), dtype=bool)

    crossings: list[list[float]] = [[] for _ in range(height)]
    nxt = np.roll(pts, -1, axis=0)
    for (au, av), (bu, bv) in zip(pts, nxt):
        if av == bv:
            continue
        lo, hi = (av, bv) if av < bv else (bv, av)
        r0 = max(int(np.ceil(lo)), 0)
        r1 = min(int(np.ceil(hi)), height)
        if r0 >= r1:
            continue
        rows = np.arange(r0, r1, dtype=np.float64)
        t = (rows - av) / (bv - av)
        xs = au + t * (bu - au)
        for r, x in zip(range(r0, r1), xs):
            crossings[r].append(float(x))

    out = np.zeros((height, width), dtype=bool)
    cols = np.arange(width, dtype=np.float64)
    for r, xs in enumerate(crossings):
        if not xs:
            continue
        xs_sorted = np.sort(np.asarray(xs, dtype=np.float64))
        strictly_right = len(xs_sorted) - np.searchsorted(xs_sorted, cols, side="right")
        out[r] = (strictly_right % 2).astype(bool)
    return out


def resample_closed(nodes, count: int) -> np.ndarray:
    """Resample a closed polyline to ``count`` nodes at uniform arc length,
    starting from node 0."""
    if count < 3:
        raise ValueError("resampling needs at least 3 target nodes")
    pts = np.asarray(nodes, dtype=np.float64)
    closed = np.vstack([pts, pts[:1]])
    seg = np.hypot(np.diff(closed[:, 0]), np.diff(closed[:, 1]))
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = cum[-1]
    if total <= 0.0:
        return np.repeat(pts[:1], count, axis=0)
    target = np.linspace(0.0, total, count, endpoint=False)
    u = np.interp(target, cum, closed[:, 0])
    v = np.interp(target, cum, closed[:, 1])
    return np.stack([u, v], axis=1)
