"""Automatic contour initialization from a mask.

Two exact constructions (largest interior circle via the distance
transform argmax, minimal enclosing circle of the foreground) plus a
raster-domain coordinate-descent fit that is checked against them.
"""

from __future__ import annotations

import random

import numpy as np

from .edt import edt_from_sites
from .fields import Circle, Contour, as_mask, boundary_pixels

_MULT_EPS = 1.0 + 1e-14


def inscribed_circle(mask) -> Circle:
    """Largest circle fully contained in the foreground: center at the
    argmax of the distance to background (outside the frame counts as
    background), ties broken by smallest (row, column)."""
    mask = as_mask(mask)
    if not mask.any():
        raise ValueError("mask has no foreground")
    padded = np.pad(mask, 1, mode="constant", constant_values=False)
    interior = edt_from_sites(~padded)[1:-1, 1:-1]
    scored = np.where(mask, interior, -1.0)
    best = int(np.argmax(scored))  # row-major argmax = smallest (row, col) tie-break
    cv, cu = divmod(best, mask.shape[1])
    return Circle((float(cu), float(cv)), float(scored[cv, cu]))


def circumscribed_circle(mask) -> Circle:
    """Minimal enclosing circle of the foreground pixel centers, padded by
    half a pixel so the pixel squares are covered."""
    mask = as_mask(mask)
    pts = boundary_pixels(mask)  # the extreme points all lie on the inner boundary
    if len(pts) == 0:
        raise ValueError("mask has no foreground")
    cu, cv, r = minimal_enclosing_circle(pts.astype(np.float64))
    return Circle((cu, cv), r + 0.5)


def minimal_enclosing_circle(points) -> tuple[float, float, float]:
    """Exact smallest circle containing all points, expected linear time.

    Incremental construction over a deterministically shuffled order.
    """
    pts = [(float(u), float(v)) for u, v in np.asarray(points, dtype=np.float64)]
    if not pts:
        raise ValueError("need at least one point")
    rng = random.Random(0x5EED)
    rng.shuffle(pts)
    circle = None
    for i, p in enumerate(pts):
        if circle is None or not _in_circle(circle, p):
            circle = _circle_one_point(pts[: i + 1], p)
    return circle


def _in_circle(circle, p) -> bool:
    cu, cv, r = circle
    return np.hypot(p[0] - cu, p[1] - cv) <= r * _MULT_EPS


def _circle_one_point(points, p):
    circle = (p[0], p[1], 0.0)
    for i, q in enumerate(points):
        if not _in_circle(circle, q):
            if circle[2] == 0.0:
                circle = _diameter(p, q)
            else:
                circle = _circle_two_points(points[: i + 1], p, q)
    return circle


def _circle_two_points(points, p, q):
    circ = _diameter(p, q)
    left = right = None
    px, py = p
    qx, qy = q
    for r in points:
        if _in_circle(circ, r):
            continue
        cross = _cross(px, py, qx, qy, r[0], r[1])
        c = _circumcircle(p, q, r)
        if c is None:
            continue
        if cross > 0.0 and (left is None or _cross(px, py, qx, qy, c[0], c[1])
                            > _cross(px, py, qx, qy, left[0], left[1])):
            left = c
        elif cross < 0.0 and (right is None or _cross(px, py, qx, qy, c[0], c[1])
                              < _cross(px, py, qx, qy, right[0], right[1])):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left[2] <= right[2] else right


def _diameter(p, q):
    cu = (p[0] + q[0]) / 2.0
    cv = (p[1] + q[1]) / 2.0
    return (cu, cv, max(np.hypot(cu - p[0], cv - p[1]), np.hypot(cu - q[0], cv - q[1])))


def _circumcircle(p0, p1, p2):
    # recentre on the bounding-box midpoint for numerical stability
    ox = (min(p0[0], p1[0], p2[0]) + max(p0[0], p1[0], p2[0])) / 2.0
    oy = (min(p0[1], p1[1], p2[1]) + max(p0[1], p1[1], p2[1])) / 2.0
    ax, ay = p0[0] - ox, p0[1] - oy
    bx, by = p1[0] - ox, p1[1] - oy
    cx, cy = p2[0] - ox, p2[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0
    if d == 0.0:
        return None
    x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
              + (cx * cx + cy * cy) * (ay - by)) / d
    y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
              + (cx * cx + cy * cy) * (bx - ax)) / d
    r = max(np.hypot(x - p0[0], y - p0[1]),
            np.hypot(x - p1[0], y - p1[1]),
            np.hypot(x - p2[0], y - p2[1]))
    return (x, y, r)


def _cross(x0, y0, x1, y1, x2, y2):
    return (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)


def iterative_circle_fit(mask, mode: str) -> Circle:
    """Raster-domain coordinate descent on (center_u, center_v, radius)
    minimizing the symmetric difference with the mask.

    ``inscribed`` keeps the circle raster inside the foreground,
    ``circumscribed`` keeps the foreground inside the circle raster.
    Starts from the exact constructions and stops when no single
    half-pixel parameter move improves.
    """
    mask = as_mask(mask)
    if not mask.any():
        raise ValueError("mask has no foreground")
    if mode not in ("inscribed", "circumscribed"):
        raise ValueError(f"unknown fit mode {mode!r}")
    height, width = mask.shape
    uu, vv = np.meshgrid(np.arange(width, dtype=np.float64),
                         np.arange(height, dtype=np.float64))

    def raster(cu, cv, r):
        return (uu - cu) ** 2 + (vv - cv) ** 2 <= r * r

    def feasible(disk):
        if mode == "inscribed":
            return not (disk & ~mask).any()
        return not (mask & ~disk).any()

    def cost(disk):
        return int((disk ^ mask).sum())

    start = inscribed_circle(mask) if mode == "inscribed" else circumscribed_circle(mask)
    cu, cv = start.center
    r = start.radius
    max_r = float(np.hypot(width, height))
    # nudge into feasibility: raster containment is a little stricter than
    # the continuous definition at exact-tie pixel centers
    for _ in range(64):
        if feasible(raster(cu, cv, r)):
            break
        r = max(r - 0.5, 0.5) if mode == "inscribed" else min(r + 0.5, max_r)

    best = cost(raster(cu, cv, r))
    moves = ((0.5, 0.0, 0.0), (-0.5, 0.0, 0.0), (0.0, 0.5, 0.0),
             (0.0, -0.5, 0.0), (0.0, 0.0, 0.5), (0.0, 0.0, -0.5))
    for _ in range(10_000):
        for du, dv, dr in moves:
            ncu, ncv, nr = cu + du, cv + dv, r + dr
            if nr < 0.5 or nr > max_r:
                continue
            disk = raster(ncu, ncv, nr)
            if not feasible(disk):
                continue
            c = cost(disk)
            if c < best:
                best, cu, cv, r = c, ncu, ncv, nr
                break
        else:
            break
    return Circle((cu, cv), r)


def circle_to_contour(circle: Circle, count: int, width: int, height: int) -> Contour:
    """Regular ``count``-gon on the circle, nodes at angles 2*pi*s/count,
    clamped to the image bounds."""
    if count < 3:
        raise ValueError("a contour needs at least 3 nodes")
    theta = 2.0 * np.pi * np.arange(count) / count
    pts = np.stack(
        [
            circle.center[0] + circle.radius * np.cos(theta),
            circle.center[1] + circle.radius * np.sin(theta),
        ],
        axis=1,
    )
    return Contour(pts).clamped(width, height)
