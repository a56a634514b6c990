"""Independent reference implementations used to pin expected values.

Everything here is deliberately naive (per-pixel loops, exhaustive
enumeration) and shares no code with the production paths it checks.
"""

from __future__ import annotations

import math

import numpy as np


def point_in_polygon(point, nodes) -> bool:
    """Even-odd crossing test with half-open row intervals and strictly
    right-of-point crossings (the same tie convention the rasterizer pins)."""
    u, v = float(point[0]), float(point[1])
    crossings = 0
    count = len(nodes)
    for i in range(count):
        au, av = float(nodes[i][0]), float(nodes[i][1])
        bu, bv = float(nodes[(i + 1) % count][0]), float(nodes[(i + 1) % count][1])
        if (av <= v < bv) or (bv <= v < av):
            t = (v - av) / (bv - av)
            x = au + t * (bu - au)
            if u < x:
                crossings += 1
    return crossings % 2 == 1


def rasterize_reference(nodes, width: int, height: int) -> np.ndarray:
    out = np.zeros((height, width), dtype=bool)
    for r in range(height):
        for c in range(width):
            out[r, c] = point_in_polygon((c, r), nodes)
    return out


def convex_hull(points) -> list[tuple[float, float]]:
    """Andrew's monotone chain; returns the hull counterclockwise."""
    pts = sorted({(float(p[0]), float(p[1])) for p in points})
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def circumcircle_3(a, b, c):
    d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
    if d == 0.0:
        return None
    ax2, bx2, cx2 = a[0] ** 2 + a[1] ** 2, b[0] ** 2 + b[1] ** 2, c[0] ** 2 + c[1] ** 2
    x = (ax2 * (b[1] - c[1]) + bx2 * (c[1] - a[1]) + cx2 * (a[1] - b[1])) / d
    y = (ax2 * (c[0] - b[0]) + bx2 * (a[0] - c[0]) + cx2 * (b[0] - a[0])) / d
    r = max(math.hypot(x - p[0], y - p[1]) for p in (a, b, c))
    return (x, y, r)


def mec_reference(points) -> tuple[float, float, float]:
    """Smallest enclosing circle by exhaustive candidate enumeration over
    pairs and triples of hull points (the optimum is determined by hull
    points, so the restriction is lossless)."""
    pts = [(float(p[0]), float(p[1])) for p in points]
    hull = convex_hull(pts)
    if len(hull) == 1:
        return (hull[0][0], hull[0][1], 0.0)
    slack = 1e-9
    candidates = []
    n = len(hull)
    for i in range(n):
        for j in range(i + 1, n):
            cx = (hull[i][0] + hull[j][0]) / 2.0
            cy = (hull[i][1] + hull[j][1]) / 2.0
            r = max(math.hypot(cx - hull[i][0], cy - hull[i][1]),
                    math.hypot(cx - hull[j][0], cy - hull[j][1]))
            candidates.append((cx, cy, r))
            for k in range(j + 1, n):
                circ = circumcircle_3(hull[i], hull[j], hull[k])
                if circ is not None:
                    candidates.append(circ)
    best = None
    for cx, cy, r in candidates:
        if best is not None and r >= best[2]:
            continue
        # covering the hull covers every point (disks are convex)
        if all(math.hypot(cx - p[0], cy - p[1]) <= r + slack for p in hull):
            best = (cx, cy, r)
    assert best is not None
    assert all(math.hypot(best[0] - p[0], best[1] - p[1]) <= best[2] + slack for p in pts)
    return best


def boundary_pixels_reference(mask) -> list[tuple[int, int]]:
    h, w = mask.shape
    out = []
    for v in range(h):
        for u in range(w):
            if not mask[v, u]:
                continue
            for du, dv in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                nu, nv = u + du, v + dv
                if not (0 <= nu < w and 0 <= nv < h) or not mask[nv, nu]:
                    out.append((u, v))
                    break
    return out


def boundf_reference(pred, gt, thresholds=(1, 2, 3, 4, 5)):
    """Boundary F1 by brute-force pairwise distances between boundary sets."""
    pb = boundary_pixels_reference(np.asarray(pred, dtype=bool))
    gb = boundary_pixels_reference(np.asarray(gt, dtype=bool))
    if not pb or not gb:
        score = 1.0 if (not np.asarray(pred).any() and not np.asarray(gt).any()) else 0.0
        return score, tuple([score] * len(thresholds))
    pa = np.asarray(pb, dtype=np.float64)
    ga = np.asarray(gb, dtype=np.float64)
    d = np.hypot(pa[:, None, 0] - ga[None, :, 0], pa[:, None, 1] - ga[None, :, 1])
    d_p = d.min(axis=1)
    d_g = d.min(axis=0)
    per = []
    for t in thresholds:
        precision = float((d_p <= t).mean())
        recall = float((d_g <= t).mean())
        per.append(0.0 if precision + recall == 0.0
                   else 2.0 * precision * recall / (precision + recall))
    return float(np.mean(per)), tuple(per)


def fd_gradient(fn, x0: np.ndarray, step: float = 1e-4) -> np.ndarray:
    """Central finite-difference gradient of a scalar function of a flat
    float vector."""
    x0 = np.asarray(x0, dtype=np.float64)
    grad = np.zeros_like(x0)
    for i in range(x0.size):
        hi = x0.copy()
        lo = x0.copy()
        hi[i] += step
        lo[i] -= step
        grad[i] = (fn(hi) - fn(lo)) / (2.0 * step)
    return grad


def sum_first_diff_sq(nodes) -> float:
    total = 0.0
    count = len(nodes)
    for s in range(count):
        du = nodes[(s + 1) % count][0] - nodes[s][0]
        dv = nodes[(s + 1) % count][1] - nodes[s][1]
        total += du * du + dv * dv
    return total


def sum_second_diff_sq(nodes) -> float:
    total = 0.0
    count = len(nodes)
    for s in range(count):
        du = nodes[(s + 1) % count][0] - 2 * nodes[s][0] + nodes[(s - 1) % count][0]
        dv = nodes[(s + 1) % count][1] - 2 * nodes[s][1] + nodes[(s - 1) % count][1]
        total += du * du + dv * dv
    return total
