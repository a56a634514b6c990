"""Exact Euclidean distance transform to a set of seed pixels.

``edt_brute`` is the definitional exhaustive scan kept as an oracle;
``edt_exact`` is the production separable transform: a two-sweep column
pass for per-column row distances, then a per-row lower envelope of
parabolas over the squared distances. Both measure distances between
pixel centers, so they agree to the last bit on integer seed sets.
"""

from __future__ import annotations

import numpy as np

from .fields import as_mask, boundary_mask

_FAR = 1e20  # plays infinity inside the squared-distance passes


def _validate_boundary(boundary, width: int, height: int) -> np.ndarray:
    pts = np.asarray(boundary, dtype=np.float64)
    if pts.size == 0:
        raise ValueError("no boundary: mask is empty or full-frame degenerate")
    pts = pts.reshape(-1, 2)
    u, v = pts[:, 0], pts[:, 1]
    if (u < 0).any() or (u >= width).any() or (v < 0).any() or (v >= height).any():
        raise ValueError("boundary pixel outside the image")
    return pts


def edt_brute(boundary, width: int, height: int) -> np.ndarray:
    """O(pixels x seeds) reference: per pixel, the minimum Euclidean
    distance to any seed pixel center."""
    pts = _validate_boundary(boundary, width, height)
    uu, vv = np.meshgrid(np.arange(width, dtype=np.float64), np.arange(height, dtype=np.float64))
    best = np.full((height, width), np.inf)
    chunk = 256
    for start in range(0, len(pts), chunk):
        block = pts[start:start + chunk]
        du = uu[..., None] - block[None, None, :, 0]
        dv = vv[..., None] - block[None, None, :, 1]
        np.minimum(best, (du * du + dv * dv).min(axis=2), out=best)
    return np.sqrt(best)


def edt_exact(boundary, width: int, height: int) -> np.ndarray:
    """Separable exact transform, O(pixels) up to the envelope constant."""
    pts = _validate_boundary(boundary, width, height)
    seeds = np.zeros((height, width), dtype=bool)
    seeds[pts[:, 1].astype(np.intp), pts[:, 0].astype(np.intp)] = True
    return edt_from_sites(seeds)


def edt_from_sites(sites) -> np.ndarray:
    """Exact Euclidean distance of every pixel to the nearest True pixel."""
    sites = as_mask(sites)
    if not sites.any():
        raise ValueError("no boundary: mask is empty or full-frame degenerate")
    height, width = sites.shape

    # pass 1: per-column distance (in rows) to the nearest seed of that column
    drow = np.where(sites, 0.0, _FAR)
    for r in range(1, height):
        np.minimum(drow[r], drow[r - 1] + 1.0, out=drow[r])
    for r in range(height - 2, -1, -1):
        np.minimum(drow[r], drow[r + 1] + 1.0, out=drow[r])
    f = np.where(drow < 1e19, drow * drow, _FAR)

    # pass 2: per-row lower envelope of parabolas over columns
    out = np.empty_like(f)
    for r in range(height):
        out[r] = _parabola_envelope(f[r])
    return np.sqrt(out)


def _parabola_envelope(f: np.ndarray) -> np.ndarray:
    n = f.shape[0]
    d = np.empty(n, dtype=np.float64)
    v = np.zeros(n, dtype=np.intp)
    z = np.empty(n + 1, dtype=np.float64)
    k = 0
    z[0] = -np.inf
    z[1] = np.inf
    for q in range(1, n):
        fq = f[q] + q * q
        s = (fq - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]))
        while s <= z[k]:
            k -= 1
            s = (fq - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]))
        k += 1
        v[k] = q
        z[k] = s
        z[k + 1] = np.inf
    k = 0
    for q in range(n):
        while z[k + 1] < q:
            k += 1
        d[q] = (q - v[k]) ** 2 + f[v[k]]
    return d


def mask_to_dt(mask) -> np.ndarray:
    """Unsigned distance transform of a mask's inner boundary; equal inside
    and outside, zero exactly on the boundary pixels."""
    mask = as_mask(mask)
    fg = int(mask.sum())
    if fg == 0 or fg == mask.size:
        raise ValueError("mask needs at least one foreground and one background pixel")
    return edt_from_sites(boundary_mask(mask))
