"""Deterministic synthetic mask fixtures used by tests and scripts.

The suite sizes are tuned so every fixture's initialization circle sits
within the travel budget of the default solver settings (time step 0.1,
force clip 2.0, 50 iterations gives roughly 10 px of node motion).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import Contour, rasterize


def _grid(width: int, height: int):
    return np.meshgrid(np.arange(width, dtype=np.float64),
                       np.arange(height, dtype=np.float64))


def disk_mask(width, height, center, radius) -> np.ndarray:
    uu, vv = _grid(width, height)
    return np.hypot(uu - center[0], vv - center[1]) <= radius


def rectangle_mask(width, height, center, half_u, half_v) -> np.ndarray:
    uu, vv = _grid(width, height)
    return (np.abs(uu - center[0]) <= half_u) & (np.abs(vv - center[1]) <= half_v)


def star_polygon(center, outer, inner, points: int = 5, phase: float = -np.pi / 2) -> np.ndarray:
    angles = phase + np.pi * np.arange(2 * points) / points
    radii = np.where(np.arange(2 * points) % 2 == 0, outer, inner)
    return np.stack([center[0] + radii * np.cos(angles),
                     center[1] + radii * np.sin(angles)], axis=1)


def star_mask(width, height, center, outer, inner, points: int = 5) -> np.ndarray:
    return rasterize(Contour(star_polygon(center, outer, inner, points)), width, height)


def u_shape_mask(width, height, center, half_u, half_v, mouth_half, bottom_half,
                 depth) -> np.ndarray:
    """Rectangular block with a flared slot carved from its top edge; the
    mouth is wider than the slot bottom so the walls slant."""
    cu, cv = center
    top = cv - half_v
    block = rectangle_mask(width, height, center, half_u, half_v)
    slot = rasterize(Contour(np.array([
        (cu - mouth_half, top - 2.0),
        (cu + mouth_half, top - 2.0),
        (cu + bottom_half, top + depth),
        (cu - bottom_half, top + depth),
    ], dtype=np.float64)), width, height)
    return block & ~slot


def bitten_disk_mask(width, height, center, radius, bite_center, bite_radius) -> np.ndarray:
    return disk_mask(width, height, center, radius) & \
        ~disk_mask(width, height, bite_center, bite_radius)


@dataclass
class Fixture:
    name: str
    mask: np.ndarray
    init_mode: str  # "inscribed" | "circumscribed"
    concave: bool

    @property
    def size(self) -> int:
        return self.mask.shape[0]


def suite(size: int) -> list[Fixture]:
    """Bundled shape suite at a given square canvas size (64 or 128)."""
    if size == 64:
        c = (32.0, 32.0)
        return [
            Fixture("disk", disk_mask(64, 64, c, 18.0), "inscribed", False),
            Fixture("rectangle", rectangle_mask(64, 64, c, 16.0, 13.0), "circumscribed", False),
            Fixture("star", star_mask(64, 64, c, 20.0, 13.0), "circumscribed", True),
            Fixture("u_shape", u_shape_mask(64, 64, c, 19.0, 16.0, 10.0, 2.0, 12.0),
                    "circumscribed", True),
            Fixture("bitten_disk", bitten_disk_mask(64, 64, (30.0, 32.0), 17.0, (48.0, 32.0), 9.0),
                    "circumscribed", True),
        ]
    if size == 128:
        c = (64.0, 64.0)
        return [
            Fixture("disk", disk_mask(128, 128, c, 40.0), "inscribed", False),
            Fixture("rectangle", rectangle_mask(128, 128, c, 22.0, 18.0), "circumscribed", False),
            Fixture("star", star_mask(128, 128, c, 30.0, 19.0), "circumscribed", True),
            Fixture("u_shape", u_shape_mask(128, 128, c, 28.0, 24.0, 9.0, 4.0, 12.0),
                    "circumscribed", True),
            Fixture("bitten_disk", bitten_disk_mask(128, 128, (58.0, 64.0), 26.0, (88.0, 64.0), 8.0),
                    "circumscribed", True),
        ]
    raise ValueError(f"no bundled suite at size {size} (use 64 or 128)")


def full_suite() -> list[Fixture]:
    return suite(64) + suite(128)


def random_blob_mask(rng: np.random.Generator, width: int, height: int) -> np.ndarray:
    """Random union of disks, occasionally with a bite; always leaves both
    foreground and background non-empty."""
    mask = np.zeros((height, width), dtype=bool)
    span = min(width, height)
    for _ in range(int(rng.integers(1, 4))):
        cu = rng.uniform(0.3 * width, 0.7 * width)
        cv = rng.uniform(0.3 * height, 0.7 * height)
        r = rng.uniform(0.10 * span, 0.22 * span)
        mask |= disk_mask(width, height, (cu, cv), r)
    if rng.random() < 0.4:
        cu = rng.uniform(0.25 * width, 0.75 * width)
        cv = rng.uniform(0.25 * height, 0.75 * height)
        bite = disk_mask(width, height, (cu, cv), rng.uniform(0.05 * span, 0.12 * span))
        if (mask & ~bite).sum() >= 16:
            mask &= ~bite
    return mask
