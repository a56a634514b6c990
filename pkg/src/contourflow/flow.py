"""External force fields that drive the contour.

Three constructions share one container: the unit-magnitude distance
vector flow (``dvf``), the distance-scaled variant (``lcdvf``) whose
magnitude grows with the local distance value and vanishes exactly on
the boundary, and the plain steepest-descent field of an arbitrary
external-energy map (``energy_gradient_field``).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import as_field, bilinear_sample_many, central_gradient

KIND_DVF = "dvf"
KIND_LCDVF = "lcdvf"
KIND_ENERGY = "energy_gradient"


def clip_vectors(vectors: np.ndarray, clip_norm: float) -> np.ndarray:
    """Scale any vector longer than ``clip_norm`` down to that length.
    ``inf`` disables clipping."""
    if not clip_norm > 0.0:
        raise ValueError("clip_norm must be positive (use inf to disable clipping)")
    if not np.isfinite(clip_norm):
        return vectors
    mag = np.hypot(vectors[..., 0], vectors[..., 1])
    over = mag > clip_norm
    scale = np.ones_like(mag)
    scale[over] = clip_norm / mag[over]
    return vectors * scale[..., None]


@dataclass
class ForceField:
    """Per-pixel force vectors plus the energy map they descend.

    ``potential`` is the external-energy field consistent with the
    vectors (used when tracing total contour energy); it is None only
    for hand-built fields.
    """

    vectors: np.ndarray  # (H, W, 2)
    kind: str
    clip_norm: float
    potential: np.ndarray | None = dc_field(default=None)

    @property
    def shape(self) -> tuple[int, int]:
        return self.vectors.shape[0], self.vectors.shape[1]

    def at(self, points) -> np.ndarray:
        """Bilinear sample of the force at an (N, 2) array of points."""
        return np.stack(
            [
                bilinear_sample_many(self.vectors[..., 0], points),
                bilinear_sample_many(self.vectors[..., 1], points),
            ],
            axis=1,
        )


def dvf(dt, clip_norm: float = 2.0) -> ForceField:
    """Negative gradient of the distance transform: unit-magnitude pull
    toward the nearest boundary."""
    dt = as_field(dt)
    vectors = clip_vectors(-central_gradient(dt), clip_norm)
    return ForceField(vectors, KIND_DVF, clip_norm, potential=dt.copy())


def lcdvf(dt, clip_norm: float = 2.0) -> ForceField:
    """Distance-scaled flow: the distance value multiplies its own negative
    gradient, so the pull grows with distance and is exactly zero on the
    boundary. The matching potential is half the squared distance."""
    dt = as_field(dt)
    vectors = clip_vectors(-dt[..., None] * central_gradient(dt), clip_norm)
    return ForceField(vectors, KIND_LCDVF, clip_norm, potential=0.5 * dt * dt)


def energy_gradient_field(energy, clip_norm: float = 2.0) -> ForceField:
    """Steepest-descent force of an arbitrary external-energy map."""
    energy = as_field(energy)
    vectors = clip_vectors(-central_gradient(energy), clip_norm)
    return ForceField(vectors, KIND_ENERGY, clip_norm, potential=energy.copy())
