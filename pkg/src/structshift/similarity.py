"""Bray-Curtis distance and the structure similarity index.

For share vectors on the simplex the Bray-Curtis distance is
``1 - sum_i min(x_i, y_i)`` and the similarity index is its complement,
``sum_i min(x_i, y_i)``: 1 for identical structures, 0 for disjoint
supports. A small transform family ``(1 - d)^kappa`` with
``kappa in {0.5, 1, 2}`` maps distance back to similarity; kappa = 1 gives
the index itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .structures import AlignedPair

#: Allowed exponents of the distance-to-similarity transform.
ALLOWED_EXPONENTS = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class SimilarityResult:
    """Similarity of one aligned pair.

    Attributes:
        omega_p: the similarity index, sum of per-category minima
        bray_curtis: 1 - omega_p
        transform_order: exponent used for ``transformed_similarity``
        transformed_similarity: (1 - bray_curtis) ** transform_order
        per_category_min: min(x_i, y_i) per category
    """

    omega_p: float
    bray_curtis: float
    transform_order: float
    transformed_similarity: float
    per_category_min: tuple[float, ...]


def bray_curtis(pair: AlignedPair) -> float:
    """Bray-Curtis distance: 1 minus the sum of per-category minima."""
    return 1.0 - float(np.minimum(pair.x.shares, pair.y.shares).sum())


def transform_distance(distance: float, exponent: float = 1.0) -> float:
    """Map a distance in [0, 1] to a similarity via (1 - distance) ** exponent.

    Monotone nonincreasing in distance; maps 0 to 1 and 1 to 0. Only the
    exponents in ``ALLOWED_EXPONENTS`` are accepted.
    """
    if exponent not in ALLOWED_EXPONENTS:
        raise ValueError(f"exponent must be one of {ALLOWED_EXPONENTS}, got {exponent!r}")
    if not 0.0 <= distance <= 1.0:
        raise ValueError(f"distance must lie in [0, 1], got {distance!r}")
    return (1.0 - distance) ** exponent


def similarity_index(pair: AlignedPair) -> SimilarityResult:
    """Similarity index of an aligned pair (transform exponent 1)."""
    mins = np.minimum(pair.x.shares, pair.y.shares)
    omega_p = float(mins.sum())
    d = 1.0 - omega_p
    return SimilarityResult(
        omega_p=omega_p,
        bray_curtis=d,
        transform_order=1.0,
        transformed_similarity=1.0 - d,
        per_category_min=tuple(float(m) for m in mins),
    )
