"""Domain types for frequency tables and structure vectors.

A *structure vector* holds the relative share of each category in a
population (all shares in [0, 1], summing to 1). Frequency tables hold raw
nonnegative counts for one or more populations over a shared category list;
``normalize`` turns one population's counts into a structure vector.

All types are immutable after construction and all operations are pure, so
values can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Tolerance on the share-sum invariant of a structure vector.
NORM_TOLERANCE = 1e-9


def _as_readonly(values, dtype=float) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype).copy()
    arr.setflags(write=False)
    return arr


def _check_unique_labels(labels: tuple[str, ...], what: str) -> None:
    if len(set(labels)) != len(labels):
        seen: set[str] = set()
        dup = next(lab for lab in labels if lab in seen or seen.add(lab))
        raise ValueError(f"duplicate {what} label: {dup!r}")
    if any(not lab for lab in labels):
        raise ValueError(f"empty {what} label")


@dataclass(frozen=True)
class FrequencyTable:
    """Nonnegative counts for one or more populations over shared categories.

    ``counts`` has shape ``(n_populations, n_categories)``. Every count must
    be nonnegative and every population total must be strictly positive.
    Counts are reals, not just integers: pre-aggregated shares are legal
    input since only ratios are ever used.
    """

    categories: tuple[str, ...]
    populations: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self):
        _check_unique_labels(self.categories, "category")
        _check_unique_labels(self.populations, "population")
        counts = _as_readonly(self.counts)
        if counts.shape != (len(self.populations), len(self.categories)):
            raise ValueError(
                f"counts shape {counts.shape} does not match "
                f"{len(self.populations)} populations x {len(self.categories)} categories"
            )
        if not np.all(np.isfinite(counts)):
            raise ValueError("counts must be finite")
        if np.any(counts < 0):
            pop, cat = map(int, np.argwhere(counts < 0)[0])
            raise ValueError(
                f"negative count for population {self.populations[pop]!r}, "
                f"category {self.categories[cat]!r}"
            )
        totals = counts.sum(axis=1)
        if np.any(totals <= 0):
            pop = int(np.argmin(totals))
            raise ValueError(f"population {self.populations[pop]!r} has nonpositive total")
        object.__setattr__(self, "counts", counts)

    @property
    def totals(self) -> np.ndarray:
        """Per-population sum of counts."""
        return self.counts.sum(axis=1)

    def population_index(self, population: str) -> int:
        try:
            return self.populations.index(population)
        except ValueError:
            raise KeyError(f"unknown population: {population!r}") from None


@dataclass(frozen=True)
class StructureVector:
    """Per-category shares of one population; shares sum to 1.

    Construction only checks shape; use :func:`validate` for the full
    invariant check (shares in [0, 1], sum within ``NORM_TOLERANCE`` of 1).
    """

    categories: tuple[str, ...]
    shares: np.ndarray

    def __post_init__(self):
        shares = _as_readonly(self.shares)
        if shares.ndim != 1 or shares.shape[0] != len(self.categories):
            raise ValueError("shares must be one value per category")
        object.__setattr__(self, "shares", shares)

    @property
    def k(self) -> int:
        """Number of categories."""
        return len(self.categories)


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of a structure-vector validation; ``violation`` names the
    first broken invariant, or is None when the vector is valid."""

    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class AlignedPair:
    """Two structure vectors over an identical, identically ordered
    category list, ready for component-wise comparison."""

    x: StructureVector
    y: StructureVector

    def __post_init__(self):
        if self.x.categories != self.y.categories:
            raise ValueError("aligned pair requires identical category lists")

    @property
    def categories(self) -> tuple[str, ...]:
        return self.x.categories

    @property
    def k(self) -> int:
        return self.x.k


def normalize(table: FrequencyTable, population: str) -> StructureVector:
    """Structure vector of one population: share_i = count_i / total.

    Raises KeyError for an unknown population. Category order is preserved.
    """
    idx = table.population_index(population)
    row = table.counts[idx]
    vec = StructureVector(table.categories, row / row.sum())
    verdict = validate(vec)
    if not verdict:
        raise ValueError(f"normalization produced invalid vector: {verdict.violation}")
    return vec


def validate(v: StructureVector) -> ValidationResult:
    """Check all structure-vector invariants; never raises.

    Reports the first violated invariant: category count >= 1, every share
    in [0, 1], shares summing to 1 within ``NORM_TOLERANCE``.
    """
    if v.k < 1:
        return ValidationResult(False, "category count must be >= 1")
    if not np.all(np.isfinite(v.shares)):
        return ValidationResult(False, "shares must be finite")
    if np.any(v.shares < 0) or np.any(v.shares > 1):
        i = int(np.flatnonzero((v.shares < 0) | (v.shares > 1))[0])
        return ValidationResult(
            False, f"share out of [0, 1] for category {v.categories[i]!r}"
        )
    total = float(v.shares.sum())
    if abs(total - 1.0) > NORM_TOLERANCE:
        return ValidationResult(False, f"shares sum to {total!r}, not 1")
    return ValidationResult(True)


def align(x: StructureVector, y: StructureVector) -> AlignedPair:
    """Align two structure vectors onto the union of their categories.

    A category absent from one side gets share 0 there, so both sides keep
    their original share sums. Union order is x's order followed by y's
    novel labels, which keeps output deterministic. Idempotent: aligning an
    already aligned pair changes nothing.
    """
    if x.categories == y.categories:
        return AlignedPair(x, y)
    union = list(x.categories) + [c for c in y.categories if c not in set(x.categories)]
    x_pos = {c: i for i, c in enumerate(x.categories)}
    y_pos = {c: i for i, c in enumerate(y.categories)}
    xs = np.zeros(len(union))
    ys = np.zeros(len(union))
    for i, c in enumerate(union):
        if c in x_pos:
            xs[i] = x.shares[x_pos[c]]
        if c in y_pos:
            ys[i] = y.shares[y_pos[c]]
    union_t = tuple(union)
    return AlignedPair(StructureVector(union_t, xs), StructureVector(union_t, ys))
