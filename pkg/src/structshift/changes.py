"""Distinctive-change detection and moment diagnostics.

Given an aligned pair (x = baseline, y = comparison), the per-category
differences d_i = y_i - x_i always sum to zero, so balanced increases and
decreases signal random fluctuation while a single large one-sided
difference signals a systematic shift. A difference counts as *distinctive*
when its magnitude strictly exceeds g_p = min(|d_min|, |d_max|);
equivalently when the relative difference r_i = d_i / g_p satisfies
|r_i| > 1. The magnitude of r_i grades the depth of a distinctive change,
and the moments of d (standard deviation, third central moment, asymmetry)
separate distinctive shifts from mere outliers.

Sign convention: the differences are comparison-minus-baseline, i.e. the
change *observed in* the second population relative to the first.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .similarity import similarity_index
from .structures import AlignedPair

#: Tolerance when cross-checking a caller-supplied omega_p.
OMEGA_TOLERANCE = 1e-9

#: Slack at the |r| = 1 boundary, absorbing rounding noise from the d / g_p
#: division so that balanced changes (|d_min| = |d_max| up to float error)
#: are never flagged as distinctive.
BOUNDARY_TOLERANCE = 1e-9


class DepthClass(str, Enum):
    """Depth of a change, graded on |r_i|.

    Half-open bands: <= 1 not distinctive, (1, 1.10) insignificant,
    [1.10, 1.25) barely, [1.25, 1.40) moderately, [1.40, 1.60) highly,
    >= 1.60 huge. Together the bands partition [0, inf).
    """

    NOT_DISTINCTIVE = "not_distinctive"
    INSIGNIFICANT = "insignificant"
    BARELY = "barely"
    MODERATELY = "moderately"
    HIGHLY = "highly"
    HUGE = "huge"


class DispersionClass(str, Enum):
    """Position of |d_i| relative to the sigma bands of d."""

    TYPICAL = "typical"    # |d_i| < S
    ATYPICAL = "atypical"  # S <= |d_i| <= 3S
    OUTLIER = "outlier"    # |d_i| > 3S


@dataclass(frozen=True)
class DifferenceProfile:
    """Per-category differences of an aligned pair and derived quantities.

    ``abs_interval`` is the area of distinctive absolute changes,
    [omega_p - 1, -g_p) u (g_p, 1 - omega_p], stored as two (lo, hi) pairs;
    ``rel_interval`` is its r-scaled counterpart. The relative machinery
    (``r``, ``rel_interval``) is None when g_p = 0, i.e. when the
    structures are identical: there is no change to grade.
    """

    categories: tuple[str, ...]
    d: np.ndarray
    d_min: float
    d_max: float
    g_p: float
    omega_p: float
    abs_interval: tuple[tuple[float, float], tuple[float, float]]
    r: np.ndarray | None
    rel_interval: tuple[tuple[float, float], tuple[float, float]] | None

    @property
    def k(self) -> int:
        return len(self.categories)


@dataclass(frozen=True)
class DistinctiveSummary:
    """Which categories changed distinctively, and on which sign side.

    ``side`` is "negative" when |d_min| > |d_max|, "positive" when
    |d_min| < |d_max|, and "none" at equality (balanced changes are never
    distinctive).
    """

    flags: tuple[bool, ...]
    distinctive: tuple[str, ...]
    side: str


@dataclass(frozen=True)
class ChangeDiagnostics:
    """Moment diagnostics of the difference vector d.

    The mean of d is identically zero (both structures sum to 1). S is the
    population standard deviation sqrt(mean(d^2)), M3 the third central
    moment mean(d^3), and A = M3 / S^3 the asymmetry coefficient (None when
    S = 0). ``dispersion_class`` places each |d_i| in the sigma bands.
    """

    mean: float
    S: float
    M3: float
    A: float | None
    dispersion_class: tuple[DispersionClass, ...]


def difference_profile(pair: AlignedPair, omega_p: float | None = None) -> DifferenceProfile:
    """Build the difference profile of an aligned pair.

    If ``omega_p`` is supplied it is cross-checked against the recomputed
    value within ``OMEGA_TOLERANCE``; a mismatch raises ValueError.
    """
    computed = similarity_index(pair).omega_p
    if omega_p is not None and abs(omega_p - computed) > OMEGA_TOLERANCE:
        raise ValueError(
            f"supplied omega_p {omega_p!r} disagrees with recomputed {computed!r}"
        )
    omega_p = computed
    d = pair.y.shares - pair.x.shares
    d_min = float(d.min())
    d_max = float(d.max())
    g_p = min(abs(d_min), abs(d_max))
    abs_interval = ((omega_p - 1.0, -g_p), (g_p, 1.0 - omega_p))
    if g_p > 0.0:
        r = d / g_p
        r.setflags(write=False)
        rel_interval = (((omega_p - 1.0) / g_p, -1.0), (1.0, (1.0 - omega_p) / g_p))
    else:
        r = None
        rel_interval = None
    d = d.copy()
    d.setflags(write=False)
    return DifferenceProfile(
        categories=pair.categories,
        d=d,
        d_min=d_min,
        d_max=d_max,
        g_p=g_p,
        omega_p=omega_p,
        abs_interval=abs_interval,
        r=r,
        rel_interval=rel_interval,
    )


def relative_differences(profile: DifferenceProfile) -> np.ndarray | None:
    """Relative differences r_i = d_i / g_p, or None when g_p = 0
    (identical structures: a no-change signal, not a numeric result)."""
    return profile.r


def classify_depth(r_i: float) -> DepthClass:
    """Depth band of one relative difference; see :class:`DepthClass`."""
    a = abs(r_i)
    if a <= 1.0 + BOUNDARY_TOLERANCE:
        return DepthClass.NOT_DISTINCTIVE
    if a < 1.10:
        return DepthClass.INSIGNIFICANT
    if a < 1.25:
        return DepthClass.BARELY
    if a < 1.40:
        return DepthClass.MODERATELY
    if a < 1.60:
        return DepthClass.HIGHLY
    return DepthClass.HUGE


def detect_distinctive(profile: DifferenceProfile) -> DistinctiveSummary:
    """Flag categories with |d_i| strictly greater than g_p.

    All distinctive categories lie on one sign side: the side of the larger
    of |d_min|, |d_max|. At |d_min| = |d_max| (including g_p = 0) the
    distinctive set is empty. Flags are derived from r so that a category
    is flagged exactly when its depth class is not ``NOT_DISTINCTIVE``.
    """
    if profile.r is None:
        flags = tuple(False for _ in profile.d)
    else:
        flags = tuple(bool(abs(ri) > 1.0 + BOUNDARY_TOLERANCE) for ri in profile.r)
    names = tuple(c for c, f in zip(profile.categories, flags) if f)
    spread = abs(profile.d_min) - abs(profile.d_max)
    if abs(spread) <= BOUNDARY_TOLERANCE:
        side = "none"
    elif spread > 0:
        side = "negative"
    else:
        side = "positive"
    return DistinctiveSummary(flags=flags, distinctive=names, side=side)


def diagnostics(profile: DifferenceProfile) -> ChangeDiagnostics:
    """Moment diagnostics and sigma-band classification of d.

    Boundary cases |d_i| = S and |d_i| = 3S classify as atypical (the
    typical and non-outlier ranges are open intervals).
    """
    d = profile.d
    mean = float(d.mean())
    s = float(np.sqrt(np.mean(d**2)))
    m3 = float(np.mean(d**3))
    a = m3 / s**3 if s > 0.0 else None
    classes = []
    for di in np.abs(d):
        if di < s:
            classes.append(DispersionClass.TYPICAL)
        elif di > 3.0 * s:
            classes.append(DispersionClass.OUTLIER)
        else:
            classes.append(DispersionClass.ATYPICAL)
    return ChangeDiagnostics(
        mean=mean, S=s, M3=m3, A=a, dispersion_class=tuple(classes)
    )


def format_interval(interval: tuple[tuple[float, float], tuple[float, float]]) -> str:
    """Render a distinctive-change area as e.g. '[-0.1, -0.04) u (0.04, 0.1]'."""

    def num(v: float) -> str:
        return f"{round(v, 12):g}"

    (lo1, hi1), (lo2, hi2) = interval
    return f"[{num(lo1)}, {num(hi1)}) ∪ ({num(lo2)}, {num(hi2)}]"
