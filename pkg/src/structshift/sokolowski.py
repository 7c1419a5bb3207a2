"""Sokolowski structure-similarity test.

The test statistic is the similarity index omega_p of the two structures.
The null hypothesis is that the observed similarity is random (the
structures are dissimilar); it is rejected, i.e. the structures are
declared similar, when omega_p strictly exceeds the critical value
z_{alpha,k}. Note the inverted roles relative to most tests: "fail to
reject" means *no evidence of similarity*, not "the structures are equal".

Critical values come from a small embedded table (the published anchor is
z_{0.05,5} = 0.8008) or, for (alpha, k) pairs without a tabulated entry,
from a deterministic Monte Carlo estimate under a flat-simplex null: each
replicate draws two independent compositions uniformly on the k-simplex
and the critical value is the empirical (1 - alpha) quantile of omega_p.
The Monte Carlo estimate is *not* guaranteed to match the published table
(Sokolowski's null model is not documented); where both exist the embedded
value is authoritative.

Replicates are generated in fixed-size chunks whose seeds derive from the
chunk index, so results are bit-identical regardless of how many worker
threads execute the chunks.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

import numpy as np

from .similarity import similarity_index
from .structures import AlignedPair

#: Environment variable naming an external critical-value table file.
CV_TABLE_ENV = "STRUCTSHIFT_CV_TABLE"

#: Identifier of the Monte Carlo null model, recorded in provenance.
NULL_MODEL = "uniform-simplex-iid"

_CHUNK_SIZE = 8192


class CriticalValuePolicy(str, Enum):
    EMBEDDED_ONLY = "embedded"
    EMBEDDED_THEN_MC = "embedded-then-mc"
    MC_ONLY = "mc"


class TestDecision(str, Enum):
    SIMILAR = "similar"          # H0 (dissimilar) rejected
    NOT_SIMILAR = "not_similar"  # no basis to reject H0


class NoTabulatedValueError(LookupError):
    """No embedded table entry exists for the requested (alpha, k)."""


@dataclass(frozen=True)
class MonteCarloConfig:
    """Parameters of the Monte Carlo critical-value estimator."""

    replicates: int = 1_000_000
    seed: int = 0
    workers: int = 1


@dataclass(frozen=True)
class MonteCarloMeta:
    """Provenance of a Monte Carlo critical value."""

    replicates: int
    seed: int
    null_model: str = NULL_MODEL


@dataclass(frozen=True)
class CriticalValueSource:
    """A critical value z_{alpha,k} together with where it came from."""

    kind: str  # "embedded" | "monte_carlo"
    alpha: float
    k: int
    value: float
    mc_meta: MonteCarloMeta | None = None

    def __post_init__(self):
        if not 0.0 < self.value < 1.0:
            raise ValueError(f"critical value must lie in (0, 1), got {self.value!r}")


@dataclass(frozen=True)
class TestOutcome:
    """Result of the similarity test for one aligned pair."""

    omega_p_empirical: float
    critical: CriticalValueSource
    decision: TestDecision


def _parse_table(text: str, origin: str) -> dict[tuple[float, int], float]:
    table: dict[tuple[float, int], float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"{origin}:{lineno}: expected 'alpha k z', got {line!r}")
        alpha, k, z = float(parts[0]), int(parts[1]), float(parts[2])
        table[(alpha, k)] = z
    return table


def load_critical_value_table(path: str | Path | None = None) -> dict[tuple[float, int], float]:
    """Load the critical-value table.

    Resolution order: explicit ``path``, then the file named by the
    ``STRUCTSHIFT_CV_TABLE`` environment variable, then the embedded
    resource. An external table replaces the embedded one entirely.
    """
    if path is None:
        path = os.environ.get(CV_TABLE_ENV) or None
    if path is not None:
        p = Path(path)
        return _parse_table(p.read_text(encoding="utf-8"), str(p))
    text = resources.files("structshift.data").joinpath("critical_values.txt").read_text("utf-8")
    return _parse_table(text, "embedded critical_values.txt")


def _lookup(table: dict[tuple[float, int], float], alpha: float, k: int) -> float | None:
    for (a, kk), z in table.items():
        if kk == k and abs(a - alpha) <= 1e-9:
            return z
    return None


def _simulate_null_omega(k: int, config: MonteCarloConfig) -> np.ndarray:
    """omega_p sample under the flat-simplex null, in replicate order.

    Chunk c is generated from SeedSequence(seed, spawn_key=(c,)) and written
    to its fixed slice, so the sample is independent of worker scheduling.
    """
    n = config.replicates
    out = np.empty(n)
    starts = range(0, n, _CHUNK_SIZE)

    def fill(chunk_index: int, start: int) -> None:
        m = min(_CHUNK_SIZE, n - start)
        rng = np.random.default_rng(
            np.random.SeedSequence(config.seed, spawn_key=(chunk_index,))
        )
        draws = rng.standard_exponential((2, m, k))
        comps = draws / draws.sum(axis=2, keepdims=True)
        out[start : start + m] = np.minimum(comps[0], comps[1]).sum(axis=1)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            list(pool.map(fill, range(len(starts)), starts))
    else:
        for ci, start in enumerate(starts):
            fill(ci, start)
    return out


def _nearest_rank(sorted_values: np.ndarray, q: float) -> float:
    n = len(sorted_values)
    rank = min(max(math.ceil(q * n), 1), n)
    return float(sorted_values[rank - 1])


def monte_carlo_critical_value(
    alpha: float, k: int, config: MonteCarloConfig = MonteCarloConfig()
) -> CriticalValueSource:
    """Estimate z_{alpha,k} as the (1 - alpha) nearest-rank quantile of the
    null omega_p sample. Deterministic given (alpha, k, replicates, seed)."""
    _check_alpha_k(alpha, k)
    sample = np.sort(_simulate_null_omega(k, config))
    z = _nearest_rank(sample, 1.0 - alpha)
    return CriticalValueSource(
        kind="monte_carlo",
        alpha=alpha,
        k=k,
        value=z,
        mc_meta=MonteCarloMeta(replicates=config.replicates, seed=config.seed),
    )


def _check_alpha_k(alpha: float, k: int) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k} (omega_p is identically 1 for k = 1)")


def critical_value(
    alpha: float,
    k: int,
    policy: CriticalValuePolicy = CriticalValuePolicy.EMBEDDED_ONLY,
    mc_config: MonteCarloConfig = MonteCarloConfig(),
    table_path: str | Path | None = None,
) -> CriticalValueSource:
    """Resolve z_{alpha,k} according to ``policy``.

    ``embedded`` consults only the table and raises
    :class:`NoTabulatedValueError` on a miss (never interpolates);
    ``embedded-then-mc`` falls back to Monte Carlo; ``mc`` always simulates.
    """
    _check_alpha_k(alpha, k)
    policy = CriticalValuePolicy(policy)
    if policy is not CriticalValuePolicy.MC_ONLY:
        z = _lookup(load_critical_value_table(table_path), alpha, k)
        if z is not None:
            return CriticalValueSource(kind="embedded", alpha=alpha, k=k, value=z)
        if policy is CriticalValuePolicy.EMBEDDED_ONLY:
            raise NoTabulatedValueError(
                f"no tabulated critical value for alpha={alpha}, k={k}"
            )
    return monte_carlo_critical_value(alpha, k, mc_config)


def run_test(
    pair: AlignedPair,
    alpha: float = 0.05,
    policy: CriticalValuePolicy = CriticalValuePolicy.EMBEDDED_ONLY,
    mc_config: MonteCarloConfig = MonteCarloConfig(),
    table_path: str | Path | None = None,
) -> TestOutcome:
    """Run the similarity test on an aligned pair.

    The critical region is the open interval (z_{alpha,k}, inf): the
    structures are declared similar iff omega_p strictly exceeds z.
    """
    omega_p = similarity_index(pair).omega_p
    critical = critical_value(alpha, pair.k, policy, mc_config, table_path)
    decision = (
        TestDecision.SIMILAR if omega_p > critical.value else TestDecision.NOT_SIMILAR
    )
    return TestOutcome(omega_p_empirical=omega_p, critical=critical, decision=decision)
