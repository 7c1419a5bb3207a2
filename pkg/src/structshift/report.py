"""Ingestion, pairwise orchestration, and report rendering.

Input is a frequency table in wide CSV (first column ``category``, one
column per population) or JSON, in ``counts`` or ``shares`` mode. A
comparison runs the whole pipeline for one (baseline, comparison) pair:
normalize, align, similarity, significance test, difference profile,
distinctive detection, depth classification, moment diagnostics. Reports
render to JSON (canonical machine format, deterministic byte-for-byte),
CSV (per-category rows) or text (two-decimal tables with distinctive cells
marked), and can emit the plot data needed to redraw the difference chart
(points, sigma bands, distinctive flags).
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from . import __version__
from .changes import (
    ChangeDiagnostics,
    DepthClass,
    DifferenceProfile,
    DistinctiveSummary,
    classify_depth,
    detect_distinctive,
    diagnostics,
    difference_profile,
    format_interval,
)
from .similarity import SimilarityResult, similarity_index
from .sokolowski import (
    CriticalValuePolicy,
    MonteCarloConfig,
    TestOutcome,
    run_test,
)
from .structures import AlignedPair, FrequencyTable, align, normalize

SHARES_SUM_TOLERANCE = 1e-6


class TableFormatError(ValueError):
    """Malformed or inconsistent input table."""


@dataclass(frozen=True)
class ComparisonReport:
    """Full analysis of one (baseline, comparison) population pair."""

    pop_x: str
    pop_y: str
    pair: AlignedPair
    similarity: SimilarityResult
    test: TestOutcome
    profile: DifferenceProfile
    depth: tuple[DepthClass, ...]
    distinctive: DistinctiveSummary
    change_diagnostics: ChangeDiagnostics
    version: str
    input_digest: str

    def __post_init__(self):
        w = self.similarity.omega_p
        if abs(w - self.profile.omega_p) > 1e-12 or abs(w - self.test.omega_p_empirical) > 1e-12:
            raise ValueError("inconsistent omega_p across report components")


@dataclass(frozen=True)
class SeriesReport:
    """Baseline compared against every other population, in input order."""

    baseline: str
    reports: tuple[ComparisonReport, ...]


def _decode(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _check_values(values: np.ndarray, populations, categories, mode: str) -> None:
    for j, pop in enumerate(populations):
        col = values[j]
        bad = np.flatnonzero(~np.isfinite(col) | (col < 0))
        if len(bad):
            i = int(bad[0])
            raise TableFormatError(
                f"invalid value {col[i]!r} in column {pop!r}, row {categories[i]!r}"
            )
        if mode == "shares":
            total = float(col.sum())
            if abs(total - 1.0) > SHARES_SUM_TOLERANCE:
                raise TableFormatError(
                    f"shares column {pop!r} sums to {total!r}, expected 1"
                )


def parse_table(source, format: str = "csv_wide", mode: str = "counts") -> FrequencyTable:
    """Parse a frequency table from CSV or JSON text/bytes.

    In shares mode every population column must sum to 1 within 1e-6; the
    column is then normalized by its exact sum so downstream share vectors
    satisfy the strict sum-to-1 invariant. Errors name the offending row or
    column.
    """
    if mode not in ("counts", "shares"):
        raise TableFormatError(f"unknown mode: {mode!r}")
    text = _decode(source)
    if format == "csv_wide":
        categories, populations, values = _parse_csv_wide(text)
    elif format == "json":
        categories, populations, values = _parse_json(text)
    else:
        raise TableFormatError(f"unknown format: {format!r}")
    _check_values(values, populations, categories, mode)
    try:
        return FrequencyTable(tuple(categories), tuple(populations), values)
    except ValueError as exc:
        raise TableFormatError(str(exc)) from exc


def _parse_csv_wide(text: str):
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        raise TableFormatError("empty CSV input")
    header = [c.strip() for c in rows[0]]
    if not header or header[0] != "category":
        raise TableFormatError("first header cell must be 'category'")
    populations = header[1:]
    if not populations:
        raise TableFormatError("no population columns")
    categories: list[str] = []
    data: list[list[float]] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise TableFormatError(f"row {lineno}: expected {len(header)} cells, got {len(row)}")
        label = row[0].strip()
        if label in categories:
            raise TableFormatError(f"row {lineno}: duplicate category {label!r}")
        categories.append(label)
        try:
            data.append([float(cell) for cell in row[1:]])
        except ValueError:
            raise TableFormatError(f"row {lineno}: non-numeric cell") from None
    return categories, populations, np.array(data, dtype=float).T


def _parse_json(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"invalid JSON: {exc}") from exc
    try:
        categories = list(obj["categories"])
        pops = obj["populations"]
        populations = [p["id"] for p in pops]
        values = np.array([[float(v) for v in p["values"]] for p in pops], dtype=float)
    except (KeyError, TypeError) as exc:
        raise TableFormatError(f"malformed JSON table: missing {exc}") from exc
    if values.ndim != 2 or values.shape[1] != len(categories):
        raise TableFormatError("population values not aligned to categories")
    return categories, populations, values


def render_table(table: FrequencyTable) -> str:
    """Wide-CSV rendering of a table; round-trips exactly via parse_table."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["category", *table.populations])
    for i, cat in enumerate(table.categories):
        writer.writerow([cat, *(repr(float(v)) for v in table.counts[:, i])])
    return out.getvalue()


def table_digest(table: FrequencyTable) -> str:
    """SHA-256 over a canonical serialization of the table (provenance)."""
    canon = json.dumps(
        {
            "categories": list(table.categories),
            "populations": list(table.populations),
            "counts": [[float(v) for v in row] for row in table.counts],
        },
        separators=(",", ":"),
    )
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def compare_pair(
    table: FrequencyTable,
    pop_x: str,
    pop_y: str,
    alpha: float = 0.05,
    cv_policy: CriticalValuePolicy = CriticalValuePolicy.EMBEDDED_ONLY,
    mc_config: MonteCarloConfig = MonteCarloConfig(),
) -> ComparisonReport:
    """Run the full pipeline for one pair of populations in ``table``."""
    pair = align(normalize(table, pop_x), normalize(table, pop_y))
    sim = similarity_index(pair)
    test = run_test(pair, alpha=alpha, policy=cv_policy, mc_config=mc_config)
    profile = difference_profile(pair, omega_p=sim.omega_p)
    summary = detect_distinctive(profile)
    if profile.r is not None:
        depth = tuple(classify_depth(float(ri)) for ri in profile.r)
    else:
        depth = tuple(DepthClass.NOT_DISTINCTIVE for _ in profile.categories)
    diag = diagnostics(profile)
    return ComparisonReport(
        pop_x=pop_x,
        pop_y=pop_y,
        pair=pair,
        similarity=sim,
        test=test,
        profile=profile,
        depth=depth,
        distinctive=summary,
        change_diagnostics=diag,
        version=__version__,
        input_digest=table_digest(table),
    )


def compare_series(
    table: FrequencyTable,
    baseline: str,
    alpha: float = 0.05,
    cv_policy: CriticalValuePolicy = CriticalValuePolicy.EMBEDDED_ONLY,
    mc_config: MonteCarloConfig = MonteCarloConfig(),
) -> SeriesReport:
    """Compare ``baseline`` against every other population, in input order."""
    if baseline not in table.populations:
        raise KeyError(f"unknown baseline population: {baseline!r}")
    others = [p for p in table.populations if p != baseline]
    if not others:
        raise ValueError("table needs at least one non-baseline population")
    reports = tuple(
        compare_pair(table, baseline, pop, alpha, cv_policy, mc_config) for pop in others
    )
    return SeriesReport(baseline=baseline, reports=reports)


# -- rendering ---------------------------------------------------------------


def _round2(v: float) -> str:
    # half-away-from-zero, matching hand-rounded tables
    return str(Decimal(repr(v)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def report_to_dict(report: ComparisonReport) -> dict:
    """Plain-dict form of a report with stable key order."""
    prof = report.profile
    crit = report.test.critical
    return {
        "pair": {"baseline": report.pop_x, "comparison": report.pop_y},
        "similarity": {
            "omega_p": prof.omega_p,
            "bray_curtis": report.similarity.bray_curtis,
            "transform_order": report.similarity.transform_order,
            "transformed_similarity": report.similarity.transformed_similarity,
            "per_category_min": list(report.similarity.per_category_min),
        },
        "test": {
            "omega_p_empirical": report.test.omega_p_empirical,
            "alpha": crit.alpha,
            "k": crit.k,
            "critical_value": crit.value,
            "critical_value_source": crit.kind,
            "mc_meta": None
            if crit.mc_meta is None
            else {
                "replicates": crit.mc_meta.replicates,
                "seed": crit.mc_meta.seed,
                "null_model": crit.mc_meta.null_model,
            },
            "decision": report.test.decision.value,
        },
        "differences": {
            "categories": list(prof.categories),
            "x_shares": [float(v) for v in report.pair.x.shares],
            "y_shares": [float(v) for v in report.pair.y.shares],
            "d": [float(v) for v in prof.d],
            "d_min": prof.d_min,
            "d_max": prof.d_max,
            "g_p": prof.g_p,
            "abs_interval": format_interval(prof.abs_interval),
            "r": None if prof.r is None else [float(v) for v in prof.r],
            "rel_interval": None
            if prof.rel_interval is None
            else format_interval(prof.rel_interval),
        },
        "distinctive": {
            "flags": dict(zip(prof.categories, report.distinctive.flags)),
            "categories": list(report.distinctive.distinctive),
            "side": report.distinctive.side,
            "depth": {c: dc.value for c, dc in zip(prof.categories, report.depth)},
        },
        "diagnostics": {
            "mean": report.change_diagnostics.mean,
            "S": report.change_diagnostics.S,
            "M3": report.change_diagnostics.M3,
            "A": report.change_diagnostics.A,
            "dispersion": {
                c: dc.value
                for c, dc in zip(prof.categories, report.change_diagnostics.dispersion_class)
            },
        },
        "version": report.version,
        "input_digest": report.input_digest,
    }


def _report_rows(report: ComparisonReport):
    prof = report.profile
    for i, cat in enumerate(prof.categories):
        yield {
            "category": cat,
            "share_x": float(report.pair.x.shares[i]),
            "share_y": float(report.pair.y.shares[i]),
            "d": float(prof.d[i]),
            "r": "" if prof.r is None else float(prof.r[i]),
            "depth": report.depth[i].value,
            "dispersion": report.change_diagnostics.dispersion_class[i].value,
            "distinctive": report.distinctive.flags[i],
        }


def render_report(report: ComparisonReport, format: str = "json") -> str:
    """Render one report as json (canonical), csv (per-category rows) or
    text (two-decimal table with distinctive cells marked '*')."""
    if format == "json":
        return json.dumps(report_to_dict(report), indent=2, allow_nan=False) + "\n"
    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            ["category", "share_x", "share_y", "d", "r", "depth", "dispersion", "distinctive"]
        )
        for row in _report_rows(report):
            writer.writerow(
                [
                    row["category"],
                    repr(row["share_x"]),
                    repr(row["share_y"]),
                    repr(row["d"]),
                    "" if row["r"] == "" else repr(row["r"]),
                    row["depth"],
                    row["dispersion"],
                    "distinctive" if row["distinctive"] else "",
                ]
            )
        return out.getvalue()
    if format == "text":
        return _render_text(report)
    raise ValueError(f"unknown report format: {format!r}")


def _render_text(report: ComparisonReport) -> str:
    prof = report.profile
    lines = []
    lines.append(f"Comparison {report.pop_x} vs {report.pop_y}")
    lines.append(
        f"omega_p = {_round2(prof.omega_p)}   "
        f"decision = {report.test.decision.value} "
        f"(z[{report.test.critical.alpha}, {report.test.critical.k}] = {report.test.critical.value})"
    )
    header = f"{'category':<10}{'x':>8}{'y':>8}{'d':>8}{'r':>8}  depth"
    lines.append(header)
    for i, cat in enumerate(prof.categories):
        x = float(report.pair.x.shares[i])
        y = float(report.pair.y.shares[i])
        r_txt = "" if prof.r is None else _round2(float(prof.r[i]))
        mark = " *" if report.distinctive.flags[i] else ""
        lines.append(
            f"{cat:<10}{_round2(x):>8}{_round2(y):>8}"
            f"{_round2(float(prof.d[i])):>8}{r_txt:>8}  {report.depth[i].value}{mark}"
        )
    lines.append(
        f"d_min = {_round2(prof.d_min)}, d_max = {_round2(prof.d_max)}, "
        f"g_p = {_round2(prof.g_p)}"
    )
    lines.append(f"distinctive area: {format_interval(prof.abs_interval)}")
    diag = report.change_diagnostics
    a_txt = "n/a" if diag.A is None else _round2(diag.A)
    lines.append(f"S = {_round2(diag.S)}, M3 = {diag.M3:.6g}, A = {a_txt}")
    return "\n".join(lines) + "\n"


def render_series(series: SeriesReport, format: str = "json") -> str:
    """Render a whole series; json wraps reports in one object, csv and
    text concatenate per-pair sections."""
    if format == "json":
        payload = {
            "baseline": series.baseline,
            "reports": [report_to_dict(r) for r in series.reports],
        }
        return json.dumps(payload, indent=2, allow_nan=False) + "\n"
    return "\n".join(render_report(r, format) for r in series.reports)


def emit_plot_data(report: ComparisonReport) -> str:
    """JSON payload sufficient to redraw the difference chart: per-category
    d_i points, the +-S and +-3S bands, and distinctive flags."""
    prof = report.profile
    diag = report.change_diagnostics
    payload = {
        "pair": {"baseline": report.pop_x, "comparison": report.pop_y},
        "points": [
            {
                "category": cat,
                "d": float(prof.d[i]),
                "distinctive": report.distinctive.flags[i],
                "dispersion": diag.dispersion_class[i].value,
            }
            for i, cat in enumerate(prof.categories)
        ],
        "bands": {
            "typical": [-diag.S, diag.S],
            "outlier": [-3.0 * diag.S, 3.0 * diag.S],
        },
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"
