"""Aggregate result files into fits, plot data and an acceptance table.

Inputs are CSV files of the known schemas and JSON result documents written
by the CLI. A JSON document that carries schema rows counts as the CSV it
replaces. Each kind of input becomes one section of the summary:

``gamma``         classical locations, checked for strict decrease;
``rigidity``      median ``max_r`` per size and its growth exponent;
``edge_scan``     fluctuation exponents of ``lambda_2`` and ``lambda_N``;
``stieltjes``     quantile of ``|m - m_d|`` over the envelope, per ``z`` and size;
``edge_window``   fraction of samples with an eigenvalue-free edge window;
``moments``       self-consistent moment ratio and its slope in ``N``;
``resample``      simplicity and reversal of switches, exchangeability tests;
``woodbury``      monotone share and median decay of the truncated series;
``greens``        per-point residuals and Ward deviation, informational only.

``resample`` documents that carry Woodbury tables feed the ``woodbury``
section as well.

Plot data are two-column whitespace-separated ``.dat`` files plus a gnuplot
script rendering every one of them to PNG.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .acceptance import AcceptanceBands, AcceptanceReport, evaluate
from .config import DEFAULT_QUANTILE, MIN_FIT_SIZES
from .experiments import (
    ExperimentError,
    edge_fits_from_rows,
    fit_loglog,
    stieltjes_envelope,
)
from .models import SpectralPoint
from .records import (
    SCHEMAS,
    PathLike,
    RecordSchemaError,
    atomic_write_text,
    detect_schema,
    read_csv,
    read_json,
    to_jsonable,
    write_json,
)

logger = logging.getLogger(__name__)

#: JSON result kinds the report understands.
JSON_KINDS = ("edge_window", "moments", "resample", "woodbury", "greens")


@dataclass(frozen=True)
class PlotSeries:
    """One two-column data file.

    Attributes:
        name: File stem.
        title: Plot title.
        xlabel: Label of the first column.
        ylabel: Label of the second column.
        points: ``(x, y)`` pairs.
        loglog: Whether both axes are logarithmic.
    """

    name: str
    title: str
    xlabel: str
    ylabel: str
    points: Tuple[Tuple[float, float], ...]
    loglog: bool = False


@dataclass
class Report:
    """Aggregated summary of a set of result files."""

    inputs: List[str] = field(default_factory=list)
    sections: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    series: List[PlotSeries] = field(default_factory=list)
    acceptance: AcceptanceReport = field(default_factory=AcceptanceReport)
    files: List[str] = field(default_factory=list)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "inputs": list(self.inputs),
            "sections": to_jsonable(self.sections),
            "acceptance": self.acceptance.as_dicts(),
            "files": list(self.files),
        }


# ---------------------------------------------------------------- sections


Rows = Sequence[Mapping[str, str]]
Section = Tuple[Dict[str, Any], List[PlotSeries]]


def _fit_or_none(
    sizes: Sequence[int], values: Sequence[float]
) -> Optional[Dict[str, float]]:
    if len(sizes) < MIN_FIT_SIZES:
        return None
    try:
        slope, stderr, intercept = fit_loglog(sizes, values)
    except ExperimentError as exc:
        logger.warning("Skipping fit: %s", exc)
        return None
    return {"loglog_slope": slope, "slope_stderr": stderr, "intercept": intercept}


def summarize_gamma(rows: Rows) -> Section:
    points = tuple((float(r["i"]), float(r["gamma_i"])) for r in rows)
    values = [p[1] for p in points]
    section = {
        "count": len(points),
        "strictly_decreasing": all(b < a for a, b in zip(values, values[1:])),
    }
    series = PlotSeries("gamma", "Classical locations", "i", "gamma_i", points)
    return section, [series]


def summarize_rigidity(rows: Rows) -> Section:
    worst: Dict[Tuple[int, str], float] = {}
    for r in rows:
        key = (int(r["n"]), r["seed"])
        worst[key] = max(worst.get(key, 0.0), float(r["r_i"]))
    sizes = sorted({n for n, _ in worst})
    medians = [
        float(np.median([v for (n, _), v in worst.items() if n == size]))
        for size in sizes
    ]
    positive = all(m > 0 for m in medians)
    section: Dict[str, Any] = {
        "sizes": sizes,
        "samples": [sum(1 for n, _ in worst if n == size) for size in sizes],
        "median_max_r": medians,
        "max_r": max(worst.values(), default=0.0),
        "fit": _fit_or_none(sizes, medians) if positive else None,
    }
    series = PlotSeries(
        "rigidity_max_r",
        "Median max_i r_i",
        "N",
        "median max r",
        tuple(zip(map(float, sizes), medians)),
        loglog=positive,
    )
    return section, [series]


def summarize_edge(rows: Rows) -> Section:
    sizes = sorted({int(r["n"]) for r in rows})
    try:
        scan = edge_fits_from_rows(rows)
    except ExperimentError as exc:
        logger.warning("No edge fit: %s", exc)
        return {"sizes": sizes, "lambda2": None, "lambdaN": None}, []
    section = scan.as_dict()
    section["sizes"] = sizes
    series = [
        PlotSeries(
            "edge_lambda2_std",
            "std(lambda_2 - 2)",
            "N",
            "std",
            tuple(zip(map(float, sizes), map(float, scan.lambda2.stds))),
            loglog=True,
        ),
        PlotSeries(
            "edge_lambdaN_std",
            "std(|lambda_N| - 2)",
            "N",
            "std",
            tuple(zip(map(float, sizes), map(float, scan.lambda_n.stds))),
            loglog=True,
        ),
    ]
    return section, series


def summarize_stieltjes(rows: Rows, level: float = DEFAULT_QUANTILE) -> Section:
    grouped: Dict[Tuple[float, float], Dict[int, List[float]]] = {}
    for r in rows:
        key = (float(r["E"]), float(r["eta"]))
        by_size = grouped.setdefault(key, {})
        by_size.setdefault(int(r["n"]), []).append(float(r["abs_m_minus_md"]))
    points = []
    series = []
    for (E, eta), by_size in sorted(grouped.items()):
        sizes = sorted(by_size)
        point = SpectralPoint(E=E, eta=eta)
        normalized = [
            float(np.quantile(by_size[n], level)) / stieltjes_envelope(point, n)
            for n in sizes
        ]
        spread = None
        if len(sizes) >= MIN_FIT_SIZES and min(normalized) > 0:
            spread = max(normalized) / min(normalized)
        points.append(
            {
                "E": E,
                "eta": eta,
                "sizes": sizes,
                "normalized_quantile": normalized,
                "spread": spread,
            }
        )
        series.append(
            PlotSeries(
                f"stieltjes_E{E:g}_eta{eta:g}",
                f"quantile / envelope at z = {point}",
                "N",
                "normalized quantile",
                tuple(zip(map(float, sizes), normalized)),
            )
        )
    return {"level": level, "points": points}, series


def summarize_edge_window(documents: Sequence[Mapping[str, Any]]) -> Dict[str, Any]:
    runs = []
    for doc in documents:
        for run in doc["result"]["runs"]:
            runs.append(
                {
                    "n": run["n"],
                    "samples": run["samples"],
                    "hits": run["hits"],
                    "lower": run["lower"],
                    "upper": run["upper"],
                    "clear_fraction": 1.0 - run["hits"] / run["samples"],
                }
            )
    return {"runs": sorted(runs, key=lambda r: r["n"])}


def summarize_moments(documents: Sequence[Mapping[str, Any]]) -> Section:
    entries = (entry for doc in documents for entry in doc["result"]["reports"])
    reports = sorted(entries, key=lambda r: r["n"])
    sizes = [int(r["n"]) for r in reports]
    ratios = [float(r["ratio"]) for r in reports]
    distinct = len(set(sizes)) == len(sizes)
    section = {
        "sizes": sizes,
        "ratios": ratios,
        "fit": _fit_or_none(sizes, ratios) if distinct else None,
    }
    series = PlotSeries(
        "moments_ratio",
        "E|Q - Y(Q)|^{2p} / comparator",
        "N",
        "ratio",
        tuple(zip(map(float, sizes), ratios)),
        loglog=all(r > 0 for r in ratios),
    )
    return section, [series]


def summarize_resample(documents: Sequence[Mapping[str, Any]]) -> Dict[str, Any]:
    runs = []
    tests = []
    for doc in documents:
        result = doc["result"]
        runs.append(
            {
                key: result[key]
                for key in (
                    "n",
                    "d",
                    "ell",
                    "big_r",
                    "trials",
                    "switched_trials",
                    "simple_outputs",
                    "admissibility_rate",
                    "collisions",
                    "reversal_comparable",
                    "reversal_rate",
                )
            }
        )
        for test in result.get("exchangeability", []):
            tests.append({"n": result["n"], **test})
    return {"runs": sorted(runs, key=lambda r: r["n"]), "exchangeability": tests}


def summarize_woodbury(documents: Sequence[Mapping[str, Any]]) -> Section:
    points = []
    series = []
    for doc in documents:
        result = doc["result"]
        n = result["n"]
        for w in result["woodbury"]:
            points.append(
                {
                    "n": n,
                    "ell": result["ell"],
                    "E": w["E"],
                    "eta": w["eta"],
                    "switched_trials": result["switched_trials"],
                    "monotone_fraction": w["monotone_fraction"],
                    "median_decay_ratio": w["median_decay_ratio"],
                    "converged": w["converged"],
                    "fell_back": w["fell_back"],
                }
            )
            decay = tuple(
                (float(row["K"]), float(row["median_relative_error"]))
                for row in w["decay"]
                if np.isfinite(row["median_relative_error"])
            )
            series.append(
                PlotSeries(
                    f"woodbury_n{n}_E{w['E']:g}_eta{w['eta']:g}",
                    f"Woodbury truncation at n = {n}, z = {w['E']:g}+{w['eta']:g}i",
                    "K",
                    "median relative error",
                    decay,
                )
            )
    return {"points": points}, series


def _complex(value: Any) -> complex:
    if isinstance(value, Mapping):
        return complex(value["re"], value["im"])
    return complex(value)


def summarize_greens(documents: Sequence[Mapping[str, Any]]) -> Dict[str, Any]:
    points = []
    for doc in documents:
        result = doc["result"]
        for p in result["points"]:
            res = p["residuals"]
            z = _complex(p["z"])
            points.append(
                {
                    "n": result["n"],
                    "d": result["d"],
                    "E": z.real,
                    "eta": z.imag,
                    "in_domain": p["in_domain"],
                    "ward_dev": p["ward_dev"],
                    "abs_m_minus_md": abs(_complex(p["m"]) - _complex(p["m_d"])),
                    "abs_q_minus_y": abs(_complex(res["q_minus_y"])),
                    "abs_m_minus_x": abs(_complex(res["m_minus_x"])),
                    "eps": res["eps"],
                    "log_power": res.get("log_power"),
                }
            )
    return {"points": points}


# ---------------------------------------------------------------- assembly


def _classify(
    paths: Iterable[PathLike],
) -> Tuple[Dict[str, List[Mapping[str, str]]], Dict[str, List[Dict[str, Any]]]]:
    tables: Dict[str, List[Mapping[str, str]]] = {}
    documents: Dict[str, List[Dict[str, Any]]] = {}
    for path in paths:
        if Path(path).suffix.lower() == ".json":
            doc = read_json(path)
            result = doc["result"]
            kind = result.get("kind") if isinstance(result, dict) else None
            if kind in SCHEMAS and isinstance(result.get("rows"), list):
                tables.setdefault(kind, []).extend(result["rows"])
                continue
            if kind not in JSON_KINDS:
                raise RecordSchemaError(f"{path}: unsupported result kind {kind!r}.")
            documents.setdefault(kind, []).append(doc)
            continue
        schema = detect_schema(path)
        _, rows = read_csv(path, schema)
        tables.setdefault(schema, []).extend(rows)
        logger.info("Read %d %s rows from %s", len(rows), schema, path)
    return tables, documents


def gnuplot_script(series: Sequence[PlotSeries]) -> str:
    """Gnuplot commands rendering each series to ``<name>.png``."""
    lines = ["set terminal pngcairo size 800,600", "set key off", "set grid"]
    for s in series:
        lines.append(f"set output '{s.name}.png'")
        lines.append(f"set title \"{s.title}\"")
        lines.append(f"set xlabel \"{s.xlabel}\"")
        lines.append(f"set ylabel \"{s.ylabel}\"")
        lines.append("set logscale xy" if s.loglog else "unset logscale")
        lines.append(f"plot '{s.name}.dat' using 1:2 with linespoints")
    return "\n".join(lines) + "\n"


def render_dat(s: PlotSeries) -> str:
    """Two whitespace-separated columns with a commented header."""
    body = "".join(f"{x!r} {y!r}\n" for x, y in s.points)
    return f"# {s.xlabel} {s.ylabel}\n{body}"


def build_report(
    paths: Sequence[PathLike],
    output_dir: Optional[PathLike] = None,
    *,
    bands: AcceptanceBands = AcceptanceBands(),
    level: float = DEFAULT_QUANTILE,
    extra_checks: Optional[AcceptanceReport] = None,
) -> Report:
    """Aggregate result files and, optionally, write the report artifacts.

    Args:
        paths: CSV and JSON files produced by the CLI; may be empty.
        output_dir: Where ``summary.json``, the ``.dat`` files and
            ``plots.gp`` go; nothing is written when ``None``.
        bands: Accepted ranges of the acceptance checks.
        level: Quantile level applied to Stieltjes rows.
        extra_checks: Checks appended to the acceptance table, such as the
            identity self-checks.

    Returns:
        Report: Sections, plot series and acceptance checks.

    Raises:
        RecordSchemaError: If an input matches no known schema.
    """
    tables, documents = _classify(paths)
    report = Report(inputs=[str(p) for p in paths])
    builders = {
        "gamma": summarize_gamma,
        "rigidity": summarize_rigidity,
        "edge_scan": summarize_edge,
        "stieltjes": lambda rows: summarize_stieltjes(rows, level),
    }
    for schema, rows in tables.items():
        section, series = builders[schema](rows)
        report.sections[schema] = section
        report.series.extend(series)
    if "edge_window" in documents:
        report.sections["edge_window"] = summarize_edge_window(documents["edge_window"])
    if "moments" in documents:
        section, series = summarize_moments(documents["moments"])
        report.sections["moments"] = section
        report.series.extend(series)
    if "resample" in documents:
        report.sections["resample"] = summarize_resample(documents["resample"])
    expansions = [
        doc
        for kind in ("resample", "woodbury")
        for doc in documents.get(kind, [])
        if doc["result"].get("woodbury")
    ]
    if expansions:
        section, series = summarize_woodbury(expansions)
        report.sections["woodbury"] = section
        report.series.extend(series)
    if "greens" in documents:
        report.sections["greens"] = summarize_greens(documents["greens"])
    report.acceptance = evaluate(report.sections, bands)
    if extra_checks is not None:
        report.acceptance.checks.extend(extra_checks.checks)

    if output_dir is not None:
        target = Path(output_dir)
        for s in report.series:
            written = atomic_write_text(target / f"{s.name}.dat", render_dat(s))
            report.files.append(str(written))
        if report.series:
            script = gnuplot_script(report.series)
            report.files.append(str(atomic_write_text(target / "plots.gp", script)))
        summary_path = target / "summary.json"
        report.files.append(str(summary_path))
        write_json(summary_path, report.as_dict(), {"inputs": report.inputs})
    return report


__all__ = [
    "JSON_KINDS",
    "PlotSeries",
    "Report",
    "build_report",
    "gnuplot_script",
    "render_dat",
    "summarize_edge",
    "summarize_edge_window",
    "summarize_gamma",
    "summarize_greens",
    "summarize_moments",
    "summarize_resample",
    "summarize_rigidity",
    "summarize_stieltjes",
    "summarize_woodbury",
]
