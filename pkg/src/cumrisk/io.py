"""CSV ingestion of cohort tables and CSV/JSON emission of result series.

Cohort files are UTF-8 comma-separated text with a header line. Required
columns (any order, case-insensitive): age_low, age_high, population,
incidence, cancer_deaths. Optional: other_deaths. age_high is exclusive and
may be the literal "open" on the final row for an open-ended group. Every
parse error names the offending line and column.
"""

import csv
import json
import math

from .core import (
    AgeGroupRecord,
    Cohort,
    CohortMeta,
    ComparisonReport,
    CumriskError,
    RiskSeries,
)

__all__ = [
    "REQUIRED_COLUMNS",
    "OPTIONAL_COLUMNS",
    "SERIES_COLUMNS",
    "COMPARISON_COLUMNS",
    "ParseError",
    "MissingColumn",
    "MalformedNumber",
    "NegativeCount",
    "NonContiguousAges",
    "InconsistentRecord",
    "EmptyCohort",
    "parse_cohort",
    "emit_cohort",
    "emit_series",
    "emit_comparison",
    "float_repr",
]

REQUIRED_COLUMNS = ("age_low", "age_high", "population", "incidence", "cancer_deaths")
OPTIONAL_COLUMNS = ("other_deaths",)
SERIES_COLUMNS = ("t", "age_label", "b", "cum_rate", "cum_risk", "p_red", "p_off")
COMPARISON_COLUMNS = (
    "t",
    "age_label",
    "delta_b",
    "delta_cum_rate",
    "delta_cum_risk",
    "delta_p_red",
    "delta_p_off",
)


class ParseError(CumriskError):
    """A cohort document failed validation; pinpoints line and column."""

    def __init__(self, message: str, line: int | None = None, column: str | None = None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column '{column}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class MissingColumn(ParseError):
    pass


class MalformedNumber(ParseError):
    pass


class NegativeCount(ParseError):
    pass


class NonContiguousAges(ParseError):
    pass


class InconsistentRecord(ParseError):
    pass


class EmptyCohort(ParseError):
    pass


def float_repr(value: float) -> str:
    """Shortest decimal string that round-trips to the same double."""
    return repr(float(value))


def _count_repr(value: float) -> str:
    # counts are usually whole numbers; keep files free of trailing ".0"
    f = float(value)
    if f.is_integer() and abs(f) < 2**53:
        return str(int(f))
    return repr(f)


def _cell(cells: list[str], colmap: dict[str, int], column: str, line: int) -> str:
    idx = colmap[column]
    if idx >= len(cells):
        raise MalformedNumber("missing value", line=line, column=column)
    return cells[idx]


def _int_cell(cells, colmap, column, line) -> int:
    raw = _cell(cells, colmap, column, line)
    try:
        return int(raw)
    except ValueError:
        raise MalformedNumber(f"expected an integer, got {raw!r}", line=line, column=column) from None


def _count_cell(cells, colmap, column, line) -> float:
    raw = _cell(cells, colmap, column, line)
    try:
        value = float(raw)
    except ValueError:
        raise MalformedNumber(f"expected a number, got {raw!r}", line=line, column=column) from None
    if not math.isfinite(value):
        raise MalformedNumber(f"expected a finite number, got {raw!r}", line=line, column=column)
    if value < 0:
        raise NegativeCount(f"counts must be >= 0, got {raw!r}", line=line, column=column)
    return value


def parse_cohort(text: str, meta: CohortMeta | None = None) -> Cohort:
    """Parse a cohort CSV document into a validated Cohort.

    Group indices are assigned 1..G in file order. Blank lines are skipped;
    unknown extra columns are ignored.
    """
    reader = csv.reader(text.lstrip("﻿").splitlines())
    colmap: dict[str, int] | None = None
    records: list[AgeGroupRecord] = []
    expected_low = 0
    open_group_seen = False
    for row in reader:
        line = reader.line_num
        cells = [cell.strip() for cell in row]
        if not any(cells):
            continue
        if colmap is None:
            names = [cell.lower() for cell in cells]
            colmap = {}
            for idx, name in enumerate(names):
                if name in colmap:
                    raise ParseError("duplicate column", line=line, column=name)
                colmap[name] = idx
            for name in REQUIRED_COLUMNS:
                if name not in colmap:
                    raise MissingColumn("required column missing from header", line=line, column=name)
            continue
        if open_group_seen:
            raise NonContiguousAges(
                "no rows may follow an open-ended group", line=line, column="age_high"
            )
        age_low = _int_cell(cells, colmap, "age_low", line)
        high_raw = _cell(cells, colmap, "age_high", line)
        if high_raw.lower() == "open":
            age_high = None
            open_group_seen = True
        else:
            age_high = _int_cell(cells, colmap, "age_high", line)
        population = _count_cell(cells, colmap, "population", line)
        incidence = _count_cell(cells, colmap, "incidence", line)
        cancer_deaths = _count_cell(cells, colmap, "cancer_deaths", line)
        other_deaths = None
        if "other_deaths" in colmap and colmap["other_deaths"] < len(cells):
            raw = cells[colmap["other_deaths"]]
            if raw:
                other_deaths = _count_cell(cells, colmap, "other_deaths", line)
        if age_low != expected_low:
            raise NonContiguousAges(
                f"expected age_low {expected_low} (groups are contiguous from 0), got {age_low}",
                line=line,
                column="age_low",
            )
        if age_high is not None and age_high - age_low != 5:
            raise NonContiguousAges(
                f"closed groups must span exactly 5 years, got {age_low}..{age_high}",
                line=line,
                column="age_high",
            )
        if population <= 0:
            raise InconsistentRecord("population must be positive", line=line, column="population")
        if 5.0 * incidence > population + 5.0 * cancer_deaths:
            raise InconsistentRecord(
                "5x > n + 5dc (five times the annual incidence exceeds the at-risk pool)",
                line=line,
                column="incidence",
            )
        records.append(
            AgeGroupRecord(
                index=len(records) + 1,
                age_low=age_low,
                age_high=age_high,
                population=population,
                incidence=incidence,
                cancer_deaths=cancer_deaths,
                other_deaths=other_deaths,
            )
        )
        if age_high is not None:
            expected_low = age_high
    if not records:
        raise EmptyCohort("no data rows found")
    return Cohort(records=records, meta=meta or CohortMeta())


def emit_cohort(cohort: Cohort) -> str:
    """Render a cohort back into the ingestion format, numerically lossless."""
    with_other = any(record.other_deaths is not None for record in cohort.records)
    columns = list(REQUIRED_COLUMNS) + (["other_deaths"] if with_other else [])
    lines = [",".join(columns)]
    for record in cohort.records:
        row = [
            str(record.age_low),
            "open" if record.is_open else str(record.age_high),
            _count_repr(record.population),
            _count_repr(record.incidence),
            _count_repr(record.cancer_deaths),
        ]
        if with_other:
            row.append("" if record.other_deaths is None else _count_repr(record.other_deaths))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _check_format(format: str) -> None:
    if format not in ("csv", "json"):
        raise CumriskError(f"unknown output format {format!r} (expected 'csv' or 'json')")


def emit_series(series: RiskSeries, format: str = "csv") -> str:
    """Render a risk series as CSV (fixed column order) or JSON.

    Floats are written at full precision: parsing them back recovers the
    exact doubles. Identical series produce byte-identical documents.
    """
    _check_format(format)
    rows = [
        {
            "t": step.t,
            "age_label": step.age_label,
            "b": step.b,
            "cum_rate": step.cum_rate,
            "cum_risk": step.cum_risk,
            "p_red": step.p_red,
            "p_off": step.p_off,
        }
        for step in series.steps
    ]
    if format == "json":
        return json.dumps({"steps": rows}, indent=2) + "\n"
    lines = [",".join(SERIES_COLUMNS)]
    for row in rows:
        lines.append(
            f"{row['t']},{row['age_label']},{float_repr(row['b'])},{float_repr(row['cum_rate'])},"
            f"{float_repr(row['cum_risk'])},{float_repr(row['p_red'])},{float_repr(row['p_off'])}"
        )
    return "\n".join(lines) + "\n"


def emit_comparison(report: ComparisonReport, format: str = "csv") -> str:
    """Render a comparison report; truncation is noted, never silent.

    CSV carries a leading comment line when the cohorts had different
    lengths; JSON always carries both lengths and the truncated flag.
    """
    _check_format(format)
    rows = [
        {
            "t": row.t,
            "age_label": row.age_label,
            "delta_b": row.delta_b,
            "delta_cum_rate": row.delta_cum_rate,
            "delta_cum_risk": row.delta_cum_risk,
            "delta_p_red": row.delta_p_red,
            "delta_p_off": row.delta_p_off,
        }
        for row in report.rows
    ]
    if format == "json":
        payload = {
            "steps_a": report.steps_a,
            "steps_b": report.steps_b,
            "truncated": report.truncated,
            "steps": rows,
        }
        return json.dumps(payload, indent=2) + "\n"
    lines = []
    if report.truncated:
        lines.append(
            f"# truncated to the shared prefix of {len(report.rows)} steps "
            f"(first cohort has {report.steps_a}, second has {report.steps_b})"
        )
    lines.append(",".join(COMPARISON_COLUMNS))
    for row in rows:
        lines.append(
            f"{row['t']},{row['age_label']},{float_repr(row['delta_b'])},"
            f"{float_repr(row['delta_cum_rate'])},{float_repr(row['delta_cum_risk'])},"
            f"{float_repr(row['delta_p_red'])},{float_repr(row['delta_p_off'])}"
        )
    return "\n".join(lines) + "\n"
