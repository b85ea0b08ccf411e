"""Flat-file serialization of sweep rows and force results.

One CSV schema serves every tabular output and the SVG plotter:

    beta,model,n_roots,F_radial,F_azimuthal,Z,epsilon,achieved_digits,status

Numeric fields are decimal strings at the achieved precision; absent
values (epsilon under the time-symmetric model, numerics of skipped or
failed rows) are empty fields.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from mpmath import mpf

from .force import ForceResult, Model
from .precision import Scalar, format_scalar
from .sweep import RowStatus, SweepRow

SWEEP_HEADER = [
    "beta",
    "model",
    "n_roots",
    "F_radial",
    "F_azimuthal",
    "Z",
    "epsilon",
    "achieved_digits",
    "status",
]

# beta is always printed; 20 significant digits comfortably exceed any
# grid spacing while staying independent of row success.
BETA_DISPLAY_DIGITS = 20


def _fmt(value: Scalar | None, digits: int | None) -> str:
    if value is None or digits is None:
        return ""
    return format_scalar(value, digits)


def sweep_row_fields(row: SweepRow) -> list[str]:
    digits = row.achieved_digits
    return [
        format_scalar(row.beta, BETA_DISPLAY_DIGITS),
        row.model.value,
        "" if row.n_roots is None else str(row.n_roots),
        _fmt(row.F_radial, digits),
        _fmt(row.F_azimuthal, digits),
        _fmt(row.Z, digits),
        _fmt(row.epsilon, digits),
        "" if digits is None else str(digits),
        row.status.value,
    ]


def sweep_row_json(row: SweepRow) -> dict:
    digits = row.achieved_digits
    out: dict = {
        "beta": format_scalar(row.beta, BETA_DISPLAY_DIGITS),
        "model": row.model.value,
        "status": row.status.value,
    }
    if row.n_roots is not None:
        out["n_roots"] = row.n_roots
    if digits is not None:
        out["achieved_digits"] = digits
        out["F_radial"] = _fmt(row.F_radial, digits)
        out["F_azimuthal"] = _fmt(row.F_azimuthal, digits)
        out["Z"] = _fmt(row.Z, digits)
        if row.epsilon is not None:
            out["epsilon"] = _fmt(row.epsilon, digits)
    return out


def force_result_row(result: ForceResult) -> SweepRow:
    return SweepRow(
        beta=result.beta,
        model=result.model,
        status=RowStatus.OK,
        n_roots=result.n_roots,
        F_radial=result.F_radial,
        F_azimuthal=result.F_azimuthal,
        Z=result.Z,
        epsilon=result.epsilon,
        achieved_digits=result.achieved_digits,
    )


def force_result_json(result: ForceResult) -> dict:
    digits = result.achieved_digits
    out = {
        "beta": format_scalar(result.beta, digits),
        "model": result.model.value,
        "n_roots": result.n_roots,
        "F_radial": format_scalar(result.F_radial, digits),
        "F_azimuthal": format_scalar(result.F_azimuthal, digits),
        "Z": format_scalar(result.Z, digits),
        "achieved_digits": digits,
    }
    if result.epsilon is not None:
        out["epsilon"] = format_scalar(result.epsilon, digits)
    return out


class MalformedInput(Exception):
    """The input file does not follow the sweep CSV schema."""


@dataclass(frozen=True)
class ParsedRow:
    """Sweep CSV row as read back for plotting."""

    beta: Scalar
    status: str
    values: dict[str, Scalar | None]

    def value(self, column: str) -> Scalar | None:
        return self.values.get(column)


def parse_sweep_csv(text: str) -> list[ParsedRow]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedInput("empty input") from None
    if header != SWEEP_HEADER:
        raise MalformedInput(
            f"unexpected header {header!r}; expected {SWEEP_HEADER!r}"
        )
    rows: list[ParsedRow] = []
    for lineno, fields in enumerate(reader, start=2):
        if not fields:
            continue
        if len(fields) != len(SWEEP_HEADER):
            raise MalformedInput(f"line {lineno}: expected {len(SWEEP_HEADER)} fields")
        record = dict(zip(SWEEP_HEADER, fields))
        try:
            beta = mpf(record["beta"])
        except Exception:
            raise MalformedInput(f"line {lineno}: bad beta {record['beta']!r}") from None
        values: dict[str, Scalar | None] = {}
        for col in ("F_radial", "F_azimuthal", "Z", "epsilon"):
            raw = record[col]
            if raw == "":
                values[col] = None
            else:
                try:
                    values[col] = mpf(raw)
                except Exception:
                    raise MalformedInput(
                        f"line {lineno}: bad value {raw!r} in column {col}"
                    ) from None
        rows.append(ParsedRow(beta=beta, status=record["status"], values=values))
    return rows


def write_sweep_csv(rows, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow(sweep_row_fields(row))
