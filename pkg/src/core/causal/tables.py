"""Observation tables: one CSV column per node, one row per observation."""

from __future__ import annotations

from collections.abc import Sequence

from ..errors import ContractViolation, InputDataError
from ..utils.csv_tsv import ParseResult, parse_table, write_table
from .model import CausalModel, MechanismKind, Observation, Value, parse_value, render_value

__all__ = ["observations_from_csv", "observations_to_csv"]


def _cell(model: CausalModel, node: str, value: Value) -> str | float:
    if model.mechanisms[node].kind in {MechanismKind.LINEAR_GAUSSIAN, MechanismKind.DETERMINISTIC}:
        return float(value)
    return render_value(model, node, value).decode("ascii")


def observations_to_csv(model: CausalModel, observations: Sequence[Observation]) -> str:
    """Header is the topological order; digit and hex strings are quoted verbatim."""

    rows = []
    for observation in observations:
        observation.check(model)
        rows.append([_cell(model, node, observation.values[node]) for node in model.order])
    return write_table(model.order, rows)


def observations_from_csv(model: CausalModel, text: str | ParseResult) -> list[Observation]:
    """Parse a data file against ``model``; columns are matched by name."""

    table = parse_table(text) if isinstance(text, str) else text
    if table.headers is None:
        raise InputDataError("data file is empty")
    headers = table.headers
    missing = [node for node in model.order if node not in headers]
    extra = [header for header in headers if header not in model.mechanisms]
    if missing or extra:
        raise InputDataError("data columns do not match the model", missing=missing, extra=extra)
    if len(set(headers)) != len(headers):
        raise InputDataError("data file repeats a column")
    if not table.rows:
        raise InputDataError("data file has no observations")

    observations = []
    for number, row in enumerate(table.rows, start=1):
        if len(row) != len(headers):
            raise InputDataError(f"row {number}: expected {len(headers)} fields, got {len(row)}")
        cells = dict(zip(headers, row, strict=True))
        try:
            values = {node: parse_value(model, node, cells[node]) for node in model.order}
        except ContractViolation as exc:
            raise InputDataError(f"row {number}: {exc}") from exc
        observations.append(Observation(values=values))
    return observations
