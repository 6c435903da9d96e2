"""Output writers and reference-table loading for command-line runs."""

import csv
import io
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import yaml
from pydantic import ValidationError

from app.core.errors import DomainError
from app.schemas.run import OutputFormat, ReferenceRow, RunReport

logger = logging.getLogger(__name__)


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "pass" if value else "fail"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def render_csv(columns: Sequence[str], rows: Sequence[Dict[str, Any]]) -> str:
    """CSV text with a header row and '\\n' line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_cell(row.get(col)) for col in columns])
    return buffer.getvalue()


def render_json(
    columns: Sequence[str], rows: Sequence[Dict[str, Any]], metadata: Dict[str, Any]
) -> str:
    """JSON text wrapping the rows with a metadata header."""
    report = RunReport(metadata=metadata, columns=list(columns), rows=list(rows))
    return report.model_dump_json(indent=2) + "\n"


def write_report(
    columns: Sequence[str],
    rows: Sequence[Dict[str, Any]],
    fmt: OutputFormat,
    metadata: Dict[str, Any],
    output: Optional[Path] = None,
) -> None:
    """Write rows as CSV or JSON to ``output``, or to stdout when omitted."""
    if fmt == OutputFormat.JSON:
        text = render_json(columns, rows, metadata)
    else:
        text = render_csv(columns, rows)

    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info(f"Wrote {len(rows)} rows to {output}")


def load_reference_tables(path: Path) -> Dict[str, List[ReferenceRow]]:
    """Load published reference rows keyed by table identifier.

    Args:
        path: YAML file with a top-level ``tables`` mapping.

    Returns:
        Mapping from table identifier to its validated rows.
    """
    with open(path, "r", encoding="utf-8") as f:
        raw = yaml.safe_load(f)
    if not isinstance(raw, dict) or not isinstance(raw.get("tables"), dict):
        raise DomainError(f"Reference file {path} has no 'tables' mapping")

    tables: Dict[str, List[ReferenceRow]] = {}
    for name, table in raw["tables"].items():
        try:
            tables[str(name)] = [ReferenceRow(**row) for row in table.get("rows", [])]
        except (ValidationError, AttributeError, TypeError) as e:
            raise DomainError(f"Malformed reference table '{name}' in {path}: {str(e)}") from e
    logger.debug(f"Loaded {len(tables)} reference tables from {path}")
    return tables
