"""CSV output with a commented header block describing how the table was produced."""
import csv
import logging
import numbers
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)


def format_cell(value, digits: int) -> str:
    """Floats in fixed scientific notation; integers and text unchanged."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return f"{float(value):.{digits - 1}e}"
    return str(value)


def write_csv(path, columns: Sequence[str], rows: Iterable[Sequence], header_lines: Iterable[str],
              digits: int = 9) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        for line in header_lines:
            handle.write(f"# {line}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        count = 0
        for row in rows:
            writer.writerow([format_cell(value, digits) for value in row])
            count += 1
    logger.info("Wrote %d rows to %s", count, path)
    return path
