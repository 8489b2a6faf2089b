"""
Tabular reports written by the command-line drivers

CSV layout: a "# symdom <version>" line, a header row, then one row per
degree or bin. Floats use 17 significant digits and lines end with LF.
JSON carries the same columns and rows plus the library version, the
echoed configuration and the report metadata.
"""

import json
import logging
import math
import os
import tempfile
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field

from symdom.errors import ToleranceBreach

logger = logging.getLogger(__name__)

Cell = Union[int, float, str]


class Report(BaseModel):
    """Result table of one command"""

    command: str
    columns: List[str]
    rows: List[List[Cell]] = Field(default_factory=list)
    meta: Dict[str, Any] = Field(default_factory=dict)
    tolerance: Optional[float] = Field(None, description="Largest admissible deviation, if the command checks one")
    worst: Optional[float] = Field(None, description="Largest deviation measured")

    @property
    def passed(self) -> bool:
        if self.tolerance is None or self.worst is None:
            return True
        return not math.isnan(self.worst) and self.worst <= self.tolerance

    def ensure_passed(self) -> None:
        """Raise ToleranceBreach when the measured deviation exceeds the tolerance"""
        if not self.passed:
            raise ToleranceBreach(
                f"{self.command}: worst deviation {self.worst:.3e} exceeds tolerance {self.tolerance:.1e}",
                worst=float(self.worst),
                tolerance=float(self.tolerance),
            )


def format_cell(value: Cell) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render_csv(report: Report, version: str) -> str:
    lines = [f"# symdom {version}", ",".join(report.columns)]
    lines.extend(",".join(format_cell(cell) for cell in row) for row in report.rows)
    return "\n".join(lines) + "\n"


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def render_json(report: Report, version: str, config: Optional[Dict[str, Any]] = None) -> str:
    payload = {
        "symdom_version": version,
        "command": report.command,
        "config": config or {},
        "columns": report.columns,
        "rows": report.rows,
        "meta": report.meta,
        "tolerance": report.tolerance,
        "worst": report.worst,
        "passed": report.passed,
    }
    return json.dumps(_json_safe(payload), indent=2, sort_keys=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write text to path through a temporary file in the same directory"""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".symdom-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except Exception:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.info("Wrote report to %s", path)
