"""CSV and JSON emission of scan tables and reports."""

import io
import json
import math
import os
import sys
from typing import Any, Literal

import pandas as pd

from domain.errors import IoError

OutputFormat = Literal["csv", "json"]

# 17 significant digits round-trip every double
FLOAT_FORMAT = "%.17g"


def render_csv(rows: list[dict[str, Any]], seed: int, kind: str) -> str:
    """
    Rows as CSV text preceded by a ``# seed=<seed> kind=<kind>`` line.

    Mapping-valued columns, such as serialized phase results, are JSON-only.
    """
    buffer = io.StringIO()
    buffer.write(f"# seed={seed} kind={kind}\n")
    frame = pd.DataFrame.from_records(rows)
    nested = [c for c in frame.columns if frame[c].map(lambda v: isinstance(v, dict)).any()]
    frame.drop(columns=nested).to_csv(
        buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )
    return buffer.getvalue()


def _json_safe(value: Any) -> Any:
    # JSON has no Infinity or NaN
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def render_json(payload: dict[str, Any], seed: int, kind: str) -> str:
    """Payload as strict JSON; non-finite numbers become null."""
    document = _json_safe({"seed": seed, "kind": kind, **payload})
    return json.dumps(document, indent=2, allow_nan=False) + "\n"


def render(
    rows: list[dict[str, Any]],
    fmt: OutputFormat,
    seed: int,
    kind: str,
    extra: dict[str, Any] | None = None,
) -> str:
    """Tabular rows in the requested format; ``extra`` only appears in JSON output."""
    if fmt == "csv":
        return render_csv(rows, seed, kind)
    if fmt == "json":
        return render_json({**(extra or {}), "rows": rows}, seed, kind)
    raise ValueError(f"Unknown output format: {fmt}. Available formats: csv, json")


def write_text(text: str, path: str | None) -> str:
    """
    Write ``text`` to ``path``, or to stdout when no path is given.

    Returns:
        Destination description for status messages

    Raises:
        IoError: If the file cannot be written
    """
    if path is None:
        sys.stdout.write(text)
        return "stdout"
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise IoError(f"Cannot write {path}: {e}") from e
    return path
