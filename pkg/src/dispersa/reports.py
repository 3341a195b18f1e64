"""Deterministic report emission.

CSV bodies are bit-stable across platforms and runs: 17 significant digits,
'.' decimal separator, '\\n' line endings, rows sorted by scan parameters.
Wall-clock timing lives only in the JSON report header, never in tables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

ARTIFACT_VERSION = "0.1.0"


def format_number(x) -> str:
    """17-significant-digit decimal rendering of a float (or int as-is)."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def render_csv(records: list[dict], columns: list[str]) -> str:
    lines = [",".join(columns)]
    for rec in records:
        cells = []
        for col in columns:
            v = rec.get(col, "")
            cells.append(v if isinstance(v, str) else format_number(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def sort_records(records: list[dict], keys: list[str]) -> list[dict]:
    """Order-stable assembly: sort by scan parameters, not completion time."""
    def sort_key(rec):
        out = []
        for k in keys:
            v = rec.get(k, "")
            out.append((0, float(v)) if isinstance(v, (int, float)) else (1, str(v)))
        return out
    return sorted(records, key=sort_key)


@dataclass
class ExperimentReport:
    """One run's outputs: config echo, per-point records, warnings, timing."""

    command: str
    config_echo: dict
    tables: dict = field(default_factory=dict)       # name -> (columns, records)
    constants: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    wall_clock_s: float = 0.0
    version: str = ARTIFACT_VERSION

    def add_table(self, name: str, columns: list[str], records: list[dict],
                  sort_keys: list[str] | None = None) -> None:
        recs = sort_records(records, sort_keys or columns)
        self.tables[name] = (columns, recs)

    def add_warnings(self, messages) -> None:
        for msg in messages:
            if msg not in self.warnings:
                self.warnings.append(msg)

    def write(self, out_dir: Path, table_format: str = "csv") -> list[Path]:
        """Write report.json plus one table file per registered table."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        for name, (columns, records) in sorted(self.tables.items()):
            if table_format == "csv":
                path = out_dir / f"{name}.csv"
                with open(path, "w", newline="") as fh:
                    fh.write(render_csv(records, columns))
            else:
                path = out_dir / f"{name}.json"
                rows = [{c: rec.get(c) for c in columns} for rec in records]
                with open(path, "w", newline="") as fh:
                    json.dump(rows, fh, indent=2, sort_keys=True)
                    fh.write("\n")
            written.append(path)
        report = {
            "command": self.command,
            "version": self.version,
            "wall_clock_s": self.wall_clock_s,
            "config": self.config_echo,
            "constants": self.constants,
            "warnings": self.warnings,
            "tables": {name: str(out_dir / f"{name}.{table_format}")
                       for name in sorted(self.tables)},
        }
        report_path = out_dir / "report.json"
        with open(report_path, "w", newline="") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(report_path)
        return written
