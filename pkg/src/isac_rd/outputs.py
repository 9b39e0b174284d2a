"""CSV and manifest writers, and the flat JSON run-config loader."""
from __future__ import annotations

import csv
import dataclasses
import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

CONFIG_KEYS = {"M", "N", "T", "rho", "snr_db", "trials", "seed", "batch"}


def fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([fmt(v) for v in row] for row in rows)
    return path


def _jsonable(obj: Any) -> Any:
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Path):
        return str(obj)
    return obj


@dataclass
class RunManifest:
    command: str
    config: Any
    mc: Any
    output_paths: list[str] = field(default_factory=list)
    tool_version: str = ""
    wall_time: float = 0.0
    parameters: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(_jsonable(self), indent=2, sort_keys=True) + "\n"

    def write(self, path: Path) -> Path:
        path = Path(path)
        path.write_text(self.to_json(), encoding="utf-8")
        return path


def load_run_config(path: str | Path | None) -> dict:
    if path is None:
        return {}
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a flat JSON object")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise ValueError(f"{path}: unknown keys {sorted(unknown)}")
    if "rho" in data and "snr_db" in data:
        raise ValueError(f"{path}: give rho or snr_db, not both")
    return data
