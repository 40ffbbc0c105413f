"""Run configuration, result envelopes and output formatting."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .errors import SpecError

COMMANDS = ("verify", "degeneracy", "spectrum", "min-excitation", "scan", "apply-error")
FORMATS = ("csv", "json", "text")

CODE_KEYS = {"group", "family", "kernel", "s1", "s2", "qudit"}
TOWER_KEYS = {"family", "mode", "nodes", "max_index", "s1", "s2", "options"}
TOWER_OPTION_KEYS = {"min_excitation", "qudit"}
QUDIT_KEYS = {"d", "m1", "m2"}

# fields that change only how or where results are written, never what they are
_UNDIGESTED = {"fmt", "output", "threads", "cache_dir", "config_path", "tower_path"}


@dataclass
class RunConfig:
    command: str
    group: str | None = None
    kernel: Any = None
    s1: list | None = None
    s2: list | None = None
    qudit: dict | None = None
    tower: dict | None = None
    mode: str = "exact"
    max_energy: int | None = None
    strategy: str = "syndrome-enum"
    errors: list = field(default_factory=list)
    fmt: str = "text"
    output: str | None = None
    max_order: int = 4096
    enum_cap: int = 24
    radius: int = 6
    threads: int = 1
    cache_dir: str | None = None
    timing: bool = False
    config_path: str | None = None
    tower_path: str | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise SpecError(f"unknown command {self.command!r}")
        if self.fmt not in FORMATS:
            raise SpecError(f"unknown output format {self.fmt!r}")
        for name in ("max_order", "enum_cap", "radius", "threads"):
            if getattr(self, name) < 1:
                raise SpecError(f"{name} must be positive")
        if self.command == "scan":
            if self.tower is None:
                raise SpecError("scan needs a tower config (--tower)")
        else:
            if self.group is None:
                raise SpecError(f"{self.command} needs a group (--group or a config file)")
            if not self.s1 or not self.s2:
                raise SpecError(f"{self.command} needs nonempty S1 and S2")
        if self.command == "apply-error" and not self.errors:
            raise SpecError("apply-error needs at least one --error")
        if self.qudit is not None:
            _check_keys(self.qudit, QUDIT_KEYS, "qudit block")
            if "d" not in self.qudit:
                raise SpecError("qudit block needs d")

    def digest(self) -> str:
        """sha256 of the resolved config, ignoring output-only settings."""
        data = {k: v for k, v in asdict(self).items() if k not in _UNDIGESTED}
        blob = json.dumps(data, sort_keys=True, default=str, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _check_keys(data: Any, allowed: set[str], what: str) -> None:
    if not isinstance(data, dict):
        raise SpecError(f"{what} must be a mapping")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise SpecError(f"unknown keys in {what}: {', '.join(map(str, unknown))}")


def load_yaml(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SpecError(f"{path} is not valid YAML: {exc}") from None


def load_code_config(path: str | Path) -> dict:
    data = load_yaml(path) or {}
    _check_keys(data, CODE_KEYS, f"code config {path}")
    if "group" in data and "family" in data:
        raise SpecError("code config takes either group or family, not both")
    if "family" in data and "kernel" not in data:
        raise SpecError("code config with a family needs a kernel")
    if "qudit" in data and data["qudit"] is not None:
        _check_keys(data["qudit"], QUDIT_KEYS, "qudit block")
    return data


def load_tower_config(path: str | Path) -> dict:
    data = load_yaml(path) or {}
    _check_keys(data, TOWER_KEYS, f"tower config {path}")
    for key in ("family", "s1", "s2"):
        if key not in data:
            raise SpecError(f"tower config needs {key}")
    opts = data.get("options") or {}
    _check_keys(opts, TOWER_OPTION_KEYS, "tower options")
    if opts.get("qudit") is not None:
        _check_keys(opts["qudit"], QUDIT_KEYS, "qudit block")
    return data


# -- inline flag parsing ----------------------------------------------------------


def split_labels(text: str) -> list[str]:
    """Split ``a,b,(1,2)`` on commas that are not inside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return [x for x in out if x]


def parse_kernel_text(text: str) -> Any:
    """``4`` (scalar), ``2,2,2`` (diagonal) or ``2,0;1,2`` (matrix rows)."""
    text = text.strip()
    try:
        if ";" in text:
            return [[int(v) for v in row.split(",")] for row in text.split(";")]
        if "," in text:
            return [int(v) for v in text.split(",")]
        return int(text)
    except ValueError:
        # non-numeric kernels (e.g. Dinf tags) are passed through
        return text


def parse_error_text(text: str) -> tuple[str, str, str]:
    """``label:layer:P`` with layer ``+``/``-`` and P in X, Y, Z."""
    m = re.fullmatch(r"(.+):([+-]):([XYZxyz])", text.strip())
    if not m:
        raise SpecError(f"error term {text!r} must look like label:+:X")
    return m.group(1), m.group(2), m.group(3).upper()


# -- results ------------------------------------------------------------------------


@dataclass
class ResultEnvelope:
    command: str
    input_digest: str
    version: str
    payload: dict
    warnings: list[str] = field(default_factory=list)
    columns: list[str] | None = None  # set for tabular payloads (key "rows")

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "version": self.version,
            "payload": self.payload,
            "warnings": list(self.warnings),
        }


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ";".join(_cell(v) for v in value)
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True)
    return str(value)


def _text_cell(value: Any) -> str:
    text = _cell(value)
    return text if text else "-"


def table_of(envelope: ResultEnvelope) -> tuple[list[str], list[dict]]:
    """Columns and rows used by the CSV and text renderers."""
    if envelope.columns is not None:
        return envelope.columns, list(envelope.payload.get("rows", []))
    scalars = {k: v for k, v in envelope.payload.items() if not isinstance(v, dict)}
    return list(scalars), [scalars]


def emit(envelope: ResultEnvelope, fmt: str) -> bytes:
    if fmt == "json":
        return (json.dumps(envelope.as_dict(), sort_keys=True, indent=2) + "\n").encode()
    if fmt == "csv":
        cols, rows = table_of(envelope)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in rows:
            writer.writerow([_cell(row.get(c)) for c in cols])
        return buf.getvalue().encode()
    if fmt == "text":
        return _render_text(envelope).encode()
    raise SpecError(f"unknown output format {fmt!r}")


def _render_text(envelope: ResultEnvelope) -> str:
    lines = [f"{envelope.command}"]
    if envelope.columns is not None:
        for k, v in envelope.payload.items():
            if k != "rows" and not isinstance(v, dict):
                lines.append(f"  {k}: {_text_cell(v)}")
        cols, rows = table_of(envelope)
        cells = [cols] + [[_text_cell(r.get(c)) for c in cols] for r in rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(cols))]
        for row in cells:
            lines.append("  " + "  ".join(v.rjust(w) for v, w in zip(row, widths)).rstrip())
    else:
        for k, v in envelope.payload.items():
            lines.append(f"  {k}: {_text_cell(v)}")
    for w in envelope.warnings:
        lines.append(f"  warning: {w}")
    return "\n".join(lines) + "\n"


def write_output(data: bytes, path: str | None, stream) -> None:
    if path is None:
        stream.write(data.decode())
        return
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise SpecError(f"cannot write {path}: {exc.strerror}") from None
