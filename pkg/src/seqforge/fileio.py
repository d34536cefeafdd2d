"""Flat-file formats: phase files, weight files, convergence CSVs, manifests."""
from __future__ import annotations

import csv
import json
import re
from pathlib import Path

import numpy as np

from .corr import UnitModulusSequence, check_weights

PHASE_HEADER = "# seqforge phases v1 N={n}"
WEIGHT_HEADER = "# seqforge weights v1 N={n}"
_HEADER_RE = re.compile(r"#\s*seqforge\s+(phases|weights)\s+v1\s+N=(\d+)\s*$")


class FormatError(ValueError):
    pass


def _write_column(path, header: str, values) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [header] + [f"{float(v):.17g}" for v in values]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _read_column(path, kind: str):
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text:
        raise FormatError(f"{path}: empty file")
    m = _HEADER_RE.match(text[0].strip())
    if not m or m.group(1) != kind:
        raise FormatError(f"{path}: expected a '# seqforge {kind} v1 N=<n>' header")
    n = int(m.group(2))
    try:
        values = np.array([float(s) for s in text[1:] if s.strip()])
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return n, values


def write_phases(path, seq: UnitModulusSequence) -> Path:
    return _write_column(path, PHASE_HEADER.format(n=seq.N), seq.phases)


def read_phases(path) -> UnitModulusSequence:
    n, values = _read_column(path, "phases")
    if values.size != n:
        raise FormatError(f"{path}: header says N={n} but {values.size} phases follow")
    return UnitModulusSequence(values)


def write_weights(path, weights) -> Path:
    w = check_weights(weights, allow_zero=True)
    return _write_column(path, WEIGHT_HEADER.format(n=w.size + 1), w)


def read_weights(path) -> np.ndarray:
    n, values = _read_column(path, "weights")
    if values.size != n - 1:
        raise FormatError(f"{path}: header says N={n} but {values.size} weights follow")
    return check_weights(values, n, allow_zero=True)


def write_convergence(path, record, extra: dict | None = None) -> Path:
    """CSV with columns iter, objective, cum_seconds, backtracks (plus `extra` columns).

    Row ``iter = l`` holds the objective after the l-th iteration.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    extra = extra or {}
    with path.open("w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["iter", "objective", "cum_seconds", "backtracks", *extra])
        for l in range(1, len(record.objective)):
            row = [l, f"{record.objective[l]:.17g}", f"{record.seconds[l]:.6f}", record.backtracks[l]]
            row += [f"{col[l]:.17g}" for col in extra.values()]
            wr.writerow(row)
    return path


def read_convergence(path) -> dict:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return {k: np.array([float(r[k]) for r in rows]) for k in (rows[0] if rows else [])}


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path, data: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=_jsonable) + "\n",
                    encoding="utf-8")
    return path


def read_json(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_correlation_level(path, levels: np.ndarray) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    N = (levels.size + 1) // 2
    with path.open("w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["lag", "level_db"])
        for lag, v in zip(range(1 - N, N), levels):
            wr.writerow([lag, f"{v:.6f}"])
    return path
