"""Deterministic artifact writing: versioned JSON, headered CSV and a reproducibility stamp."""
from __future__ import annotations

import csv
import hashlib
import json
import platform
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np

from . import __version__

SCHEMA_VERSION = "1.0"
FLOAT_DIGITS = 12


def _clean(obj):
    """Convert to JSON-ready builtins with floats rounded to fixed significant digits."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _clean(float(obj.real)), "im": _clean(float(obj.imag))}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            return None
        return float(f"{x:.{FLOAT_DIGITS}g}")
    if hasattr(obj, "to_dict"):
        return _clean(obj.to_dict())
    if is_dataclass(obj):
        return _clean(asdict(obj))
    if hasattr(obj, "_asdict"):
        return _clean(obj._asdict())
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def write_json(path: Path, payload: dict) -> Path:
    body = dict(payload)
    body.setdefault("schema_version", SCHEMA_VERSION)
    path = Path(path)
    path.write_text(dumps(body))
    return path


def write_csv(path: Path, header: list[str], rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(v) for v in row])
    return path


def _csv_cell(v):
    if isinstance(v, (float, np.floating)):
        return "" if not np.isfinite(v) else f"{float(v):.{FLOAT_DIGITS}g}"
    return v


def inputs_hash(spec: dict, seed: int) -> str:
    canonical = json.dumps({"spec": spec, "seed": seed}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def versions() -> dict:
    import numba
    import scipy

    return {"mixedspec": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "numba": numba.__version__, "python": platform.python_version()}


def write_stamp(path: Path, spec: dict, seed: int, params: dict) -> Path:
    """Inputs hash, parameters and library versions; deliberately no timestamps."""
    return write_json(path, {"inputs_hash": inputs_hash(spec, seed), "seed": seed,
                             "parameters": params, "versions": versions()})


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())
