"""File formats: curve CSV, joined comparison CSV, and the binary gap dump."""

from __future__ import annotations

import struct
from typing import Optional, Sequence

import numpy as np

from .model import GapCurve

CSV_SCHEMA = 1
GAPS_MAGIC = b"GAPS"
GAPS_VERSION = 1


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def curve_csv_lines(curve: GapCurve, value_name: str = "G",
                    meta_lines: Optional[Sequence[str]] = None) -> list[str]:
    lines = [f"# schema={CSV_SCHEMA}"]
    lines.extend(f"# {m}" for m in (meta_lines or []))
    lines.append(f"lambda,{value_name}")
    for lam, val in zip(curve.lambdas, curve.values):
        lines.append(f"{_fmt(lam)},{_fmt(val)}")
    return lines


def write_curve_csv(path: str, curve: GapCurve, value_name: str = "G",
                    meta_lines: Optional[Sequence[str]] = None) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(curve_csv_lines(curve, value_name, meta_lines)) + "\n")


def read_curve_csv(path: str) -> GapCurve:
    lambdas, values = [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("lambda"):
                continue
            parts = line.split(",")
            lambdas.append(float(parts[0]))
            values.append(float(parts[1]))
    return GapCurve(lambdas=lambdas, values=values)


def write_gaps_binary(path: str, gaps: np.ndarray) -> None:
    """Little-endian f64 dump with a 16-byte header (magic, version, count)."""
    arr = np.asarray(gaps, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sIQ", GAPS_MAGIC, GAPS_VERSION, arr.size))
        fh.write(arr.tobytes())


def read_gaps_binary(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        magic, version, count = struct.unpack("<4sIQ", fh.read(16))
        if magic != GAPS_MAGIC:
            raise ValueError(f"bad magic {magic!r} in {path}")
        if version != GAPS_VERSION:
            raise ValueError(f"unsupported gap dump version {version}")
        data = np.frombuffer(fh.read(8 * count), dtype="<f8")
        if data.size != count:
            raise ValueError(f"truncated gap dump: {data.size} of {count} values")
        return data.copy()
