"""Text formats: parameter files, observation files and curve tables.

Parameter files are flat ``key = value`` documents (``:`` also accepted as
separator, ``#`` starts a comment)::

    theta = 0.6
    omega = 0.5
    psi   = 0.7
    alpha = 0.2
    beta  = 0.8
    gamma = 1.05
    mode  = strict

Observation files are comma-separated with a ``k,y`` header and an
optional third ``weight`` column.
"""

from __future__ import annotations

import csv
import io
import math

import numpy as np

from .core import PARAM_NAMES, VesParams, eval_bundle
from .errors import ParseError

PARAM_KEYS = PARAM_NAMES + ("mode",)

CURVE_COLUMNS = ("k", "f", "fprime", "fsecond", "mrs", "sigma", "sigmaprime", "share_k", "share_l")
_BUNDLE_FIELDS = (
    "k",
    "f",
    "f_prime",
    "f_second",
    "mrs",
    "sigma",
    "sigma_prime",
    "share_capital",
    "share_labor",
)


def fmt(value) -> str:
    """12 significant digits, locale independent."""
    return f"{float(value):.12g}"


def parse_params_text(text: str) -> VesParams:
    values = {}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":" if ":" in line else None
        if sep is None:
            raise ParseError(f"expected 'key = value' (got {raw.strip()!r})", lineno)
        key, value = (part.strip() for part in line.split(sep, 1))
        if key not in PARAM_KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, key)
        if key in values:
            raise ParseError(f"duplicate key {key!r} (first on line {lines[key]})", lineno, key)
        if key == "mode":
            values[key] = value
        else:
            try:
                num = float(value)
            except ValueError:
                raise ParseError(f"{key}: not a number ({value!r})", lineno, key) from None
            if not math.isfinite(num):
                raise ParseError(f"{key}: must be finite ({value!r})", lineno, key)
            values[key] = num
        lines[key] = lineno
    missing = [k for k in PARAM_NAMES if k not in values]
    if missing:
        raise ParseError(f"missing key(s): {', '.join(missing)}", key=missing[0])
    return VesParams(*(values[k] for k in PARAM_NAMES), values.get("mode", "strict"))


def read_params(path) -> VesParams:
    with open(path, encoding="utf-8") as fh:
        return parse_params_text(fh.read())


def format_params(p: VesParams) -> str:
    """Shortest round-trip repr, so a written params file reloads bit-for-bit."""
    width = max(len(k) for k in PARAM_KEYS)
    rows = [f"{name:<{width}} = {float(getattr(p, name))!r}" for name in PARAM_NAMES]
    rows.append(f"{'mode':<{width}} = {p.mode}")
    return "\n".join(rows) + "\n"


def parse_observations_text(text: str):
    """Return ``(observations, weights)``; ``weights`` is None without that column."""
    reader = csv.reader(io.StringIO(text))
    header = None
    obs, weights = [], []
    for row in reader:
        lineno = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        cells = [c.strip() for c in row]
        if header is None:
            header = [c.lower() for c in cells]
            if header[:2] != ["k", "y"] or len(header) > 3 or (len(header) == 3 and header[2] != "weight"):
                raise ParseError(f"header must be 'k,y' or 'k,y,weight' (got {','.join(cells)!r})", lineno)
            continue
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} columns, got {len(cells)}", lineno)
        try:
            nums = [float(c) for c in cells]
        except ValueError:
            raise ParseError(f"non-numeric value in {','.join(cells)!r}", lineno) from None
        if not all(math.isfinite(v) for v in nums):
            raise ParseError("non-finite value", lineno)
        if nums[0] <= 0 or nums[1] <= 0:
            raise ParseError("k and y must be positive", lineno)
        if len(nums) == 3:
            if nums[2] <= 0:
                raise ParseError("weight must be positive", lineno)
            weights.append(nums[2])
        obs.append((nums[0], nums[1]))
    if header is None:
        raise ParseError("empty data file", 1)
    return obs, (weights if len(header) == 3 else None)


def read_observations(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_observations_text(fh.read())


def write_observations(path, observations, weights=None):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("k,y,weight\n" if weights is not None else "k,y\n")
        for i, (k, y) in enumerate(observations):
            row = [fmt(k), fmt(y)] + ([fmt(weights[i])] if weights is not None else [])
            fh.write(",".join(row) + "\n")


def curve_table(p: VesParams, k, columns=CURVE_COLUMNS) -> str:
    """Delimited text, one row per node, columns in the fixed documented order."""
    b = eval_bundle(p, np.asarray(k, dtype=float))
    data = {col: np.atleast_1d(getattr(b, field)) for col, field in zip(CURVE_COLUMNS, _BUNDLE_FIELDS)}
    out = [",".join(columns)]
    for i in range(len(data["k"])):
        out.append(",".join(fmt(data[c][i]) for c in columns))
    return "\n".join(out) + "\n"


def parse_curve_table(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return header, rows
