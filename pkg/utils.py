"""
Utility helpers used across the rigidcol command line.
"""
import io
import json
import os

from rigidcol.errors import ParameterError


def require_range(name, value, low, high):
    """Reject ``value`` outside the closed interval [low, high]."""
    if not low <= value <= high:
        raise ParameterError(f"{name} = {value!r} is outside [{low}, {high}]")
    return value


def require_positive_int(name, value):
    if value < 1:
        raise ParameterError(f"{name} must be >= 1, got {value!r}")
    return value


def env_flag(name):
    """True when the environment variable is set to 1/true/yes/on."""
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


def frame_to_csv(frame):
    """Render a DataFrame as CSV text without the index column."""
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def _native(value):
    return value.item() if hasattr(value, "item") else value


def frame_to_json_lines(frame):
    """One JSON object per row; floats keep every significant digit."""
    rows = frame.to_dict(orient="records")
    return "".join(json.dumps({k: _native(v) for k, v in row.items()}) + "\n" for row in rows)
