"""Run fingerprinting for output records."""

from __future__ import annotations

import hashlib
from typing import Any, Mapping


def generate_fingerprint(kind: str, inputs: Mapping[str, Any]) -> str:
    """Generate a stable SHA-256 fingerprint for one run.

    Based on the record kind and every input that determines the result.
    The same command with the same inputs always produces the same hash,
    whatever order the inputs were given in.
    """
    parts = [kind]
    for key in sorted(inputs):
        parts.append(f"{key}={inputs[key]!r}")
    key = ":".join(parts)
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]
