"""
Output records printed by the rigidcol command line.
"""
import json

import pandas as pd

import utils


class OutputRecord:
    """One command result: a kind tag, an ordered payload and a run fingerprint.

    Values are serialized with json, so floats keep all 17 significant
    digits and every format parses back to an equal record.
    """

    def __init__(self, schema, payload, fingerprint=""):
        self.schema = schema
        self.payload = dict(payload)
        self.fingerprint = fingerprint

    def __eq__(self, other):
        if not isinstance(other, OutputRecord):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __repr__(self):
        return f"OutputRecord({self.schema!r}, {self.payload!r}, {self.fingerprint!r})"

    def get_field(self, name):
        return self.payload[name]

    def to_dict(self):
        return {
            "schema": self.schema,
            "fingerprint": self.fingerprint,
            "payload": self.payload,
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(data["schema"], data["payload"], data.get("fingerprint", ""))

    def to_lines(self):
        """Human-readable "key: value" lines, record kind and fingerprint first."""
        lines = [f"record: {self.schema}", f"fingerprint: {self.fingerprint}"]
        lines.extend(f"{key}: {json.dumps(value)}" for key, value in self.payload.items())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_lines(cls, text):
        header = {}
        payload = {}
        for number, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            key, sep, value = line.partition(": ")
            if not sep:
                raise ValueError(f"line {number}: expected 'key: value', got {line!r}")
            if key in ("record", "fingerprint") and key not in header:
                header[key] = value
            else:
                payload[key] = json.loads(value)
        return cls(header["record"], payload, header.get("fingerprint", ""))

    def to_csv(self):
        """Header row of payload keys plus one value row, quoted where needed."""
        values = [v if isinstance(v, str) else json.dumps(v) for v in self.payload.values()]
        return utils.frame_to_csv(pd.DataFrame([values], columns=list(self.payload), dtype=object))
