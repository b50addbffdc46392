"""Wire protocol for live session streams.

Every frame is a WireMessage enveloping a kind-specific payload; sequence
numbers increase strictly within one stream so consumers can detect gaps.
SNAPSHOT payloads are pinned by the published JSON schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import jsonschema

SNAPSHOT = "SNAPSHOT"
EVENT = "EVENT"
STEERING_ACK = "STEERING_ACK"
ERROR = "ERROR"

KINDS = (SNAPSHOT, EVENT, STEERING_ACK, ERROR)


@dataclass
class WireMessage:
    kind: str
    session_id: str
    payload: dict
    sequence: int

    def to_doc(self) -> dict:
        if self.kind not in KINDS:
            raise ValueError(f"unknown wire kind {self.kind!r}")
        return {"kind": self.kind, "session_id": self.session_id,
                "payload": self.payload, "sequence": self.sequence}


_snapshot_schema: dict | None = None


def snapshot_schema() -> dict:
    global _snapshot_schema
    if _snapshot_schema is None:
        text = (resources.files("antsteer") / "schemas"
                / "snapshot.schema.json").read_text(encoding="utf-8")
        _snapshot_schema = json.loads(text)
    return _snapshot_schema


def validate_snapshot(payload: dict) -> None:
    """Raises jsonschema.ValidationError when the payload drifts."""
    jsonschema.validate(payload, snapshot_schema())
