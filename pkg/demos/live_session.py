#!/usr/bin/env python3
"""Drive a session like a UI would: start, pause, steer, resume, compare.

Also demonstrates that the recorded steering script replays to the exact
same trajectory, which is the backbone of the intervention audit trail.
"""

import tempfile
import threading
from pathlib import Path

from antsteer import AcsParams, Session, load_bundled, run_scripted

inst = load_bundled("burma14")
params = AcsParams(ants=10, iterations=60, seed=3)

workdir = Path(tempfile.mkdtemp(prefix="antsteer-demo-"))
session = Session(inst, params, persist_dir=workdir)

# pause exactly at iteration 10 via the listener callback
paused = threading.Event()


def listener(kind, payload):
    if kind == "event" and payload.get("iteration") == 10 \
            and "best_length" in payload:
        session.pause(wait=False)
    if kind == "status":
        print(f"  status -> {payload}")
        if payload == "PAUSED":
            paused.set()


session.add_listener(listener)

print(f"session {session.id} on {inst.name}")
session.start()
paused.wait(timeout=30)

snap = session.snapshot()
print(f"paused at iteration {snap['iteration']}, "
      f"best so far {snap['best']['length']}")

# nudge the colony: suggest the edge 1 <-> 2 at 50%, impact 0.8
version = session.apply_steering_update({
    "hif": 0.8,
    "entries": [{"from": 1, "to": 2, "p": 0.5},
                {"from": 2, "to": 1, "p": 0.5}],
})
print(f"steering accepted as version {version}")

session.resume()
session.wait_finished(timeout=60)

comparison = session.compare_with_optimal()
result = session.result_doc()
print(f"\nfinished: best {result['best_length']}, "
      f"gap {comparison['gap_percent']:.3f}%")
print(f"engine ran under steering versions {result['steering_versions']}")
print(f"session directory: {workdir}")
for p in sorted(workdir.iterdir()):
    print(f"  {p.name}")

# the recorded script deterministically reproduces the steered run
replayed, versions = run_scripted(inst, params, session.script)
assert replayed.tour.order == session.best.tour.order
assert versions == result["steering_versions"]
print("\nreplay from the recorded script reproduced the identical tour.")
