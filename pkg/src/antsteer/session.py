"""Pausable solver sessions: lifecycle, steering handoff, persistence, replay.

A session owns one engine thread.  Control calls arrive from any thread and
serialize on the session condition; the engine observes them only at
iteration boundaries, which keeps snapshots and replays well defined.  The
steering object mutated by apply_steering_update is authoritative; the
engine runs on frozen copies taken at the boundary, and every handoff is
recorded as a script line {iteration_applied, update} for exact replay.
"""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path
from typing import Callable

import numpy as np

from antsteer import acs
from antsteer.acs import AcsParams, RunState, SolutionRecord
from antsteer.instance import Instance, Tour, from_matrix, tour_length
from antsteer.oracle import (InstanceTooLarge, OptimalRecord, exact_optimum,
                             nearest_neighbor_tour)
from antsteer.steering import SteeringState

CREATED = "CREATED"
RUNNING = "RUNNING"
PAUSED = "PAUSED"
FINISHED = "FINISHED"

Listener = Callable[[str, object], None]


class SessionError(RuntimeError):
    """Illegal transition or unsatisfiable session request."""


def build_result_doc(record: SolutionRecord, params: AcsParams, versions,
                     optimum: OptimalRecord | None = None,
                     gap_percent: float | None = None) -> dict:
    doc = {
        "best_order": [int(v) for v in record.tour.order],
        "best_length": int(record.tour.length),
        "seed": params.seed,
        "params": params.to_doc(),
        "steering_versions": [int(v) for v in versions],
    }
    if optimum is not None:
        doc["optimum"] = optimum.to_doc()
        doc["gap_percent"] = gap_percent
    return doc


def write_session_dir(path: str | Path, instance: Instance, params: AcsParams,
                      events, script, result: dict | None = None) -> Path:
    """Persist one run as the standard directory layout."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    (path / "instance.json").write_text(instance.to_json() + "\n")
    (path / "params.json").write_text(
        json.dumps(params.to_doc(), indent=2, sort_keys=True) + "\n")
    (path / "events.jsonl").write_text(
        "".join(json.dumps(e, sort_keys=True) + "\n" for e in events))
    (path / "steering-script.jsonl").write_text(
        "".join(json.dumps(r, sort_keys=True) + "\n" for r in script))
    if result is not None:
        (path / "result.json").write_text(
            json.dumps(result, indent=2, sort_keys=True) + "\n")
    return path


def read_script(path: str | Path) -> list[dict]:
    records = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line:
            records.append(json.loads(line))
    return records


def run_scripted(instance: Instance, params: AcsParams, script=(),
                 event_sink=None) -> tuple[SolutionRecord, list[int]]:
    """Synchronous run applying recorded steering documents.

    Each script record is a full steering document taking effect at its
    iteration_applied; records at or before iteration 1 define the initial
    state (last one wins).  Returns the best record and the sequence of
    steering versions the engine ran under.
    """
    n = instance.n
    by_iter: dict[int, list[dict]] = {}
    for rec in script:
        ia = max(int(rec["iteration_applied"]), 1)
        by_iter.setdefault(ia, []).append(rec["update"])
    initial = by_iter.pop(1, None)
    steering = (SteeringState.from_doc(initial[-1], n) if initial
                else SteeringState(n))
    versions = [steering.version]

    def hook(state: RunState) -> None:
        docs = by_iter.get(state.iteration + 1)
        if docs:
            state.steering = SteeringState.from_doc(docs[-1], n)
            versions.append(state.steering.version)

    record = acs.run(instance, params, steering=steering,
                     event_sink=event_sink, boundary_hook=hook)
    return record, versions


class Session:
    """One steerable run with CREATED -> RUNNING <-> PAUSED -> FINISHED states."""

    def __init__(self, instance: Instance, params: AcsParams | None = None,
                 initial_hif: float = 0.0, session_id: str | None = None,
                 persist_dir: str | Path | None = None,
                 optimum: OptimalRecord | None = None):
        params = params if params is not None else AcsParams()
        params.validate()
        self.id = session_id or uuid.uuid4().hex[:12]
        self.instance = instance
        self.params = params
        self.steering = SteeringState(instance.n, hif=initial_hif)
        nn = nearest_neighbor_tour(instance)
        self.best = SolutionRecord(nn, 0, -1)
        self.status = CREATED
        self.iteration = 0
        self.events: list[dict] = []
        self.script: list[dict] = []
        self.optimum: OptimalRecord | None = None
        self.gap_percent: float | None = None
        self._provided_optimum = optimum
        self._persist_dir = Path(persist_dir) if persist_dir else None
        self._cond = threading.Condition()
        self._pause_requested = False
        self._dirty = False
        self._listeners: list[Listener] = []
        self._thread: threading.Thread | None = None
        self._error: BaseException | None = None
        self._versions = [self.steering.version]
        self._running_version = self.steering.version
        # boundary view for snapshots before and between iterations
        self._boundary_tau = acs.init_pheromone(instance.n, nn.length).tau
        self._tau0 = 1.0 / (instance.n * nn.length)

    # -- listeners -----------------------------------------------------------

    def add_listener(self, fn: Listener) -> None:
        with self._cond:
            self._listeners.append(fn)

    def remove_listener(self, fn: Listener) -> None:
        with self._cond:
            if fn in self._listeners:
                self._listeners.remove(fn)

    def _emit(self, kind: str, payload) -> None:
        with self._cond:
            listeners = list(self._listeners)
        for fn in listeners:
            fn(kind, payload)

    # -- lifecycle -----------------------------------------------------------

    def start(self) -> None:
        with self._cond:
            if self.status != CREATED:
                raise SessionError(f"cannot start from {self.status}")
            self.status = RUNNING
            engine_steering = self.steering.copy()
            self.script.append({"iteration_applied": 1,
                                "update": self.steering.to_doc()})
            self._versions = [engine_steering.version]
            self._running_version = engine_steering.version
            self._dirty = False
            self._thread = threading.Thread(
                target=self._run, args=(engine_steering,), daemon=True)
            self._thread.start()
        self._emit("status", RUNNING)

    def pause(self, wait: bool = True, timeout: float | None = 60.0) -> str:
        with self._cond:
            if self.status != RUNNING:
                raise SessionError(f"cannot pause from {self.status}")
            self._pause_requested = True
            if wait:
                # the request lands at the next boundary; a run that finishes
                # first simply supersedes it
                self._cond.wait_for(lambda: self.status != RUNNING, timeout)
            return self.status

    def resume(self) -> None:
        with self._cond:
            if self.status != PAUSED:
                raise SessionError(f"cannot resume from {self.status}")
            self.status = RUNNING
            self._cond.notify_all()
        self._emit("status", RUNNING)

    def wait_finished(self, timeout: float | None = None) -> bool:
        with self._cond:
            done = self._cond.wait_for(lambda: self.status == FINISHED, timeout)
        if self._error is not None:
            raise self._error
        return done

    # -- steering ------------------------------------------------------------

    def apply_steering_update(self, update: dict) -> int:
        """Validate and accept a steering delta; returns the version the
        engine will run it under.  Takes effect at the next boundary, or
        immediately in the CREATED/PAUSED states' next snapshot."""
        with self._cond:
            if self.status == FINISHED:
                raise SessionError("session is FINISHED")
            version = self.steering.apply_update(update)
            self._dirty = True
            return version

    # -- engine thread -------------------------------------------------------

    def _run(self, engine_steering: SteeringState) -> None:
        try:
            record = acs.run(self.instance, self.params,
                             steering=engine_steering,
                             event_sink=self._on_event,
                             boundary_hook=self._on_boundary)
        except BaseException as exc:  # surface engine failures to waiters
            with self._cond:
                self._error = exc
                self.status = FINISHED
                self._cond.notify_all()
            self._emit("status", FINISHED)
            raise
        with self._cond:
            self.best = record
            self.iteration = self.params.iterations
            self.status = FINISHED
        # persist before waking waiters so wait_finished implies files exist
        if self._persist_dir is not None:
            self.persist()
        with self._cond:
            self._cond.notify_all()
        self._emit("status", FINISHED)

    def _on_event(self, event: dict) -> None:
        with self._cond:
            self.events.append(event)
        self._emit("event", event)

    def _on_boundary(self, state: RunState) -> None:
        paused_here = False
        with self._cond:
            self.iteration = state.iteration
            self.best = state.best
            self._boundary_tau = state.pheromone.tau.copy()
            final = state.iteration >= self.params.iterations
            if self._pause_requested:
                self._pause_requested = False
                if not final:
                    self.status = PAUSED
                    paused_here = True
                    self._cond.notify_all()
        if paused_here:
            self._emit("status", PAUSED)
            with self._cond:
                self._cond.wait_for(lambda: self.status != PAUSED)
        with self._cond:
            if self._dirty:
                state.steering = self.steering.copy()
                self.script.append({"iteration_applied": state.iteration + 1,
                                    "update": self.steering.to_doc()})
                self._versions.append(state.steering.version)
                self._running_version = state.steering.version
                self._dirty = False

    # -- views ---------------------------------------------------------------

    def snapshot(self) -> dict:
        """Consistent iteration-boundary view, schema-stable for the wire."""
        with self._cond:
            tau = self._boundary_tau
            coords = self.instance.coordinates
            return {
                "session_id": self.id,
                "status": self.status,
                "iteration": int(self.iteration),
                "total_iterations": int(self.params.iterations),
                "instance": {
                    "name": self.instance.name,
                    "dimension": int(self.instance.n),
                    "coordinates": (None if coords is None
                                    else [list(c) for c in coords]),
                },
                "best": self.best.to_doc(),
                "pheromone": {
                    "tau0": float(self._tau0),
                    "min": float(tau.min()),
                    "max": float(tau.max()),
                    "matrix": tau.tolist(),
                },
                "steering": self.steering.to_doc(),
                "running_steering_version": int(self._running_version),
                "optimum": (None if self.optimum is None
                            else self.optimum.to_doc()),
                "gap_percent": self.gap_percent,
            }

    def compare_with_optimal(self, force: bool = False) -> dict:
        """Gap of the current best against the exact or provided optimum."""
        with self._cond:
            if self.status != FINISHED and not force:
                raise SessionError(
                    f"comparison requires FINISHED, session is {self.status} "
                    f"(pass force to compare a boundary state)")
            best_length = self.best.tour.length
        opt = self._provided_optimum
        if opt is None:
            try:
                opt = exact_optimum(self.instance)
            except InstanceTooLarge as exc:
                raise SessionError(f"optimum unavailable: {exc}") from exc
        gap = 100.0 * (best_length - opt.length) / opt.length
        with self._cond:
            self.optimum = opt
            self.gap_percent = gap
            refresh = self._persist_dir is not None and self.status == FINISHED
        if refresh:  # keep the on-disk result in step with the served one
            self.persist()
        return {"optimal": opt.to_doc(), "gap_percent": gap}

    def result_doc(self) -> dict:
        with self._cond:
            if self.status != FINISHED:
                raise SessionError(f"no result before FINISHED "
                                   f"(session is {self.status})")
            return build_result_doc(self.best, self.params, self._versions,
                                    self.optimum, self.gap_percent)

    def persist(self, path: str | Path | None = None) -> Path:
        path = Path(path) if path else self._persist_dir
        if path is None:
            raise ValueError("no persistence directory given")
        with self._cond:
            events = list(self.events)
            script = list(self.script)
            result = None
            if self.status == FINISHED and self._error is None:
                result = build_result_doc(self.best, self.params,
                                          self._versions, self.optimum,
                                          self.gap_percent)
        return write_session_dir(path, self.instance, self.params,
                                 events, script, result)


def create_session(instance: Instance, params: AcsParams | None = None,
                   initial_hif: float = 0.0, **kwargs) -> Session:
    return Session(instance, params, initial_hif=initial_hif, **kwargs)


def cluster_solve(instance: Instance, clusters,
                  params: AcsParams | None = None) -> Tour:
    """Solve two node clusters independently, then splice the tours.

    Every pair of removed edges (one per cluster tour) is tried with both
    reconnection orientations; the cheapest valid circuit over the full
    node set wins.
    """
    if len(clusters) != 2:
        raise ValueError(f"exactly two clusters required, got {len(clusters)}")
    parts = [sorted({int(v) for v in part}) for part in clusters]
    for part in parts:
        if len(part) < 3:
            raise ValueError(f"cluster too small: {len(part)} nodes (need >= 3)")
    if sorted(parts[0] + parts[1]) != list(range(instance.n)):
        raise ValueError("clusters must partition the node set")
    params = params if params is not None else AcsParams()
    cluster_tours = []
    for idx, part in enumerate(parts):
        nodes = np.asarray(part, dtype=np.int64)
        sub = from_matrix(f"{instance.name}:cluster{idx}",
                          instance.costs[np.ix_(nodes, nodes)])
        record = acs.run(sub, params)
        cluster_tours.append([part[v] for v in record.tour.order])
    tour_a, tour_b = cluster_tours
    best_order: list[int] | None = None
    best_length = None
    for ai in range(len(tour_a)):
        path_a = tour_a[ai + 1:] + tour_a[:ai + 1]
        for bi in range(len(tour_b)):
            path_b = tour_b[bi + 1:] + tour_b[:bi + 1]
            for candidate in (path_a + path_b, path_a + path_b[::-1]):
                length = tour_length(instance, candidate)
                if best_length is None or length < best_length:
                    best_order, best_length = candidate, length
    assert best_order is not None
    return Tour.from_order(instance, best_order)
