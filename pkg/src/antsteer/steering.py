"""Human steering state: per-edge suggestion probabilities, impact factor, blocks.

The interaction matrix holds directed probabilities him[i][j] that an ant
standing at i follows the human to j; a global impact factor hif in [0, 1]
scales all of them.  Selection walks the cumulative human intervals first
(in ascending target order); a miss excludes the human-targeted nodes and
renormalizes the colony's own transition weights over the remainder.
Blocked directed edges are excluded from transitions and from deposits.

Steering never touches pheromone: its influence ends at the decision.
"""

from __future__ import annotations

import numpy as np

from antsteer.acs import EventSink, InfeasibleStepError, _weights_row, select_from_row

ROW_SUM_TOL = 1e-12

_DELTA_KEYS = {"hif", "entries", "block", "unblock"}


class SteeringError(ValueError):
    """Raised when a steering mutation violates an invariant."""


def _check_pair(n: int, i, j) -> tuple[int, int]:
    i, j = int(i), int(j)
    if not (0 <= i < n and 0 <= j < n):
        raise SteeringError(f"edge ({i}, {j}) out of range for {n} nodes")
    if i == j:
        raise SteeringError(f"diagonal entry ({i}, {i}) is forbidden")
    return i, j


def _check_prob(p) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise SteeringError(f"probability {p!r} outside [0, 1]")
    return p


def _check_hif(value) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise SteeringError(f"hif {value!r} outside [0, 1]")
    return value


class SteeringState:
    """Mutable human-interaction state with a monotone version counter.

    Every accepted mutation bumps `version`; rejected ones leave the state
    bit-identical.  Mutate running sessions through their update channel,
    not by poking this object directly.
    """

    def __init__(self, n: int, hif: float = 0.0):
        if n < 3:
            raise SteeringError(f"need at least 3 nodes, got {n}")
        self.n = n
        self.him = np.zeros((n, n), dtype=np.float64)
        self.hif = _check_hif(hif)
        self.blocked = np.zeros((n, n), dtype=bool)
        self.version = 0
        self._blocked_count = 0

    # -- mutations ---------------------------------------------------------

    def set_him_entry(self, i: int, j: int, p: float) -> int:
        i, j = _check_pair(self.n, i, j)
        p = _check_prob(p)
        row_sum = self.him[i].sum() - self.him[i, j] + p
        if row_sum > 1.0 + ROW_SUM_TOL:
            raise SteeringError(f"row {i} would sum to {row_sum:.6g}, exceeding 1")
        self.him[i, j] = p
        self.version += 1
        return self.version

    def set_hif(self, value: float) -> int:
        self.hif = _check_hif(value)
        self.version += 1
        return self.version

    def block_edge(self, i: int, j: int) -> int:
        i, j = _check_pair(self.n, i, j)
        if not self.blocked[i, j]:
            self.blocked[i, j] = True
            self._blocked_count += 1
        self.version += 1
        return self.version

    def unblock_edge(self, i: int, j: int) -> int:
        i, j = _check_pair(self.n, i, j)
        if self.blocked[i, j]:
            self.blocked[i, j] = False
            self._blocked_count -= 1
        self.version += 1
        return self.version

    def apply_update(self, doc: dict) -> int:
        """Apply a delta document atomically; one version bump per batch.

        Keys: hif (number), entries ([{from, to, p}], p=0 clears), block and
        unblock ([{from, to}]).  Row sums are validated on the final state,
        so one batch may move mass within a row.  Rejection leaves the state
        untouched.
        """
        unknown = sorted(set(doc) - _DELTA_KEYS)
        if unknown:
            raise SteeringError(f"unknown update keys: {', '.join(unknown)}")
        him = self.him.copy()
        blocked = self.blocked.copy()
        hif = self.hif
        if "hif" in doc:
            hif = _check_hif(doc["hif"])
        for entry in doc.get("entries", ()):
            i, j = _check_pair(self.n, entry["from"], entry["to"])
            him[i, j] = _check_prob(entry["p"])
        for edge in doc.get("block", ()):
            i, j = _check_pair(self.n, edge["from"], edge["to"])
            blocked[i, j] = True
        for edge in doc.get("unblock", ()):
            i, j = _check_pair(self.n, edge["from"], edge["to"])
            blocked[i, j] = False
        sums = him.sum(axis=1)
        bad = np.flatnonzero(sums > 1.0 + ROW_SUM_TOL)
        if bad.size:
            raise SteeringError(
                f"row {int(bad[0])} would sum to {sums[bad[0]]:.6g}, exceeding 1")
        self.him = him
        self.blocked = blocked
        self.hif = hif
        self._blocked_count = int(blocked.sum())
        self.version += 1
        return self.version

    # -- views -------------------------------------------------------------

    def copy(self) -> "SteeringState":
        dup = SteeringState.__new__(SteeringState)
        dup.n = self.n
        dup.him = self.him.copy()
        dup.hif = self.hif
        dup.blocked = self.blocked.copy()
        dup.version = self.version
        dup._blocked_count = self._blocked_count
        return dup

    def to_doc(self) -> dict:
        entries = [{"from": int(i), "to": int(j), "p": float(self.him[i, j])}
                   for i, j in np.argwhere(self.him > 0.0)]
        blocked = [{"from": int(i), "to": int(j)}
                   for i, j in np.argwhere(self.blocked)]
        return {"hif": float(self.hif), "entries": entries,
                "blocked": blocked, "version": int(self.version)}

    @classmethod
    def from_doc(cls, doc: dict, n: int) -> "SteeringState":
        state = cls(n, hif=doc.get("hif", 0.0))
        for entry in doc.get("entries", ()):
            i, j = _check_pair(n, entry["from"], entry["to"])
            state.him[i, j] = _check_prob(entry["p"])
        sums = state.him.sum(axis=1)
        bad = np.flatnonzero(sums > 1.0 + ROW_SUM_TOL)
        if bad.size:
            raise SteeringError(
                f"row {int(bad[0])} sums to {sums[bad[0]]:.6g}, exceeding 1")
        for edge in doc.get("blocked", ()):
            i, j = _check_pair(n, edge["from"], edge["to"])
            state.blocked[i, j] = True
        state._blocked_count = int(state.blocked.sum())
        state.version = int(doc.get("version", 0))
        return state

    def effective_human_distribution(self, i: int, available) -> dict[int, float]:
        """Scaled human mass at node i: {j: hif * him[i][j]} over available.

        Zero-mass targets are dropped, so hif = 0 yields an empty mapping
        and the selection below consumes no extra randomness (exact
        equivalence with the unsteered rule).
        """
        out: dict[int, float] = {}
        if self.hif <= 0.0:
            return out
        for j in sorted(int(a) for a in available):
            if self.him[i, j] > 0.0 and not self.blocked[i, j]:
                out[j] = float(self.hif * self.him[i, j])
        return out

    # -- selection ---------------------------------------------------------

    def pick(self, i: int, available: np.ndarray, choice_row: np.ndarray,
             q0: float, rng: np.random.Generator,
             aux_log: EventSink | None = None) -> int:
        """Steered next-node choice.  `available` ascending, `choice_row`
        the full tau^alpha * eta^beta row of node i.

        Draw order is load-bearing for replay: one uniform for the human
        interval walk (skipped entirely when no human mass is reachable),
        then the colony rule's own draws.
        """
        if self._blocked_count:
            allowed = available[~self.blocked[i, available]]
            if allowed.size == 0:
                raise InfeasibleStepError(i)
        else:
            allowed = available
        if self.hif > 0.0:
            hrow = self.him[i, allowed]
            mask = hrow > 0.0
            if mask.any():
                targets = allowed[mask]
                probs = self.hif * hrow[mask]
                cum = np.cumsum(probs)
                u = rng.random()
                if u < cum[-1]:
                    return int(targets[int(np.searchsorted(cum, u, side="right"))])
                rest = allowed[~mask]
                if rest.size == 0:
                    # every admissible node is human-targeted; fall back to
                    # the renormalized human weights so the ant can move on
                    w = np.cumsum(probs / probs.sum())
                    k = int(np.searchsorted(w, rng.random(), side="right"))
                    j = int(targets[min(k, targets.size - 1)])
                    if aux_log is not None:
                        aux_log({"type": "fallback", "node": int(i), "chosen": j})
                    return j
                return select_from_row(rest, choice_row[rest], q0, rng)
        return select_from_row(allowed, choice_row[allowed], q0, rng)


def steered_select_next(i: int, available, state: SteeringState, tau: np.ndarray,
                        eta: np.ndarray, params, rng: np.random.Generator,
                        aux_log: EventSink | None = None) -> int:
    """Convenience wrapper over SteeringState.pick for standalone use."""
    avail = np.unique(np.asarray(list(available), dtype=np.int64))
    if avail.size == 0:
        raise ValueError("available set is empty")
    row = _weights_row(tau, eta, i, params.alpha, params.beta)
    return state.pick(i, avail, row, params.q0, rng, aux_log)
