"""Exact and heuristic reference solvers.

Held-Karp gives provably optimal tours for desk-scale instances (n <= 20) and
backs the "compare with optimal tour" feature; brute force double-checks it at
tiny sizes. Nearest neighbor supplies the initial heuristic solution the
colony starts from.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .instance import Instance, Tour, tour_length

HELD_KARP_MAX_N = 20
BRUTE_FORCE_MAX_N = 10

HELD_KARP = "HELD_KARP"
BRUTE_FORCE = "BRUTE_FORCE"
PROVIDED = "PROVIDED"

_INF = np.int64(1) << 62


class InstanceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class OptimalRecord:
    order: tuple[int, ...]
    length: int
    method: str

    def to_doc(self) -> dict:
        return {"order": list(self.order), "length": self.length,
                "method": self.method}

    @classmethod
    def from_doc(cls, doc: dict) -> "OptimalRecord":
        return cls(order=tuple(int(v) for v in doc["order"]),
                   length=int(doc["length"]), method=str(doc["method"]))


def save_optimum(record: OptimalRecord, path: str | Path) -> None:
    Path(path).write_text(json.dumps(record.to_doc(), sort_keys=True),
                          encoding="utf-8")


def load_optimum(path: str | Path) -> OptimalRecord:
    return OptimalRecord.from_doc(json.loads(Path(path).read_text(
        encoding="utf-8")))


def sidecar_path(instance_path: str | Path) -> Path:
    p = Path(instance_path)
    return p.with_name(p.stem + ".opt.json")


_hk_cache: dict[bytes, OptimalRecord] = {}


def exact_optimum(instance: Instance) -> OptimalRecord:
    """Minimum-length Hamiltonian circuit via Held-Karp dynamic programming.

    States are (visited subset, endpoint) pairs with node 0 fixed as the tour
    anchor; O(n^2 * 2^n) time bounds practical use to n <= 20.
    """
    n = instance.n
    if n > HELD_KARP_MAX_N:
        raise InstanceTooLarge(
            f"exact solver is limited to n <= {HELD_KARP_MAX_N}, got {n}")
    key = instance.costs.tobytes()
    cached = _hk_cache.get(key)
    if cached is not None:
        return cached

    c = instance.costs
    full = 1 << n
    # dp[mask, j] = min cost of a path that starts at 0, visits exactly the
    # nodes in mask (0 and j included), and ends at j.
    dp = np.full((full, n), _INF, dtype=np.int64)
    for j in range(1, n):
        dp[(1 << j) | 1, j] = c[0, j]

    node_bits = [1 << j for j in range(n)]
    for mask in range(3, full, 2):  # node 0 always visited
        members = [j for j in range(1, n) if mask & node_bits[j]]
        if len(members) < 2:
            continue
        js = np.array(members)
        # vectorized relaxation: for each endpoint j, min over predecessors k
        prev_masks = [mask ^ node_bits[j] for j in members]
        rows = dp[prev_masks]                       # (k, n)
        cand = rows + c[:, js].T                    # (k, n): dp[prev,k]+c[k,j]
        dp[mask, js] = cand.min(axis=1)

    full_mask = full - 1
    closing = dp[full_mask, 1:] + c[1:, 0]
    end = int(np.argmin(closing)) + 1
    best_len = int(closing[end - 1])

    # Backtrack by re-checking which predecessor achieves each dp value.
    order = [end]
    mask = full_mask
    j = end
    while mask != (1 | node_bits[j]):
        prev = mask ^ node_bits[j]
        target = dp[mask, j]
        ks = [k for k in range(1, n) if prev & node_bits[k]]
        for k in ks:
            if dp[prev, k] + c[k, j] == target:
                order.append(k)
                mask = prev
                j = k
                break
        else:  # pragma: no cover - dp table inconsistency
            raise AssertionError("backtracking failed")
    order.append(0)
    order.reverse()

    record = OptimalRecord(order=tuple(order), length=best_len,
                           method=HELD_KARP)
    assert record.length == tour_length(instance, record.order)
    _hk_cache[key] = record
    return record


def brute_force_optimum(instance: Instance) -> OptimalRecord:
    """Exhaustive minimum over all circuits, node 0 fixed, direction canonical."""
    n = instance.n
    if n > BRUTE_FORCE_MAX_N:
        raise InstanceTooLarge(
            f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    c = instance.costs
    best_len = None
    best_order = None
    dedupe = instance.symmetric  # reversal skip is only sound for symmetric costs
    for perm in itertools.permutations(range(1, n)):
        if dedupe and perm[0] > perm[-1]:
            continue
        length = c[0, perm[0]] + c[perm[-1], 0]
        prev = perm[0]
        for node in perm[1:]:
            length += c[prev, node]
            prev = node
        if best_len is None or length < best_len:
            best_len = length
            best_order = (0,) + perm
    return OptimalRecord(order=best_order, length=int(best_len),
                         method=BRUTE_FORCE)


def nearest_neighbor_tour(instance: Instance, start: int = 0) -> Tour:
    """Greedy tour: always move to the cheapest unvisited node, ties to the
    lowest index."""
    n = instance.n
    if not 0 <= start < n:
        raise ValueError(f"start node {start} out of range 0..{n - 1}")
    c = instance.costs
    visited = np.zeros(n, dtype=bool)
    order = [start]
    visited[start] = True
    current = start
    for _ in range(n - 1):
        dists = np.where(visited, _INF, c[current])
        current = int(np.argmin(dists))  # argmin takes the lowest index on ties
        order.append(current)
        visited[current] = True
    return Tour.from_order(instance, order)


def _orientation(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _properly_intersect(p1, p2, p3, p4) -> bool:
    d1 = _orientation(p3, p4, p1)
    d2 = _orientation(p3, p4, p2)
    d3 = _orientation(p1, p2, p3)
    d4 = _orientation(p1, p2, p4)
    return ((d1 > 0) != (d2 > 0)) and (d1 != 0) and (d2 != 0) \
        and ((d3 > 0) != (d4 > 0)) and (d3 != 0) and (d4 != 0)


def count_crossings(instance: Instance, tour: Tour) -> int:
    """Pairs of non-adjacent tour edges whose segments properly intersect."""
    if instance.coordinates is None:
        raise ValueError("crossing count needs node coordinates")
    coords = instance.coordinates
    n = instance.n
    order = tour.order
    edges = [(coords[order[k]], coords[order[(k + 1) % n]]) for k in range(n)]
    crossings = 0
    for a in range(n):
        for b in range(a + 1, n):
            if b == a + 1 or (a == 0 and b == n - 1):
                continue  # adjacent edges share a node
            if _properly_intersect(*edges[a], *edges[b]):
                crossings += 1
    return crossings
