"""Ant Colony System core: pheromone state, tour construction, updates.

Next-node selection uses the pseudo-random-proportional rule: a uniform
draw q <= q0 picks the argmax of tau^alpha * eta^beta deterministically,
otherwise the ant samples from the normalized weights.  Each ant deposits
a constant amount derived from the initial heuristic tour (local update);
only the best-so-far circuit is reinforced globally.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import TYPE_CHECKING, Callable, Optional

import numpy as np

from antsteer.instance import Instance, Tour, tour_length
from antsteer.oracle import nearest_neighbor_tour

if TYPE_CHECKING:
    from antsteer.steering import SteeringState

EventSink = Callable[[dict], None]


class InfeasibleStepError(RuntimeError):
    """No admissible next node exists (every remaining edge is blocked)."""

    def __init__(self, node: int):
        super().__init__(f"no admissible move out of node {node}")
        self.node = node


@dataclass
class AcsParams:
    """Run parameters.  Defaults follow the reference configuration."""

    ants: int = 30
    iterations: int = 250
    alpha: float = 1.0
    beta: float = 3.0
    rho: float = 0.1
    q0: float = 0.9
    seed: int = 0
    use_two_opt: bool = False
    sigma: float | None = None  # accepted for config compatibility, unused

    def validate(self) -> None:
        if not isinstance(self.ants, int) or self.ants < 1:
            raise ValueError(f"ants must be a positive integer, got {self.ants!r}")
        if not isinstance(self.iterations, int) or self.iterations < 1:
            raise ValueError(
                f"iterations must be a positive integer, got {self.iterations!r}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha!r}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must be in [0, 1], got {self.rho!r}")
        if not 0.0 <= self.q0 <= 1.0:
            raise ValueError(f"q0 must be in [0, 1], got {self.q0!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")

    def to_doc(self) -> dict:
        return {
            "ants": self.ants,
            "iterations": self.iterations,
            "alpha": self.alpha,
            "beta": self.beta,
            "rho": self.rho,
            "q0": self.q0,
            "seed": self.seed,
            "use_two_opt": self.use_two_opt,
            "sigma": self.sigma,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "AcsParams":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ValueError(f"unknown parameter keys: {', '.join(unknown)}")
        params = cls(**doc)
        params.validate()
        return params


@dataclass
class PheromoneMatrix:
    """Trail intensities.  Entries stay strictly positive for the whole run."""

    tau: np.ndarray
    tau0: float


@dataclass
class SolutionRecord:
    tour: Tour
    iteration_found: int
    ant_index: int

    def to_doc(self) -> dict:
        doc = self.tour.to_doc()
        doc["iteration_found"] = self.iteration_found
        doc["ant_index"] = self.ant_index
        return doc


def init_pheromone(n: int, pbest_cost: int) -> PheromoneMatrix:
    """Uniform initial trails 1/(n * pbest_cost) on every edge."""
    if n < 3:
        raise ValueError(f"need at least 3 nodes, got {n}")
    if pbest_cost <= 0:
        raise ValueError(f"pbest_cost must be positive, got {pbest_cost}")
    tau0 = 1.0 / (n * pbest_cost)
    return PheromoneMatrix(tau=np.full((n, n), tau0, dtype=np.float64), tau0=tau0)


def heuristic_matrix(instance: Instance) -> np.ndarray:
    # eta = 1/c; zero-cost edges (duplicate points) fall back to 1/1 so the
    # matrix stays positive.
    return 1.0 / np.maximum(instance.costs, 1)


def _weights_row(tau: np.ndarray, eta: np.ndarray, i: int,
                 alpha: float, beta: float) -> np.ndarray:
    trow = tau[i] if alpha == 1.0 else tau[i] ** alpha
    return trow * eta[i] ** beta


def transition_weights(i: int, available, tau: np.ndarray, eta: np.ndarray,
                       alpha: float, beta: float) -> np.ndarray:
    """Normalized transition probabilities over `available`, in given order."""
    avail = np.asarray(list(available), dtype=np.int64)
    if avail.size == 0:
        raise ValueError("available set is empty")
    if i in avail:
        raise ValueError(f"current node {i} cannot be a candidate")
    w = _weights_row(tau, eta, i, alpha, beta)[avail]
    total = w.sum()
    assert total > 0.0, "positivity invariants forbid an all-zero weight row"
    return w / total


def select_from_row(candidates: np.ndarray, weights: np.ndarray, q0: float,
                    rng: np.random.Generator) -> int:
    """Pseudo-random-proportional pick over an ascending candidate array."""
    q = rng.random()
    if q <= q0:
        # ties resolve to the lowest node index (argmax returns the first max)
        return int(candidates[int(np.argmax(weights))])
    total = weights.sum()
    assert total > 0.0
    cum = np.cumsum(weights / total)
    u = rng.random()
    k = int(np.searchsorted(cum, u, side="right"))
    return int(candidates[min(k, candidates.size - 1)])


def select_next_acs(i: int, available, tau: np.ndarray, eta: np.ndarray,
                    params: AcsParams, rng: np.random.Generator) -> int:
    avail = np.unique(np.asarray(list(available), dtype=np.int64))
    if avail.size == 0:
        raise ValueError("available set is empty")
    row = _weights_row(tau, eta, i, params.alpha, params.beta)
    return select_from_row(avail, row[avail], params.q0, rng)


def construct_solution(instance: Instance, start: int, pheromone: PheromoneMatrix,
                       eta: np.ndarray, params: AcsParams, rng: np.random.Generator,
                       steering: Optional["SteeringState"] = None,
                       aux_log: EventSink | None = None) -> Tour:
    """Build one Hamiltonian circuit by repeated next-node selection.

    Visited nodes are locked immediately.  With `steering` present every
    step goes through the human-aware rule; otherwise this is plain ACS.
    Raises InfeasibleStepError when edge blocks make a step impossible.
    """
    n = instance.n
    if not 0 <= start < n:
        raise ValueError(f"start node {start} out of range")
    tau = pheromone.tau
    trail = tau if params.alpha == 1.0 else tau ** params.alpha
    choice = trail * eta ** params.beta
    order = np.empty(n, dtype=np.int64)
    visited = np.zeros(n, dtype=bool)
    order[0] = start
    visited[start] = True
    cur = start
    for pos in range(1, n):
        avail = np.flatnonzero(~visited)
        if steering is not None:
            cur = steering.pick(cur, avail, choice[cur], params.q0, rng, aux_log)
        else:
            cur = select_from_row(avail, choice[cur, avail], params.q0, rng)
        order[pos] = cur
        visited[cur] = True
    return Tour.from_order(instance, order)


def _tour_edges(order: np.ndarray, symmetric: bool,
                blocked: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
    # directed edge endpoints of the circuit; both directions when symmetric
    a = np.asarray(order, dtype=np.int64)
    b = np.roll(a, -1)
    if symmetric:
        rows = np.concatenate([a, b])
        cols = np.concatenate([b, a])
    else:
        rows, cols = a, b
    if blocked is not None and blocked.any():
        keep = ~blocked[rows, cols]
        rows, cols = rows[keep], cols[keep]
    return rows, cols


def local_update(pheromone: PheromoneMatrix, edge: tuple[int, int], rho: float,
                 l_initial: int, symmetric: bool = True) -> None:
    """tau <- (1 - rho) tau + rho / (n * l_initial) on one edge."""
    if l_initial <= 0:
        raise ValueError(f"l_initial must be positive, got {l_initial}")
    n = pheromone.tau.shape[0]
    deposit = 1.0 / (n * l_initial)
    i, j = edge
    tau = pheromone.tau
    tau[i, j] = (1.0 - rho) * tau[i, j] + rho * deposit
    if symmetric:
        tau[j, i] = (1.0 - rho) * tau[j, i] + rho * deposit


def local_update_tour(pheromone: PheromoneMatrix, order, rho: float, l_initial: int,
                      symmetric: bool = True, blocked: np.ndarray | None = None) -> None:
    """Apply the local rule to every edge of a completed tour at once."""
    if l_initial <= 0:
        raise ValueError(f"l_initial must be positive, got {l_initial}")
    tau = pheromone.tau
    deposit = 1.0 / (tau.shape[0] * l_initial)
    rows, cols = _tour_edges(order, symmetric, blocked)
    tau[rows, cols] = (1.0 - rho) * tau[rows, cols] + rho * deposit


def global_update(pheromone: PheromoneMatrix, best_tour: Tour, rho: float,
                  symmetric: bool = True, blocked: np.ndarray | None = None) -> None:
    """tau <- (1 - rho) tau + rho / L_best, on best-tour edges only."""
    deposit = 1.0 / best_tour.length
    tau = pheromone.tau
    rows, cols = _tour_edges(np.asarray(best_tour.order), symmetric, blocked)
    tau[rows, cols] = (1.0 - rho) * tau[rows, cols] + rho * deposit


def two_opt(instance: Instance, tour: Tour) -> Tour:
    """First-improvement 2-opt: reverse a segment while it strictly shortens."""
    n = instance.n
    order = np.array(tour.order, dtype=np.int64)
    if n < 4:
        return tour
    c = instance.costs
    length = tour.length
    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                if i == 0 and j == n - 1:
                    continue  # same pair of adjacent edges, null move
                if instance.symmetric:
                    a, b = order[i], order[i + 1]
                    e, f = order[j], order[(j + 1) % n]
                    delta = int(c[a, e]) + int(c[b, f]) - int(c[a, b]) - int(c[e, f])
                    if delta < 0:
                        order[i + 1:j + 1] = order[i + 1:j + 1][::-1]
                        length += delta
                        improved = True
                        break
                else:
                    # asymmetric costs change every inner edge; re-evaluate
                    cand = order.copy()
                    cand[i + 1:j + 1] = cand[i + 1:j + 1][::-1]
                    cand_len = tour_length(instance, cand)
                    if cand_len < length:
                        order, length = cand, cand_len
                        improved = True
                        break
            if improved:
                break
    return Tour.from_order(instance, order)


class RunState:
    """Mutable engine view handed to the boundary hook between iterations.

    `iteration` counts completed iterations.  The hook may replace
    `steering` with a fresh copy; the next iteration picks it up.
    """

    def __init__(self, instance: Instance, params: AcsParams,
                 pheromone: PheromoneMatrix, eta: np.ndarray, l_initial: int,
                 best: SolutionRecord, steering: Optional["SteeringState"]):
        self.instance = instance
        self.params = params
        self.pheromone = pheromone
        self.eta = eta
        self.l_initial = l_initial
        self.best = best
        self.steering = steering
        self.iteration = 0


def run(instance: Instance, params: AcsParams,
        steering: Optional["SteeringState"] = None,
        event_sink: EventSink | None = None,
        boundary_hook: Callable[[RunState], None] | None = None) -> SolutionRecord:
    """Execute the full run loop and return the best-so-far record.

    Per iteration: each ant draws its start node and constructs a tour from
    a private substream (seed xor (iteration * ants + ant)), deposits the
    local update, and challenges the incumbent (ties replace).  After the
    global update an event line {iteration, best_length, improved,
    steering_version} is emitted and the boundary hook runs; that is the
    only point where steering swaps take effect.  Infeasible constructions
    are logged and discarded, never raised.
    """
    params.validate()
    n = instance.n
    nn = nearest_neighbor_tour(instance)
    l_initial = nn.length
    pheromone = init_pheromone(n, l_initial)
    eta = heuristic_matrix(instance)
    state = RunState(instance, params, pheromone, eta, l_initial,
                     SolutionRecord(nn, 0, -1), steering)
    m = params.ants
    for it0 in range(params.iterations):
        it = it0 + 1
        before = state.best.tour.length
        blocked = state.steering.blocked if state.steering is not None else None
        for k in range(m):
            rng = np.random.Generator(np.random.PCG64(params.seed ^ (it0 * m + k)))
            start = int(rng.integers(n))
            aux = None
            if event_sink is not None:
                aux = lambda ev, _it=it, _k=k: event_sink(
                    {**ev, "iteration": _it, "ant": _k})
            try:
                tour = construct_solution(instance, start, pheromone, eta,
                                          params, rng, state.steering, aux)
            except InfeasibleStepError as exc:
                if event_sink is not None:
                    event_sink({"type": "infeasible", "iteration": it,
                                "ant": k, "node": exc.node})
                continue
            if params.use_two_opt:
                tour = two_opt(instance, tour)
            local_update_tour(pheromone, tour.order, params.rho, l_initial,
                              instance.symmetric, blocked)
            if tour.length <= state.best.tour.length:
                state.best = SolutionRecord(tour, it, k)
        global_update(pheromone, state.best.tour, params.rho,
                      instance.symmetric, blocked)
        state.iteration = it
        if event_sink is not None:
            event_sink({
                "iteration": it,
                "best_length": int(state.best.tour.length),
                "improved": bool(state.best.tour.length < before),
                "steering_version": state.steering.version
                if state.steering is not None else 0,
            })
        if boundary_hook is not None:
            boundary_hook(state)
    return state.best
