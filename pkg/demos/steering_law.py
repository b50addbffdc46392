#!/usr/bin/env python3
"""Monte-Carlo check of the human-steered transition law on the demo matrix.

The 5-node demo instance is tuned so that an ant standing at node 2 (call
it C) sees colony probabilities {A: 0.3, B: 0.4, D: 0.1, E: 0.2} under
flat trails and beta = 1.  Suggesting B with 0.5 and E with 0.1 at full
impact reshapes that to {B: 0.5, E: 0.1, A: 0.3, D: 0.1}: a human miss
(probability 0.4) excludes B and E and renormalizes the rest.
"""

import numpy as np

from antsteer import AcsParams, SteeringState, load_bundled, steered_select_next
from antsteer.acs import heuristic_matrix, init_pheromone

inst = load_bundled("demo5")
eta = heuristic_matrix(inst)
pheromone = init_pheromone(5, 1)
pheromone.tau[:] = 1.0
params = AcsParams(q0=0.0, beta=1.0)  # fully probabilistic, flat trails

names = "ABCDE"
available = [0, 1, 3, 4]

for hif in (0.0, 0.5, 1.0):
    steering = SteeringState(5, hif=hif)
    steering.set_him_entry(2, 1, 0.5)  # C -> B
    steering.set_him_entry(2, 4, 0.1)  # C -> E

    rng = np.random.default_rng(7)
    counts = np.zeros(5)
    trials = 200_000
    for _ in range(trials):
        counts[steered_select_next(2, available, steering, pheromone.tau,
                                   eta, params, rng)] += 1

    dist = steering.effective_human_distribution(2, available)
    human = {names[j]: p for j, p in dist.items()}
    print(f"hif={hif:.1f}  scaled human mass {human}")
    for j in available:
        print(f"  P({names[j]}) = {counts[j] / trials:.4f}")
    print()

print("hif 0 reproduces the colony law exactly; hif 1 pins B and E to the")
print("requested 0.5 / 0.1 and splits the missing 0.4 over A and D as 3:1.")
