#!/usr/bin/env python3
# After a run, each round's honest-state evolution is a row-stochastic
# matrix (kept faulty values re-expressed over honest brackets).  Backward
# products of these matrices mix toward a rank-one limit; this script
# reconstructs everything and checks the mixing bounds numerically.

import numpy as np

from byzopt.adversaries import Constant
from byzopt.analysis import (
    build_product_record,
    build_transition_record,
    check_lemma_lb,
    check_rate,
    check_uub,
    find_reduced_witness,
    matrix_properties,
    reconstruction_residuals,
    y_sequence,
)
from byzopt.assignment import construct_sparsest
from byzopt.consensus import Scenario, run_scenario
from byzopt.functions import FlatBottom, FnCollection
from byzopt.graphs import FaultySet, complete
from byzopt.schedules import harmonic

scenario = Scenario(
    graph=complete(5),
    faulty=FaultySet(frozenset({5}), 1),
    adversary=Constant(0.5),     # an in-range lie that sometimes survives the trim
    assignment=construct_sparsest(4, 5, 2, pattern=[(1,), (2,), (3,), (4,)]),
    functions=FnCollection((FlatBottom(0.0, 0.6), FlatBottom(0.4, 1.0),
                            FlatBottom(-0.2, 0.6), FlatBottom(0.4, 0.8))),
    schedule=harmonic(1.0),
    x0=(-0.8, 1.9, 0.3, 1.2, 0.0),
    rounds=1100,
    seed=5,
)
trace = run_scenario(scenario)
record = build_transition_record(trace)

print("round-0 transition matrix over the four honest agents:")
print(np.array_str(record.matrices[0], precision=4))
print("max reconstruction residual:", reconstruction_residuals(record).max())
print("smallest positive weight (beta):", record.beta)
print("structural properties:", matrix_properties(record).passed)

h = find_reduced_witness(record.matrices[0], record.beta, scenario.graph,
                         scenario.faulty, record.non_faulty)
print("round-0 reduced-graph witness edges:", sorted(h.edges))

product = build_product_record(record, pi_max_r=40)
print(f"\nreduced graphs tau={product.tau}, mixing horizon nu={product.nu}, "
      f"gamma={product.gamma}")
print("row limit pi(0):", np.array_str(product.pi[0], precision=5),
      " (diameter", f"{product.pi_diameter[0]:.1e})")

print("\nnu-step column mass:", check_lemma_lb(product, 0).detail)
print("rate check at (t=20, r=0):", check_rate(product, 20, 0).detail)

y, dev = y_sequence(product, 40)
print(f"\nfrozen-subgradient value y(0)={y[0]:.5f}, y(40)={y[40]:.5f} "
      f"(recurrence deviation {dev:.1e})")
print("consensus-distance bound at t=40:", check_uub(product, y, 40).detail)
