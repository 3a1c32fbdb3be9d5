#!/usr/bin/env python3
# Trimmed-mean consensus with subgradient steps: five agents on a complete
# graph, one of them lying loudly, the honest four pulled into the shared
# optimum interval [0.4, 0.6] of their assigned function mixtures.

import numpy as np

from byzopt.adversaries import Constant
from byzopt.assignment import construct_sparsest
from byzopt.consensus import Scenario, diagnostics, run_scenario, trimmed_update
from byzopt.functions import FlatBottom, FnCollection, argmin_interval
from byzopt.graphs import FaultySet, complete
from byzopt.schedules import harmonic

# the update rule in isolation: drop extremes, average survivors, step
new_x, kept = trimmed_update(4.0, [(1, 1.0), (2, 5.0), (3, 9.0)],
                             f=1, d_self=0.0, alpha=0.1)
print("trim {1, 5, 9} around 4 with f=1: kept senders", kept, "-> new value", new_x)

functions = FnCollection((
    FlatBottom(0.0, 0.6), FlatBottom(0.4, 1.0),
    FlatBottom(-0.2, 0.6), FlatBottom(0.4, 0.8),
))
lo, hi = argmin_interval(list(functions.members))
print("\nshared optimum of the four inputs:", (lo, hi))

scenario = Scenario(
    graph=complete(5),
    faulty=FaultySet(frozenset({5}), 1),
    adversary=Constant(1e6),
    assignment=construct_sparsest(4, 5, 2, pattern=[(1,), (2,), (3,), (4,)]),
    functions=functions,
    schedule=harmonic(1.0),
    x0=(-0.8, 1.9, 0.3, 1.2, 0.0),
    rounds=20000,
    seed=7,
)
trace = run_scenario(scenario)
diag = diagnostics(trace, lo, hi)

print("\nround   spread       dist-to-optimum")
for t in (0, 1, 10, 100, 1000, 20000):
    print(f"{t:6d}  {diag.spread[t]:.3e}   {diag.dist_to_optimum[t]:.3e}")
print("\nfinal honest estimates:", np.array_str(trace.states[-1, :4], precision=6))
