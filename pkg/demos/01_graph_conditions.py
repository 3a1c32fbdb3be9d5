#!/usr/bin/env python3
# Which communication graphs can tolerate Byzantine agents at all?
#
# A graph survives f faults when every "reduced graph" (drop any candidate
# faulty set, then up to f more incoming edges per node) still has a large
# source component: a set of nodes that can reach everyone else.

from byzopt.graphs import (
    FaultySet,
    check_condition1,
    check_condition2,
    complete,
    enumerate_reduced_graphs,
    source_component,
    star_out,
)

k4 = complete(4)
print("K4, one tolerated fault:")
print("  reduced graphs for F={4}:",
      len(enumerate_reduced_graphs(k4, FaultySet(frozenset({4}), 1))))
print("  source of K4 itself:", sorted(source_component(k4)))

res = check_condition1(k4, f=1, s=2)
print("  source-component condition (f=1, s=2):", res.holds)
print("  partition condition (f=1):", check_condition2(k4, 1).holds)

# A star pointing outward fails immediately: leaves cannot reach anyone.
star = star_out(4)
res = check_condition1(star, f=1, s=2)
print("\nout-directed star on 4 nodes:")
print("  condition holds:", res.holds)
print("  witness faulty set:", sorted(res.witness_faulty.members))
print("  witness removed edges:",
      {k: sorted(v) for k, v in res.witness_graph.removed_edges.items()})
print("  witness source component:", sorted(res.witness_source))

# The minimum complete graph for sparsity s and f faults has s + 2f nodes
# (when s >= f+1); one node fewer and the condition breaks.
for s, f in [(2, 1), (3, 1), (3, 2)]:
    n = s + 2 * f
    ok = check_condition1(complete(n), f, s).holds
    smaller = check_condition1(complete(n - 1), f, s).holds
    print(f"\nK{n} with f={f}, s={s}: holds={ok};  K{n - 1}: holds={smaller}")
