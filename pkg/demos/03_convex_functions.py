#!/usr/bin/env python3
# The admissible input functions: convex, Lipschitz, with compact optimum
# intervals.  Piecewise-linear kinds admit an exact breakpoint-scan argmin;
# the smooth kind exists for the gradient-decoding engine.

from byzopt.functions import (
    AbsShift,
    FlatBottom,
    FnCollection,
    SmoothAbs,
    argmin_interval,
    classify_redundancy,
    optimum_set_global,
)

v = AbsShift(2.0)
print("|x-2| at 5:", v.value(5.0), " subgradient:", v.subgrad(5.0))
print("subgradient at the kink (midpoint rule):", v.subgrad(2.0),
      " left:", v.subgrad(2.0, 'left'), " right:", v.subgrad(2.0, 'right'))

print("\naverage of |x| and |x-4| minimized on:",
      argmin_interval([AbsShift(0.0), AbsShift(4.0)]))
print("flat bottoms [0,2] and [1,3] average to:",
      argmin_interval([FlatBottom(0, 2), FlatBottom(1, 3)]))

shared = FnCollection((FlatBottom(-1, 0), FlatBottom(0, 1)))
print("\nintervals [-1,0] and [0,1]:", classify_redundancy(shared).name)
opt = optimum_set_global(shared)
print("global optimum:", (opt.lo, opt.hi), " exact:", opt.exact)

disjoint = FnCollection((FlatBottom(0, 1), FlatBottom(2, 3)))
opt = optimum_set_global(disjoint)
print("\ndisjoint intervals:", classify_redundancy(disjoint).name,
      "-> hull bound", (opt.lo, opt.hi), " exact:", opt.exact)
print("true optimum of the average:", argmin_interval(list(disjoint.members)))

s = SmoothAbs(1.0, 0.25)
print("\nsmooth |x-1|: gradient at 1:", s.subgrad(1.0),
      " far away:", round(s.subgrad(50.0), 6))
