#!/usr/bin/env python3
# Assignment matrices spread k input functions over n agents.  Two knobs
# matter: the sparsity parameter (how many agents you must gather before
# every function is represented) and error-correction capability (whether
# corrupted coordinates of a gradient codeword can be undone).

import numpy as np

from byzopt.assignment import (
    AssignmentMatrix,
    construct_sparsest,
    decoding_capability,
    identity,
    repetition,
    sparsity_by_definition,
    sparsity_by_row_zeros,
)

a = construct_sparsest(4, 5, 2, pattern=[(1,), (2,), (3,), (4,)])
print("sparsest 4x5 matrix with one zero per row:")
print(np.array_str(a.entries, precision=3))
print("sparsity by subset enumeration:", sparsity_by_definition(a).value)
print("sparsity by row-zero counting:  ", sparsity_by_row_zeros(a).value)

i3 = identity(3)
rep = sparsity_by_definition(i3)
print("\nidentity 3x3: sparsity", rep.value,
      "(witness columns whose sum misses a coordinate:", rep.witness, ")")

# Error correction: a 5-copy repetition code fixes up to 2 corrupted
# coordinates; with only 2 copies even one corruption is ambiguous.
print("\nrepetition(1, 5) corrects f=2:", decoding_capability(repetition(1, 5), 2))
print("repetition(1, 2) corrects f=1:", decoding_capability(repetition(1, 2), 1))

# Two stacked 3-copy blocks: any 2 erasures leave every block represented.
blocks = repetition(2, 3)
print("two 3-copy blocks correct f=1:", decoding_capability(blocks, 1))
print("  ... but not f=2:", decoding_capability(blocks, 2))
