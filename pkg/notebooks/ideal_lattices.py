"""
Ideal lattices and antichains
=============================

Ideals of F2[x1..xl]/(xi^2), their Hasse diagrams, and the antichain
counts that the monomial ideals line up with.
"""

from deltaring.families import truncated_f2
from deltaring.lattice import (
    count_antichains,
    enumerate_ideals,
    export_dot,
    ideal_label,
    is_monomial_ideal,
)

for l in (1, 2, 3):
    rep = enumerate_ideals(truncated_f2(l))
    mono = sum(1 for I in rep.ideals if is_monomial_ideal(I))
    print(f"l={l}: {rep.count} ideals, {len(rep.covers)} covers, {mono} monomial")

# l = 2 in full
rep = enumerate_ideals(truncated_f2(2))
for I in rep.ideals:
    print(f"  size {I.size:2d}  {ideal_label(I)}")

# render with: dot -Tpng lattice_l2.dot -o lattice_l2.png
with open("lattice_l2.dot", "w") as fh:
    fh.write(export_dot(rep))

# the monomial ideals are counted by antichains of subsets
print([count_antichains(l) for l in range(1, 7)])
