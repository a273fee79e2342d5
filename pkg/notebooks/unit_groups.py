"""
Unit groups of small finite rings
=================================

Which rings have every unit squaring to one? We look at Z_n, a few group
algebras and the local rings cut out by the eta ideal.
"""

import numpy as np

from deltaring import families as fam
from deltaring.ring import make_ring, power
from deltaring.units import is_delta_p, unit_exponent, units

# Z_n is Delta_2 exactly when n divides 24
good = [n for n in range(2, 101) if is_delta_p(make_ring(n), 2)[0]]
print("Delta_2 among Z_2..Z_100:", good)

# group algebras Z_n C_2; the first failing unit is the least one in canonical order
for n in (4, 8, 24):
    R = fam.group_algebra(n, [2])
    ok, w = is_delta_p(R, 2)
    if ok:
        print(f"{R.name}: every unit squares to 1")
    else:
        print(f"{R.name}: ({w})^2 = {power(w, 2)}")

# exponents of a few unit groups
for R in (make_ring(8), fam.gf(2), fam.gf(4), fam.truncated_f2(3)):
    print(f"{R.name:20s} |U| = {sum(1 for _ in units(R)):4d}  exponent {unit_exponent(R)}")

# Z4 C2^2 fails, its quotient by J does not
parent = fam.z_parent(4, 2)
Q = fam.z_family(4, 2)
print(f"{parent.name}: {parent.size} elements, Delta_2 = {is_delta_p(parent, 2)[0]}")
print(f"quotient by J: {Q.size} elements, Delta_2 = {is_delta_p(Q, 2)[0]}")

# orders of units in F2 C5, tallied with numpy
R = fam.group_algebra(2, [5])
orders = []
for u in units(R):
    k, x = 1, u
    while x != R.one:
        x, k = x * u, k + 1
    orders.append(k)
vals, counts = np.unique(orders, return_counts=True)
print("F2C5 unit orders:", dict(zip(vals.tolist(), counts.tolist())))
