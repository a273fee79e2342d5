"""
Path algebras of acyclic quivers
================================

Units of kQ are the elements whose vertex coefficients are all nonzero.
Here we check that against a full product table and sweep small quivers
for the Delta_2 property.
"""

from collections import Counter

from deltaring.path_algebra import PathAlgebra, all_quivers, brute_unit_mask, pa_is_delta_p, parse_quiver

Q = parse_quiver("3; 0->1 1->2")
alg = PathAlgebra(Q, 2)
print([p.label() for p in alg.basis])

e, a, b = alg.one, alg.edge(0), alg.edge(1)
print("(e + a0 + a1)^2 =", (e + a + b) ** 2)

# unit criterion against brute force
E = alg.elements()
mask = brute_unit_mask(alg)
print("units:", int(mask.sum()), "criterion agrees:", bool((mask == (E[:, :3] != 0).all(axis=1)).all()))

# sweep every quiver with at most 4 vertices and 4 edges
tally = Counter()
for Q in all_quivers(4, 4):
    for q in (2, 3):
        r = pa_is_delta_p(PathAlgebra(Q, q), 2)
        tally[(q, r.brute)] += 1
        assert r.agree
print(dict(tally))

# the five-vertex zigzag over F2
r = pa_is_delta_p(PathAlgebra(parse_quiver("5; 0->1 2->1 2->3 4->3"), 2), 2)
print("zigzag:", r.brute, "rank", r.ea_rank)
