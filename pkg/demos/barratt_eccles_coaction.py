"""
Barratt-Eccles chains acting on simplicial chains
=================================================

Tuples of permutations form E-infinity.  Table reduction sends them to
surjections, and interval cuts of a simplex turn those into a coaction on
normalized chains.  In degree 0 this is the iterated Alexander-Whitney map.
"""
from fractions import Fraction

from hqft import barratt_eccles as be
from hqft.chain import DegreeWindow, is_quasi_iso
from hqft.orthcat import cyclic_group
from hqft.simplicial import nerve

print("E(2) basis sizes:", [len(be.be_basis(2, d)) for d in range(5)])
print("E(3) augmentation is a quasi-iso in [0,4]:", is_quasi_iso(be.augmentation(3, 5), DegreeWindow(0, 4)).ok)

x = {((1, 2), (2, 1)): Fraction(1)}
print("\nd of (12, 21):", be.be_differential(x))
print("table reduction:", be.table_reduction(x))

X = nerve(cyclic_group(2))
s = X.nondegenerate(2)[0]
print("\nsimplex", s)
print("cup-1 coaction:", be.coaction(X, x, {s: Fraction(1)}))
e = {(be.identity_perm(2),): Fraction(1)}
print("degree 0 coaction equals Alexander-Whitney:", be.coaction(X, e, {s: Fraction(1)}) == be.iterated_aw(X, 2, s))
