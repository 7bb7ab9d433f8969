"""
Components of the QFT operad
============================

Operations are classes of (permutation, tuple of morphisms) under the
swaps that orthogonality allows.  On a one-object category the two extreme
relations give the commutative and the associative operad.
"""
import math

from hqft.operads import QftOperad
from hqft.orthcat import max_orthogonality, min_orthogonality, point_category
from hqft.workspace import load

# One object, one morphism: everything orthogonal collapses each arity to a point,
# nothing orthogonal keeps every ordering apart.
Com = QftOperad(max_orthogonality(point_category()))
As = QftOperad(min_orthogonality(point_category()))
for n in range(6):
    prof = (("*",) * n, "*")
    print(f"arity {n}: max relation {Com.dim(prof)}, empty relation {As.dim(prof)} (n! = {math.factorial(n)})")

# The pair category a -> t <- b with the two arrows orthogonal.
ws = load("@pair")
Q = QftOperad(ws.orth)
prof = (("a", "b"), "t")
print("\npair, a,b -> t:", Q.dim(prof), "class(es)")
for label in Q.basis(prof, 0):
    print("  ", label, "members:", Q.class_members(label))

prof = (("t", "t"), "t")
print("pair, t,t -> t:", Q.dim(prof), "classes (identities are not declared orthogonal)")
