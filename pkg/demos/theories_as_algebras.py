"""
Theories as operad algebras
===========================

A functor of algebras over an orthogonal category becomes an algebra over
its QFT operad exactly when orthogonal images commute.  Here: a commutative
theory, a noncommutative one with nothing orthogonal, and a violation.
"""
from hqft.algebras import (IllDefinedAction, algebra_to_functor, check_algebra_axioms, check_perp_commutativity,
                           functor_to_algebra, same_theory)
from hqft.workspace import load

for name in ("commutative", "triangular"):
    ws = load(f"@{name}")
    A = functor_to_algebra(ws.theory, ws.orth)
    rep = check_algebra_axioms(A, max_arity=2)
    back = algebra_to_functor(A, ws.orth)
    print(f"{name}: axioms ok={rep.ok} ({rep.checked} checks), roundtrip={same_theory(back, ws.theory)}")

# triangular matrices: the two orders of a,b -> t give different operations
ws = load("@triangular")
A = functor_to_algebra(ws.theory, ws.orth)
ins = ({"eps": 1}, {"d1": 1})
for sigma in ((1, 2), (2, 1)):
    print("  order", sigma, "->", A.act_basis((sigma, ("f1", "f2"), "t"), ins))

# 2x2 matrices with both arrows orthogonal: the images do not commute
ws = load("@matrix_violation")
dec = check_perp_commutativity(ws.theory, ws.orth)
print("\nmatrix_violation commutes:", dec.ok, "witness:", dec.witness)
try:
    functor_to_algebra(ws.theory, ws.orth)
except IllDefinedAction as e:
    print("action is ill-defined:", e.witness)
