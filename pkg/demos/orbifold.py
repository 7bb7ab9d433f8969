"""
Homotopy invariants along groupoid fibers
=========================================

A theory on the total category of a presheaf of groupoids is pushed down to
the base by a homotopy end.  With Z/2 acting trivially on the ground field
the result is the cochains of BZ/2, whose rational cohomology is one line in
degree 0.
"""
from hqft.chain import DegreeWindow
from hqft.hoinv import horan_object, verify_horan_axioms
from hqft.simplicial import groupoid_cohomology
from hqft.workspace import load

win = DegreeWindow(-4, 1)
ws = load("@orbifold_z2")
E = horan_object(ws.total, ws.total_theory, "c", win)
print("end dims:", E.complex.dims())
for n, r, trusted in E.homology().as_rows():
    print(f"  H[{n}] = {r}{'' if trusted else '  (untrusted, window edge)'}")
rep = verify_horan_axioms(ws.total, ws.total_theory, DegreeWindow(-2, 1), max_arity=2, e_degrees=(0, 1))
print("action axioms:", rep.ok, f"({rep.checked} checks, {rep.skipped} outside the window)")

ws = load("@groupoids")
for name, G in ws.groupoids.items():
    H = groupoid_cohomology(G, DegreeWindow(-3, 0))
    print(f"{name}: ranks {dict(H.trusted_items())}")
