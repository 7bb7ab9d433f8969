"""
Derived versus underived extension over a sphere
================================================

A constant diagram on the faces of the boundary of a 3-simplex is extended to
a cone point.  The pointwise left Kan extension only sees that the face poset
is connected; tensoring the free E-infinity algebra with the simplicial sphere
also sees the top cell.
"""
from hqft.algebras import constant_diagram, free_einfty, homology_obstruction, pointwise_lan, tensoring_free
from hqft.chain import DegreeWindow, homology
from hqft.simplicial import boundary_simplex
from hqft.workspace import load

ws = load("@boundary_extend")
V = ws.complexes["Q1"]
win = DegreeWindow(0, 4)

faces = list(ws.extension["subcategory"])
values, maps = constant_diagram(ws.category, faces, V)
L = pointwise_lan(ws.category, faces, values, maps, "t")
print("pointwise extension:", [(n, r) for n, r, _ in homology(L, win).as_rows() if r])

F = tensoring_free(boundary_simplex(3), free_einfty(V), win)
print("tensoring with the sphere:", [(n, r) for n, r, _ in homology(F.generators, win).as_rows() if r])

dec = homology_obstruction(L, F.generators, win)
print("quasi-isomorphic possible:", dec.ok, dec.witness)
