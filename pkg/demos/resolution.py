"""
Resolving the QFT operad by Barratt-Eccles chains
=================================================

Tensoring with E-infinity frees the symmetric group actions; the map that
augments the E-infinity factor is checked profile by profile to be a
quasi-isomorphism.
"""
from hqft.chain import DegreeWindow
from hqft.operads import is_weak_equivalence_operads, profiles_up_to, resolution_map
from hqft.workspace import load

win = DegreeWindow(0, 4)
for name in ("pair", "chain3"):
    ws = load(f"@{name}")
    w = resolution_map(ws.orth)
    dec = is_weak_equivalence_operads(w, profiles_up_to(ws.category.objects, 3), win)
    print(f"{name}: weak equivalence up to arity 3 in [{win.lo},{win.hi}]: {dec.ok}")
    for note in dec.notes[-4:]:
        print("   ", note)

# A component of the tensor product is a sum of copies of E(n):
T = w.source
prof = (("a", "c"), "c")
print("\nchain3 tensor component a,c -> c, dims by degree:",
      {d: len(T.basis(prof, d)) for d in range(4)})
