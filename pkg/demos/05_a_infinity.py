# The A-infinity operad as a cellular operad: its components are associahedra.
from opforge import chaincat as ch
from opforge.ainfinity import a_infinity_operad
from opforge.operads import check_morphism
from opforge.trees import associahedron_dims

A, q = a_infinity_operad(6)
for n in range(2, 7):
    C = A.component(n)
    dims = {d: k for d, k in C.graded_dims().items() if k}
    print(f"A-inf({n}): dims {dims}, trees {associahedron_dims(n)}, homology {ch.homology(C)}")

# %% q: A-inf -> Ass is an operad map and a quasi-iso in every arity
print("q respects the structure:", not check_morphism(q, max_checks=200))
print("q levelwise weak equivalence:", q.is_levelwise_weak_equivalence(range(1, 7)))
