# Planar trees, free operads and the composition product of sequences.
from opforge import chaincat as ch
from opforge.exactla import QQ
from opforge.operads import FreeOperad, ass_operad, check_operad_axioms
from opforge.seqcomp import ChainBase, Sequence, compose_product
from opforge.trees import enumerate_planar_trees, graft, to_nested

# %% binary trees with four leaves
for t in enumerate_planar_trees(4, [2]):
    print(to_nested(t))

# grafting a corolla onto the second leaf
print(to_nested(graft(("L", "L"), 2, ("L", "L", "L"))))

# %% the free operad on one binary operation counts binary trees
base = ChainBase(QQ)
P = FreeOperad(Sequence(base, 6, {2: ch.sphere(0, QQ)}))
print("dims:", [sum(len(k) for k in P.basis(n).values()) for n in range(1, 7)])
print("operad axioms on a sample:", check_operad_axioms(P, max_checks=100) or "ok")

# %% (Ass o Ass)(n): one summand per composition of n
A = ass_operad(base, 8).underlying()
s = compose_product(A, A)
print("Ass o Ass:", [base.size(s[n]) for n in range(1, 9)])
print("summand labels in arity 3:", s.summands[3])
