# Algebras over operads: free and cellular algebras, pushouts, rectification.
from opforge import chaincat as ch
from opforge.ainfinity import a_infinity_operad
from opforge.algebras import (algebra_pushout_along_free, check_algebra_axioms, free_algebra, induce_along,
                              initial_algebra, rectification_check)
from opforge.exactla import QQ
from opforge.operads import ass_operad
from opforge.seqcomp import ChainBase

# %% the free Ass-algebra on one degree-0 generator, words up to length 3
Ass = ass_operad(ChainBase(QQ), 3)
a = free_algebra(Ass, ch.sphere(0, QQ), 3)
print("carrier:", a.carrier().graded_dims(), " axioms:", check_algebra_axioms(a) or "ok")

# %% attach a free generator in degree 1, then kill it with a 2-cell
b, _, led = algebra_pushout_along_free(initial_algebra(Ass, 3), ch.zero_into(ch.sphere(1, QQ)), lambda i, j: {})
x = b.generator(b.gens[0])
c, _, led2 = algebra_pushout_along_free(b, ch.sphere_into_disk(2, QQ), lambda i, j: x)
print("before:", ch.homology(b.carrier()), " after:", ch.homology(c.carrier()))
print("ledgers:", led.identity_holds(), led2.identity_holds())

# %% an A-infinity algebra and its strictification along q: A-inf -> Ass
P, q = a_infinity_operad(3)
fa = free_algebra(P, ch.sphere(0, QQ), 3)
strict, unit = induce_along(q, fa)
print("unit a -> q^* q_* a is a quasi-iso:", unit.is_weak_equivalence())
print(rectification_check(7))
