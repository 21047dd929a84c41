# Simplicial vector spaces and the Dold-Kan pair gamma / normalization.
from math import comb

from opforge import chaincat as ch
from opforge import simpcat as sv
from opforge.exactla import QQ, Matrix

C = ch.disk(2, QQ, (0, 3))
G = sv.gamma(C, 3)

# gamma(C) in level n has one copy of C_k for each surjection [n] -> [k]
print("levels of gamma(D^2):", G.levels)
print("expected:", {n: sum(comb(n, k) * C.dim(k) for k in range(n + 1)) for n in range(4)})
print("simplicial identities hold:", not G.identity_violations())

# %% normalizing gets the complex back, and the unit is an isomorphism
print("N(gamma C) dims:", sv.normalize(G).graded_dims(), "vs", C.graded_dims())
u = sv.dk_unit(C, 3)
print("unit is a chain map:", not u.commutation_violations())

# %% shuffle (Eilenberg-Zilber) and Alexander-Whitney on a tensor product
A, B = sv.gamma(ch.sphere(1, QQ, (0, 3)), 3), sv.gamma(ch.sphere(1, QQ, (0, 3)), 3)
ez, aw = sv.shuffle_map(A, B), sv.aw_map(A, B)
print("AW o EZ = id:", all(aw[n] @ ez[n] == Matrix.identity(QQ, ez.source.dim(n)) for n in range(4)))
print("EZ is a quasi-iso below the top level:", ch.is_weak_equivalence(ez, degrees=range(3)))

# %% shuffles of (2, 1) with their signs
for mu, nu, sign in sv.shuffles(2, 1):
    print(mu, nu, "+" if sign > 0 else "-")
