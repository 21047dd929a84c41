# Chain complexes: homology, tensor products, pushouts and the cofibration generators.
from opforge import chaincat as ch
from opforge.exactla import QQ, Matrix

# %% spheres and disks
S2, D2 = ch.sphere(2), ch.disk(2)
print("H(S^2) =", ch.homology(S2), " H(D^2) =", ch.homology(D2))

# %% Kunneth: H(S^1 (x) S^2) is k in degree 3
T = ch.tensor(ch.sphere(1), S2)
print("H(S^1 (x) S^2) =", ch.homology(T))

# %% attaching a disk along a sphere kills the class
f = ch.sphere_into_disk(2, QQ)
g = ch.ChainMap(f.source, ch.sphere(1, QQ), {1: Matrix.identity(QQ, 1)})
po = ch.pushout(f, g)
print("S^1 with a 2-cell attached:", ch.homology(po.object))

# %% the pushout-product of two boundary inclusions adds one cell in degree a+b
pp = ch.pushout_product(ch.sphere_into_disk(1, QQ), ch.sphere_into_disk(2, QQ))
print("cofibration:", ch.is_cofibration(pp), " source homology:", ch.homology(pp.source))

# %% generating (trivial) cofibrations in the window [0, 2]
cof, triv = ch.generating_cofibrations((0, 2))
print(len(cof), "generating cofibrations,", len(triv), "generating trivial cofibrations")
