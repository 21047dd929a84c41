# Moving operads along monoidal adjunctions: extension of scalars and Dold-Kan.
import random

from opforge.ainfinity import a_infinity_operad
from opforge.basechange import DoldKan, ScalarExtension, chi_report, f_oper, invariance_experiment
from opforge.exactla import GF, QQ
from opforge.trials import random_cellular_operad

# coherence of each adjunction is checked when it is built
ext = ScalarExtension(3)
dk = DoldKan(QQ, 3)

# %% extension of scalars is strong: chi is an isomorphism in every arity
A, _ = a_infinity_operad(4, GF(3))
for row in chi_report(ext, A)["per_arity"]:
    print(row["n"], row["source_dims"], "->", row["target_dims"], "invertible:", row["invertible"])

# %% Dold-Kan is not strong, but chi is still a weak equivalence on cellular operads
O, desc = random_cellular_operad(random.Random(2), 3, QQ)
Fo = f_oper(dk, O)
print(desc, [r["weak_equivalence"] for r in chi_report(dk, O, Fo)["per_arity"]])

# %% F(A-inf) still resolves Ass on the other side
for adj, n in ((ext, 4), (dk, 3)):
    rep = invariance_experiment(adj, n)
    print(adj.name, rep["verdict"], [r["homology_source"] for r in rep["per_arity"]])
