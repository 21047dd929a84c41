# Pushouts of operads along free cells, with the layer-by-layer dimension ledger.
import random

from opforge import chaincat as ch
from opforge.cellular import pushout_along_free
from opforge.exactla import QQ
from opforge.operads import unit_operad
from opforge.seqcomp import ChainBase
from opforge.trials import leftproperness_trial, random_cells, random_cellular_operad, universal_property_trial

# %% adjoining a binary operation to the initial operad gives the free operad
I = unit_operad(ChainBase(QQ), 5)
P, f_prime, led = pushout_along_free(I, {2: ch.zero_into(ch.sphere(0, QQ))}, {2: lambda idx, j: {}})
for row in led.csv_rows():
    if row["arity"] <= 3:
        print(row)
print("ledger identity:", led.identity_holds(), " layers realised as pushouts:", led.verify_layers())

# %% a random cellular operad with one more random cell
rng = random.Random(5)
O, desc = random_cellular_operad(rng, 3, QQ)
f, g, cells = random_cells(O, rng)
P, _, led = pushout_along_free(O, f, g)
print(f"{desc} + {cells}: identity {led.identity_holds()}")

# %% left properness: a weak equivalence stays one after pushing out along a cofibration
print(leftproperness_trial(3))

# %% the mediator out of a pushout exists and is unique
rep = universal_property_trial(1)
print({k: rep[k] for k in ("cells", "exists", "unique", "pass")})
