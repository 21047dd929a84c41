# Exact linear algebra over Q, F_p and F_{p^2}: nothing here ever rounds.
from opforge.exactla import GF, GF2, QQ, Field, Matrix, nullspace, quotient_basis, solve

# %% fields are picked by tag, the same tags the CLI takes
for tag in ("q", "p:5", "p2:3"):
    F = Field.from_tag(tag)
    print(tag, "->", F)


def show(A):
    return [[A.field.format(x) for x in row] for row in A.to_lists()]


# %% rank and kernel over the rationals
M = Matrix.from_rows(QQ, [[1, 2, 3], [2, 4, 6], [1, 0, 1]])
print("rank", M.rank())
K = nullspace(M)
print("kernel basis", show(K), "M @ K == 0:", (M @ K).is_zero())

# the same matrix mod 2 has a different rank
print("rank mod 2", Matrix.from_rows(GF(2), [[1, 2, 3], [2, 4, 6], [1, 0, 1]]).rank())

# %% solving, with the null space that parametrises all solutions
x, null = solve(M, Matrix.from_rows(QQ, [[6], [12], [2]]))
print("particular solution", show(x), "free directions", null.cols)

# %% quotient of F^3 by the span of the columns of S
S = Matrix.from_rows(GF(5), [[1], [1], [0]])
Q = quotient_basis(S, 3)
print("quotient map", show(Q), "kills S:", (Q @ S).is_zero())

# %% F_9 as pairs a + b*r, r a non-residue mod 3
F9 = GF2(3)
a = (1, 2)
print("a * a^-1 =", F9.mul(a, F9.inv(a)))
