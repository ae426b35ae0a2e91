#!/usr/bin/env python3
"""Counting labelled structures with species combinators.

Species expressions compile to differential systems; counting is then
coefficient extraction and equipotence (equal counts at every size) is
series equivalence.
"""

from zeroness import constraints as K
from zeroness import species as S

X = S.Atom(1)

catalogue = {
    "sets": S.Set(X),
    "cycles": S.Cyc(X),
    "sequences": S.Seq(X),
    "subsets": S.Prod(S.Set(X), S.Set(X)),
    "set partitions": S.StrongCompose(
        S.Set(S.Ref("B")), ("B",), (S.Restrict(S.Set(X), K.ge(1, 1)),)
    ),
    "rooted trees": S.Fix((("Y", S.Prod(X, S.Set(S.Ref("Y")))),), "Y"),
    "binary trees": S.Sum(
        S.One(),
        S.Fix(
            (
                (
                    "Z",
                    S.Prod(
                        X,
                        S.Prod(S.Sum(S.One(), S.Ref("Z")), S.Sum(S.One(), S.Ref("Z"))),
                    ),
                ),
            ),
            "Z",
        ),
    ),
}

print(f"{'species':>15}  counts for sizes 0..6")
for name, expr in catalogue.items():
    counts = S.count_table(expr, 1, 6)
    print(f"{name:>15}  {counts.univariate_list()}")

# Series-parallel graphs: a mutually recursive system with size
# restrictions (each block has at least two parts).
def total_ge2(a1, a2):
    return K.and_all(
        [
            K.Not(K.And(K.Eq(a1, 0), K.Eq(a2, 0))),
            K.Not(K.And(K.Eq(a1, 1), K.Eq(a2, 0))),
            K.Not(K.And(K.Eq(a1, 0), K.Eq(a2, 1))),
        ]
    )


sp = S.Fix(
    (
        ("Y1", S.sum_all([X, S.Ref("Y2"), S.Ref("Y3")])),
        ("Y2", S.Restrict(S.Seq(S.Sum(X, S.Ref("Y3"))), total_ge2(1, 4))),
        ("Y3", S.Restrict(S.Set(S.Sum(X, S.Ref("Y2"))), total_ge2(1, 3))),
    ),
    "Y1",
)
ok, problems = S.well_posed(sp, 1)
print(f"\nseries-parallel system well posed: {ok}")
print("series-parallel counts:", S.count_table(sp, 1, 6).univariate_list())

# The ill-posed classic: Y = 1 + X*Y has value 1 at the origin.
bad = S.Fix((("Y", S.Sum(S.One(), S.Prod(X, S.Ref("Y")))),), "Y")
ok, problems = S.well_posed(bad, 1)
print(f"\nY = 1 + X*Y well posed: {ok} ({problems[0]})")

# Sequences still come out of a well-posed detour: nonempty sequences
# solve Z = X + X*Z, and SEQ = 1 + Z.
alt = S.Sum(S.One(), S.Fix((("Z", S.Sum(X, S.Prod(X, S.Ref("Z")))),), "Z"))
print("\nSEQ(X) vs 1 + fix dance:", S.equipotent(S.Seq(X), alt, 1).outcome.value)

verdict = S.equipotent(S.Set(X), S.Seq(X), 1)
print(
    f"SET(X) vs SEQ(X): {verdict.outcome.value} at size {verdict.witness[0]} "
    f"(counts differ by {verdict.value})"
)
