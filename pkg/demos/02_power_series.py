#!/usr/bin/env python3
"""Power series as polynomial differential systems.

A series is presented by generators y_1..y_k with one polynomial per
generator and axis (the derivative along that axis, written in the
generators), an exact initial vector, and an expression polynomial.
Coefficients come out two independent ways: folding Lie derivatives, and
a layered binomial-convolution table.
"""

from fractions import Fraction

from zeroness import cdf as C
from zeroness import constraints as K
from zeroness.poly import Context

# sin and cos: s' = c, c' = -s, starting at (0, 1).
ctx = Context(["s", "c"])
trig = C.CdfSystem(
    ("x",), ["s", "c"], {("s", 1): ctx.var("c"), ("c", 1): -ctx.var("s")}, [0, 1]
)
sin = C.CdfSeries(trig, trig.ctx.var("s"))

def row(values):
    return [str(v) for v in values]


print("sin coefficients (exponential):", row(C.coeff_table(sin, 8).univariate_list()))
print("same via Lie folding:", row(C.coeff_via_lie(sin, (n,)) for n in range(9)))

# The Pythagorean identity is an invariant polynomial: its Lie derivative
# is identically zero, so the zeroness chain closes immediately.
pyth = C.CdfSeries(trig, trig.ctx.var("s") ** 2 + trig.ctx.var("c") ** 2 - 1)
print("s^2 + c^2 - 1:", C.zeroness(pyth).outcome.value)

# Rooted unordered trees: C = x e^C, presented with helper generators
# D = e^C and E = 1/(1 - C).
tctx = Context(["C", "D", "E"])
trees = C.CdfSystem(
    ("x",),
    ["C", "D", "E"],
    {
        ("C", 1): tctx.var("D") * tctx.var("E"),
        ("D", 1): tctx.var("D") ** 2 * tctx.var("E"),
        ("E", 1): tctx.var("D") * tctx.var("E") ** 3,
    },
    [0, 1, 1],
)
cayley = C.CdfSeries(trees, trees.ctx.var("C"))
print("labelled rooted trees:", row(C.coeff_table(cayley, 6).univariate_list()))

# Equivalence: e^{2x} presented by its own equation versus as a square.
g = Context(["g"])
e2x = C.CdfSeries(C.CdfSystem(("x",), ["g"], {("g", 1): 2 * g.var("g")}, [1]), g.var("g"))
e = Context(["e"])
esys = C.CdfSystem(("x",), ["e"], {("e", 1): e.var("e")}, [1])
squared = C.CdfSeries(esys, esys.ctx.var("e") ** 2)
print("e^{2x} two ways:", C.equivalent(e2x, squared).outcome.value)

# Support restriction: keeping only odd exponents of e^x gives sinh,
# realized by one generator copy per congruence class.
exp_series = C.CdfSeries(esys, esys.ctx.var("e"))
sinh = C.restrict_regular(exp_series, K.ModEq(1, 1, 2))
print("sinh by restriction:", row(C.coeff_table(sinh, 7).univariate_list()))
print("restricted system generators:", sinh.system.generator_names())

# Against the closure-operation build (e^x - e^{-x}) / 2:
h = Context(["h"])
eneg = C.CdfSeries(C.CdfSystem(("x",), ["h"], {("h", 1): -h.var("h")}, [1]), h.var("h"))
sinh2 = C.c_scale(C.c_add(exp_series, C.c_scale(eneg, -1)), Fraction(1, 2))
print("two sinh builds equivalent:", C.equivalent(sinh, sinh2).outcome.value)

# Implicit equations: y = x + y^2 (rooted binary-ish bracketings).
ictx = Context(["t1", "t2"])
base = C.CdfSystem(
    ("x", "y"), ["t1", "t2"], {("t1", 1): ictx.one(), ("t2", 2): ictx.one()}, [0, 0]
)
body = C.CdfSeries(base, base.ctx.var("t1") + base.ctx.var("t2") ** 2)
solution = C.implicit_solve([body])[0]
print("y = x + y^2 solution:", row(C.coeff_table(solution, 6).univariate_list()))

# Strong composition: e^y after e^x - 1 counts set partitions.
octx = Context(["E", "t"])
outer_sys = C.CdfSystem(
    ("x", "y"), ["E", "t"], {("E", 2): octx.var("E"), ("t", 1): octx.one()}, [1, 0]
)
outer = C.CdfSeries(outer_sys, outer_sys.ctx.var("E"))
bell = C.compose_strong(outer, [C.CdfSeries(esys, esys.ctx.var("e") - 1)])
print("set partitions:", row(C.coeff_table(bell, 6).univariate_list()))
