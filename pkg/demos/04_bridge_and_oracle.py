#!/usr/bin/env python3
"""The two engines meet: commutative process series are power series.

A differential system read letter-by-letter is a process model whose
word coefficients depend only on how many times each letter occurs; in
the other direction a process model whose series passes the (bounded)
commutativity check can be read as a differential system.  The truncated
series toolbox acts as a brute-force referee for both.
"""

from zeroness import cdf as C
from zeroness import wbpp as W
from zeroness.poly import Context
from zeroness.series import TruncSeries

# sin as a differential system over one letter
ctx = Context(["s", "c"])
trig = C.CdfSystem(
    ("a",), ["s", "c"], {("s", 1): ctx.var("c"), ("c", 1): -ctx.var("s")}, [0, 1]
)
sin = C.CdfSeries(trig, trig.ctx.var("s"))

process = C.to_wbpp(sin)
print("sin read as a process over letter 'a':")
table = C.coeff_table(sin, 6)
for n in range(7):
    word = "a" * n
    print(f"  word {word or 'eps':>6}: {W.evaluate(process, process.start, word)}"
          f"   series coefficient: {table[(n,)]}")

# Round trip: the same polynomial data both ways.
again = C.from_wbpp(process)
print("\nround trip generators:", again.system.generator_names())
print("round trip expression:", again.expr)

# A genuinely noncommutative process cannot cross the bridge.
nctx = Context(["S", "X"])
noncomm = W.Wbpp(
    ["a", "b"], ["S", "X"], "S",
    {("a", "S"): nctx.var("X"), ("a", "X"): nctx.var("X") ** 2,
     ("b", "X"): nctx.one()},
    {"S": 0, "X": 0},
)
pair = W.check_commutative_bounded(noncomm, 4)
print(f"\nnoncommutative witness pair: {pair}")
try:
    C.from_wbpp(noncomm)
except Exception as exc:
    print(f"bridge refuses: {type(exc).__name__}: {exc}")

# The truncated-series referee: exp both from the system and from the
# one-line combinator.
e = Context(["e"])
esys = C.CdfSystem(("a",), ["e"], {("e", 1): e.var("e")}, [1])
from_system = C.coeff_table(C.CdfSeries(esys, esys.ctx.var("e")), 8)
from_combinator = TruncSeries.coordinate(1, 1, 8).exp()
print("\nsystem table == combinator table:", from_system == from_combinator)
