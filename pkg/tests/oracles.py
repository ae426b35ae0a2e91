"""Independent oracles for the test suite.

Everything here is deliberately brute force and shares no code path with
the engines under test: species are evaluated with truncated-series
combinators only, shuffle products by explicit interleaving enumeration,
and ideal membership by bounded Macaulay linear algebra over exact
rationals.
"""

from fractions import Fraction
from itertools import product

from zeroness import constraints, species
from zeroness.poly import Monomial, Poly
from zeroness.series import TruncSeries, mask, solve_implicit


# Species: straight combinator evaluation (no CDF compiler) --------------------


def species_egs(e, dim, trunc, env=None) -> TruncSeries:
    env = env or {}
    if isinstance(e, species.Zero):
        return TruncSeries.zero(dim, trunc)
    if isinstance(e, species.One):
        return TruncSeries.const(1, dim, trunc)
    if isinstance(e, species.Atom):
        return TruncSeries.coordinate(e.sort, dim, trunc)
    if isinstance(e, species.Ref):
        return TruncSeries.coordinate(env[e.name], dim, trunc)
    if isinstance(e, species.Sum):
        return species_egs(e.left, dim, trunc, env) + species_egs(e.right, dim, trunc, env)
    if isinstance(e, species.Prod):
        return species_egs(e.left, dim, trunc, env) * species_egs(e.right, dim, trunc, env)
    if isinstance(e, species.Set):
        return species_egs(e.child, dim, trunc, env).exp()
    if isinstance(e, species.Cyc):
        return species_egs(e.child, dim, trunc, env).neg_log_one_minus()
    if isinstance(e, species.Seq):
        one = TruncSeries.const(1, dim, trunc)
        return (one - species_egs(e.child, dim, trunc, env)).inverse()
    if isinstance(e, species.Restrict):
        table = species_egs(e.child, dim, trunc, env)
        return mask(table, lambda n: constraints.contains(e.constraint, n))
    if isinstance(e, species.StrongCompose):
        k = len(e.subs)
        outer_env = dict(env)
        for i, nm in enumerate(e.slots, start=1):
            outer_env[nm] = dim + i
        outer = species_egs(e.outer, dim + k, trunc, outer_env)
        subs = [species_egs(s, dim, trunc, env) for s in e.subs]
        return outer.compose(subs)
    if isinstance(e, species.Fix):
        k = len(e.bindings)
        names = [nm for nm, _ in e.bindings]
        inner_env = dict(env)
        for i, nm in enumerate(names, start=1):
            inner_env[nm] = dim + i
        bodies = [
            species_egs(body, dim + k, trunc, inner_env) for _, body in e.bindings
        ]

        def system(xs, ys):
            n = xs[0].trunc
            if xs[0].dim == dim + k:
                # Well-posedness probe: the unknowns are passed as the
                # trailing coordinate series, which is exactly how the
                # body tables were computed.
                return tuple(TruncSeries(dim + k, n, b.coeffs) for b in bodies)
            reduced = [TruncSeries(dim + k, n, b.coeffs) for b in bodies]
            return tuple(b.compose(ys) for b in reduced)

        solution = solve_implicit(system, dim, k, trunc)
        return solution[names.index(e.select)]
    raise AssertionError(f"not a species expression: {e!r}")


# Shuffle product by explicit interleaving --------------------------------------


def shuffle_coefficient(f, g, word):
    """(f shuffle g)_w by summing over all position subsets, which counts
    interleavings with multiplicity."""
    n = len(word)
    total = Fraction(0)
    for bits in range(1 << n):
        u = "".join(word[i] for i in range(n) if bits >> i & 1)
        v = "".join(word[i] for i in range(n) if not bits >> i & 1)
        total += f.get(u, Fraction(0)) * g.get(v, Fraction(0))
    return total


# Ideal membership by bounded Macaulay linear algebra ----------------------------


def _monomials_up_to(ctx, bound):
    nv = len(ctx)
    out = []
    for exps in product(range(bound + 1), repeat=nv):
        if sum(exps) <= bound:
            out.append(Monomial(tuple((v, e) for v, e in enumerate(exps) if e)))
    return out


def _solve_exact(rows, rhs):
    """Consistency of A x = b over Q by Gaussian elimination."""
    m = [row[:] + [b] for row, b in zip(rows, rhs)]
    nrows, ncols = len(m), len(m[0])
    rank_col = 0
    for col in range(ncols - 1):
        pivot = next((r for r in range(rank_col, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank_col], m[pivot] = m[pivot], m[rank_col]
        inv = Fraction(1) / m[rank_col][col]
        m[rank_col] = [v * inv for v in m[rank_col]]
        for r in range(nrows):
            if r != rank_col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[rank_col])]
        rank_col += 1
        if rank_col == nrows:
            break
    for r in range(nrows):
        if all(v == 0 for v in m[r][:-1]) and m[r][-1] != 0:
            return False
    return True


def macaulay_member(p: Poly, gens, bound: int) -> bool:
    """Does p admit a representation sum q_i g_i with deg(q_i g_i) <= bound?

    Columns are (generator, multiplier monomial) pairs; rows are monomials
    of degree <= bound; solved exactly.
    """
    ctx = p.ctx
    columns = []
    for g in gens:
        for mu in _monomials_up_to(ctx, bound - g.degree):
            shifted = {}
            for m, c in g.terms.items():
                shifted[m * mu] = shifted.get(m * mu, Fraction(0)) + c
            columns.append(shifted)
    row_monomials = _monomials_up_to(ctx, bound)
    rows = [[col.get(m, Fraction(0)) for col in columns] for m in row_monomials]
    rhs = [p.terms.get(m, Fraction(0)) for m in row_monomials]
    return _solve_exact(rows, rhs)
