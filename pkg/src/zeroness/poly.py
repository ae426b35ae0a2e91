"""Sparse multivariate polynomials over exact rationals.

All polynomials live in a :class:`Context`, an interned symbol table that
fixes the ambient variable set.  Values are immutable after construction;
every operation returns a new polynomial in canonical form (no zero
coefficients, unique representation per mathematical polynomial).
"""

from __future__ import annotations

from fractions import Fraction


class Context:
    """Shared variable namespace.

    Polynomials from different contexts never mix; this prevents silent
    variable aliasing when systems are merged (merging constructs a fresh
    context explicitly).
    """

    __slots__ = ("_names", "_ids")

    def __init__(self, names=()):
        self._names = []
        self._ids = {}
        for name in names:
            self.add(name)

    def add(self, name: str) -> int:
        """Intern ``name`` and return its variable id (idempotent)."""
        if name in self._ids:
            return self._ids[name]
        vid = len(self._names)
        self._names.append(name)
        self._ids[name] = vid
        return vid

    def id_of(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def name_of(self, vid: int) -> str:
        return self._names[vid]

    def __contains__(self, name):
        return name in self._ids

    def __len__(self):
        return len(self._names)

    @property
    def names(self):
        return tuple(self._names)

    # Convenience constructors -------------------------------------------

    def var(self, name: str) -> "Poly":
        vid = self.id_of(name)
        return Poly(self, {Monomial(((vid, 1),)): Fraction(1)})

    def var_by_id(self, vid: int) -> "Poly":
        return Poly(self, {Monomial(((vid, 1),)): Fraction(1)})

    def const(self, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly(self, {})
        return Poly(self, {Monomial(()): c})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def __repr__(self):
        return f"Context({list(self._names)!r})"


class Monomial:
    """A power product, stored as a tuple of (variable id, exponent > 0)
    pairs sorted by variable id."""

    __slots__ = ("exps",)

    def __init__(self, exps=()):
        self.exps = tuple(sorted((v, e) for v, e in exps if e != 0))
        assert all(e > 0 for _, e in self.exps), self.exps

    def __hash__(self):
        return hash(self.exps)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exps == other.exps

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def exponent(self, vid: int) -> int:
        for v, e in self.exps:
            if v == vid:
                return e
        return 0

    def variables(self):
        return tuple(v for v, _ in self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        merged = dict(self.exps)
        for v, e in other.exps:
            merged[v] = merged.get(v, 0) + e
        return Monomial(merged.items())

    def divides(self, other: "Monomial") -> bool:
        it = dict(other.exps)
        return all(it.get(v, 0) >= e for v, e in self.exps)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        merged = dict(self.exps)
        for v, e in other.exps:
            merged[v] = merged.get(v, 0) - e
            if merged[v] < 0:
                raise ValueError("monomial division with negative exponent")
        return Monomial(merged.items())

    def lcm(self, other: "Monomial") -> "Monomial":
        merged = dict(self.exps)
        for v, e in other.exps:
            merged[v] = max(merged.get(v, 0), e)
        return Monomial(merged.items())

    def coprime(self, other: "Monomial") -> bool:
        mine = {v for v, _ in self.exps}
        return all(v not in mine for v, _ in other.exps)

    def __repr__(self):
        if not self.exps:
            return "Monomial(1)"
        body = "*".join(f"v{v}^{e}" if e > 1 else f"v{v}" for v, e in self.exps)
        return f"Monomial({body})"


_ONE = Monomial(())


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class Poly:
    """A polynomial: map from :class:`Monomial` to nonzero ``Fraction``.

    Degree of the zero polynomial is 0 by convention, as is its height.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: dict):
        self.ctx = ctx
        self.terms = {m: c for m, c in terms.items() if c != 0}

    # Predicates and measures --------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(m.degree for m in self.terms)

    @property
    def height(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return max(abs(c) for c in self.terms.values())

    def constant_term(self) -> Fraction:
        return self.terms.get(_ONE, Fraction(0))

    def is_constant(self) -> bool:
        return all(m == _ONE for m in self.terms)

    def variables(self):
        seen = set()
        for m in self.terms:
            seen.update(m.variables())
        return seen

    # Ring operations ----------------------------------------------------

    def _check(self, other: "Poly"):
        if self.ctx is not other.ctx:
            from .errors import ContextMismatch

            raise ContextMismatch("polynomials from different variable contexts")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return Poly(self.ctx, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if c == 0:
                return self.ctx.zero()
            return Poly(self.ctx, {m: c * k for m, k in self.terms.items()})
        self._check(other)
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2
        return Poly(self.ctx, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        return isinstance(other, Poly) and self.ctx is other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.ctx), frozenset(self.terms.items())))

    # Evaluation and substitution ----------------------------------------

    def eval(self, point) -> Fraction:
        """Evaluate at a point indexed by variable id (full arity)."""
        if len(point) != len(self.ctx):
            from .errors import ArityMismatch

            raise ArityMismatch(
                f"point has {len(point)} entries, context has {len(self.ctx)} variables"
            )
        point = [_as_fraction(v) for v in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            val = c
            for v, e in m.exps:
                val *= point[v] ** e
            total += val
        return total

    def substitute(self, images: dict) -> "Poly":
        """Homomorphic substitution; ``images`` maps variable id -> Poly.

        Every variable occurring in ``self`` must have an image.  All
        images must share one target context.
        """
        target = None
        for p in images.values():
            if target is None:
                target = p.ctx
            elif p.ctx is not target:
                from .errors import ContextMismatch

                raise ContextMismatch("substitution images in different contexts")
        if target is None:
            target = self.ctx
        missing = self.variables() - set(images)
        if missing:
            from .errors import ArityMismatch

            names = sorted(self.ctx.name_of(v) for v in missing)
            raise ArityMismatch(f"no image for variables {names}")
        result = Poly(target, {})
        for m, c in self.terms.items():
            term = Poly(target, {_ONE: c})
            for v, e in m.exps:
                term = term * images[v] ** e
            result = result + term
        return result

    def rename(self, target: Context, name_map=None) -> "Poly":
        """Transport into ``target`` by variable name (or via ``name_map``)."""
        images = {}
        for v in self.variables():
            name = self.ctx.name_of(v)
            if name_map is not None:
                name = name_map[name]
            images[v] = target.var(name)
        return self.substitute(images) if images else target.const(self.constant_term())

    # Printing -----------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def format_poly(p: Poly) -> str:
    """Canonical rendering: graded-lex descending terms, ``p/q`` coefficients."""
    if not p.terms:
        return "0"

    def key(m):
        exps = tuple(m.exponent(v) for v in range(len(p.ctx)))
        return (m.degree, exps)

    parts = []
    for m in sorted(p.terms, key=key, reverse=True):
        c = p.terms[m]
        factors = [
            f"{p.ctx.name_of(v)}^{e}" if e > 1 else p.ctx.name_of(v) for v, e in m.exps
        ]
        body = "*".join(factors)
        mag = abs(c)
        if not body:
            chunk = str(mag)
        elif mag == 1:
            chunk = body
        else:
            chunk = f"{mag}*{body}"
        if not parts:
            parts.append(chunk if c > 0 else f"-{chunk}")
        else:
            parts.append(f"+ {chunk}" if c > 0 else f"- {chunk}")
    return " ".join(parts)


class Derivation:
    """A derivation of the polynomial ring, fixed by its images on variables.

    Missing images default to 0, so a derivation is always total.  Applying
    it satisfies linearity and the Leibniz rule exactly.
    """

    __slots__ = ("ctx", "images")

    def __init__(self, ctx: Context, images: dict):
        for p in images.values():
            if p.ctx is not ctx:
                from .errors import ContextMismatch

                raise ContextMismatch("derivation image outside the context")
        self.ctx = ctx
        self.images = dict(images)

    @property
    def degree(self) -> int:
        if not self.images:
            return 0
        return max(p.degree for p in self.images.values())

    def image(self, vid: int) -> Poly:
        return self.images.get(vid, self.ctx.zero())

    def __call__(self, p: Poly) -> Poly:
        if p.ctx is not self.ctx:
            from .errors import ContextMismatch

            raise ContextMismatch("derivation applied outside its context")
        result = self.ctx.zero()
        for m, c in p.terms.items():
            for v, e in m.exps:
                img = self.images.get(v)
                if img is None or img.is_zero():
                    continue
                rest = Monomial(tuple((w, f - 1 if w == v else f) for w, f in m.exps))
                result = result + img * Poly(self.ctx, {rest: c * e})
        return result
