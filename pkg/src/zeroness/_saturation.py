"""Shared ideal-chain saturation loop.

Both zeroness engines reduce to the same scheme: a start polynomial, a
finite family of (noncommuting) derivations of its ring, and a point at
which every polynomial reached must vanish.  The loop explores words of
derivations breadth-first, evaluates each reached polynomial at the point
(early NONZERO exit, yielding a shortest witness), and prunes every
polynomial lying in the ideal of those already retained; the retained set
is kept as an incrementally extended reduced Groebner basis.  The frontier
draining out is the Groebner-detected stabilisation of the ideal chain,
and then the start polynomial's whole derivation closure vanishes at the
point, so the answer is ZERO.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import ResourceLimitExceeded
from .groebner import DEFAULT_LIMITS, MonomialOrder, buchberger, extend


class Outcome(Enum):
    ZERO = "ZERO"
    NONZERO = "NONZERO"
    INCONCLUSIVE_RESOURCE_LIMIT = "INCONCLUSIVE_RESOURCE_LIMIT"


@dataclass(frozen=True)
class SaturationStats:
    chain_length: int
    basis_size: int
    max_degree: int


@dataclass(frozen=True)
class ZeroVerdict:
    """Outcome of a zeroness query.

    ``witness`` is a tuple of derivation indices (the word read); NONZERO
    verdicts carry the exact nonzero ``value`` at that word.
    """

    outcome: Outcome
    witness: tuple = None
    value: Fraction = None
    stats: SaturationStats = None
    detail: str = ""

    @property
    def is_zero(self):
        return self.outcome is Outcome.ZERO

    @property
    def is_nonzero(self):
        return self.outcome is Outcome.NONZERO

    @property
    def is_inconclusive(self):
        return self.outcome is Outcome.INCONCLUSIVE_RESOURCE_LIMIT


def saturate(start, ops, point, limits=None) -> ZeroVerdict:
    """Decide whether the whole derivation closure of ``start`` vanishes
    at ``point``.

    ``ops`` is the ordered family of derivations (the BFS tries them in
    this order, so witnesses are shortest and lexicographically least).
    """
    limits = limits or DEFAULT_LIMITS
    order = MonomialOrder()
    max_degree = start.degree

    def stats(chain, basis):
        return SaturationStats(chain, basis, max_degree)

    value = start.eval(point)
    if value != 0:
        return ZeroVerdict(Outcome.NONZERO, (), value, stats(0, 0))
    if start.is_zero():
        return ZeroVerdict(Outcome.ZERO, stats=stats(0, 0))

    try:
        basis = buchberger([start], order, limits)
        frontier = deque([(start, ())])
        chain = 0
        while frontier:
            beta, word = frontier.popleft()
            for i, op in enumerate(ops):
                gamma = op(beta)
                if gamma.degree > limits.max_degree:
                    raise ResourceLimitExceeded(
                        "max_degree", gamma.degree, limits.max_degree
                    )
                max_degree = max(max_degree, gamma.degree)
                w = word + (i,)
                value = gamma.eval(point)
                if value != 0:
                    return ZeroVerdict(
                        Outcome.NONZERO, w, value, stats(chain, len(basis))
                    )
                extended = extend(basis, gamma, limits)
                if extended is not basis:
                    basis = extended
                    chain = max(chain, len(w))
                    frontier.append((gamma, w))
        return ZeroVerdict(Outcome.ZERO, stats=stats(chain, len(basis)))
    except ResourceLimitExceeded as exc:
        return ZeroVerdict(
            Outcome.INCONCLUSIVE_RESOURCE_LIMIT,
            stats=stats(-1, -1),
            detail=str(exc),
        )
