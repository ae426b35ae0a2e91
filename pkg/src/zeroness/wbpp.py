"""Weighted basic parallel processes over noncommutative series.

A model is a finite alphabet, a set of nonterminals, letter-indexed
transition polynomials, and a rational output weight per nonterminal.
Each letter acts on configurations (polynomials over the nonterminals)
as a derivation of the polynomial ring, so reading a word rewrites the
configuration; the output map, extended as a ring homomorphism, extracts
the word's coefficient.  Products of nonterminals model parallel
composition and the recognised series multiply by shuffle product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._saturation import ZeroVerdict, saturate
from .errors import ArityMismatch, NotStandardForm, NotWellPosed
from .poly import Context, Derivation, Poly


class Wbpp:
    """A weighted basic parallel process.

    ``start`` is a configuration (any polynomial over the nonterminals);
    models loaded from files start at a single nonterminal.  Transitions
    absent from ``transitions`` default to 0, keeping the table total.
    """

    __slots__ = ("ctx", "alphabet", "start", "delta", "outputs")

    def __init__(self, alphabet, nonterminals, start, transitions, outputs):
        self.ctx = Context(nonterminals)
        self.alphabet = tuple(alphabet)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate letters in alphabet")
        if isinstance(start, Poly):
            self.start = start.rename(self.ctx)
        else:
            self.start = self.ctx.var(start)
        images = {a: {} for a in self.alphabet}
        for (letter, nt), p in transitions.items():
            if letter not in images:
                raise ArityMismatch(f"transition on unknown letter {letter!r}")
            images[letter][self.ctx.id_of(nt)] = p.rename(self.ctx)
        self.delta = {a: Derivation(self.ctx, imgs) for a, imgs in images.items()}
        out = [Fraction(0)] * len(self.ctx)
        for nt, w in outputs.items():
            out[self.ctx.id_of(nt)] = Fraction(w)
        self.outputs = tuple(out)

    @property
    def nonterminals(self):
        return self.ctx.names

    def transition(self, letter, nt) -> Poly:
        return self.delta[letter].image(self.ctx.id_of(nt))

    def output(self, nt) -> Fraction:
        return self.outputs[self.ctx.id_of(nt)]

    def config(self, text_or_poly) -> Poly:
        if isinstance(text_or_poly, Poly):
            return text_or_poly.rename(self.ctx)
        return self.ctx.var(text_or_poly)

    def parse_word(self, word):
        """Accept an iterable of letters, or a plain string when every
        letter is a single character (multi-character letters are split
        on whitespace)."""
        if isinstance(word, str):
            if all(len(a) == 1 for a in self.alphabet):
                letters = tuple(word)
            else:
                letters = tuple(word.split())
        else:
            letters = tuple(word)
        for a in letters:
            if a not in self.delta:
                raise ArityMismatch(f"unknown letter {a!r}")
        return letters

    def render_word(self, letters) -> str:
        """Inverse of parse_word: single-character alphabets join tight,
        others join with spaces."""
        if all(len(a) == 1 for a in self.alphabet):
            return "".join(letters)
        return " ".join(letters)

    def __repr__(self):
        return (
            f"Wbpp(alphabet={self.alphabet}, nonterminals={self.ctx.names}, "
            f"start={self.start})"
        )


# Semantics -----------------------------------------------------------------


def delta_letter(m: Wbpp, letter, config: Poly) -> Poly:
    if letter not in m.delta:
        raise ArityMismatch(f"unknown letter {letter!r}")
    return m.delta[letter](config)


def delta_word(m: Wbpp, word, config: Poly) -> Poly:
    for a in m.parse_word(word):
        config = m.delta[a](config)
    return config


def output_value(m: Wbpp, config: Poly) -> Fraction:
    """The output homomorphism: evaluation at the output-weight point."""
    return config.eval(m.outputs)


def evaluate(m: Wbpp, config: Poly, word) -> Fraction:
    return output_value(m, delta_word(m, word, config))


def coeffs_up_to(m: Wbpp, config: Poly, length: int) -> dict:
    """All series coefficients for words of length <= ``length``.

    One breadth-first sweep shares the rewritten configuration of every
    common prefix.  Keys are words rendered as strings (letters joined).
    """
    table = {}
    level = {(): config}
    for ell in range(length + 1):
        for word, cfg in level.items():
            table[m.render_word(word)] = output_value(m, cfg)
        if ell == length:
            break
        nxt = {}
        for word, cfg in level.items():
            for a in m.alphabet:
                nxt[word + (a,)] = m.delta[a](cfg)
        level = nxt
    return table


# Zeroness and equivalence ---------------------------------------------------


def zeroness(m: Wbpp, config: Poly = None, limits=None) -> ZeroVerdict:
    """ZERO iff the series of ``config`` (default: the start configuration)
    is identically zero; otherwise a shortest witness word and its value."""
    config = m.start if config is None else config
    ops = [m.delta[a] for a in m.alphabet]
    verdict = saturate(config, ops, m.outputs, limits)
    if verdict.witness is not None:
        word = m.render_word([m.alphabet[i] for i in verdict.witness])
        return ZeroVerdict(verdict.outcome, word, verdict.value, verdict.stats)
    return verdict


def _renamed(m: Wbpp, suffix: str):
    names = [f"{nt}{suffix}" for nt in m.ctx.names]
    mapping = dict(zip(m.ctx.names, names))
    return names, mapping


def disjoint_union(m1: Wbpp, m2: Wbpp):
    """Union model over the united alphabet; nonterminals are renamed with
    ``_1``/``_2`` suffixes.  Returns the model plus both name maps."""
    alphabet = list(m1.alphabet) + [a for a in m2.alphabet if a not in m1.alphabet]
    names1, map1 = _renamed(m1, "_1")
    names2, map2 = _renamed(m2, "_2")
    ctx = Context(names1 + names2)
    transitions = {}
    for m, nmap in ((m1, map1), (m2, map2)):
        for a in m.alphabet:
            for nt in m.ctx.names:
                p = m.transition(a, nt)
                if not p.is_zero():
                    transitions[(a, nmap[nt])] = p.rename(ctx, nmap)
    outputs = {map1[nt]: m1.output(nt) for nt in m1.ctx.names}
    outputs.update({map2[nt]: m2.output(nt) for nt in m2.ctx.names})
    model = Wbpp(alphabet, ctx.names, ctx.names[0], transitions, outputs)
    return model, map1, map2


def equivalent(m1: Wbpp, m2: Wbpp, limits=None) -> ZeroVerdict:
    """Zeroness of the difference of the two start configurations in the
    disjoint-union model (missing transitions read as 0)."""
    union, map1, map2 = disjoint_union(m1, m2)
    diff = m1.start.rename(union.ctx, map1) - m2.start.rename(union.ctx, map2)
    return zeroness(union, diff, limits)


# Closure constructions -------------------------------------------------------


def _single_extension(m: Wbpp, fresh: str):
    """Fresh-start skeleton: old model embedded unchanged plus a new
    nonterminal; returns (names, old-name map, fresh name)."""
    fresh_name = fresh
    while fresh_name in m.ctx:
        fresh_name += "_"
    return list(m.ctx.names) + [fresh_name], fresh_name


def scale(m: Wbpp, c) -> Wbpp:
    names, u = _single_extension(m, "U")
    ctx = Context(names)
    transitions = {}
    for a in m.alphabet:
        for nt in m.ctx.names:
            p = m.transition(a, nt)
            if not p.is_zero():
                transitions[(a, nt)] = p.rename(ctx)
        img = m.delta[a](m.start) * Fraction(c)
        if not img.is_zero():
            transitions[(a, u)] = img.rename(ctx)
    outputs = {nt: m.output(nt) for nt in m.ctx.names}
    outputs[u] = Fraction(c) * output_value(m, m.start)
    return Wbpp(m.alphabet, names, u, transitions, outputs)


def sum_(m1: Wbpp, m2: Wbpp) -> Wbpp:
    union, map1, map2 = disjoint_union(m1, m2)
    names, u = _single_extension(union, "U")
    ctx = Context(names)
    s1 = m1.start.rename(union.ctx, map1)
    s2 = m2.start.rename(union.ctx, map2)
    transitions = {}
    for a in union.alphabet:
        for nt in union.ctx.names:
            p = union.transition(a, nt)
            if not p.is_zero():
                transitions[(a, nt)] = p.rename(ctx)
        img = union.delta[a](s1) + union.delta[a](s2)
        if not img.is_zero():
            transitions[(a, u)] = img.rename(ctx)
    outputs = {nt: union.output(nt) for nt in union.ctx.names}
    outputs[u] = output_value(union, s1) + output_value(union, s2)
    return Wbpp(union.alphabet, names, u, transitions, outputs)


def shuffle(m1: Wbpp, m2: Wbpp) -> Wbpp:
    union, map1, map2 = disjoint_union(m1, m2)
    names, u = _single_extension(union, "U")
    ctx = Context(names)
    s1 = m1.start.rename(union.ctx, map1)
    s2 = m2.start.rename(union.ctx, map2)
    transitions = {}
    for a in union.alphabet:
        for nt in union.ctx.names:
            p = union.transition(a, nt)
            if not p.is_zero():
                transitions[(a, nt)] = p.rename(ctx)
        img = union.delta[a](s1) * s2 + s1 * union.delta[a](s2)
        if not img.is_zero():
            transitions[(a, u)] = img.rename(ctx)
    outputs = {nt: union.output(nt) for nt in union.ctx.names}
    outputs[u] = output_value(union, s1) * output_value(union, s2)
    return Wbpp(union.alphabet, names, u, transitions, outputs)


def derive(m: Wbpp, letter) -> Wbpp:
    """Model of the left quotient: coefficients shift by the given letter."""
    if letter not in m.delta:
        raise ArityMismatch(f"unknown letter {letter!r}")
    names, u = _single_extension(m, "U")
    ctx = Context(names)
    after = m.delta[letter](m.start)
    transitions = {}
    for b in m.alphabet:
        for nt in m.ctx.names:
            p = m.transition(b, nt)
            if not p.is_zero():
                transitions[(b, nt)] = p.rename(ctx)
        img = m.delta[b](after)
        if not img.is_zero():
            transitions[(b, u)] = img.rename(ctx)
    outputs = {nt: m.output(nt) for nt in m.ctx.names}
    outputs[u] = output_value(m, after)
    return Wbpp(m.alphabet, names, u, transitions, outputs)


def shuffle_inverse(m: Wbpp) -> Wbpp:
    """Model of the shuffle inverse: defined when the empty-word
    coefficient is nonzero.

    From f x g = 1 the Leibniz rule forces d_a g = -(d_a f) x g^2, so the
    fresh start satisfies Delta_a U = -(Delta_a S) * U^2 with output 1/F(S).
    """
    f0 = output_value(m, m.start)
    if f0 == 0:
        raise NotWellPosed("shuffle inverse needs a nonzero empty-word coefficient")
    names, u = _single_extension(m, "U")
    ctx = Context(names)
    uvar = ctx.var(u)
    transitions = {}
    for a in m.alphabet:
        for nt in m.ctx.names:
            p = m.transition(a, nt)
            if not p.is_zero():
                transitions[(a, nt)] = p.rename(ctx)
        img = -(m.delta[a](m.start).rename(ctx)) * uvar * uvar
        if not img.is_zero():
            transitions[(a, u)] = img
    outputs = {nt: m.output(nt) for nt in m.ctx.names}
    outputs[u] = Fraction(1) / f0
    return Wbpp(m.alphabet, names, u, transitions, outputs)


# BPP embedding ----------------------------------------------------------------


@dataclass(frozen=True)
class BppSpec:
    """An unweighted basic parallel process in standard form.

    ``rules`` maps each nonterminal to its summands, each an action
    prefixing a merge of nonterminals (the empty merge is the terminated
    process).
    """

    rules: dict
    start: str

    def check(self):
        names = set(self.rules)
        if self.start not in names:
            raise NotStandardForm(f"start nonterminal {self.start!r} has no rule")
        for nt, summands in self.rules.items():
            if not summands:
                raise NotStandardForm(
                    f"nonterminal {nt!r} is not productive (no summands)"
                )
            for action, merge in summands:
                if not action:
                    raise NotStandardForm(f"unguarded summand in rule for {nt!r}")
                for x in merge:
                    if x not in names:
                        raise NotStandardForm(
                            f"rule for {nt!r} mentions undefined nonterminal {x!r}"
                        )


def bpp_to_wbpp(spec: BppSpec) -> Wbpp:
    """Natural-weighted model whose series counts accepting runs; its
    support is the process language."""
    spec.check()
    names = list(spec.rules)
    alphabet = []
    for summands in spec.rules.values():
        for action, _ in summands:
            if action not in alphabet:
                alphabet.append(action)
    ctx = Context(names)
    transitions = {}
    for nt, summands in spec.rules.items():
        by_action = {}
        for action, merge in summands:
            p = ctx.one()
            for x in merge:
                p = p * ctx.var(x)
            by_action[action] = by_action.get(action, ctx.zero()) + p
        for action, p in by_action.items():
            if not p.is_zero():
                transitions[(action, nt)] = p
    outputs = {nt: Fraction(0) for nt in names}
    return Wbpp(alphabet, names, spec.start, transitions, outputs)


# Commutativity (bounded) -------------------------------------------------------


def check_commutative_bounded(m: Wbpp, length: int, config: Poly = None):
    """Compare coefficients across Parikh-equivalent words up to ``length``.

    Returns None when no disagreement is found, else the offending pair
    (first word of the class, first mismatching word).  A bounded
    semi-check only: agreement up to any finite length proves nothing
    about longer words.
    """
    config = m.start if config is None else config
    table = {}
    level = {(): config}
    for ell in range(length + 1):
        for word, cfg in sorted(level.items()):
            key = tuple(sorted(word))
            value = output_value(m, cfg)
            if key in table:
                ref_word, ref_value = table[key]
                if value != ref_value:
                    return (m.render_word(ref_word), m.render_word(word))
            else:
                table[key] = (word, value)
        if ell == length:
            break
        level = {
            word + (a,): m.delta[a](cfg)
            for word, cfg in level.items()
            for a in m.alphabet
        }
    return None
