"""Independent oracles (sympy) and random generators shared by the tests."""

from __future__ import annotations

import itertools
import random

import sympy

from skeincalc.skein import ColoredCobordism, Component
from skeincalc.tqft import ARITY, CobordismWord, Gen, color
from skeincalc.patterns import Pattern, Vertex

X, h, t = sympy.symbols("X h t")


# -- sympy oracle for monic extension algebras ----------------------------

class PolyOracle:
    """``R[X]/(X^n - rhs)`` with a linear counit on the monomial basis,
    computed with sympy polynomial division."""

    def __init__(self, relation, counit, pairs):
        self.relation = sympy.Poly(relation, X)
        self.n = self.relation.degree()
        self.counit_vals = [sympy.sympify(c) for c in counit]
        self.pairs = [(sympy.sympify(u), sympy.sympify(v)) for u, v in pairs]

    def reduce(self, expr):
        return sympy.expand(sympy.rem(sympy.expand(expr), self.relation.as_expr(), X))

    def coords(self, expr):
        p = sympy.Poly(self.reduce(expr), X)
        return [sympy.expand(p.coeff_monomial(X ** k)) for k in range(self.n)]

    def eps(self, expr):
        return sympy.expand(sum(c * e for c, e in zip(self.coords(expr), self.counit_vals)))

    def handle(self):
        return self.reduce(sum(u * v for u, v in self.pairs))

    def closed(self, genus, colour=1):
        return self.eps(self.handle() ** genus * colour)

    def gram_inverse_dual(self):
        basis = [X ** k for k in range(self.n)]
        g = sympy.Matrix(self.n, self.n, lambda i, j: self.eps(basis[i] * basis[j]))
        inv = g.inv()
        return [sympy.expand(sum(inv[j, i] * basis[j] for j in range(self.n))) for i in range(self.n)]

    def state_sum(self, black, white, edges, colours):
        """Brute force: vertices hold sympy expressions in X."""
        out = {}
        names = black + white
        for state in itertools.product(range(len(self.pairs)), repeat=len(edges)):
            val = {v: colours.get(v, 1) for v in names}
            for (a, b), i in zip(edges, state):
                u, v = self.pairs[i]
                val[a] = val[a] * u
                val[b] = val[b] * v
            scalar = 1
            for w in white:
                scalar *= self.eps(val[w])
            scalar = sympy.expand(scalar)
            if scalar == 0:
                continue
            per = [[(k, c) for k, c in enumerate(self.coords(val[b])) if c != 0] for b in black]
            for combo in itertools.product(*per):
                key = tuple(sorted((b, k) for b, (k, _) in zip(black, combo)))
                coef = scalar
                for _, c in combo:
                    coef *= c
                out[key] = sympy.expand(out.get(key, 0) + coef)
        return {k: c for k, c in out.items() if c != 0}


ORACLES = {
    "universal": PolyOracle(X**2 - h * X - t, [0, 1], [(1, X - h), (X, 1)]),
    "gadnaot": PolyOracle(X**2 - t, [0, 1], [(1, X), (X, 1)]),
    "barnatan": PolyOracle(X**2, [0, 1], [(1, X), (X, 1)]),
}


def to_sympy(c):
    """Engine ring element (or AlgElem over an X-extension) to sympy."""
    if hasattr(c, "coords"):
        return sympy.expand(sum(to_sympy(a) * X ** k for k, a in enumerate(c.coords)))
    return sympy.expand(sympy.sympify(str(c).replace("^", "**")))


# -- random generators ----------------------------------------------------

def random_word(rng: random.Random, s, max_width=4, max_len=8, colours=None) -> CobordismWord:
    """A random well-formed word whose widths stay within ``max_width``."""
    colours = colours or [s.one, s.gen("X")]
    width = rng.randint(0, max_width)
    w = width
    levels = []
    for _ in range(rng.randint(0, max_len)):
        level, left, out = [], w, 0
        while left or (not level and w == 0):
            kinds = [k for k, (a, b) in ARITY.items()
                     if a <= left and (a > 0 or w == 0 or rng.random() < 0.2)]
            kinds = [k for k in kinds if out + ARITY[k][1] + (left - ARITY[k][0]) <= max_width]
            if not kinds:
                kinds = ["id"] if left else []
            if not kinds:
                break
            k = rng.choice(kinds)
            level.append(color(rng.choice(colours)) if k == "color" else Gen(k))
            left -= ARITY[k][0]
            out += ARITY[k][1]
        if not level:
            break
        levels.append(level)
        w = out
    return CobordismWord(width, levels)


def random_cobordism(rng: random.Random, s, r=None, sout=None, max_boundary=3, max_genus=3, colours=None):
    colours = colours or s.algebra.basis_elems()
    r = rng.randint(0, max_boundary) if r is None else r
    sout = rng.randint(0, max_boundary) if sout is None else sout
    ncomp = rng.randint(max(1, 0), max(1, r + sout))
    comps = [[set(), set()] for _ in range(ncomp)]
    for i in range(1, r + 1):
        comps[rng.randrange(ncomp)][0].add(i)
    for j in range(1, sout + 1):
        comps[rng.randrange(ncomp)][1].add(j)
    out = []
    for ins, outs in comps:
        colour = rng.choice(colours)
        if rng.random() < 0.3:
            colour = colour + rng.choice(colours) * rng.randint(-2, 2)
        out.append(Component(rng.randint(0, max_genus), ins, outs, colour))
    return ColoredCobordism(r, sout, out)


def random_pattern(rng: random.Random, s, max_edges=5, max_vertices=5, colours=None) -> Pattern:
    colours = colours or s.algebra.basis_elems()
    nb = rng.randint(1, max_vertices)
    nw = rng.randint(0, max_vertices - nb) if max_vertices > nb else 0
    verts = [Vertex(f"T{i}", True) for i in range(nb)] + [Vertex(f"w{i}", False) for i in range(nw)]
    names = [v.name for v in verts]
    edges = [(rng.choice(names), rng.choice(names)) for _ in range(rng.randint(0, max_edges))]
    p = Pattern(verts, edges)
    colors = {}
    for comp in p.components():
        if rng.random() < 0.7:
            colors[rng.choice(comp)] = rng.choice(colours)
    return Pattern(verts, edges, colors)
