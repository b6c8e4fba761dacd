"""Cobordism words and the extended TQFT functor.

A word is a Morse decomposition read from the input circles to the output
circles: each level places elementary generators side by side.  Evaluating
a word gives an exact linear map ``A^(x)r -> A^(x)s``; compiling it gives an
abstract colored surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import AlgElem, TensorElem, basis_tuples, linear_extend
from .errors import SignatureMismatch, WordShapeError
from .frobenius import FrobeniusSystem

ARITY = {
    "id": (1, 1),
    "unit": (0, 1),
    "counit": (1, 0),
    "mult": (2, 1),
    "comult": (1, 2),
    "swap": (2, 2),
    "color": (1, 1),
}


@dataclass(frozen=True)
class Gen:
    kind: str
    color: AlgElem | None = None

    def __post_init__(self):
        if self.kind not in ARITY:
            raise ValueError(f"unknown generator {self.kind!r}")
        if (self.kind == "color") != (self.color is not None):
            raise ValueError("color(...) and only color(...) carries an element")

    @property
    def arity(self):
        return ARITY[self.kind]

    def __str__(self):
        return f"color({self.color})" if self.kind == "color" else self.kind


IDENTITY = Gen("id")
UNIT = Gen("unit")
COUNIT = Gen("counit")
MULT = Gen("mult")
COMULT = Gen("comult")
SWAP = Gen("swap")


def color(a: AlgElem) -> Gen:
    return Gen("color", a)


@dataclass(frozen=True)
class CobordismWord:
    """``width`` input strands followed by ``levels`` of generators."""

    width: int
    levels: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(tuple(lv) for lv in self.levels))
        w = self.width
        for k, level in enumerate(self.levels, start=1):
            need = sum(g.arity[0] for g in level)
            if need != w:
                raise WordShapeError(k, f"needs {need} strands, found {w}")
            w = sum(g.arity[1] for g in level)
        object.__setattr__(self, "_out", w)

    @property
    def output_width(self) -> int:
        return self._out

    @property
    def signature(self):
        return (self.width, self._out)

    def then(self, other: CobordismWord) -> CobordismWord:
        """``other`` applied after ``self``."""
        if other.width != self.output_width:
            raise SignatureMismatch(f"cannot stack width {other.width} on output {self.output_width}")
        return CobordismWord(self.width, self.levels + other.levels)

    def __str__(self):
        return " ; ".join(" | ".join(str(g) for g in lv) for lv in self.levels)


def generator_action(s: FrobeniusSystem, g: Gen):
    """Return a function from basis index tuples to TensorElem images."""
    alg = s.algebra
    one = alg.ring.one
    cache: dict = {}

    if g.kind == "id":
        return lambda k: alg.tensor(1, {k: one})
    if g.kind == "swap":
        return lambda k: alg.tensor(2, {(k[1], k[0]): one})
    if g.kind == "unit":
        u = TensorElem.from_elem(alg.one)
        return lambda k: u

    def cached(fn):
        def inner(k):
            if k not in cache:
                cache[k] = fn(k)
            return cache[k]
        return inner

    if g.kind == "counit":
        return cached(lambda k: alg.scalar_tensor(s.counit_coords[k[0]]))
    if g.kind == "mult":
        return cached(lambda k: TensorElem.from_elem(alg.basis_elem(k[0]) * alg.basis_elem(k[1])))
    if g.kind == "comult":
        return cached(lambda k: s.coproduct(alg.basis_elem(k[0])))
    return cached(lambda k: TensorElem.from_elem(g.color * alg.basis_elem(k[0])))


def apply_level(s: FrobeniusSystem, level: Sequence[Gen], x: TensorElem, actions=None) -> TensorElem:
    actions = actions or [generator_action(s, g) for g in level]
    cuts, pos = [], 0
    for g in level:
        cuts.append((pos, pos + g.arity[0]))
        pos += g.arity[0]
    out_arity = sum(g.arity[1] for g in level)
    alg = s.algebra

    def on_basis(k):
        acc = alg.scalar_tensor(1)
        for (a, b), act in zip(cuts, actions):
            acc = acc.tensor(act(k[a:b]))
            if acc.is_zero():
                break
        return acc

    return linear_extend(x, on_basis, out_arity, alg)


def apply_word(s: FrobeniusSystem, w: CobordismWord, x: TensorElem) -> TensorElem:
    if x.arity != w.width:
        raise SignatureMismatch(f"input tensor has arity {x.arity}, word expects {w.width}")
    for level in w.levels:
        x = apply_level(s, level, x)
    return x


@dataclass
class LinearMap:
    """Matrix of a map ``A^(x)domain -> A^(x)codomain`` over basis tuples."""

    system: FrobeniusSystem
    domain: int
    codomain: int
    matrix: dict

    def __call__(self, x: TensorElem) -> TensorElem:
        if x.arity != self.domain:
            raise SignatureMismatch(f"map expects arity {self.domain}, got {x.arity}")
        return linear_extend(x, self.matrix.__getitem__, self.codomain, self.system.algebra)

    def after(self, other: LinearMap) -> LinearMap:
        """``self o other``."""
        if other.codomain != self.domain:
            raise SignatureMismatch(f"cannot compose {self.domain} with {other.codomain}")
        return LinearMap(self.system, other.domain, self.codomain,
                         {k: self(v) for k, v in other.matrix.items()})

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (self.domain, self.codomain) == (other.domain, other.codomain) and self.matrix == other.matrix

    def __str__(self):
        names = self.system.basis
        lines = []
        for k in sorted(self.matrix):
            src = "[" + ", ".join(names[i] for i in k) + "]"
            lines.append(f"{src} -> {self.matrix[k]}")
        return "\n".join(lines)


def identity_map(s: FrobeniusSystem, n: int) -> LinearMap:
    one = s.ring.one
    return LinearMap(s, n, n, {k: s.algebra.tensor(n, {k: one}) for k in basis_tuples(s.rank, n)})


def word_to_map(s: FrobeniusSystem, w: CobordismWord) -> LinearMap:
    alg = s.algebra
    one = alg.ring.one
    cols = {k: alg.tensor(w.width, {k: one}) for k in basis_tuples(s.rank, w.width)}
    for level in w.levels:
        actions = [generator_action(s, g) for g in level]
        cols = {k: apply_level(s, level, v, actions) for k, v in cols.items()}
    return LinearMap(s, w.width, w.output_width, cols)


class _Pieces:
    """Union-find over surface pieces carrying Euler characteristic,
    color and attached boundary circles."""

    def __init__(self, one: AlgElem):
        self.parent: list = []
        self.chi: list = []
        self.color: list = []
        self.inputs: list = []
        self.outputs: list = []
        self.one = one

    def new(self, chi=0, inputs=()):
        self.parent.append(len(self.parent))
        self.chi.append(chi)
        self.color.append(self.one)
        self.inputs.append(set(inputs))
        self.outputs.append(set())
        return len(self.parent) - 1

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a == b:
            return a
        self.parent[b] = a
        self.chi[a] += self.chi[b]
        self.color[a] = self.color[a] * self.color[b]
        self.inputs[a] |= self.inputs[b]
        self.outputs[a] |= self.outputs[b]
        return a


def word_to_surface(s: FrobeniusSystem, w: CobordismWord):
    """Compile a word into the colored cobordism it describes."""
    from .skein import ColoredCobordism, Component

    pieces = _Pieces(s.one)
    strands = [pieces.new(0, (i + 1,)) for i in range(w.width)]
    for level in w.levels:
        nxt, pos = [], 0
        for g in level:
            a, _ = g.arity
            ins = strands[pos:pos + a]
            pos += a
            if g.kind == "id":
                nxt.extend(ins)
            elif g.kind == "swap":
                nxt.extend([ins[1], ins[0]])
            elif g.kind == "unit":
                nxt.append(pieces.new(1))
            elif g.kind == "counit":
                r = pieces.find(ins[0])
                pieces.chi[r] += 1
            elif g.kind == "mult":
                r = pieces.union(ins[0], ins[1])
                pieces.chi[r] -= 1
                nxt.append(r)
            elif g.kind == "comult":
                r = pieces.find(ins[0])
                pieces.chi[r] -= 1
                nxt.extend([r, r])
            else:
                r = pieces.find(ins[0])
                pieces.color[r] = pieces.color[r] * g.color
                nxt.append(r)
        strands = nxt
    for j, p in enumerate(strands, start=1):
        pieces.outputs[pieces.find(p)].add(j)

    comps = []
    for p in {pieces.find(i) for i in range(len(pieces.parent))}:
        b = len(pieces.inputs[p]) + len(pieces.outputs[p])
        twice_genus = 2 - pieces.chi[p] - b
        assert twice_genus >= 0 and twice_genus % 2 == 0, "inconsistent Euler characteristic"
        comps.append(Component(twice_genus // 2, frozenset(pieces.inputs[p]),
                               frozenset(pieces.outputs[p]), pieces.color[p]))
    return ColoredCobordism(w.width, w.output_width, comps)
