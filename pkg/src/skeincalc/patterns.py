"""Patterns (bicolored graphs over surface symbols) and their state sums.

Black vertices stand for components of an incompressible surface, given by
opaque labels; white vertices are capped-off pieces that evaluate to
scalars through the counit.  Edges record neck cuts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .algebra import AlgElem
from .errors import PairingError, StateSumTooLarge
from .frobenius import FrobeniusSystem
from .ring import RingElem

MAX_EDGES = 12


@dataclass(frozen=True)
class Vertex:
    name: str
    black: bool
    label: str = ""

    @property
    def symbol(self) -> str:
        return self.label or self.name


@dataclass
class Pattern:
    """Graph with black/white vertices, oriented edges and one color per
    connected component, attached at an anchor vertex."""

    vertices: Sequence[Vertex]
    edges: Sequence[tuple] = ()
    colors: Mapping[str, AlgElem] = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = tuple(self.vertices)
        names = [v.name for v in self.vertices]
        if len(set(names)) != len(names):
            raise ValueError("duplicate vertex name")
        self._index = {n: i for i, n in enumerate(names)}
        self.edges = tuple((a, b) for a, b in self.edges)
        for a, b in self.edges:
            if a not in self._index or b not in self._index:
                raise ValueError(f"edge {a} -> {b} references an unknown vertex")
        self.colors = dict(self.colors)
        comps = self.components()
        seen = set()
        for anchor in self.colors:
            if anchor not in self._index:
                raise ValueError(f"color anchor {anchor} is not a vertex")
            cid = self._comp_of[anchor]
            if cid in seen:
                raise ValueError(f"component of {anchor} is colored twice")
            seen.add(cid)
        self._uncolored = [c[0] for i, c in enumerate(comps) if i not in seen]

    @property
    def black(self):
        return [v for v in self.vertices if v.black]

    @property
    def white(self):
        return [v for v in self.vertices if not v.black]

    def components(self) -> list:
        parent = list(range(len(self.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            ra, rb = find(self._index[a]), find(self._index[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: dict = {}
        for i, v in enumerate(self.vertices):
            groups.setdefault(find(i), []).append(v.name)
        comps = list(groups.values())
        self._comp_of = {n: k for k, c in enumerate(comps) for n in c}
        return comps

    def anchors(self, one: AlgElem) -> dict:
        """Color per anchor vertex, with uncolored components colored 1."""
        out = dict(self.colors)
        for name in self._uncolored:
            out[name] = one
        return out

    def reversed(self, which: Sequence[int]) -> Pattern:
        edges = [(b, a) if k in which else (a, b) for k, (a, b) in enumerate(self.edges)]
        return Pattern(self.vertices, edges, self.colors)

    def moved_anchor(self, old: str, new: str) -> Pattern:
        colors = dict(self.colors)
        colors[new] = colors.pop(old)
        return Pattern(self.vertices, self.edges, colors)


class StateSumResult:
    """Linear combination of basis-colored black-vertex configurations.

    Keys are sorted tuples of ``(symbol, basis index)`` pairs.
    """

    def __init__(self, system: FrobeniusSystem, terms: Mapping[tuple, RingElem]):
        self.system = system
        self.terms = {k: c for k, c in terms.items() if c}

    def __eq__(self, other):
        if not isinstance(other, StateSumResult):
            return NotImplemented
        return self.terms == other.terms

    def __sub__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] - c if k in out else -c
        return StateSumResult(self.system, out)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return StateSumResult(self.system, out)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_items(self):
        return sorted(self.terms.items())

    def __str__(self):
        if not self.terms:
            return "0"
        basis = self.system.basis
        parts = []
        for k, c in self.sorted_items():
            label = "{" + ", ".join(f"{sym}: {basis[i]}" for sym, i in k) + "}"
            parts.append(f"({c})*{label}" if c != 1 else label)
        return " + ".join(parts)


def state_sum(s: FrobeniusSystem, p: Pattern) -> StateSumResult:
    """Sum over edge labelings by structure pairs of the state evaluations."""
    if len(p.edges) > MAX_EDGES:
        raise StateSumTooLarge(f"{len(p.edges)} edges exceed the limit of {MAX_EDGES}")
    alg = s.algebra
    names = [v.name for v in p.vertices]
    anchors = p.anchors(alg.one)
    base = {n: anchors.get(n, alg.one) for n in names}
    black = [v for v in p.vertices if v.black]
    white = [v for v in p.vertices if not v.black]
    out: dict = {}
    for state in itertools.product(range(len(s.pairs)), repeat=len(p.edges)):
        value = dict(base)
        for (a, b), i in zip(p.edges, state):
            u, v = s.pairs[i]
            value[a] = value[a] * u
            value[b] = value[b] * v
        scalar = s.ring.one
        for w in white:
            scalar = scalar * s.counit(value[w.name])
            if not scalar:
                break
        if not scalar:
            continue
        configs = [((), scalar)]
        for v in black:
            coords = value[v.name].coords
            configs = [(key + ((v.symbol, i),), c * coords[i])
                       for key, c in configs for i in range(s.rank) if coords[i]]
        for key, c in configs:
            key = tuple(sorted(key))
            out[key] = out[key] + c if key in out else c
    return StateSumResult(s, out)


def forget_projection(p: Pattern) -> list:
    return [v.symbol for v in p.vertices if v.black]


def tubing_difference(s: FrobeniusSystem, p1: Pattern, p2: Pattern) -> StateSumResult:
    """``K(p1) - K(p2)`` for two patterns over the same black surface."""
    if sorted(forget_projection(p1)) != sorted(forget_projection(p2)):
        raise PairingError("patterns have different black-vertex symbols")
    return state_sum(s, p1) - state_sum(s, p2)
