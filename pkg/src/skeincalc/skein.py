"""Colored abstract cobordisms, skein relations and disk-basis normal forms.

The normal form of a cobordism with ``r`` inputs and ``s`` outputs is a
tensor in ``A^(x)(r+s)``: slots ``0..r-1`` are disks capping the input
circles, slots ``r..r+s-1`` disks capping the output circles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .algebra import AlgElem, TensorElem, basis_tuples
from .errors import GradingError, SignatureMismatch
from .frobenius import FrobeniusSystem
from .ring import RingElem
from .tqft import LinearMap


@dataclass(frozen=True)
class Component:
    genus: int
    inputs: frozenset
    outputs: frozenset
    color: AlgElem

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        object.__setattr__(self, "outputs", frozenset(self.outputs))

    @property
    def boundary(self) -> int:
        return len(self.inputs) + len(self.outputs)

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary

    def is_closed(self) -> bool:
        return not self.inputs and not self.outputs

    def sort_key(self):
        return (min(self.inputs, default=10**9), min(self.outputs, default=10**9),
                sorted(self.inputs), sorted(self.outputs), self.genus, str(self.color))


class ColoredCobordism:
    """An abstract orientable surface from ``r`` to ``s`` circles whose
    components carry colors in A."""

    __slots__ = ("r", "s", "components", "_hash")

    def __init__(self, r: int, s: int, components: Iterable[Component]):
        comps = tuple(sorted(components, key=Component.sort_key))
        ins = [i for c in comps for i in c.inputs]
        outs = [j for c in comps for j in c.outputs]
        if sorted(ins) != list(range(1, r + 1)):
            raise ValueError(f"component inputs {sorted(ins)} do not partition 1..{r}")
        if sorted(outs) != list(range(1, s + 1)):
            raise ValueError(f"component outputs {sorted(outs)} do not partition 1..{s}")
        self.r, self.s, self.components = r, s, comps
        self._hash = None

    @property
    def signature(self):
        return (self.r, self.s)

    def __eq__(self, other):
        if not isinstance(other, ColoredCobordism):
            return NotImplemented
        return self.signature == other.signature and self.components == other.components

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.r, self.s, self.components))
        return self._hash

    def __repr__(self):
        return f"ColoredCobordism({self.r}, {self.s}, {list(self.components)})"

    def replace(self, index: int, new: Sequence[Component]) -> ColoredCobordism:
        comps = list(self.components[:index]) + list(new) + list(self.components[index + 1:])
        return ColoredCobordism(self.r, self.s, comps)

    def disjoint_union(self, other: ColoredCobordism) -> ColoredCobordism:
        shifted = [Component(c.genus, {i + self.r for i in c.inputs}, {j + self.s for j in c.outputs}, c.color)
                   for c in other.components]
        return ColoredCobordism(self.r + other.r, self.s + other.s, list(self.components) + shifted)


def cylinders(s: FrobeniusSystem, n: int) -> ColoredCobordism:
    return ColoredCobordism(n, n, [Component(0, {i}, {i}, s.one) for i in range(1, n + 1)])


class SurfaceCombination:
    """Finite R-linear combination of cobordisms of a single signature."""

    def __init__(self, signature, terms: Mapping[ColoredCobordism, RingElem]):
        self.signature = tuple(signature)
        clean = {}
        for c, coef in terms.items():
            if c.signature != self.signature:
                raise SignatureMismatch(f"{c.signature} in a combination of signature {self.signature}")
            if coef:
                clean[c] = coef
        self.terms = clean

    @classmethod
    def of(cls, c: ColoredCobordism, coef=1):
        ring = c.components[0].color.ring if c.components else None
        if not isinstance(coef, RingElem):
            if ring is None:
                raise ValueError("give an explicit RingElem coefficient for the empty surface")
            coef = ring(coef)
        return cls(c.signature, {c: coef})

    def __add__(self, other: SurfaceCombination):
        if other.signature != self.signature:
            raise SignatureMismatch(f"{self.signature} vs {other.signature}")
        out = dict(self.terms)
        for c, coef in other.terms.items():
            out[c] = out[c] + coef if c in out else coef
        return SurfaceCombination(self.signature, out)

    def __neg__(self):
        return SurfaceCombination(self.signature, {c: -v for c, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, coef):
        return SurfaceCombination(self.signature, {c: v * coef for c, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SurfaceCombination):
            return NotImplemented
        return self.signature == other.signature and self.terms == other.terms

    def __len__(self):
        return len(self.terms)


@dataclass(frozen=True)
class SkeinElement:
    """Normal form of a skein class with ``r`` inputs and ``s`` outputs."""

    r: int
    s: int
    tensor: TensorElem

    def __post_init__(self):
        if self.tensor.arity != self.r + self.s:
            raise ValueError(f"tensor arity {self.tensor.arity} != {self.r}+{self.s}")

    @property
    def signature(self):
        return (self.r, self.s)

    def __add__(self, other):
        if other.signature != self.signature:
            raise SignatureMismatch(f"{self.signature} vs {other.signature}")
        return SkeinElement(self.r, self.s, self.tensor + other.tensor)

    def __sub__(self, other):
        return self + SkeinElement(other.r, other.s, -other.tensor)

    def __mul__(self, coef):
        return SkeinElement(self.r, self.s, self.tensor * coef)

    __rmul__ = __mul__

    def map_coefficients(self, fn, algebra):
        return SkeinElement(self.r, self.s, self.tensor.map_coefficients(fn, algebra))

    def __str__(self):
        return f"({self.r},{self.s}) {self.tensor}"


def iterated_coproduct(s: FrobeniusSystem, a: AlgElem, k: int, nesting: Sequence[int] | None = None) -> TensorElem:
    """``Delta^(k-1)(a)`` in ``A^(x)k``.  By default the coproduct is always
    applied to the first slot; ``nesting[j]`` picks the slot for step j."""
    t = TensorElem.from_elem(a)
    alg = s.algebra
    for step in range(k - 1):
        slot = nesting[step] if nesting else 0
        out = alg.tensor(t.arity + 1)
        deltas = {}
        for idx, c in t.items():
            i = idx[slot]
            if i not in deltas:
                deltas[i] = s.coproduct(alg.basis_elem(i))
            out = out + alg.tensor(t.arity + 1, {
                idx[:slot] + kk + idx[slot + 1:]: c * cc for kk, cc in deltas[i].items()})
        t = out
    return t


def component_normal_form(s: FrobeniusSystem, comp: Component, nesting=None) -> TensorElem:
    colour = s.handle() ** comp.genus * comp.color
    if comp.is_closed():
        return s.algebra.scalar_tensor(s.counit(colour))
    return iterated_coproduct(s, colour, comp.boundary, nesting)


def normal_form(s: FrobeniusSystem, c) -> SkeinElement:
    """Disk-basis normal form of a cobordism or a combination of them."""
    if isinstance(c, SurfaceCombination):
        r, s_out = c.signature
        total = s.algebra.tensor(r + s_out)
        for cob, coef in c.terms.items():
            total = total + normal_form(s, cob).tensor * coef
        return SkeinElement(r, s_out, total)
    alg = s.algebra
    acc = alg.scalar_tensor(1)
    positions = []
    for comp in c.components:
        acc = acc.tensor(component_normal_form(s, comp))
        positions.extend(sorted(i - 1 for i in comp.inputs))
        positions.extend(sorted(c.r + j - 1 for j in comp.outputs))
        if acc.is_zero():
            return SkeinElement(c.r, c.s, alg.tensor(c.r + c.s))
    perm = [0] * len(positions)
    for m, g in enumerate(positions):
        perm[g] = m
    return SkeinElement(c.r, c.s, acc.permute(perm))


def skein_equal(s: FrobeniusSystem, c1, c2) -> bool:
    n1, n2 = normal_form(s, c1), normal_form(s, c2)
    if n1.signature != n2.signature:
        raise SignatureMismatch(f"{n1.signature} vs {n2.signature}")
    return n1.tensor == n2.tensor


def monoidal_product(f: SkeinElement, g: SkeinElement) -> SkeinElement:
    t = f.tensor.tensor(g.tensor)
    # concatenated slots: f_in, f_out, g_in, g_out
    fi = list(range(f.r))
    fo = list(range(f.r, f.r + f.s))
    gi = [f.r + f.s + i for i in range(g.r)]
    go = [f.r + f.s + g.r + j for j in range(g.s)]
    return SkeinElement(f.r + g.r, f.s + g.s, t.permute(fi + gi + fo + go))


def compose(s: FrobeniusSystem, g: SkeinElement, f: SkeinElement) -> SkeinElement:
    """``g o f``: pair the output disks of ``f`` with the input disks of
    ``g`` through ``eps(b * b')``."""
    if f.s != g.r:
        raise SignatureMismatch(f"cannot compose {g.signature} after {f.signature}")
    gram = s.gram()
    r, m = f.r, f.s
    by_mid_g: dict = {}
    for k, c in g.tensor.items():
        by_mid_g.setdefault(k[:m], []).append((k[m:], c))
    by_mid_f: dict = {}
    for k, c in f.tensor.items():
        by_mid_f.setdefault(k[r:], []).append((k[:r], c))
    out: dict = {}
    for b, f_terms in by_mid_f.items():
        for b2, g_terms in by_mid_g.items():
            pair = s.ring.one
            for i, j in zip(b, b2):
                pair = pair * gram[i][j]
                if not pair:
                    break
            if not pair:
                continue
            for a, c1 in f_terms:
                c1p = c1 * pair
                for cc, c2 in g_terms:
                    key = a + cc
                    v = c1p * c2
                    out[key] = out[key] + v if key in out else v
    return SkeinElement(r, g.s, s.algebra.tensor(r + g.s, out))


def identity_element(s: FrobeniusSystem, n: int) -> SkeinElement:
    return normal_form(s, cylinders(s, n))


def skein_to_map(s: FrobeniusSystem, x: SkeinElement) -> LinearMap:
    """The linear map a normal form induces: input slots are paired with the
    argument through the counit, output slots are returned."""
    gram = s.gram()
    alg = s.algebra
    r = x.r
    cols = {}
    for a2 in basis_tuples(s.rank, r):
        out: dict = {}
        for k, c in x.tensor.items():
            coef = c
            for i, j in zip(k[:r], a2):
                coef = coef * gram[i][j]
                if not coef:
                    break
            if coef:
                key = k[r:]
                out[key] = out[key] + coef if key in out else coef
        cols[a2] = alg.tensor(x.s, out)
    return LinearMap(s, r, x.s, cols)


def map_to_skein(s: FrobeniusSystem, m: LinearMap) -> SkeinElement:
    """Reconstruct the normal form from its map by expanding every input
    disk color as ``a = sum_i eps(a u_i) v_i``."""
    import itertools

    alg = s.algebra
    out = alg.tensor(m.domain + m.codomain)
    for choice in itertools.product(s.pairs, repeat=m.domain):
        us = alg.pure_tensor([u for u, _ in choice])
        vs = alg.pure_tensor([v for _, v in choice])
        out = out + vs.tensor(m(us))
    return SkeinElement(m.domain, m.codomain, out)


# -- skein relations as rewriting steps ---------------------------------

def sphere_relation(s: FrobeniusSystem, c: ColoredCobordism, index: int) -> SurfaceCombination:
    """Remove the closed genus-0 component ``index`` colored ``a``,
    scaling by ``eps(a)``."""
    comp = c.components[index]
    if not comp.is_closed() or comp.genus != 0:
        raise ValueError("sphere relation needs a closed genus-0 component")
    return SurfaceCombination(c.signature, {c.replace(index, []): s.counit(comp.color)})


def separating_neck_cut(s: FrobeniusSystem, c: ColoredCobordism, index: int, genus: int,
                        inputs: Iterable[int], outputs: Iterable[int]) -> SurfaceCombination:
    """Cut component ``index`` along a separating neck into a piece with the
    given genus and boundary circles (colored ``a u_i``) and the rest
    (colored ``v_i``), summed over the structure pairs."""
    comp = c.components[index]
    ins, outs = frozenset(inputs), frozenset(outputs)
    if not ins <= comp.inputs or not outs <= comp.outputs or not 0 <= genus <= comp.genus:
        raise ValueError("cut piece must be part of the component")
    total = SurfaceCombination(c.signature, {})
    for u, v in s.pairs:
        p1 = Component(genus, ins, outs, comp.color * u)
        p2 = Component(comp.genus - genus, comp.inputs - ins, comp.outputs - outs, v)
        total = total + SurfaceCombination(c.signature, {c.replace(index, [p1, p2]): s.ring.one})
    return total


def nonseparating_neck_cut(s: FrobeniusSystem, c: ColoredCobordism, index: int) -> SurfaceCombination:
    """Remove one handle from component ``index``; the two new disks get
    ``a u_i`` and ``v_i`` on the same component."""
    comp = c.components[index]
    if comp.genus < 1:
        raise ValueError("nonseparating neck cut needs genus >= 1")
    total = SurfaceCombination(c.signature, {})
    for u, v in s.pairs:
        new = Component(comp.genus - 1, comp.inputs, comp.outputs, comp.color * u * v)
        total = total + SurfaceCombination(c.signature, {c.replace(index, [new]): s.ring.one})
    return total


def rewrite(comb: SurfaceCombination, step) -> SurfaceCombination:
    """Apply ``step`` (cobordism -> combination) to every term linearly."""
    total = SurfaceCombination(comb.signature, {})
    for c, coef in comb.terms.items():
        total = total + step(c) * coef
    return total


def degree(s: FrobeniusSystem, c: ColoredCobordism) -> int:
    """``-chi`` plus the degrees of the component colors."""
    if s.basis_degrees() is None:
        raise GradingError("system has no grading")
    total = 0
    for comp in c.components:
        d = s.elem_degree(comp.color)
        if d is None:
            raise GradingError(f"color {comp.color} is not homogeneous")
        total += -comp.euler_characteristic + d
    return total
