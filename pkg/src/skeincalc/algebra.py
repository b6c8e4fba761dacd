"""Free commutative algebras over a ground ring, their elements and tensors.

An :class:`Algebra` is a free R-module with a fixed ordered basis and a
multiplication table.  Elements (:class:`AlgElem`) are coordinate vectors;
:class:`TensorElem` holds sparse elements of ``A^{(x)k}`` keyed by basis
index tuples.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DescriptorMismatch, NotInvertible
from .ring import RingDescriptor, RingElem, inverse_matrix


class Algebra:
    """Commutative algebra, free over ``ring`` with basis ``basis``.

    ``table[i][j]`` holds the coordinates of ``basis[i] * basis[j]``;
    ``generators`` maps DSL identifiers to elements (as coordinate tuples).
    ``presentation`` records how the algebra was built so it can be printed
    back: ``("extension", name, coeffs)`` for ``R[X]/(X^n - sum c_k X^k)``,
    ``("group", orders)`` or ``("table",)``.
    """

    def __init__(self, ring: RingDescriptor, basis: Sequence[str], table, unit,
                 generators: Mapping[str, Sequence[RingElem]] | None = None,
                 presentation: tuple = ("table",)):
        self.ring = ring
        self.basis = tuple(basis)
        n = len(self.basis)
        if n < 1:
            raise ValueError("an algebra needs a nonempty basis")
        self.table = tuple(tuple(tuple(table[i][j]) for j in range(n)) for i in range(n))
        self.unit_coords = tuple(unit)
        self.generators = {k: tuple(v) for k, v in (generators or {}).items()}
        self.presentation = presentation
        # sparse structure constants: _struct[i][j] = [(k, c), ...]
        self._struct = [
            [[(k, c) for k, c in enumerate(self.table[i][j]) if c] for j in range(n)]
            for i in range(n)
        ]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Algebra):
            return NotImplemented
        return (self.ring == other.ring and self.basis == other.basis
                and self.table == other.table and self.unit_coords == other.unit_coords)

    def __hash__(self):
        return hash((self.ring, self.basis))

    # -- elements ------------------------------------------------------
    def element(self, coords: Iterable) -> AlgElem:
        return AlgElem(self, tuple(self._scalar(c) for c in coords))

    def _scalar(self, c) -> RingElem:
        if isinstance(c, RingElem):
            if c.ring != self.ring:
                raise DescriptorMismatch(f"{c} is over {c.ring}, expected {self.ring}")
            return c
        return RingElem.constant(self.ring, c)

    @property
    def zero(self) -> AlgElem:
        return AlgElem(self, (self.ring.zero,) * self.rank)

    @property
    def one(self) -> AlgElem:
        return AlgElem(self, self.unit_coords)

    def basis_elem(self, i: int) -> AlgElem:
        z = self.ring.zero
        return AlgElem(self, tuple(self.ring.one if j == i else z for j in range(self.rank)))

    def basis_elems(self) -> list:
        return [self.basis_elem(i) for i in range(self.rank)]

    def scalar(self, c) -> AlgElem:
        return self.one * self._scalar(c)

    def gen(self, name: str) -> AlgElem:
        return AlgElem(self, self.generators[name])

    def mul_basis(self, i: int, j: int):
        return self._struct[i][j]

    def mult_matrix(self, a: AlgElem):
        """Matrix of ``b -> a*b``; column j is ``a * basis[j]``."""
        cols = [(a * self.basis_elem(j)).coords for j in range(self.rank)]
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]

    def inverse(self, a: AlgElem) -> AlgElem:
        try:
            inv = inverse_matrix(self.mult_matrix(a), self.ring)
        except NotInvertible:
            raise NotInvertible(f"{a} is not invertible in the algebra") from None
        u = self.unit_coords
        return AlgElem(self, tuple(
            sum((inv[i][j] * u[j] for j in range(self.rank)), self.ring.zero)
            for i in range(self.rank)))

    def map_coefficients(self, fn: Callable[[RingElem], RingElem], ring: RingDescriptor) -> Algebra:
        """Base change along a ring homomorphism ``fn`` with target ``ring``."""
        table = [[tuple(fn(c) for c in self.table[i][j]) for j in range(self.rank)]
                 for i in range(self.rank)]
        pres = self.presentation
        if pres[0] == "extension":
            pres = ("extension", pres[1], tuple(fn(c) for c in pres[2]))
        return Algebra(ring, self.basis, table, tuple(fn(c) for c in self.unit_coords),
                       {k: tuple(fn(c) for c in v) for k, v in self.generators.items()}, pres)

    # -- tensors -------------------------------------------------------
    def tensor(self, arity: int, terms: Mapping[tuple, RingElem] | None = None) -> TensorElem:
        return TensorElem(self, arity, terms or {})

    def scalar_tensor(self, c) -> TensorElem:
        return TensorElem(self, 0, {(): self._scalar(c)})

    def pure_tensor(self, factors: Sequence[AlgElem]) -> TensorElem:
        out = self.scalar_tensor(1)
        for f in factors:
            out = out.tensor(TensorElem.from_elem(f))
        return out


class AlgElem:
    """Element of a free algebra as a coordinate vector over its basis."""

    __slots__ = ("algebra", "coords", "_hash")

    def __init__(self, algebra: Algebra, coords: tuple):
        if len(coords) != algebra.rank:
            raise ValueError(f"expected {algebra.rank} coordinates, got {len(coords)}")
        self.algebra = algebra
        self.coords = coords
        self._hash = None

    @property
    def ring(self) -> RingDescriptor:
        return self.algebra.ring

    def _coerce(self, other):
        if isinstance(other, AlgElem):
            if other.algebra is not self.algebra and other.algebra != self.algebra:
                raise DescriptorMismatch("elements of different algebras")
            return other
        if isinstance(other, (int, Fraction, RingElem)):
            return self.algebra.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgElem(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return AlgElem(self.algebra, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            c = self.algebra._scalar(other)
            return AlgElem(self.algebra, tuple(a * c for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        alg = self.algebra
        out = [alg.ring.zero] * alg.rank
        for i, a in enumerate(self.coords):
            if not a:
                continue
            for j, b in enumerate(other.coords):
                if not b:
                    continue
                ab = a * b
                for k, c in alg.mul_basis(i, j):
                    out[k] = out[k] + ab * c
        return AlgElem(alg, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = self.algebra.one
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            other = self.algebra.scalar(other)
        if not isinstance(other, AlgElem):
            return NotImplemented
        return self.algebra == other.algebra and self.coords == other.coords

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coords)
        return self._hash

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def inverse(self) -> AlgElem:
        return self.algebra.inverse(self)

    def map_coefficients(self, fn, algebra: Algebra) -> AlgElem:
        return AlgElem(algebra, tuple(fn(c) for c in self.coords))

    def __str__(self):
        pieces = []
        for i in reversed(range(self.algebra.rank)):
            pieces.extend(_coeff_pieces(self.coords[i], self.algebra.basis[i]))
        return _join(pieces)

    def __repr__(self):
        return f"AlgElem({self})"


def _coeff_pieces(c: RingElem, name: str):
    """Signed text pieces for ``c * name``; ``name == "1"`` means bare."""
    if not c:
        return []
    if name == "1":
        return list(c.render_terms())
    if c == 1:
        return [("+", name)]
    if c == -1:
        return [("-", name)]
    terms = list(c.render_terms())
    if len(terms) == 1:
        sign, text = terms[0]
        return [(sign, f"{text}*{name}")]
    return [("+", f"({c})*{name}")]


def _join(pieces) -> str:
    if not pieces:
        return "0"
    out = []
    for k, (sign, text) in enumerate(pieces):
        if k == 0:
            out.append(text if sign == "+" else "-" + text)
        else:
            out.append(f" {sign} {text}")
    return "".join(out)


class TensorElem:
    """Sparse element of ``A^{(x)arity}``: basis index tuples -> coefficients."""

    __slots__ = ("algebra", "arity", "_terms", "_hash")

    def __init__(self, algebra: Algebra, arity: int, terms: Mapping[tuple, RingElem]):
        self.algebra = algebra
        self.arity = arity
        clean = {}
        for k, c in terms.items():
            if len(k) != arity:
                raise ValueError(f"index {k} does not have arity {arity}")
            if c:
                clean[k] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def from_elem(cls, a: AlgElem) -> TensorElem:
        return cls(a.algebra, 1, {(i,): c for i, c in enumerate(a.coords) if c})

    @property
    def ring(self):
        return self.algebra.ring

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def coefficient(self, idx: tuple) -> RingElem:
        return self._terms.get(idx, self.algebra.ring.zero)

    def _check(self, other: TensorElem):
        if not isinstance(other, TensorElem):
            raise TypeError("expected a TensorElem")
        if other.arity != self.arity:
            raise DescriptorMismatch(f"tensor arity {self.arity} vs {other.arity}")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise DescriptorMismatch("tensors over different algebras")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return TensorElem(self.algebra, self.arity, out)

    __radd__ = __add__

    def __neg__(self):
        return TensorElem(self.algebra, self.arity, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, TensorElem):
            return NotImplemented
        c = self.algebra._scalar(scalar)
        return TensorElem(self.algebra, self.arity, {k: v * c for k, v in self._terms.items()})

    __rmul__ = __mul__

    def tensor(self, other: TensorElem) -> TensorElem:
        out = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                out[k1 + k2] = c1 * c2
        return TensorElem(self.algebra, self.arity + other.arity, out)

    def permute(self, perm: Sequence[int]) -> TensorElem:
        """Slot ``j`` of the result is slot ``perm[j]`` of ``self``."""
        return TensorElem(self.algebra, self.arity,
                          {tuple(k[p] for p in perm): c for k, c in self._terms.items()})

    def scalar_value(self) -> RingElem:
        if self.arity != 0:
            raise ValueError("not a scalar")
        return self.coefficient(())

    def to_elem(self) -> AlgElem:
        if self.arity != 1:
            raise ValueError("not an arity-1 tensor")
        return AlgElem(self.algebra, tuple(self.coefficient((i,)) for i in range(self.algebra.rank)))

    def map_coefficients(self, fn, algebra: Algebra) -> TensorElem:
        return TensorElem(algebra, self.arity, {k: fn(c) for k, c in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, TensorElem):
            return NotImplemented
        return (self.arity == other.arity and self.algebra == other.algebra
                and self._terms == other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self._terms.items())))
        return self._hash

    def is_zero(self) -> bool:
        return not self._terms

    def sorted_items(self):
        """Terms in display order: higher total index first, then ascending."""
        return sorted(self._terms.items(), key=lambda kv: (-sum(kv[0]), kv[0]))

    def __str__(self):
        if self.arity == 0:
            return str(self.scalar_value())
        names = self.algebra.basis
        pieces = []
        for k, c in self.sorted_items():
            label = "[" + ", ".join(names[i] for i in k) + "]"
            pieces.extend(_coeff_pieces(c, label))
        return _join(pieces)

    def __repr__(self):
        return f"TensorElem({self})"


def basis_tuples(rank: int, arity: int):
    return itertools.product(range(rank), repeat=arity)


def linear_extend(t: TensorElem, fn: Callable[[tuple], TensorElem], arity: int, algebra: Algebra) -> TensorElem:
    """Apply a map defined on basis tuples linearly to ``t``."""
    out: dict = {}
    for k, c in t.items():
        for k2, c2 in fn(k).items():
            v = c * c2
            out[k2] = out[k2] + v if k2 in out else v
    return TensorElem(algebra, arity, out)
