"""Exact ground rings: polynomials over Z with restricted denominators.

A :class:`RingDescriptor` names the indeterminates and the primes allowed
in coefficient denominators, so ``Z``, ``Z[h,t]`` and ``Z[1/2][t]`` are all
described by the same class.  :class:`RingElem` values are immutable and
canonical: two equal elements have identical term mappings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Union

from .errors import (
    CoefficientDomainError,
    DescriptorMismatch,
    IncompleteSubstitution,
    NotInvertible,
)

Number = Union[int, Fraction]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _strip(n: int, primes: Iterable[int]) -> int:
    n = abs(n)
    for p in primes:
        while n % p == 0:
            n //= p
    return n


def _norm(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


@dataclass(frozen=True)
class RingDescriptor:
    indeterminates: tuple = ()
    denominator_primes: frozenset = frozenset()

    def __post_init__(self):
        names = tuple(self.indeterminates)
        object.__setattr__(self, "indeterminates", names)
        object.__setattr__(self, "denominator_primes", frozenset(self.denominator_primes))
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate indeterminate in {names}")
        for name in names:
            if not name or not isinstance(name, str):
                raise ValueError("indeterminate names must be nonempty strings")
        for p in self.denominator_primes:
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")

    @property
    def nvars(self) -> int:
        return len(self.indeterminates)

    def __str__(self):
        s = "Z"
        if self.denominator_primes:
            s += "[" + ",".join(f"1/{p}" for p in sorted(self.denominator_primes)) + "]"
        if self.indeterminates:
            s += "[" + ",".join(self.indeterminates) + "]"
        return s

    def __call__(self, value: Number = 0) -> RingElem:
        return RingElem.constant(self, value)

    @property
    def zero(self) -> RingElem:
        return RingElem(self, {})

    @property
    def one(self) -> RingElem:
        return RingElem.constant(self, 1)

    def var(self, name: str) -> RingElem:
        try:
            i = self.indeterminates.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not an indeterminate of {self}") from None
        exp = tuple(1 if j == i else 0 for j in range(self.nvars))
        return RingElem(self, {exp: 1})

    def gens(self) -> tuple:
        return tuple(self.var(n) for n in self.indeterminates)

    def allows(self, c: Number) -> bool:
        """True iff the rational ``c`` is a legal coefficient."""
        c = Fraction(c)
        return _strip(c.denominator, self.denominator_primes) == 1

    def with_primes(self, primes: Iterable[int]) -> RingDescriptor:
        return RingDescriptor(self.indeterminates, self.denominator_primes | frozenset(primes))


class RingElem:
    """Exact polynomial over a :class:`RingDescriptor`.

    ``terms`` maps exponent vectors to nonzero rational coefficients and is
    kept in descending lexicographic exponent order.
    """

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingDescriptor, terms: Mapping[tuple, Number], *, check: bool = False):
        if check:
            for exp, c in terms.items():
                if len(exp) != ring.nvars or any((not isinstance(e, int)) or e < 0 for e in exp):
                    raise ValueError(f"bad exponent vector {exp} for {ring}")
                if not ring.allows(c):
                    raise CoefficientDomainError(f"coefficient {c} not allowed in {ring}")
        self.ring = ring
        self._terms = {e: _norm(terms[e]) for e in sorted(terms, reverse=True) if terms[e] != 0}
        self._hash = None

    @classmethod
    def constant(cls, ring: RingDescriptor, value: Number) -> RingElem:
        if not isinstance(value, (int, Fraction)):
            raise TypeError(f"cannot make a ring constant from {value!r}")
        return cls(ring, {(0,) * ring.nvars: value}, check=True)

    @classmethod
    def from_terms(cls, ring: RingDescriptor, terms: Mapping[tuple, Number]) -> RingElem:
        return cls(ring, dict(terms), check=True)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    # -- coercion ------------------------------------------------------
    def _coerce(self, other) -> RingElem:
        if isinstance(other, RingElem):
            if other.ring is not self.ring and other.ring != self.ring:
                raise DescriptorMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return RingElem.constant(self.ring, other)
        return NotImplemented

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return RingElem(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElem(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return RingElem(self.ring, {})
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return RingElem(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- predicates ----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RingElem(self.ring, {(0,) * self.ring.nvars: other})
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            # constants hash like the number they equal
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.ring, tuple(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0,) * self.ring.nvars, 0)

    def degree(self, weights: Mapping[str, int] | None = None) -> int | None:
        """Weighted total degree, or None if not homogeneous (or zero)."""
        if weights is None:
            weights = {n: 1 for n in self.ring.indeterminates}
        degs = {
            sum(e * weights[n] for e, n in zip(exp, self.ring.indeterminates) if e)
            for exp in self._terms
        }
        return degs.pop() if len(degs) == 1 else None

    def is_unit(self) -> bool:
        if not self._terms or not self.is_constant():
            return False
        c = Fraction(self.constant_value())
        return _strip(c.numerator, self.ring.denominator_primes) == 1

    def inverse(self) -> RingElem:
        if not self.is_unit():
            raise NotInvertible(f"{self} is not a unit in {self.ring}")
        return RingElem.constant(self.ring, 1 / Fraction(self.constant_value()))

    # -- homomorphisms -------------------------------------------------
    def substitute(self, assignment: Mapping[str, RingElem], target: RingDescriptor | None = None) -> RingElem:
        """Apply the evaluation homomorphism sending each indeterminate to
        ``assignment[name]``; values must all live over ``target``."""
        missing = [n for n in self.ring.indeterminates if n not in assignment]
        if missing:
            raise IncompleteSubstitution(f"no value for {', '.join(missing)}")
        values = [assignment[n] for n in self.ring.indeterminates]
        if target is None:
            rings = {v.ring for v in values if isinstance(v, RingElem)}
            if len(rings) > 1:
                raise DescriptorMismatch("assignment values live over different rings")
            target = rings.pop() if rings else self.ring
        values = [v if isinstance(v, RingElem) else RingElem.constant(target, v) for v in values]
        for v in values:
            if v.ring != target:
                raise DescriptorMismatch(f"assignment value {v} not over {target}")
        result = target.zero
        for exp, c in self._terms.items():
            if not target.allows(c):
                raise CoefficientDomainError(f"coefficient {c} not allowed in {target}")
            mono = RingElem.constant(target, c)
            for v, e in zip(values, exp):
                if e:
                    mono = mono * v ** e
            result = result + mono
        return result

    def change_ring(self, target: RingDescriptor) -> RingElem:
        """Reinterpret over ``target`` by matching indeterminate names."""
        used = {n for exp in self._terms for n, e in zip(self.ring.indeterminates, exp) if e}
        return self.substitute({n: target.var(n) if n in used else target.zero
                                for n in self.ring.indeterminates}, target)

    # -- rendering -----------------------------------------------------
    def _monomial(self, exp) -> str:
        parts = []
        for name, e in zip(self.ring.indeterminates, exp):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def render_terms(self):
        """Yield (sign, unsigned text) per term."""
        for exp, c in self._terms.items():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = self._monomial(exp)
            if not mono:
                yield sign, str(a)
            elif a == 1:
                yield sign, mono
            else:
                yield sign, f"{a}*{mono}"

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for i, (sign, text) in enumerate(self.render_terms()):
            if i == 0:
                out.append(text if sign == "+" else "-" + text)
            else:
                out.append(f" {sign} {text}")
        return "".join(out)

    def is_monomial_like(self) -> bool:
        """True if the rendering needs no parentheses as a product factor."""
        return len(self._terms) == 1 and next(iter(self._terms.values())) > 0

    def __repr__(self):
        return f"RingElem({self}, {self.ring})"


def ring_sum(ring: RingDescriptor, values: Iterable[RingElem]) -> RingElem:
    return reduce(lambda a, b: a + b, values, ring.zero)


def determinant(matrix, ring: RingDescriptor) -> RingElem:
    """Determinant by cofactor expansion (small matrices only)."""
    n = len(matrix)
    if n == 0:
        return ring.one
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = ring.zero
    for j in range(n):
        if matrix[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * determinant(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def inverse_matrix(matrix, ring: RingDescriptor):
    """Exact inverse via the adjugate; raises NotInvertible unless the
    determinant is a unit."""
    n = len(matrix)
    det = determinant(matrix, ring)
    if not det.is_unit():
        raise NotInvertible(f"determinant {det} is not a unit in {ring}")
    dinv = det.inverse()
    inv = [[ring.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(matrix) if k != i]
            cof = determinant(minor, ring)
            if (i + j) % 2:
                cof = -cof
            inv[j][i] = cof * dinv
    return inv
