"""Free Frobenius systems: structure maps, axiom checks, dual bases,
twisting and coefficient specialization."""

from __future__ import annotations

import itertools
from typing import Mapping, Sequence

from .algebra import Algebra, AlgElem, TensorElem
from .errors import AxiomError, NoDualBasis, NotInvertible, TwistError
from .ring import RingDescriptor, RingElem, determinant, inverse_matrix


class FrobeniusSystem:
    """A Frobenius algebra together with structure elements ``(u_i, v_i)``.

    The coproduct is ``Delta(1) = sum_i u_i (x) v_i`` extended A-linearly and
    the counit is given on the basis.  Every identity a Frobenius system must
    satisfy is checked in the constructor; an instance that exists is valid.
    """

    def __init__(self, algebra: Algebra, counit: Sequence, pairs: Sequence[tuple],
                 degrees: Mapping[str, int] | None = None, name: str | None = None):
        self.algebra = algebra
        self.counit_coords = tuple(algebra._scalar(c) for c in counit)
        if len(self.counit_coords) != algebra.rank:
            raise ValueError("counit needs one value per basis element")
        self.pairs = tuple((u, v) for u, v in pairs)
        for u, v in self.pairs:
            if u.algebra != algebra or v.algebra != algebra:
                raise ValueError("structure elements must lie in the algebra")
        self.degrees = dict(degrees) if degrees else None
        self.name = name
        self._delta1 = None
        self._gram = None
        verify_axioms(self)

    def __repr__(self):
        return f"FrobeniusSystem({self.name or 'anonymous'}, rank={self.rank}, over {self.ring})"

    def __eq__(self, other):
        if not isinstance(other, FrobeniusSystem):
            return NotImplemented
        return (self.algebra == other.algebra and self.counit_coords == other.counit_coords
                and self.pairs == other.pairs)

    def __hash__(self):
        return hash((self.algebra, self.counit_coords))

    @property
    def ring(self) -> RingDescriptor:
        return self.algebra.ring

    @property
    def rank(self) -> int:
        return self.algebra.rank

    @property
    def basis(self):
        return self.algebra.basis

    @property
    def one(self) -> AlgElem:
        return self.algebra.one

    def elem(self, coords) -> AlgElem:
        return self.algebra.element(coords)

    def gen(self, name: str) -> AlgElem:
        return self.algebra.gen(name)

    # -- structure maps ------------------------------------------------
    def mul(self, a: AlgElem, b: AlgElem) -> AlgElem:
        return a * b

    def counit(self, a: AlgElem) -> RingElem:
        total = self.ring.zero
        for c, e in zip(a.coords, self.counit_coords):
            if c and e:
                total = total + c * e
        return total

    def delta1(self) -> TensorElem:
        if self._delta1 is None:
            alg = self.algebra
            self._delta1 = sum((alg.pure_tensor([u, v]) for u, v in self.pairs), alg.tensor(2))
        return self._delta1

    def coproduct(self, a: AlgElem) -> TensorElem:
        alg = self.algebra
        return sum((alg.pure_tensor([u, v * a]) for u, v in self.pairs), alg.tensor(2))

    def handle(self) -> AlgElem:
        """``mu(Delta(1))``: the color that replaces a removed handle."""
        return sum((u * v for u, v in self.pairs), self.algebra.zero)

    def rank_invariant(self) -> RingElem:
        return self.counit(self.handle())

    def gram(self):
        """``G[i][j] = eps(b_i b_j)`` over the stored basis."""
        if self._gram is None:
            b = self.algebra.basis_elems()
            self._gram = tuple(tuple(self.counit(x * y) for y in b) for x in b)
        return self._gram

    def dual_basis(self) -> list:
        g = [list(row) for row in self.gram()]
        det = determinant(g, self.ring)
        if not det.is_unit():
            raise NoDualBasis(det)
        inv = inverse_matrix(g, self.ring)
        n = self.rank
        return [self.elem([inv[k][j] for k in range(n)]) for j in range(n)]

    def geometric_check(self) -> bool:
        """True iff the first ``rank`` powers of the handle element form an
        R-basis of A (so colors can be traded for genus)."""
        h = self.handle()
        powers, p = [], self.one
        for _ in range(self.rank):
            powers.append(p.coords)
            p = p * h
        m = [[powers[j][i] for j in range(self.rank)] for i in range(self.rank)]
        return determinant(m, self.ring).is_unit()

    # -- new systems ---------------------------------------------------
    def with_pairs(self, pairs, name: str | None = None) -> FrobeniusSystem:
        return FrobeniusSystem(self.algebra, self.counit_coords, pairs, self.degrees, name)

    def twist(self, y: AlgElem, name: str | None = None) -> FrobeniusSystem:
        try:
            yinv = y.inverse()
        except NotInvertible as exc:
            raise TwistError(str(exc)) from None
        counit = [self.counit(y * b) for b in self.algebra.basis_elems()]
        pairs = [(u, v * yinv) for u, v in self.pairs]
        return FrobeniusSystem(self.algebra, counit, pairs, self.degrees, name)

    def specialize(self, assignment: Mapping[str, object], target: RingDescriptor | None = None,
                   name: str | None = None):
        """Base change along an evaluation homomorphism of the ground ring.

        Indeterminates missing from ``assignment`` are kept.  Returns the new
        system and a function mapping elements, tensors (anything with a
        ``map_coefficients`` method) and ring elements across.
        """
        full, target = _complete_assignment(self.ring, assignment, target)

        def fn(c: RingElem) -> RingElem:
            return c.substitute(full, target)

        alg = self.algebra.map_coefficients(fn, target)
        counit = [fn(c) for c in self.counit_coords]
        pairs = [(u.map_coefficients(fn, alg), v.map_coefficients(fn, alg)) for u, v in self.pairs]
        degrees = None
        if self.degrees:
            degrees = {k: d for k, d in self.degrees.items()
                       if k not in self.ring.indeterminates or k in target.indeterminates}
        system = FrobeniusSystem(alg, counit, pairs, degrees, name)

        def mapper(x):
            if isinstance(x, RingElem):
                return fn(x)
            return x.map_coefficients(fn, alg)

        return system, mapper

    def extend_scalars(self, primes, name: str | None = None) -> FrobeniusSystem:
        """Same system over a ring with more invertible primes."""
        system, _ = self.specialize({}, self.ring.with_primes(primes), name)
        return system

    # -- grading -------------------------------------------------------
    def basis_degrees(self):
        if not self.degrees:
            return None
        pres = self.algebra.presentation
        out = []
        for i, b in enumerate(self.basis):
            if b in self.degrees:
                out.append(self.degrees[b])
            elif pres[0] == "extension" and pres[1] in self.degrees:
                out.append(i * self.degrees[pres[1]])
            elif i == 0 and self.algebra.unit_coords == self.algebra.basis_elem(0).coords:
                out.append(0)
            else:
                return None
        return out

    def _ring_weights(self):
        return {n: self.degrees.get(n, 0) for n in self.ring.indeterminates}

    def elem_degree(self, a: AlgElem) -> int | None:
        """Degree of a homogeneous nonzero element, else None."""
        return self.tensor_degree(TensorElem.from_elem(a))

    def tensor_degree(self, t: TensorElem) -> int | None:
        bd = self.basis_degrees()
        if bd is None:
            return None
        w = self._ring_weights()
        degs = set()
        for k, c in t.items():
            for exp in c.terms:
                d = sum(e * w[n] for e, n in zip(exp, self.ring.indeterminates))
                degs.add(d + sum(bd[i] for i in k))
        return degs.pop() if len(degs) == 1 else None

    def operator_degrees(self) -> dict:
        """Measured degrees of the structure maps under the declared grading
        (None where a map is not homogeneous)."""
        bd = self.basis_degrees()
        if bd is None:
            return {}
        n = self.rank

        def shift(values):
            s = {v for v in values if v is not None}
            return s.pop() if len(s) == 1 else None

        mult = []
        for i in range(n):
            for j in range(n):
                x = self.elem(self.algebra.table[i][j])
                if x:
                    d = self.elem_degree(x)
                    mult.append(None if d is None else d - bd[i] - bd[j])
        counit = []
        for i, c in enumerate(self.counit_coords):
            if c:
                d = c.degree(self._ring_weights())
                counit.append(None if d is None else d - bd[i])
        return {
            "mult": shift(mult),
            "unit": self.elem_degree(self.one),
            "counit": shift(counit),
            "comult": self.tensor_degree(self.delta1()),
        }


def _complete_assignment(ring: RingDescriptor, assignment, target):
    values = {}
    for name, v in assignment.items():
        if name not in ring.indeterminates:
            raise KeyError(f"{name!r} is not an indeterminate of {ring}")
        values[name] = v
    if target is None:
        names = []
        for n in ring.indeterminates:
            v = values.get(n)
            if v is None:
                names.append(n)
            elif isinstance(v, RingElem):
                for m in v.ring.indeterminates:
                    if m not in names and any(
                            e for exp in v.terms for e, mm in zip(exp, v.ring.indeterminates) if mm == m):
                        names.append(m)
        names = [n for n in ring.indeterminates if n in names] + [n for n in names if n not in ring.indeterminates]
        target = RingDescriptor(tuple(names), ring.denominator_primes)
    full = {}
    for n in ring.indeterminates:
        v = values.get(n)
        if v is None:
            full[n] = target.var(n)
        elif isinstance(v, RingElem):
            full[n] = v if v.ring == target else v.change_ring(target)
        else:
            full[n] = RingElem.constant(target, v)
    return full, target


def verify_axioms(s: FrobeniusSystem) -> None:
    """Run the full identity suite exhaustively over basis elements."""
    alg = s.algebra
    basis = alg.basis_elems()
    names = alg.basis
    n = alg.rank

    def fail(identity, idx):
        if idx:
            raise AxiomError(identity, idx)

    fail("commutativity a*b = b*a",
         [f"{names[i]}*{names[j]}" for i in range(n) for j in range(i + 1, n)
          if alg.table[i][j] != alg.table[j][i]])
    fail("unit law 1*a = a", [names[i] for i in range(n) if alg.one * basis[i] != basis[i]])
    fail("associativity (a*b)*c = a*(b*c)",
         [f"{names[i]}*{names[j]}*{names[k]}" for i, j, k in itertools.product(range(n), repeat=3)
          if (basis[i] * basis[j]) * basis[k] != basis[i] * (basis[j] * basis[k])])

    if not s.pairs:
        raise AxiomError("nonempty structure elements")
    d1 = s.delta1()
    if d1 != d1.permute((1, 0)):
        raise AxiomError("symmetry sum u_i(x)v_i = sum v_i(x)u_i")

    fail("expansion a = sum eps(a*u_i)*v_i",
         [names[i] for i, a in enumerate(basis)
          if sum((v * s.counit(a * u) for u, v in s.pairs), alg.zero) != a])
    fail("expansion a = sum eps(a*v_i)*u_i",
         [names[i] for i, a in enumerate(basis)
          if sum((u * s.counit(a * v) for u, v in s.pairs), alg.zero) != a])

    deltas = [s.coproduct(a) for a in basis]
    fail("counit law (eps(x)Id)Delta = Id",
         [names[i] for i, a in enumerate(basis) if _counit_left(s, deltas[i]) != a])
    fail("counit law (Id(x)eps)Delta = Id",
         [names[i] for i, a in enumerate(basis) if _counit_left(s, deltas[i].permute((1, 0))) != a])
    fail("cocommutativity tau*Delta = Delta",
         [names[i] for i in range(n) if deltas[i] != deltas[i].permute((1, 0))])
    fail("bimodule Delta(a*b) = (a(x)1)*Delta(b)",
         [f"{names[i]}*{names[j]}" for i in range(n) for j in range(n)
          if s.coproduct(basis[i] * basis[j]) != _left_act(basis[i], deltas[j])])
    fail("coassociativity (Id(x)Delta)Delta = (Delta(x)Id)Delta",
         [names[i] for i in range(n)
          if _comult_slot(s, deltas[i], 1) != _comult_slot(s, deltas[i], 0)])

    r = len(s.pairs)
    pure = [alg.pure_tensor([u, v]) for u, v in s.pairs]
    for size in range(1, r + 1):
        for subset in itertools.combinations(range(r), size):
            if sum((pure[i] for i in subset), alg.tensor(2)).is_zero():
                raise AxiomError("no sub-collection of structure pairs sums to zero",
                                 [f"pairs {', '.join(str(i + 1) for i in subset)}"])


def _counit_left(s: FrobeniusSystem, t: TensorElem) -> AlgElem:
    out = s.algebra.zero
    for (i, j), c in t.items():
        e = s.counit_coords[i]
        if e:
            out = out + s.algebra.basis_elem(j) * (c * e)
    return out


def _left_act(a: AlgElem, t: TensorElem) -> TensorElem:
    alg = a.algebra
    out = alg.tensor(2)
    for (i, j), c in t.items():
        out = out + alg.pure_tensor([a * alg.basis_elem(i), alg.basis_elem(j)]) * c
    return out


def _comult_slot(s: FrobeniusSystem, t: TensorElem, slot: int) -> TensorElem:
    alg = s.algebra
    out = alg.tensor(t.arity + 1)
    for k, c in t.items():
        d = s.coproduct(alg.basis_elem(k[slot]))
        for kk, cc in d.items():
            out = out + alg.tensor(t.arity + 1, {k[:slot] + kk + k[slot + 1:]: c * cc})
    return out


def make_system(*, ring: RingDescriptor, counit: Mapping[str, object], pairs,
                basis: Sequence[str] | None = None, products: Mapping | None = None,
                unit: str | None = None, extension: tuple | None = None,
                degrees: Mapping[str, int] | None = None, name: str | None = None) -> FrobeniusSystem:
    """Build and verify a system from a description.

    Either ``extension=(gen_name, coeffs)`` for ``R[X]/(X^n - sum coeffs[k] X^k)``
    or ``basis`` + ``products`` (mapping ``(name_i, name_j)`` to a coordinate
    mapping ``{basis_name: coeff}``).  ``counit`` maps basis names to values;
    ``pairs`` is a list of ``(u, v)`` where each side is an AlgElem or a
    callable taking the algebra.
    """
    if extension is not None:
        alg = extension_algebra(ring, *extension)
    else:
        alg = table_algebra(ring, basis, products or {}, unit)
    missing = [b for b in alg.basis if b not in counit]
    if missing:
        raise ValueError(f"counit value missing for {', '.join(missing)}")
    cvals = [counit[b] for b in alg.basis]

    def resolve(x):
        return x(alg) if callable(x) else x

    return FrobeniusSystem(alg, cvals, [(resolve(u), resolve(v)) for u, v in pairs], degrees, name)


def extension_algebra(ring: RingDescriptor, gen: str, coeffs: Sequence) -> Algebra:
    """``R[gen]/(gen^n - sum_k coeffs[k] gen^k)`` with basis 1, gen, ..., gen^(n-1)."""
    n = len(coeffs)
    if n < 1:
        raise ValueError("extension degree must be at least 1")
    coeffs = [c if isinstance(c, RingElem) else RingElem.constant(ring, c) for c in coeffs]
    zero = ring.zero

    def reduce_power(p):
        v = [zero] * (2 * n)
        v[p] = ring.one
        for d in range(2 * n - 1, n - 1, -1):
            c = v[d]
            if c:
                v[d] = zero
                for k in range(n):
                    v[d - n + k] = v[d - n + k] + c * coeffs[k]
        return tuple(v[:n])

    powers = [reduce_power(p) for p in range(2 * n - 1)]
    table = [[powers[i + j] for j in range(n)] for i in range(n)]
    basis = ["1"] + [gen if p == 1 else f"{gen}^{p}" for p in range(1, n)]
    gens = {gen: powers[1] if n > 1 else reduce_power(1)}
    return Algebra(ring, basis, table, powers[0], gens, ("extension", gen, tuple(coeffs)))


def table_algebra(ring: RingDescriptor, basis: Sequence[str], products: Mapping, unit: str | None) -> Algebra:
    basis = list(basis)
    n = len(basis)
    if len(set(basis)) != n:
        raise ValueError("duplicate basis name")
    unit = unit or basis[0]
    if unit not in basis:
        raise ValueError(f"unit {unit!r} is not a basis element")
    u = basis.index(unit)

    def vec(mapping):
        out = [ring.zero] * n
        for name, c in mapping.items():
            out[basis.index(name)] = out[basis.index(name)] + (c if isinstance(c, RingElem) else ring(c))
        return tuple(out)

    def e(i):
        return vec({basis[i]: 1})

    table = [[None] * n for _ in range(n)]
    for (a, b), val in products.items():
        i, j = basis.index(a), basis.index(b)
        v = vec(val) if isinstance(val, Mapping) else tuple(val)
        for x, y in ((i, j), (j, i)):
            if table[x][y] is not None and table[x][y] != v:
                raise AxiomError("commutativity a*b = b*a", [f"{basis[i]}*{basis[j]}"])
            table[x][y] = v
    for i in range(n):
        if table[u][i] is None:
            table[u][i] = table[i][u] = e(i)
    holes = [f"{basis[i]}*{basis[j]}" for i in range(n) for j in range(n) if table[i][j] is None]
    if holes:
        raise ValueError(f"product table incomplete: {', '.join(holes)}")
    gens = {b: e(i) for i, b in enumerate(basis)}
    return Algebra(ring, basis, table, e(u), gens, ("table",))
