"""Named example systems: universal rank two, Bar-Natan, Gad-Naot and
abelian group algebras."""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .algebra import Algebra
from .frobenius import FrobeniusSystem, extension_algebra
from .ring import RingDescriptor


def universal(primes: Iterable[int] = ()) -> FrobeniusSystem:
    """R = Z[h,t], A = R[X]/(X^2 - hX - t), eps(1) = 0, eps(X) = 1."""
    ring = RingDescriptor(("h", "t"), frozenset(primes))
    h, t = ring.gens()
    alg = extension_algebra(ring, "X", [t, h])
    one, x = alg.one, alg.gen("X")
    return FrobeniusSystem(alg, [0, 1], [(one, x - h), (x, one)],
                           degrees={"X": 2, "h": 2, "t": 4}, name="universal")


def gadnaot(primes: Iterable[int] = ()) -> FrobeniusSystem:
    """The h = 0 reduction: X^2 = t over Z[t]."""
    ring = RingDescriptor(("t",), frozenset(primes))
    (t,) = ring.gens()
    alg = extension_algebra(ring, "X", [t, 0])
    one, x = alg.one, alg.gen("X")
    return FrobeniusSystem(alg, [0, 1], [(one, x), (x, one)],
                           degrees={"X": 2, "t": 4}, name="gadnaot")


def barnatan(primes: Iterable[int] = ()) -> FrobeniusSystem:
    """The h = t = 0 reduction: X^2 = 0 over Z."""
    ring = RingDescriptor((), frozenset(primes))
    alg = extension_algebra(ring, "X", [0, 0])
    one, x = alg.one, alg.gen("X")
    return FrobeniusSystem(alg, [0, 1], [(one, x), (x, one)],
                           degrees={"X": 2}, name="barnatan")


def group_algebra(orders: Sequence[int], primes: Iterable[int] = ()) -> FrobeniusSystem:
    """Z[G] for G = Z/n1 x ... x Z/nk with eps(e) = 1, Delta(1) = sum g^-1 (x) g."""
    orders = tuple(orders)
    if not orders or any(o < 1 for o in orders):
        raise ValueError("group orders must be positive")
    ring = RingDescriptor((), frozenset(primes))
    elems = list(itertools.product(*(range(o) for o in orders)))
    index = {g: i for i, g in enumerate(elems)}
    gnames = ["g"] if len(orders) == 1 else [f"g{i + 1}" for i in range(len(orders))]

    def name(g):
        parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(gnames, g) if e]
        return "*".join(parts) or "e"

    n = len(elems)

    def vec(g):
        return tuple(ring.one if i == index[g] else ring.zero for i in range(n))

    table = [[vec(tuple((a + b) % o for a, b, o in zip(x, y, orders))) for y in elems] for x in elems]
    gens = {"e": vec(elems[0])}
    for k, gn in enumerate(gnames):
        gens[gn] = vec(tuple(1 % o if j == k else 0 for j, o in enumerate(orders)))
    alg = Algebra(ring, [name(g) for g in elems], table, vec(elems[0]), gens, ("group", orders))
    basis = alg.basis_elems()
    pairs = [(basis[index[tuple((-a) % o for a, o in zip(g, orders))]], basis[index[g]]) for g in elems]
    counit = [1 if i == 0 else 0 for i in range(n)]
    label = "group " + " x ".join(f"Z/{o}" for o in orders)
    return FrobeniusSystem(alg, counit, pairs, name=label)


def builtin(name: str, primes: Iterable[int] = ()) -> FrobeniusSystem:
    factories = {"universal": universal, "barnatan": barnatan, "gadnaot": gadnaot}
    if name in factories:
        return factories[name](primes)
    raise KeyError(name)


BUILTIN_NAMES = ("universal", "barnatan", "gadnaot")
