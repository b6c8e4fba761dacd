from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from skeincalc.errors import CoefficientDomainError, DescriptorMismatch, IncompleteSubstitution, NotInvertible
from skeincalc.ring import RingDescriptor, RingElem, determinant, inverse_matrix

from helpers import to_sympy

R = RingDescriptor(("h", "t"))
R2 = RingDescriptor(("h", "t"), frozenset({2}))
h, t = R.gens()


def polys(ring=R):
    mono = st.tuples(st.integers(0, 3), st.integers(0, 3))
    return st.dictionaries(mono, st.integers(-5, 5), max_size=5).map(lambda d: RingElem(ring, d))


def test_descriptor_rendering():
    assert str(R) == "Z[h,t]"
    assert str(RingDescriptor(())) == "Z"
    assert str(RingDescriptor(("t",), frozenset({2}))) == "Z[1/2][t]"


def test_basic_arithmetic_and_rendering():
    assert str(h**2 + 4 * t) == "h^2 + 4*t"
    assert str(-h) == "-h"
    assert str((h + t) * (h - t)) == "h^2 - t^2"
    assert h * 0 == 0
    assert (h + 1) - h == 1


def test_denominators_checked():
    with pytest.raises(CoefficientDomainError):
        R(Fraction(1, 2))
    assert str(R2(Fraction(1, 4))) == "1/4"
    with pytest.raises(CoefficientDomainError):
        R2(Fraction(1, 3))


def test_units():
    assert R2(2).is_unit() and R2(2).inverse() == R2(Fraction(1, 2))
    assert not R(2).is_unit()
    assert R(-1).inverse() == -1
    with pytest.raises(NotInvertible):
        h.inverse()


def test_mixed_rings_rejected():
    with pytest.raises(DescriptorMismatch):
        _ = h + R2.var("h")


def test_substitute():
    p = h**2 + h * t
    target = RingDescriptor(("t",))
    assert p.substitute({"h": target.zero, "t": target.var("t")}, target) == 0
    assert str((h * t + 3).substitute({"h": 2, "t": 5})) == "13"
    with pytest.raises(IncompleteSubstitution):
        p.substitute({"h": 1})


def test_change_ring_drops_unused_names():
    q = RingDescriptor(("t",))
    assert (3 * t).change_ring(q) == 3 * q.var("t")


def test_determinant_and_inverse():
    m = [[R(1), h], [R(0), R(1)]]
    assert determinant(m, R) == 1
    inv = inverse_matrix(m, R)
    assert inv[0][1] == -h
    with pytest.raises(NotInvertible):
        inverse_matrix([[R(2), R(0)], [R(0), R(1)]], R)


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), polys())
def test_ring_laws_against_sympy(a, b, c):
    assert to_sympy(a * (b + c)) == sympy.expand(to_sympy(a) * (to_sympy(b) + to_sympy(c)))
    assert a * b == b * a
    assert (a + b) - b == a
    assert (a * b) * c == a * (b * c)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), st.integers(-3, 3), st.integers(-3, 3))
def test_substitution_is_a_homomorphism(a, b, x, y):
    z = RingDescriptor(())
    ev = {"h": z(x), "t": z(y)}
    assert (a * b).substitute(ev) == a.substitute(ev) * b.substitute(ev)
    assert (a + b).substitute(ev) == a.substitute(ev) + b.substitute(ev)


@settings(max_examples=60, deadline=None)
@given(polys())
def test_rendering_is_deterministic_and_parseable(a):
    assert str(a) == str(RingElem(R, dict(a.items())))
    assert to_sympy(a) == sympy.expand(sum(c * sympy.Symbol("h") ** e[0] * sympy.Symbol("t") ** e[1]
                                           for e, c in a.items()))
