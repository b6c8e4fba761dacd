import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skeincalc.builtins import barnatan, gadnaot, universal
from skeincalc.errors import SignatureMismatch, WordShapeError
from skeincalc.tqft import (COMULT, COUNIT, IDENTITY, MULT, SWAP, UNIT, CobordismWord, apply_word,
                            color, identity_map, word_to_map, word_to_surface)

from helpers import random_word

U = universal()


def test_arity_error_message():
    with pytest.raises(WordShapeError, match="level 1: needs 2 strands, found 1"):
        CobordismWord(1, [[MULT]])


def test_handle_word():
    w = CobordismWord(1, [[COMULT], [MULT]])
    assert w.signature == (1, 1)
    m = word_to_map(U, w)
    assert str(m(U.algebra.tensor(1, {(0,): U.ring.one}))) == "2*[X] - h*[1]"
    surf = word_to_surface(U, w)
    assert [c.genus for c in surf.components] == [1]


def test_closed_torus_word():
    w = CobordismWord(0, [[UNIT], [COMULT], [MULT], [COUNIT]])
    assert word_to_map(U, w).matrix[()].scalar_value() == 2


def test_swap_and_identity():
    x = U.algebra.pure_tensor([U.gen("X"), U.one])
    assert apply_word(U, CobordismWord(2, [[SWAP]]), x) == U.algebra.pure_tensor([U.one, U.gen("X")])
    assert word_to_map(U, CobordismWord(2, [[IDENTITY, IDENTITY]])) == identity_map(U, 2)


def test_color_generator():
    x = U.gen("X")
    w = CobordismWord(1, [[color(x)], [color(x)]])
    out = apply_word(U, w, U.algebra.tensor(1, {(0,): U.ring.one}))
    assert out == U.algebra.tensor(1, {(0,): U.ring.var("t"), (1,): U.ring.var("h")})


def test_stacking():
    a = CobordismWord(1, [[COMULT]])
    b = CobordismWord(2, [[MULT]])
    assert a.then(b).levels == ((COMULT,), (MULT,))
    with pytest.raises(SignatureMismatch):
        b.then(b)


def test_input_arity_checked():
    with pytest.raises(SignatureMismatch):
        apply_word(U, CobordismWord(1, []), U.algebra.scalar_tensor(1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([universal, barnatan, gadnaot]))
def test_functoriality(seed, make):
    # evaluating a concatenation equals composing the evaluations
    s = make()
    rng = random.Random(seed)
    w1 = random_word(rng, s, max_width=3, max_len=4)
    for _ in range(20):
        w2 = random_word(rng, s, max_width=3, max_len=4)
        if w2.width == w1.output_width:
            break
    else:
        return
    assert word_to_map(s, w1.then(w2)) == word_to_map(s, w2).after(word_to_map(s, w1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_surface_is_a_cobordism_invariant(seed):
    # Euler characteristic bookkeeping: sum of chi is levels-additive
    rng = random.Random(seed)
    w = random_word(rng, U)
    surf = word_to_surface(U, w)
    assert surf.signature == w.signature
    chi = sum(c.euler_characteristic for c in surf.components)
    expect = 0
    for level in w.levels:
        for g in level:
            expect += {"unit": 1, "counit": 1, "mult": -1, "comult": -1}.get(g.kind, 0)
    assert chi == expect
