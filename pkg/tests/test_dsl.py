from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skeincalc import dsl
from skeincalc.builtins import barnatan, gadnaot, group_algebra, universal
from skeincalc.errors import AxiomError
from skeincalc.tqft import COMULT, MULT

HERE = Path(__file__).parent
GOLDEN = sorted((HERE / "golden").glob("*.skn"))
MALFORMED = sorted((HERE / "malformed").glob("*.skn"))

U_SRC = ("algebra U { ground Z[h,t]; extension X^2 = h*X + t; counit 1 -> 0, X -> 1; "
         "delta1 (1, X - h) + (X, 1); }")


def errors(text):
    with pytest.raises(dsl.DSLError) as info:
        dsl.parse(text)
    return info.value.diagnostics


def test_universal_algebra():
    doc = dsl.parse(U_SRC)
    assert doc.algebra("U") == universal()


def test_word():
    doc = dsl.parse(U_SRC + "\nword W over U { comult ; mult }")
    w = doc["W"].value
    assert w.signature == (1, 1)
    assert w.levels == ((COMULT,), (MULT,))


def test_arity_diagnostic():
    (d,) = errors("word Bad over universal width 1 { mult }")
    assert d.message == "level 1: needs 2 strands, found 1"
    assert (d.line, d.column) == (1, 35)


def test_builtin_references():
    doc = dsl.parse("algebra A = barnatan;\nalgebra G = group Z/2;\nalgebra N = gadnaot;")
    assert doc.algebra("A") == barnatan()
    assert doc.algebra("G") == group_algebra([2])
    assert doc.algebra("N") == gadnaot()
    assert doc.algebra("universal") == universal()


def test_derived_algebras():
    doc = dsl.parse("algebra S = specialize universal with h -> 0;\n"
                    "algebra T = twist S by -1;\nalgebra H = extend barnatan to Z[1/2];")
    assert doc.algebra("S") == gadnaot()
    assert doc.algebra("T") == gadnaot().twist(-gadnaot().one)
    assert doc.algebra("H").geometric_check()


def test_explicit_basis():
    doc = dsl.parse("algebra E { ground Z; basis e, g; unit e; product g*g = e; "
                    "counit e -> 1, g -> 0; delta1 (e, e) + (g, g); }")
    assert str(doc.algebra("E").handle()) == "2*e"


def test_axiom_failure_is_a_domain_error():
    src = ("algebra Bad { ground Z[h,t]; extension X^2 = h*X + t; counit 1 -> 1, X -> 0; "
           "delta1 (1, X - h) + (X, 1); }")
    with pytest.raises(AxiomError, match="Bad"):
        dsl.parse(src)


def test_comments_and_whitespace():
    doc = dsl.parse("# header\nalgebra B = barnatan; # trailing\n\n\tword W over B {comult;mult}\n")
    assert doc.render() == "algebra B = barnatan;\nword W over B { comult ; mult }\n"


def test_keywords_are_case_sensitive():
    assert errors("Algebra B = barnatan;")[0].message.startswith("expected a definition")


def test_recovery_reports_several_errors():
    diags = errors("word A over nowhere { id }\nword B over barnatan { bogus }\n")
    assert [d.line for d in diags] == [1, 2]


def test_surface_defaults():
    doc = dsl.parse("surface S over universal (0,0) { comp }")
    (comp,) = doc["S"].value.components
    assert comp.genus == 0 and comp.color == universal().one


def test_combination():
    doc = dsl.parse("surface A over barnatan (1,1) { comp in=[1] out=[1] }\n"
                    "combination K over barnatan = 2*A - A;")
    assert len(doc["K"].value.terms) == 1


def test_pattern():
    doc = dsl.parse("pattern P over barnatan { black T1 ; black T2 ; white w1 ; edge T1 -> w1 ; "
                    "edge T1 -> T2 ; color comp(T1) = X }")
    p = doc["P"].value
    assert len(p.edges) == 2 and p.colors["T1"] == barnatan().gen("X")


def test_value_parsers():
    s = universal()
    assert str(dsl.parse_tensor("[X, 1] + h*[1, 1]", s)) == "[X, 1] + h*[1, 1]"
    assert dsl.parse_element("X^2", s) == s.gen("X") ** 2
    assert dsl.parse_assignment("h = 0, t -> t", s.ring)["h"] == 0
    with pytest.raises(dsl.DSLError):
        dsl.parse_tensor("[X, ", s)


def test_render_system_round_trip():
    for s in (universal(), gadnaot().twist(-gadnaot().one), group_algebra([2, 2])):
        doc = dsl.parse(dsl.render_system("A", s))
        assert doc.algebra("A") == s


@pytest.mark.parametrize("path", GOLDEN, ids=lambda p: p.name)
def test_golden_round_trip(path):
    text = path.read_text(encoding="utf-8")
    doc = dsl.parse(text)
    assert doc.render() == text
    assert dsl.parse(doc.render()) == doc


@pytest.mark.parametrize("path", MALFORMED, ids=lambda p: p.name)
def test_malformed_positioned(path):
    text = path.read_text(encoding="utf-8")
    diags = errors(text)
    lines = text.splitlines()
    for d in diags:
        assert 1 <= d.line <= max(1, len(lines))
        assert d.column >= 1


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=200))
def test_parser_total_on_bytes(data):
    text = data.decode("utf-8", errors="replace")
    try:
        dsl.parse(text)
    except dsl.DSLError as exc:
        assert exc.diagnostics
    except AxiomError:
        pass


TOKENS = ["algebra", "word", "surface", "pattern", "combination", "over", "U", "barnatan",
          "universal", "{", "}", "(", ")", "[", "]", ";", ",", "=", "->", "+", "-", "*", "^",
          "/", "X", "h", "1", "2", "comp", "genus", "in", "out", "mult", "comult", "black",
          "edge", "ground", "Z", "extension", "counit", "delta1", "|", "color", "\n"]


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(TOKENS), max_size=30))
def test_parser_total_on_token_soup(tokens):
    try:
        doc = dsl.parse(" ".join(tokens))
    except dsl.DSLError as exc:
        assert all(d.line >= 1 and d.column >= 1 for d in exc.diagnostics)
    except AxiomError:
        pass
    else:
        assert dsl.parse(doc.render()) == doc


def test_deep_nesting_is_a_diagnostic():
    text = "combination K over barnatan = " + "(" * 5000 + "1" + ")" * 5000 + ";"
    assert errors(text)
