"""Command-line front end: ``skeincalc <command> <file.skn> ...``.

Exit codes: 0 success, 1 domain error (or ``equal`` finding a difference),
2 parse or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import dsl
from .errors import AxiomError, SkeinError
from .frobenius import FrobeniusSystem
from .patterns import state_sum
from .skein import compose, normal_form
from .tqft import apply_word, word_to_map

SCHEMA = 1


def _tensor_terms(s: FrobeniusSystem, t) -> list:
    names = s.basis
    return [{"coords": [names[i] for i in k], "coeff": str(c)} for k, c in t.sorted_items()]


def tensor_from_json(terms: list, s: FrobeniusSystem, arity: int):
    """Rebuild a tensor from the ``terms`` list of a JSON result."""
    index = {b: i for i, b in enumerate(s.basis)}
    out = {}
    for term in terms:
        key = tuple(index[b] for b in term["coords"])
        c = dsl.parse_ring_elem(term["coeff"], s.ring)
        out[key] = out[key] + c if key in out else c
    return s.algebra.tensor(arity, out)


def _system_of(doc: dsl.Document, item) -> FrobeniusSystem:
    return doc.algebra(item.algebra)


def _skein_value(doc, name):
    item = doc.get(name, ("surface", "combination"))
    s = _system_of(doc, item)
    return s, normal_form(s, item.value)


def _payload(command, result, signature=None, terms=None, **extra):
    out = {"schema": SCHEMA, "command": command, "result": result,
           "signature": list(signature) if signature is not None else None,
           "terms": terms if terms is not None else []}
    out.update(extra)
    return out


def _cmd_check(doc, args):
    lines = []
    for item in doc.items.values():
        if item.kind == "algebra":
            s = item.value
            lines.append(f"{item.name}: ok (rank {s.rank} over {s.ring})")
    if not lines:
        lines.append("no algebras defined")
    return 0, _payload("check", "ok", terms=[]), "\n".join(lines)


def _cmd_eval_word(doc, args):
    item = doc.get(args.word, "word")
    s = _system_of(doc, item)
    w = item.value
    if args.input is not None:
        x = dsl.parse_tensor(args.input, s, w.width)
        y = apply_word(s, w, x)
        return 0, _payload("eval-word", str(y), w.signature, _tensor_terms(s, y)), str(y)
    m = word_to_map(s, w)
    cols = [{"input": [s.basis[i] for i in k], "terms": _tensor_terms(s, m.matrix[k])}
            for k in sorted(m.matrix)]
    text = str(m) if m.matrix else "0"
    return 0, _payload("eval-word", text, w.signature, [], columns=cols), text


def _cmd_normal_form(doc, args):
    s, nf = _skein_value(doc, args.name)
    return 0, _payload("normal-form", str(nf.tensor), nf.signature, _tensor_terms(s, nf.tensor)), str(nf)


def _cmd_closed_eval(doc, args):
    s, nf = _skein_value(doc, args.name)
    if nf.signature != (0, 0):
        raise SkeinError(f"{args.name} has boundary {nf.signature}; closed-eval needs (0,0)")
    v = nf.tensor.scalar_value()
    return 0, _payload("closed-eval", str(v), (0, 0), _tensor_terms(s, nf.tensor)), str(v)


def _cmd_compose(doc, args):
    s1, g = _skein_value(doc, args.first)
    s2, f = _skein_value(doc, args.second)
    if s1 != s2:
        raise SkeinError("cannot compose skein elements over different algebras")
    nf = compose(s1, g, f)
    return 0, _payload("compose", str(nf.tensor), nf.signature, _tensor_terms(s1, nf.tensor)), str(nf)


def _cmd_equal(doc, args):
    s1, a = _skein_value(doc, args.first)
    s2, b = _skein_value(doc, args.second)
    if s1 != s2:
        raise SkeinError("cannot compare skein elements over different algebras")
    if a.signature != b.signature:
        raise SkeinError(f"signatures differ: {a.signature} vs {b.signature}")
    same = a.tensor == b.tensor
    diff = a.tensor - b.tensor
    text = "equal" if same else f"not equal; difference {diff}"
    return (0 if same else 1), _payload("equal", same, a.signature, _tensor_terms(s1, diff)), text


def _cmd_statesum(doc, args):
    item = doc.get(args.pattern, "pattern")
    s = _system_of(doc, item)
    res = state_sum(s, item.value)
    terms = [{"coords": [[sym, s.basis[i]] for sym, i in k], "coeff": str(c)} for k, c in res.sorted_items()]
    return 0, _payload("statesum", str(res), None, terms), str(res)


def _cmd_dual_basis(doc, args):
    s = doc.algebra(args.algebra)
    dual = s.dual_basis()
    pairs = [{"basis": b, "dual": str(w)} for b, w in zip(s.basis, dual)]
    text = "\n".join(f"{b} -> {w}" for b, w in zip(s.basis, dual))
    return 0, _payload("dual-basis", text, None, [], dual=pairs), text


def _cmd_twist(doc, args):
    s = doc.algebra(args.algebra)
    y = dsl.parse_element(args.element, s)
    t = s.twist(y)
    text = dsl.render_system(f"{_ident(args.algebra)}_twisted", t).rstrip("\n")
    return 0, _payload("twist", text), text


def _cmd_specialize(doc, args):
    s = doc.algebra(args.algebra)
    assignment = dsl.parse_assignment(args.assignment, s.ring)
    t, _ = s.specialize(assignment)
    text = dsl.render_system(f"{_ident(args.algebra)}_specialized", t).rstrip("\n")
    return 0, _payload("specialize", text), text


def _ident(name: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in name).strip("_") or "A"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skeincalc", description="Exact skein and TQFT computations.")
    ap.add_argument("--json", action="store_true", help="emit JSON (schema 1)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, *pos, help=None):
        p = sub.add_parser(name, help=help)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.add_argument("file")
        for a in pos:
            p.add_argument(a)
        p.set_defaults(fn=fn)
        return p

    add("check", _cmd_check, help="verify every algebra in the file")
    add("eval-word", _cmd_eval_word, "word", help="evaluate a cobordism word").add_argument("--input")
    add("normal-form", _cmd_normal_form, "name", help="normal form of a surface or combination")
    add("closed-eval", _cmd_closed_eval, "name", help="value of a closed surface")
    add("compose", _cmd_compose, "first", "second", help="first o second")
    add("equal", _cmd_equal, "first", "second", help="exit 0 iff skein-equal")
    add("statesum", _cmd_statesum, "pattern", help="state sum of a pattern")
    add("dual-basis", _cmd_dual_basis, "algebra", help="dual basis under the counit pairing")
    add("twist", _cmd_twist, "algebra", "element", help="twist by a unit")
    add("specialize", _cmd_specialize, "algebra", "assignment", help="e.g. 'h -> 0'")
    return ap


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        print(f"{args.file}: error: {exc}", file=stderr)
        return 2
    try:
        doc = dsl.parse(text)
        code, payload, human = args.fn(doc, args)
    except dsl.DSLError as exc:
        for d in exc.diagnostics:
            print(f"{args.file}:{d}", file=stderr)
        return 2
    except AxiomError as exc:
        print(f"{args.file}: error: {exc}", file=stderr)
        return 1
    except KeyError as exc:
        print(f"{args.file}: error: {exc.args[0]}", file=stderr)
        return 1
    except SkeinError as exc:
        print(f"{args.file}: error: {exc}", file=stderr)
        return 1
    if args.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False), file=stdout)
    else:
        print(human, file=stdout)
    return code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
