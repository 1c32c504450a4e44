"""Readers and printers for every artifact kind, all in s-expression syntax.

Errors are :class:`FormatError` (a :class:`ParseError`) carrying the line
and column of the offending expression.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .arith import EXTRA_OPS, STANDARD_OPS, Signature, Term, Var, format_rational, numeral, \
    parse_rational
from .fis import FIS, Linear, LogRescale, Shifted, Sharp, SmallCut, Table
from .kernel import (ARITY, HILBERT_RULES, Constant, Derivation, Erosion, InfiniteSchema,
                     Product, Rule, Schema, TTP, Theory, ZeroDecay, derivation_to_text)
from .semantics import FunctionInterp, FuzzyStructure, PredicateInterp
from .sexpr import ParseError, SExpr, SList, Symbol, parse_all, parse_one
from .syntax import BOT, And, Atom, Exists, Formula, Implies, Not, as_implication, \
    formula_to_text


class FormatError(ParseError):
    pass


def _err(node, message: str, source: str) -> FormatError:
    return FormatError(message, getattr(node, "line", 0), getattr(node, "col", 0), source)


def _expect_list(node, source: str, what: str) -> SList:
    if not isinstance(node, SList) or not node.items:
        raise _err(node, f"expected {what}", source)
    return node


def _natural(node, source: str) -> int:
    if isinstance(node, Symbol) and node.name.isdigit():
        return int(node.name)
    if isinstance(node, SList) and node.head == "pow" and len(node) == 3:
        return _natural(node[1], source) ** _natural(node[2], source)
    raise _err(node, "expected a natural number", source)


def _rational(node, source: str) -> Fraction:
    if not isinstance(node, Symbol):
        raise _err(node, "expected a rational p/q", source)
    try:
        q = parse_rational(node.name)
    except ValueError as e:
        raise _err(node, str(e), source) from None
    if q > 1:
        raise _err(node, f"{node.name} is outside [0, 1]", source)
    return q


def _keywords(items, source: str) -> tuple[list, dict]:
    """Split trailing ``:key value`` pairs off an item list."""
    pos, kw = [], {}
    i = 0
    while i < len(items):
        it = items[i]
        if isinstance(it, Symbol) and it.name.startswith(":"):
            if i + 1 >= len(items):
                raise _err(it, f"keyword {it.name} needs a value", source)
            kw[it.name[1:]] = items[i + 1]
            i += 2
        else:
            pos.append(it)
            i += 1
    return pos, kw


# ---------------------------------------------------------------------------
# FIS


def fis_from_sexpr(node: SExpr, source: str = "<input>") -> FIS:
    n = _expect_list(node, source, "a FIS form such as (linear 5)")
    head = n.head
    args, kw = _keywords(n.items[1:], source)
    try:
        if head == "linear" and len(args) == 1:
            return Linear(_natural(args[0], source))
        if head == "sharp" and len(args) == 1:
            return Sharp(_natural(args[0], source))
        if head == "log-rescale" and len(args) == 1:
            return LogRescale(fis_from_sexpr(args[0], source))
        if head == "small" and len(args) == 1:
            return SmallCut(fis_from_sexpr(args[0], source))
        if head == "shift" and len(args) == 2:
            return Shifted(fis_from_sexpr(args[1], source), _natural(args[0], source))
        if head == "table" and len(args) in (1, 2):
            rows = _expect_list(args[0], source, "a list of (n degree) rows")
            entries = []
            for row in rows:
                r = _expect_list(row, source, "a row (n degree)")
                if len(r) != 2:
                    raise _err(r, "a table row is (n degree)", source)
                entries.append((_natural(r[0], source), _rational(r[1], source)))
            tail = args[1] if len(args) == 2 else kw.get("tail")
            if tail is None:
                raise _err(n, "table needs a tail value: (table (rows...) tail)", source)
            return Table(tuple(entries), _rational(tail, source))
    except ParseError:
        raise
    except (ValueError, ArithmeticError) as e:
        raise _err(n, str(e), source) from None
    raise _err(n, f"unknown FIS form ({head} ...)", source)


def parse_fis(text: str, source: str = "<input>") -> FIS:
    return fis_from_sexpr(parse_one(text, source), source)


def fis_to_text(G: FIS) -> str:
    if isinstance(G, Linear):
        return f"(linear {G.N})"
    if isinstance(G, Sharp):
        return f"(sharp {G.N})"
    if isinstance(G, LogRescale):
        return f"(log-rescale {fis_to_text(G.inner)})"
    if isinstance(G, SmallCut):
        return f"(small {fis_to_text(G.inner)})"
    if isinstance(G, Shifted):
        return f"(shift {G.n0} {fis_to_text(G.inner)})"
    if isinstance(G, Table):
        rows = " ".join(f"({k} {format_rational(v)})" for k, v in G.entries)
        return f"(table ({rows}) {format_rational(G.tail)})"
    raise TypeError(G)


# ---------------------------------------------------------------------------
# signatures


def parse_signature(text: str, source: str = "<input>") -> Signature:
    t = text.strip()
    if t == "unary":
        return Signature.of()
    if t == "arith":
        return Signature.of("+", "*")
    node = parse_one(t, source)
    n = _expect_list(node, source, "unary, arith or (sig sym ...)")
    if n.head != "sig":
        raise _err(n, "expected (sig sym ...)", source)
    syms = []
    for it in n.items[1:]:
        if isinstance(it, Symbol):
            if it.name not in STANDARD_OPS and it.name not in EXTRA_OPS:
                raise _err(it, f"unknown function symbol {it.name!r}; known: "
                           + ", ".join(sorted({**STANDARD_OPS, **EXTRA_OPS})), source)
            syms.append(it.name)
        else:
            r = _expect_list(it, source, "(name arity)")
            if len(r) != 2 or not isinstance(r[0], Symbol):
                raise _err(r, "expected (name arity)", source)
            syms.append((r[0].name, _natural(r[1], source)))
    try:
        return Signature.of(*syms)
    except (ValueError, KeyError) as e:
        raise _err(n, str(e), source) from None


# ---------------------------------------------------------------------------
# terms and formulas

_CONNECTIVES = {"and", "not", "=>", "exists"}


def term_from_sexpr(node: SExpr, source: str, bound: frozenset = frozenset()):
    if isinstance(node, Symbol):
        name = node.name
        if name in bound or name.startswith("?"):
            return Var(name)
        if name.isdigit():
            # bare decimal naturals are shorthand for unary numerals
            return numeral(int(name))
        return Term(name)
    n = _expect_list(node, source, "a term")
    if n.head is None:
        raise _err(n, "a term must start with a function symbol", source)
    if n.head == "num":
        if len(n) != 2:
            raise _err(n, "(num k) takes one natural", source)
        return numeral(_natural(n[1], source))
    return Term(n.head, tuple(term_from_sexpr(a, source, bound) for a in n.items[1:]))


def formula_from_sexpr(node: SExpr, source: str = "<input>", bound: frozenset = frozenset()) -> Formula:
    if isinstance(node, Symbol):
        if node.name == "bot":
            return BOT
        if node.name in _CONNECTIVES:
            raise _err(node, f"{node.name} needs arguments", source)
        return Atom(node.name, ())
    n = _expect_list(node, source, "a formula")
    head = n.head
    if head is None:
        raise _err(n, "a formula must start with a connective or predicate", source)
    args = n.items[1:]
    if head == "and":
        if len(args) != 2:
            raise _err(n, "and takes two formulas", source)
        return And(formula_from_sexpr(args[0], source, bound), formula_from_sexpr(args[1], source, bound))
    if head == "=>":
        if len(args) != 2:
            raise _err(n, "=> takes two formulas", source)
        return Implies(formula_from_sexpr(args[0], source, bound), formula_from_sexpr(args[1], source, bound))
    if head == "not":
        if len(args) != 1:
            raise _err(n, "not takes one formula", source)
        return Not(formula_from_sexpr(args[0], source, bound))
    if head == "exists":
        if len(args) != 2 or not isinstance(args[0], Symbol):
            raise _err(n, "exists takes a variable and a formula", source)
        v = args[0].name
        return Exists(v, formula_from_sexpr(args[1], source, bound | {v}))
    return Atom(head, tuple(term_from_sexpr(a, source, bound) for a in args))


def parse_formula(text: str, source: str = "<input>") -> Formula:
    return formula_from_sexpr(parse_one(text, source), source)


# ---------------------------------------------------------------------------
# theories


def theory_from_sexprs(exprs, source: str = "<input>", name: Optional[str] = None) -> Theory:
    axioms, schemas = [], []
    tname = name
    for node in exprs:
        n = _expect_list(node, source, "(axiom ...), (schema ...) or (name ...)")
        head = n.head
        if head == "name" and len(n) == 2 and isinstance(n[1], Symbol):
            tname = n[1].name
            continue
        if head == "axiom":
            if len(n) != 3 or not isinstance(n[1], Symbol):
                raise _err(n, "expected (axiom name formula)", source)
            f = formula_from_sexpr(n[2], source)
            axioms.append((n[1].name, f))
            continue
        if head == "schema":
            pos, kw = _keywords(n.items[1:], source)
            if len(pos) != 2 or not isinstance(pos[0], Symbol):
                raise _err(n, "expected (schema name template :bound B)", source)
            if "bound" not in kw:
                raise _err(n, "infinite axiom schemas forbidden: schema "
                           f"{pos[0].name} has no :bound", source)
            try:
                schemas.append(Schema(pos[0].name, formula_from_sexpr(pos[1], source),
                                      _natural(kw["bound"], source)))
            except InfiniteSchema as e:
                raise _err(n, str(e), source) from None
            continue
        raise _err(n, f"unknown theory entry ({head} ...)", source)
    try:
        return Theory(tname or "T", tuple(axioms), tuple(schemas))
    except ValueError as e:
        raise FormatError(str(e), 1, 1, source) from None


def parse_theory(text: str, source: str = "<input>", name: Optional[str] = None) -> Theory:
    return theory_from_sexprs(parse_all(text, source), source, name)


def theory_to_text(t: Theory) -> str:
    lines = [f"(name {t.name})"]
    for n, f in t.axioms:
        lines.append(f"(axiom {n} {formula_to_text(f)})")
    for s in t.schemas:
        lines.append(f"(schema {s.name} {formula_to_text(s.template)} :bound {s.bound})")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# proofs

_RULES_BY_NAME = {r.value: r for r in Rule}


def proof_from_sexpr(node: SExpr, theory: Optional[Theory], source: str = "<input>") -> Derivation:
    d = _proof(node, theory, source)
    rules = d.rules_used()
    if Rule.MP in rules and rules - HILBERT_RULES:
        raise _err(node, "proof mixes Hilbert (mp) and natural-deduction rules", source)
    return d


def _proof(node, theory, source) -> Derivation:
    # explicit stack: long modus-ponens chains nest a thousand levels deep
    results: dict[int, Derivation] = {}
    stack = [(node, False)]
    while stack:
        cur, ready = stack.pop()
        n = _expect_list(cur, source, "a proof term")
        head = n.head
        if head in ("axiom", "instance", "axiom-formula", "assume"):
            results[id(cur)] = _proof_leaf(n, theory, source)
            continue
        rule = _RULES_BY_NAME.get(head)
        if rule is None:
            raise _err(n, f"unknown proof rule {head!r}", source)
        if rule is Rule.NOT_INTRO:
            if len(n) != 4 or not isinstance(n[1], Symbol):
                raise _err(n, "expected (not-intro label formula proof)", source)
            subs = [n[3]]
        elif rule is Rule.EXISTS_INTRO:
            if len(n) != 3:
                raise _err(n, "expected (exists-intro formula proof)", source)
            subs = [n[2]]
        else:
            subs = list(n.items[1:])
            if len(subs) != ARITY[rule]:
                raise _err(n, f"{head} takes {ARITY[rule]} premises, got {len(subs)}", source)
        if not ready:
            stack.append((cur, True))
            stack.extend((s, False) for s in reversed(subs))
            continue
        prem = tuple(results.pop(id(s)) for s in subs)
        results[id(cur)] = _build(rule, n, prem, source)
    return results[id(node)]


def _proof_leaf(n: SList, theory, source) -> Derivation:
    head = n.head
    if head == "axiom":
        if len(n) != 2 or not isinstance(n[1], Symbol):
            raise _err(n, "expected (axiom name)", source)
        if theory is None:
            raise _err(n, "named axioms need a theory", source)
        try:
            f = theory.axiom(n[1].name)
        except KeyError:
            raise _err(n, f"theory {theory.name} has no axiom {n[1].name}", source) from None
        return Derivation(Rule.AXIOM, f, (), None, f"(axiom {n[1].name})")
    if head == "instance":
        if len(n) < 2 or not isinstance(n[1], Symbol):
            raise _err(n, "expected (instance schema (num k) ...)", source)
        if theory is None:
            raise _err(n, "schema instances need a theory", source)
        try:
            s = theory.schema(n[1].name)
        except KeyError:
            raise _err(n, f"theory {theory.name} has no schema {n[1].name}", source) from None
        vals = []
        for a in n.items[2:]:
            t = term_from_sexpr(a, source)
            if not isinstance(t, Term) or t.numeral is None:
                raise _err(a, "schema parameters are numerals", source)
            vals.append(t.numeral)
        try:
            f = s.instance(*vals)
        except ValueError as e:
            raise _err(n, str(e), source) from None
        src = f"(instance {s.name} " + " ".join(f"(num {v})" for v in vals) + ")"
        return Derivation(Rule.AXIOM, f, (), None, src)
    if head == "axiom-formula":
        if len(n) != 2:
            raise _err(n, "expected (axiom-formula formula)", source)
        return Derivation(Rule.AXIOM, formula_from_sexpr(n[1], source))
    if len(n) != 3 or not isinstance(n[1], Symbol):
        raise _err(n, "expected (assume label formula)", source)
    return Derivation(Rule.ASSUME, formula_from_sexpr(n[2], source), (), n[1].name)


def _build(rule: Rule, n: SList, prem: tuple, source) -> Derivation:
    # conclusions are computed; ill-shaped premises keep a placeholder so the
    # checker (not the reader) reports the problem with its path
    c = prem[0].conclusion if prem else BOT
    if rule is Rule.MP:
        imp = as_implication(prem[0].conclusion)
        c = imp[1] if imp is not None else BOT
        return Derivation(rule, c, prem)
    if rule is Rule.AND_INTRO:
        return Derivation(rule, And(prem[0].conclusion, prem[1].conclusion), prem)
    if rule in (Rule.AND_ELIM_L, Rule.AND_ELIM_R):
        p = prem[0].conclusion
        if isinstance(p, And):
            c = p.left if rule is Rule.AND_ELIM_L else p.right
        return Derivation(rule, c, prem)
    if rule is Rule.NOT_ELIM:
        return Derivation(rule, BOT, prem)
    if rule is Rule.NOT_INTRO:
        return Derivation(rule, Not(formula_from_sexpr(n[2], source)), prem, n[1].name)
    if rule is Rule.EXISTS_INTRO:
        f = formula_from_sexpr(n[1], source)
        return Derivation(rule, f, prem)
    raise _err(n, f"rule {rule.value} cannot appear inside a proof", source)


def parse_proof(text: str, theory: Optional[Theory] = None, source: str = "<input>") -> Derivation:
    return proof_from_sexpr(parse_one(text, source), theory, source)


def proof_to_text(d: Derivation) -> str:
    return derivation_to_text(d)


# ---------------------------------------------------------------------------
# truth transfer policies


def _policy(node, source):
    n = _expect_list(node, source, "a policy such as (erosion 1/1024)")
    head = n.head
    try:
        if head == "zero-decay" and len(n) == 1:
            return ZeroDecay()
        if head == "product" and len(n) == 1:
            return Product()
        if head == "erosion" and len(n) == 2:
            return Erosion(_rational(n[1], source))
        if head == "constant" and len(n) == 2:
            return Constant(_rational(n[1], source))
    except ValueError as e:
        raise _err(n, str(e), source) from None
    raise _err(n, f"unknown policy ({head} ...)", source)


def ttp_from_sexpr(node: SExpr, source: str = "<input>") -> TTP:
    n = _expect_list(node, source, "a truth transfer policy")
    if n.head != "per-rule":
        return TTP(_policy(n, source))
    default = ZeroDecay()
    overrides = []
    for it in n.items[1:]:
        r = _expect_list(it, source, "(rule policy)")
        if len(r) != 2 or r.head is None:
            raise _err(r, "expected (rule policy)", source)
        if r.head == "default":
            default = _policy(r[1], source)
            continue
        rule = _RULES_BY_NAME.get(r.head)
        if rule is None or ARITY[rule] == 0:
            raise _err(r, f"{r.head!r} is not an inference rule", source)
        overrides.append((rule, _policy(r[1], source)))
    return TTP(default, tuple(overrides))


def parse_ttp(text: str, source: str = "<input>") -> TTP:
    return ttp_from_sexpr(parse_one(text, source), source)


# ---------------------------------------------------------------------------
# structures


def _element(node, source):
    if not isinstance(node, Symbol):
        raise _err(node, "expected a domain element", source)
    return int(node.name) if node.name.isdigit() else node.name


def structure_from_sexprs(exprs, source: str = "<input>") -> FuzzyStructure:
    if len(exprs) == 1 and isinstance(exprs[0], SList) and exprs[0].head == "structure":
        exprs = exprs[0].items[1:]
    domain = None
    top = None
    ttp = TTP()
    implication = "residuum"
    name = "M"
    functions: dict = {}
    preds: dict = {}
    overrides: dict = {}
    pending_overrides = []
    for node in exprs:
        n = _expect_list(node, source, "a structure entry")
        head = n.head
        if head == "domain":
            domain = tuple(_element(x, source) for x in n.items[1:])
        elif head == "name" and len(n) == 2:
            name = str(n[1])
        elif head == "top" and len(n) == 2:
            top = _element(n[1], source)
        elif head == "ttp" and len(n) == 2:
            ttp = ttp_from_sexpr(n[1], source)
        elif head == "implication" and len(n) == 2 and str(n[1]) in ("residuum", "derived"):
            implication = str(n[1])
        elif head == "fun":
            if len(n) != 3 or not isinstance(n[1], Symbol):
                raise _err(n, "expected (fun name value) or (fun name ((args.. value) ...))", source)
            if isinstance(n[2], Symbol):
                functions[n[1].name] = FunctionInterp(0, {(): _element(n[2], source)})
                continue
            table, arity = {}, None
            for row in n[2]:
                r = _expect_list(row, source, "a row (args... value)")
                vals = [_element(x, source) for x in r]
                if arity is None:
                    arity = len(vals) - 1
                elif arity != len(vals) - 1:
                    raise _err(r, "rows of one function must have equal length", source)
                table[tuple(vals[:-1])] = vals[-1]
            functions[n[1].name] = FunctionInterp(arity or 0, table)
        elif head == "pred":
            pos, kw = _keywords(n.items[1:], source)
            if len(pos) != 2 or not isinstance(pos[0], Symbol):
                raise _err(n, "expected (pred name ((args.. degree) ...) :default d)", source)
            default = _rational(kw["default"], source) if "default" in kw else Fraction(0)
            if isinstance(pos[1], Symbol):
                preds[pos[0].name] = PredicateInterp(0, {(): _rational(pos[1], source)}, default)
                continue
            table, arity = {}, None
            for row in pos[1]:
                r = _expect_list(row, source, "a row (args... degree)")
                if arity is None:
                    arity = len(r) - 1
                elif arity != len(r) - 1:
                    raise _err(r, "rows of one predicate must have equal length", source)
                table[tuple(_element(x, source) for x in r.items[:-1])] = _rational(r[len(r) - 1], source)
            if "arity" in kw:
                declared = _natural(kw["arity"], source)
                if arity is not None and arity != declared:
                    raise _err(n, f"rows have {arity} arguments, :arity says {declared}", source)
                arity = declared
            preds[pos[0].name] = PredicateInterp(arity or 0, table, default)
        elif head == "override" and len(n) == 3:
            pending_overrides.append((n, formula_from_sexpr(n[1], source), _rational(n[2], source)))
        else:
            raise _err(n, f"unknown structure entry ({head} ...)", source)
    if domain is None:
        raise FormatError("structure needs (domain ...)", 1, 1, source)
    for _, f, v in pending_overrides:
        overrides[f] = v
    try:
        return FuzzyStructure(domain, functions, preds, ttp, top, overrides, implication, name)
    except ValueError as e:
        raise FormatError(str(e), 1, 1, source) from None


def parse_structure(text: str, source: str = "<input>") -> FuzzyStructure:
    return structure_from_sexprs(parse_all(text, source), source)


def _order(args: tuple) -> tuple:
    # numbers first in numeric order, then named elements
    return tuple((0, a, "") if isinstance(a, int) else (1, 0, a) for a in args)


def structure_to_text(M: FuzzyStructure) -> str:
    """Table-backed structures only; callables cannot be written out."""
    lines = [f"(name {M.name})", "(domain " + " ".join(str(d) for d in M.domain) + ")"]
    if M.top is not None:
        lines.append(f"(top {M.top})")
    for fname, fi in sorted(M.functions.items()):
        if fi.table is None:
            raise ValueError(f"function {fname} is not table-backed")
        if fi.arity == 0:
            lines.append(f"(fun {fname} {fi.table[()]})")
            continue
        rows = " ".join("(" + " ".join(str(x) for x in a + (v,)) + ")"
                        for a, v in sorted(fi.table.items(), key=lambda kv: _order(kv[0])))
        lines.append(f"(fun {fname} ({rows}))")
    for p, pi in sorted(M.predicates.items()):
        if pi.table is None:
            raise ValueError(f"predicate {p} is not table-backed")
        rows = " ".join("(" + " ".join(str(x) for x in a) + (" " if a else "") + format_rational(v) + ")"
                        for a, v in sorted(pi.table.items(), key=lambda kv: _order(kv[0])))
        arity = f" :arity {pi.arity}" if not pi.table else ""
        lines.append(f"(pred {p} ({rows}){arity} :default {format_rational(pi.default)})")
    lines.append(f"(ttp {M.ttp})")
    if M.implication != "residuum":
        lines.append(f"(implication {M.implication})")
    for f, v in M.overrides.items():
        lines.append(f"(override {formula_to_text(f)} {format_rational(v)})")
    return "\n".join(lines)


def read_text(arg: str) -> tuple[str, str]:
    """Inline s-expressions start with ``(``; anything else names a file."""
    s = arg.lstrip()
    if s.startswith("("):
        return arg, "<inline>"
    with open(arg, encoding="utf-8") as fh:
        return fh.read(), arg

