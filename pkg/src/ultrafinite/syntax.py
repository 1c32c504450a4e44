"""First-order formulas over the connectives {and, not, exists}, plus
implication (Hilbert calculus only) and falsum."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .arith import Term, Var, term_to_text, subterms


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()

    def __str__(self):
        return formula_to_text(self)


@dataclass(frozen=True)
class Falsum:
    def __str__(self):
        return "bot"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return formula_to_text(self)


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self):
        return formula_to_text(self)


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return formula_to_text(self)


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"

    def __str__(self):
        return formula_to_text(self)


Formula = Union[Atom, Falsum, And, Not, Implies, Exists]
BOT = Falsum()


def formula_to_text(f: Formula) -> str:
    if isinstance(f, Atom):
        if not f.args:
            return f.pred
        return "(" + f.pred + " " + " ".join(term_to_text(a) for a in f.args) + ")"
    if isinstance(f, Falsum):
        return "bot"
    if isinstance(f, And):
        return f"(and {formula_to_text(f.left)} {formula_to_text(f.right)})"
    if isinstance(f, Not):
        return f"(not {formula_to_text(f.body)})"
    if isinstance(f, Implies):
        return f"(=> {formula_to_text(f.left)} {formula_to_text(f.right)})"
    if isinstance(f, Exists):
        return f"(exists {f.var} {formula_to_text(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


def as_implication(f: Formula) -> tuple[Formula, Formula] | None:
    """Antecedent/consequent for modus ponens; ``not A`` counts as ``A => bot``."""
    if isinstance(f, Implies):
        return f.left, f.right
    if isinstance(f, Not):
        return f.body, BOT
    return None


def immediate_subformulas(f: Formula) -> tuple:
    if isinstance(f, (And, Implies)):
        return (f.left, f.right)
    if isinstance(f, Not):
        return (f.body,)
    if isinstance(f, Exists):
        return (f.body,)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    seen = set()
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        yield g
        stack.extend(immediate_subformulas(g))


def connectives(f: Formula) -> set[type]:
    return {type(g) for g in subformulas(f)}


def _term_free(t, bound: frozenset) -> set[str]:
    if isinstance(t, Var):
        return set() if t.name in bound else {t.name}
    if t.closed:
        return set()
    out: set[str] = set()
    for a in t.args:
        out |= _term_free(a, bound)
    return out


def free_vars(f: Formula, bound: frozenset = frozenset()) -> set[str]:
    if isinstance(f, Atom):
        out: set[str] = set()
        for a in f.args:
            out |= _term_free(a, bound)
        return out
    if isinstance(f, Exists):
        return free_vars(f.body, bound | {f.var})
    out = set()
    for g in immediate_subformulas(f):
        out |= free_vars(g, bound)
    return out


def is_closed(f: Formula) -> bool:
    return not free_vars(f)


def subst_term(t, env: Mapping[str, Term]):
    if isinstance(t, Var):
        return env.get(t.name, t)
    if t.closed:
        return t
    return Term(t.head, tuple(subst_term(a, env) for a in t.args))


def substitute(f: Formula, env: Mapping[str, Term]) -> Formula:
    """Replace free variables by closed terms (no capture is possible)."""
    if not env:
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(subst_term(a, env) for a in f.args))
    if isinstance(f, Falsum):
        return f
    if isinstance(f, And):
        return And(substitute(f.left, env), substitute(f.right, env))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, env), substitute(f.right, env))
    if isinstance(f, Not):
        return Not(substitute(f.body, env))
    if isinstance(f, Exists):
        inner = {k: v for k, v in env.items() if k != f.var}
        return Exists(f.var, substitute(f.body, inner))
    raise TypeError(f)


def _match_term(pat, t, vars_: frozenset, env: dict) -> bool:
    if isinstance(pat, Var) and pat.name in vars_:
        prev = env.get(pat.name)
        if prev is None:
            if not (isinstance(t, Term) and t.closed):
                return False
            env[pat.name] = t
            return True
        return prev is t
    if isinstance(pat, Var) or isinstance(t, Var):
        return pat == t
    if pat.closed:
        return pat is t
    if pat.head != t.head or len(pat.args) != len(t.args):
        return False
    return all(_match_term(p, u, vars_, env) for p, u in zip(pat.args, t.args))


def match(pattern: Formula, f: Formula, vars_, env: dict | None = None) -> dict | None:
    """One-way matching of ``pattern`` (with pattern variables ``vars_``) against ``f``.

    Returns the binding of pattern variables to closed terms, or None.
    """
    env = {} if env is None else dict(env)
    vars_ = frozenset(vars_)

    def go(p, g, bound: frozenset) -> bool:
        if type(p) is not type(g):
            return False
        if isinstance(p, Atom):
            if p.pred != g.pred or len(p.args) != len(g.args):
                return False
            live = vars_ - bound
            return all(_match_term(a, b, live, env) for a, b in zip(p.args, g.args))
        if isinstance(p, Falsum):
            return True
        if isinstance(p, Exists):
            return p.var == g.var and go(p.body, g.body, bound | {p.var})
        return all(go(a, b, bound) for a, b in zip(immediate_subformulas(p), immediate_subformulas(g)))

    return env if go(pattern, f, frozenset()) else None


def formula_size(f: Formula) -> int:
    """Symbol count: connectives, quantifier+variable, predicate and term symbols."""
    if isinstance(f, Atom):
        return 1 + sum(a.length if isinstance(a, Term) else 1 for a in f.args)
    if isinstance(f, Falsum):
        return 1
    if isinstance(f, Exists):
        return 2 + formula_size(f.body)
    return 1 + sum(formula_size(g) for g in immediate_subformulas(f))


def formula_depth(f: Formula) -> int:
    sub = immediate_subformulas(f)
    return 0 if not sub else 1 + max(formula_depth(g) for g in sub)


def closed_terms_in(f: Formula) -> set[Term]:
    """Maximal closed terms occurring as atom arguments (and their subterms)."""
    out: set[Term] = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            for a in g.args:
                if isinstance(a, Term):
                    stack = [a]
                    while stack:
                        u = stack.pop()
                        if isinstance(u, Var):
                            continue
                        if u.closed:
                            out.update(subterms(u))
                        else:
                            stack.extend(u.args)
    return out


def function_symbols(f: Formula) -> set[tuple[str, int]]:
    out: set[tuple[str, int]] = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            stack = list(g.args)
            while stack:
                u = stack.pop()
                if isinstance(u, Term):
                    out.add((u.head, len(u.args)))
                    if u.numeral is None:
                        stack.extend(u.args)
                    elif u.numeral > 0:
                        out.add(("0", 0))
    return out


def predicates(f: Formula) -> set[tuple[str, int]]:
    return {(g.pred, len(g.args)) for g in subformulas(f) if isinstance(g, Atom)}
