"""Independent reference implementations used to cross-check the package.

Nothing here calls the code under test for the quantity being checked; only
plain data types (terms, formulas, fractions) are shared.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import product

from ultrafinite.arith import Term, Var
from ultrafinite.syntax import And, Atom, Exists, Falsum, Implies, Not


# -- term counting ---------------------------------------------------------

def count_terms(arities, n):
    """Number of closed terms of length exactly n over the given arities."""
    arities = tuple(arities)

    @lru_cache(maxsize=None)
    def c(k):
        if k <= 0:
            return 0
        total = 0
        for a in arities:
            if a == 0:
                total += 1 if k == 1 else 0
            else:
                total += seq(k - 1, a)
        return total

    @lru_cache(maxsize=None)
    def seq(k, parts):
        # ordered sequences of `parts` terms with total length k
        if parts == 0:
            return 1 if k == 0 else 0
        return sum(c(i) * seq(k - i, parts - 1) for i in range(1, k + 1))

    return c(n)


# -- FIS closed forms --------------------------------------------------------

def linear(N, n):
    v = 1 - Fraction(n, N)
    return v if v > 0 else Fraction(0)


def erosion_chain(E, n):
    """Credibility of an n-step modus-ponens chain from an axiom."""
    c = Fraction(1)
    for _ in range(n):
        c = max(Fraction(0), min(c, Fraction(1)) - E)
    return c


# -- classical two-valued evaluation ----------------------------------------

def classical_truth(f, domain, funcs, preds, env=None):
    """Plain boolean evaluation; ``preds[name]`` is a set of argument tuples."""
    env = env or {}

    def term(t):
        if isinstance(t, Var):
            return env[t.name]
        if t.numeral is not None and "S" in funcs:
            v = funcs["0"]()
            for _ in range(t.numeral):
                v = funcs["S"](v)
            return v
        return funcs[t.head](*(term(a) for a in t.args))

    if isinstance(f, Atom):
        return tuple(term(a) for a in f.args) in preds[f.pred]
    if isinstance(f, Falsum):
        return False
    if isinstance(f, Not):
        return not classical_truth(f.body, domain, funcs, preds, env)
    if isinstance(f, And):
        return (classical_truth(f.left, domain, funcs, preds, env)
                and classical_truth(f.right, domain, funcs, preds, env))
    if isinstance(f, Implies):
        return (not classical_truth(f.left, domain, funcs, preds, env)
                or classical_truth(f.right, domain, funcs, preds, env))
    if isinstance(f, Exists):
        return any(classical_truth(f.body, domain, funcs, preds, {**env, f.var: d}) for d in domain)
    raise TypeError(f)


def formulas_upto(depth, atoms, variables):
    """All formulas over {not, and, exists} with connective depth <= depth.

    ``atoms(bound)`` yields the atoms allowed when ``bound`` variables are in
    scope.  Yields (formula, free-variable set) pairs; closed ones have an
    empty set.
    """
    levels = {}

    def build(d, bound):
        key = (d, bound)
        if key in levels:
            return levels[key]
        out = [(a, fv) for a, fv in atoms(bound)]
        if d > 0:
            sub = build(d - 1, bound)
            out += [(Not(g), fv) for g, fv in sub]
            out += [(And(g, h), fv | gv) for (g, fv), (h, gv) in product(sub, sub)]
            for v in variables:
                if v not in bound:
                    inner = build(d - 1, bound | {v})
                    out += [(Exists(v, g), fv - {v}) for g, fv in inner if v in fv]
        # drop duplicates while keeping order
        seen, uniq = set(), []
        for g, fv in out:
            if g not in seen:
                seen.add(g)
                uniq.append((g, frozenset(fv)))
        levels[key] = uniq
        return uniq

    return build(depth, frozenset())


# -- bounded classical prover -------------------------------------------------

def _replace(f, var, t):
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(_replace_term(a, var, t) for a in f.args))
    if isinstance(f, Falsum):
        return f
    if isinstance(f, Not):
        return Not(_replace(f.body, var, t))
    if isinstance(f, And):
        return And(_replace(f.left, var, t), _replace(f.right, var, t))
    if isinstance(f, Implies):
        return Implies(_replace(f.left, var, t), _replace(f.right, var, t))
    if f.var == var:
        return f
    return Exists(f.var, _replace(f.body, var, t))


def _replace_term(a, var, t):
    if isinstance(a, Var):
        return t if a.name == var else a
    if not a.args:
        return a
    return Term(a.head, tuple(_replace_term(x, var, t) for x in a.args))


def _is_logical(f):
    # K: A -> (B -> A);  S: (A->(B->C)) -> ((A->B)->(A->C));  DN: not not A -> A
    if not isinstance(f, Implies):
        return False
    a, r = f.left, f.right
    if isinstance(r, Implies) and r.right == a:
        return True
    if isinstance(a, Not) and isinstance(a.body, Not) and a.body.body == r:
        return True
    try:
        A, B, C = a.left, a.right.left, a.right.right
        return r == Implies(Implies(A, B), Implies(A, C))
    except AttributeError:
        return False


def _universe(seeds, witnesses, hilbert):
    U, todo = set(), list(seeds)
    while todo:
        f = todo.pop()
        if f in U:
            continue
        U.add(f)
        if isinstance(f, (And, Implies)):
            todo += [f.left, f.right]
        elif isinstance(f, Not):
            todo.append(f.body)
            if hilbert:
                todo.append(Falsum())
        elif isinstance(f, Exists):
            todo += [_replace(f.body, f.var, t) for t in witnesses]
    return U


def bounded_provable(axioms, goal, depth, hilbert, witnesses=()):
    """Is ``goal`` classically derivable with height <= depth using only
    formulas from its own subformula universe?  A plain set fixpoint over
    (open assumptions, formula) pairs; no credibilities anywhere."""
    U = _universe(list(axioms) + [goal, Falsum()], witnesses, hilbert)
    known = {(frozenset(), a) for a in axioms}
    if hilbert:
        known |= {(frozenset(), f) for f in U if _is_logical(f)}
    else:
        known |= {(frozenset([f.body]), f.body) for f in U if isinstance(f, Not)}
    instances = {}
    for ex in (f for f in U if isinstance(f, Exists)):
        for t in witnesses:
            instances.setdefault(_replace(ex.body, ex.var, t), set()).add(ex)
    for _ in range(depth):
        items = list(known)
        by_formula = {}
        for c, f in items:
            by_formula.setdefault(f, []).append(c)
        new = set(known)
        for c1, f1 in items:
            if hilbert:
                if isinstance(f1, Implies):
                    a, b = f1.left, f1.right
                elif isinstance(f1, Not):
                    a, b = f1.body, Falsum()
                else:
                    continue
                for c2 in by_formula.get(a, ()):
                    new.add((c1 | c2, b))
                continue
            if isinstance(f1, And):
                new.add((c1, f1.left))
                new.add((c1, f1.right))
            for c2, f2 in items:
                if And(f1, f2) in U:
                    new.add((c1 | c2, And(f1, f2)))
            for c2 in by_formula.get(Not(f1), ()):
                new.add((c1 | c2, Falsum()))
            if isinstance(f1, Falsum):
                for g in U:
                    if isinstance(g, Not):
                        new.add((c1 - {g.body}, g))
            for ex in instances.get(f1, ()):
                new.add((c1, ex))
        if new == known:
            break
        known = new
    return (frozenset(), goal) in known


def witness_numerals(formulas, max_len):
    """Unary numerals of length <= max_len plus every closed term (and closed
    subterm) written in ``formulas``; the witnesses tried for existentials."""
    found = {numeral_of(k) for k in range(max_len)}

    def walk_term(t):
        if isinstance(t, Term) and t.closed:
            found.add(t)
            for a in t.args:
                walk_term(a)
        elif isinstance(t, Term):
            for a in t.args:
                walk_term(a)

    def walk(f):
        if isinstance(f, Atom):
            for a in f.args:
                walk_term(a)
        elif isinstance(f, (And, Implies)):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, (Not, Exists)):
            walk(f.body)

    for f in formulas:
        walk(f)
    return sorted(found, key=lambda t: (t.length, str(t)))


def numeral_of(k):
    t = Term("0")
    for _ in range(k):
        t = Term("S", (t,))
    return t
