"""Fuzzy first-order structures coupled to a truth transfer policy.

Degrees are canonical: the lower bounds a structure must respect for
conjunction and the existential become equalities (the existential takes
the maximum over all domain elements), negation is ``1 - x`` and falsum is
0.  Implication, which only the Hilbert calculus uses, defaults to the
residuum of the coupled modus ponens policy; ``implication="derived"``
reads ``A => B`` as ``not (A and not B)`` instead.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence, Union

from .arith import STANDARD_OPS, EXTRA_OPS, Term, Var, eval_term, value_layers
from .fis import FIS, Linear, evaluate
from .kernel import (Derivation, Rule, TTP, Theory, _credibility, measure_ttp, witness_key,
                     zero_decay_ttp)
from .search import SearchBudget, feasibly_consistent, saturate, theory_signature
from .syntax import (And, Atom, Exists, Falsum, Formula, Implies, Not,
                     free_vars, predicates, subformulas)

Element = Union[int, str]
ONE = Fraction(1)
ZERO = Fraction(0)


class SemanticsError(ValueError):
    pass


class ModelMismatch(SemanticsError):
    pass


class RefutedTheory(SemanticsError):
    pass


class BudgetTooSmall(SemanticsError):
    pass


@dataclass(frozen=True)
class FunctionInterp:
    arity: int
    table: Optional[Mapping] = None           # args tuple -> element
    fn: Optional[Callable] = field(default=None, compare=False)

    def __call__(self, *args):
        if self.fn is not None:
            return self.fn(*args)
        try:
            return self.table[tuple(args)]
        except KeyError:
            raise SemanticsError(f"function table has no entry for {args}") from None


@dataclass(frozen=True)
class PredicateInterp:
    arity: int
    table: Optional[Mapping] = None           # args tuple -> Fraction
    default: Fraction = ZERO
    fn: Optional[Callable] = field(default=None, compare=False)

    def __call__(self, *args) -> Fraction:
        if self.fn is not None:
            return Fraction(self.fn(*args))
        return self.table.get(tuple(args), self.default) if self.table is not None else self.default


@dataclass
class FuzzyStructure:
    domain: tuple
    functions: dict                 # name -> FunctionInterp (constants have arity 0)
    predicates: dict                # name -> PredicateInterp
    ttp: TTP = field(default_factory=zero_decay_ttp)
    top: Optional[Element] = None
    overrides: dict = field(default_factory=dict)   # closed Formula -> Fraction
    implication: str = "residuum"
    name: str = "M"

    def __post_init__(self):
        self.domain = tuple(self.domain)
        if not self.domain:
            raise SemanticsError("domain must be non-empty")
        if self.implication not in ("residuum", "derived"):
            raise SemanticsError(f"unknown implication mode {self.implication!r}")
        if self.top is not None and self.top not in self.domain:
            raise SemanticsError("top must be a domain element")
        self._members = set(self.domain)
        self._tcache: dict = {}
        for name, fi in self.functions.items():
            if fi.table is not None:
                for args, v in fi.table.items():
                    if v not in self._members or any(a not in self._members for a in args):
                        raise SemanticsError(f"function {name} leaves the domain at {args}")

    # -- terms ------------------------------------------------------------

    def _const(self, name: str):
        fi = self.functions.get(name)
        if fi is not None:
            return fi()
        if name == "0" and 0 in self._members:
            return 0
        raise SemanticsError(f"uninterpreted constant {name!r}")

    def _apply(self, name: str, args):
        fi = self.functions.get(name)
        if fi is not None:
            if fi.arity != len(args):
                raise SemanticsError(f"{name} expects {fi.arity} arguments")
            v = fi(*args)
        elif name in STANDARD_OPS or name in EXTRA_OPS:
            # default: standard meaning, saturating at the top (or the largest element)
            if any(not isinstance(a, int) for a in args):
                return self.top if self.top is not None else max(args, key=str)
            op = STANDARD_OPS.get(name) or EXTRA_OPS[name]
            v = op.fn(*args)
            if v not in self._members:
                if self.top is not None:
                    return self.top
                ints = [d for d in self.domain if isinstance(d, int)]
                return max(ints)
            return v
        else:
            raise SemanticsError(f"uninterpreted function symbol {name!r}")
        if v not in self._members:
            raise SemanticsError(f"{name}{tuple(args)} = {v!r} is not a domain element")
        return v

    def term_value(self, t, env: Mapping[str, Element] | None = None) -> Element:
        if isinstance(t, Var):
            if env is None or t.name not in env:
                raise SemanticsError(f"free variable {t.name}")
            return env[t.name]
        if t.closed:
            hit = self._tcache.get(t)
            if hit is not None:
                return hit
        if t.numeral is not None:
            # deep numerals: walk up from 0
            v = self._const("0")
            for _ in range(t.numeral):
                v = self._apply("S", (v,))
            self._tcache[t] = v
            return v
        if not t.args:
            v = self._const(t.head)
        else:
            v = self._apply(t.head, tuple(self.term_value(a, env) for a in t.args))
        if t.closed:
            self._tcache[t] = v
        return v

    # -- formulas ---------------------------------------------------------

    def atom_degree(self, pred: str, args: tuple) -> Fraction:
        p = self.predicates.get(pred)
        if p is None:
            if pred == "=" and len(args) == 2:
                return ONE if args[0] == args[1] else ZERO
            raise SemanticsError(f"uninterpreted predicate {pred!r}")
        if p.arity != len(args):
            raise SemanticsError(f"{pred} expects {p.arity} arguments")
        return p(*args)

    def degree(self, f: Formula, env: Mapping[str, Element] | None = None) -> Fraction:
        if not env and f in self.overrides:
            return Fraction(self.overrides[f])
        if isinstance(f, Atom):
            return self.atom_degree(f.pred, tuple(self.term_value(a, env) for a in f.args))
        if isinstance(f, Falsum):
            return ZERO
        if isinstance(f, Not):
            return 1 - self.degree(f.body, env)
        if isinstance(f, And):
            return self.ttp.apply(Rule.AND_INTRO, [self.degree(f.left, env), self.degree(f.right, env)])
        if isinstance(f, Exists):
            best = ZERO
            inner = dict(env or {})
            for d in self.domain:
                inner[f.var] = d
                v = self.ttp.apply(Rule.EXISTS_INTRO, [self.degree(f.body, inner)])
                if v > best:
                    best = v
                    if best == 1:
                        break
            return best
        if isinstance(f, Implies):
            a = self.degree(f.left, env)
            b = self.degree(f.right, env)
            if self.implication == "derived":
                return 1 - self.ttp.apply(Rule.AND_INTRO, [a, 1 - b])
            return self.ttp.policy(Rule.MP).residuum(a, b)
        raise TypeError(f"not a formula: {f!r}")


@dataclass
class DegreeReport:
    formula: Formula
    degree: Fraction

    @property
    def satisfied(self) -> bool:
        return self.degree > 0

    @property
    def strongly_satisfied(self) -> bool:
        return self.degree == 1


def eval_degree(M: FuzzyStructure, f: Formula) -> Fraction:
    """Degree of a closed formula in ``M``."""
    if free_vars(f):
        raise SemanticsError(f"open formula: free {sorted(free_vars(f))}")
    return M.degree(f)


def degree_report(M: FuzzyStructure, f: Formula) -> DegreeReport:
    return DegreeReport(f, eval_degree(M, f))


# ---------------------------------------------------------------------------
# T-models


@dataclass
class ModelFailure:
    source: str
    formula: Formula
    degree: Fraction


@dataclass
class TModelReport:
    ok: bool
    checked: int
    skipped: int
    failures: list


def _touches_top(M: FuzzyStructure, f: Formula) -> bool:
    if M.top is None:
        return False
    for g in subformulas(f):
        if isinstance(g, Atom):
            for a in g.args:
                if isinstance(a, Term) and a.closed and M.term_value(a) == M.top:
                    return True
    return False


def check_t_model(M: FuzzyStructure, theory: Theory) -> TModelReport:
    """Every axiom and schema instance must have degree exactly 1.

    Schema instances mentioning a term whose value is the structure's
    designated top are outside the represented range and are skipped.
    """
    failures: list[ModelFailure] = []
    checked = skipped = 0
    for src, f in theory.leaves():
        is_instance = src.startswith("(instance")
        if is_instance and _touches_top(M, f):
            skipped += 1
            continue
        checked += 1
        deg = eval_degree(M, f)
        if deg != 1:
            failures.append(ModelFailure(src, f, deg))
    return TModelReport(not failures, checked, skipped, failures)


# ---------------------------------------------------------------------------
# soundness audit


@dataclass
class SoundnessViolation:
    derivation: Derivation
    degree: Fraction
    credibility: Fraction


@dataclass
class SoundnessReport:
    derivations: int
    tight: int                     # derivations with degree == credibility
    violations: list
    rounds: int
    truncated: bool

    @property
    def ok(self) -> bool:
        return not self.violations


def soundness_audit(M: FuzzyStructure, theory: Theory, m, budget: SearchBudget,
                    goals: Sequence[Formula] = ()) -> SoundnessReport:
    """Enumerate every closed derivation within budget and check
    ``degree(conclusion) >= credibility(derivation)`` exactly."""
    tm = check_t_model(M, theory)
    if not tm.ok:
        fs = ", ".join(f"{x.source} has degree {x.degree}" for x in tm.failures[:3])
        raise ModelMismatch(f"structure is not a model of {theory.name}: {fs}")
    ttp = measure_ttp(m)
    if ttp is not None and ttp != M.ttp:
        raise ModelMismatch(f"structure is coupled to {M.ttp}, measure uses {ttp}")
    sat = saturate(theory, goals, budget, ttp, mode="all")
    degs: dict = {}
    count = tight = 0
    violations: list[SoundnessViolation] = []
    for e in sat.all_closed():
        count += 1
        d = e.deriv
        cred = e.cred if e.cred is not None and ttp is not None else _credibility(m, d)
        deg = degs.get(d.conclusion)
        if deg is None:
            deg = degs[d.conclusion] = eval_degree(M, d.conclusion)
        if deg < cred:
            violations.append(SoundnessViolation(d, deg, cred))
        elif deg == cred:
            tight += 1
    violations.sort(key=lambda v: witness_key(v.derivation))
    return SoundnessReport(count, tight, violations, sat.rounds, sat.truncated)


# ---------------------------------------------------------------------------
# term model


TOP = "top"


@dataclass
class AtomicDegrees:
    domain: tuple                  # int values, without the top class
    degrees: dict                  # (pred, args tuple) -> Fraction (proved atoms only)
    refuted: set                   # (pred, args) whose negation was proved feasibly


def atomic_degrees(theory: Theory, m, budget: SearchBudget) -> AtomicDegrees:
    """Supremum credibility of discovered feasible proofs, per atomic sentence
    over the value classes of closed terms of length at most ``term_bound + 1``."""
    sig = theory_signature(theory)
    interp = sig.standard_interp()
    values = set()
    for layer in value_layers(sig, budget.term_bound + 1, interp):
        values.update(layer)
    dom = tuple(sorted(values))
    ttp = measure_ttp(m)
    sat = saturate(theory, [], budget, ttp, mode="best" if ttp is not None else "all")
    degrees: dict = {}
    refuted: set = set()
    for e in sat.all_closed():
        f = e.deriv.conclusion
        cred = e.cred if ttp is not None else _credibility(m, e.deriv)
        if cred <= 0:
            continue
        body, neg = (f.body, True) if isinstance(f, Not) else (f, False)
        if not isinstance(body, Atom):
            continue
        try:
            key = (body.pred, tuple(eval_term(a, interp) for a in body.args))
        except Exception:
            continue
        if any(v not in values for v in key[1]):
            continue
        if neg:
            refuted.add(key)
        elif cred > degrees.get(key, ZERO):
            degrees[key] = cred
    return AtomicDegrees(dom, degrees, refuted)


def build_term_model(theory: Theory, m, budget: SearchBudget,
                     completion: str = "negative", vocabulary: Sequence[Formula] = ()) -> FuzzyStructure:
    """Structure on value classes of closed terms (plus an absorbing top class)
    whose atomic degrees are the best credibilities of discovered proofs.

    Predicates occurring in ``vocabulary`` but not in the theory are
    interpreted too (by the completion default alone)."""
    if completion != "negative":
        raise ValueError(f"unknown completion policy {completion!r}")
    ttp = measure_ttp(m)
    if ttp is None:
        raise TypeError("the term model is coupled to a truth transfer policy")
    cons = feasibly_consistent(theory, m, budget)
    if cons.derivable:
        raise RefutedTheory(f"{theory.name} feasibly proves falsum: {cons.witness}")
    ad = atomic_degrees(theory, m, budget)
    members = set(ad.domain)
    domain = ad.domain + (TOP,)
    sig = theory_signature(theory)
    interp = sig.standard_interp()
    functions: dict = {}
    for name, ar in sig.symbols:
        table = {}
        for args in itertools.product(domain, repeat=ar):
            if TOP in args:
                table[args] = TOP
            else:
                v = interp[name].fn(*args)
                table[args] = v if v in members else TOP
        functions[name] = FunctionInterp(ar, table)
    preds: dict = {}
    arities: dict = {}
    for f in itertools.chain(theory.all_formulas(), vocabulary):
        for p, ar in predicates(f):
            arities.setdefault(p, ar)
    for (p, args), deg in ad.degrees.items():
        arities.setdefault(p, len(args))
    for p, ar in sorted(arities.items()):
        table = {args: deg for (q, args), deg in ad.degrees.items() if q == p}
        # completion: everything else (undecided, refuted, or touching top) gets 0
        preds[p] = PredicateInterp(ar, table, ZERO)
    M = FuzzyStructure(domain, functions, preds, ttp, top=TOP, name=f"term-model-{theory.name}")
    rep = check_t_model(M, theory)
    if not rep.ok:
        x = rep.failures[0]
        raise BudgetTooSmall(f"axiom {x.source} only reaches degree {x.degree} "
                             f"in the term model; raise the budget")
    return M


# ---------------------------------------------------------------------------
# convenient structures


def fis_cut_model(G: FIS, size: int, ttp: TTP, pred: str = "F") -> FuzzyStructure:
    """Domain {0..size} with saturating 0, S, +, * and ``pred`` read off ``G``."""
    def sat(v):
        return v if v <= size else size
    functions = {
        "0": FunctionInterp(0, fn=lambda: 0),
        "S": FunctionInterp(1, fn=lambda n: sat(n + 1)),
        "+": FunctionInterp(2, fn=lambda m, n: sat(m + n)),
        "*": FunctionInterp(2, fn=lambda m, n: sat(m * n)),
    }
    preds = {pred: PredicateInterp(1, fn=lambda n: evaluate(G, n))}
    return FuzzyStructure(tuple(range(size + 1)), functions, preds, ttp, name=f"cut({size})")


def parikh_cut_model(k: int, ttp: TTP) -> FuzzyStructure:
    """The naturals cut at 2^k, with F read off the linear FIS of radius 2^k - 1."""
    return fis_cut_model(Linear(1 << k), 1 << k, ttp)


def structure_text(M: FuzzyStructure) -> str:
    """Short human summary (tables only; callables are named)."""
    lines = [f"domain {' '.join(str(d) for d in M.domain)}"]
    for p, pi in sorted(M.predicates.items()):
        if pi.table is None:
            lines.append(f"pred {p}/{pi.arity} <function>")
            continue
        ents = " ".join(f"({' '.join(map(str, a))} {v})" for a, v in sorted(pi.table.items(), key=str))
        lines.append(f"pred {p}/{pi.arity} {ents} :default {pi.default}")
    return "\n".join(lines)

