"""Bounded exhaustive proof search.

Derivations are grown bottom-up, one height level per round, and every
formula in a derivation must lie in a finite universe: the subformula
closure of the theory's axioms, its schema instances and the goals, with
existential bodies instantiated by a bounded set of closed terms.

Two modes share the engine.  *best* mode keeps, per (open assumptions,
formula), only witnesses not dominated in (credibility, witness key); for
monotone policies this is exact and scales to chains of a thousand steps.
*all* mode keeps every distinct derivation, for auditors that need them.
A miss is always relative to the budget, never a refutation.
"""
from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .arith import Signature, Term, enumerate_terms
from .kernel import (Derivation, Rule, Theory, TTP, _credibility, logical_axiom_kind, measure_ttp,
                     witness_key)
from .syntax import (BOT, And, Exists, Falsum, Formula, Implies, Not, as_implication,
                     closed_terms_in, formula_size, formula_to_text, function_symbols,
                     immediate_subformulas, subformulas, substitute)


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 8
    max_formula_size: Optional[int] = None
    term_bound: int = 2
    max_items: int = 200_000
    calculus: str = "auto"      # "auto" | "hilbert" | "nd"

    def __post_init__(self):
        if self.calculus not in ("auto", "hilbert", "nd"):
            raise ValueError(f"unknown calculus {self.calculus!r}")
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")


class Status(enum.Enum):
    STRONG = "strong"
    FEASIBLE = "feasible"
    NOT_FOUND = "not-found-within-budget"
    CONSISTENT = "consistent-within-budget"
    REFUTED = "refuted"


# ---------------------------------------------------------------------------
# universe


def choose_calculus(theory: Theory, goals: Sequence[Formula], requested: str = "auto") -> str:
    if requested != "auto":
        return requested
    if theory.uses_implication:
        return "hilbert"
    if any(isinstance(g, Implies) for f in goals for g in subformulas(f)):
        return "hilbert"
    return "nd"


def theory_signature(theory: Theory, goals: Sequence[Formula] = ()) -> Signature:
    syms: dict[str, int] = {}
    for f in list(theory.all_formulas()) + list(goals):
        for name, ar in sorted(function_symbols(f)):
            if name not in ("0", "S"):
                syms.setdefault(name, ar)
    return Signature.of(*sorted(syms.items()))


@dataclass
class Universe:
    calculus: str
    formulas: set
    leaves: list                       # (source, formula)
    assumptions: list                  # formulas A with (not A) in the universe (ND)
    impl: dict = field(default_factory=dict)          # X -> (A, B)
    by_antecedent: dict = field(default_factory=dict)  # A -> [X]
    conj_left: dict = field(default_factory=dict)
    conj_right: dict = field(default_factory=dict)
    exists_by_instance: dict = field(default_factory=dict)
    witness_terms: list = field(default_factory=list)


def assumption_label(f: Formula) -> str:
    """Deterministic label per assumed formula, safe as an s-expression symbol."""
    text = formula_to_text(f)
    return "h:" + text.replace("(", "[").replace(")", "]").replace(" ", "_")


def build_universe(theory: Theory, goals: Sequence[Formula], budget: SearchBudget) -> Universe:
    calculus = choose_calculus(theory, goals, budget.calculus)
    hilbert = calculus == "hilbert"
    limit = budget.max_formula_size

    def ok(f):
        return limit is None or formula_size(f) <= limit

    leaves = [(src, f) for src, f in theory.leaves() if ok(f)]
    seeds = [f for _, f in leaves] + [g for g in goals if ok(g)] + [BOT]
    U: set = set()
    exists_seen: list = []

    def close(fs):
        work = list(fs)
        while work:
            f = work.pop()
            if f in U or not ok(f):
                continue
            U.add(f)
            if isinstance(f, Exists):
                exists_seen.append(f)
                continue
            work.extend(immediate_subformulas(f))
            if hilbert and isinstance(f, Not):
                work.append(BOT)

    close(seeds)

    witness_terms: list[Term] = []
    exists_by_instance: dict = defaultdict(list)
    if exists_seen:
        terms: dict = {}
        for f in seeds:
            for t in sorted(closed_terms_in(f), key=lambda t: (t.length, str(t))):
                terms.setdefault(t, None)
        sig = theory_signature(theory, goals)
        for t in enumerate_terms(sig, max(1, budget.term_bound)):
            terms.setdefault(t, None)
        witness_terms = list(terms)
        done = 0
        while done < len(exists_seen):
            ex = exists_seen[done]
            done += 1
            for t in witness_terms:
                inst = substitute(ex.body, {ex.var: t})
                if not ok(inst):
                    continue
                close([inst])
                if inst in U and ex not in exists_by_instance[inst]:
                    exists_by_instance[inst].append(ex)

    u = Universe(calculus, U, leaves, [], witness_terms=witness_terms,
                 exists_by_instance=dict(exists_by_instance))
    ordered = sorted(U, key=formula_to_text)
    if hilbert:
        for X in ordered:
            if logical_axiom_kind(X):
                u.leaves.append((f"(logical {logical_axiom_kind(X)} {formula_to_text(X)})", X))
            imp = as_implication(X)
            if imp is not None and imp[1] in U:
                u.impl[X] = imp
                u.by_antecedent.setdefault(imp[0], []).append(X)
    else:
        for X in ordered:
            if isinstance(X, And):
                u.conj_left.setdefault(X.left, []).append(X)
                u.conj_right.setdefault(X.right, []).append(X)
            if isinstance(X, Not) and X.body in U:
                u.assumptions.append(X.body)
    return u


# ---------------------------------------------------------------------------
# engine


@dataclass
class Entry:
    ctx: frozenset
    deriv: Derivation
    cred: Optional[Fraction]


@dataclass
class Saturation:
    universe: Universe
    store: dict                 # formula -> list[Entry]
    rounds: int
    saturated: bool             # no new entries appeared before the depth bound
    truncated: bool             # stopped by max_items
    mode: str

    def entries(self, f: Formula, closed_only: bool = True) -> list[Entry]:
        es = self.store.get(f, [])
        return [e for e in es if not e.ctx] if closed_only else list(es)

    def best(self, f: Formula) -> Optional[Entry]:
        """Highest credibility closed witness; ties by :func:`witness_key`."""
        es = self.entries(f)
        if not es:
            return None
        top = max(e.cred for e in es)
        return min((e for e in es if e.cred == top), key=lambda e: witness_key(e.deriv))

    def all_closed(self) -> Iterable[Entry]:
        for f in sorted(self.store, key=formula_to_text):
            for e in self.store[f]:
                if not e.ctx:
                    yield e

    @property
    def size(self) -> int:
        return sum(len(v) for v in self.store.values())


def _applications(u: Universe, store: dict, e: Entry):
    f = e.deriv.conclusion
    get = store.get
    if u.calculus == "hilbert":
        imp = u.impl.get(f)
        if imp is not None:
            for m in get(imp[0], ()):
                yield Rule.MP, (e, m), imp[1], None
        for X in u.by_antecedent.get(f, ()):
            B = u.impl[X][1]
            for M in get(X, ()):
                yield Rule.MP, (M, e), B, None
        return
    for conj in u.conj_left.get(f, ()):
        for r in get(conj.right, ()):
            yield Rule.AND_INTRO, (e, r), conj, None
    for conj in u.conj_right.get(f, ()):
        for l in get(conj.left, ()):
            yield Rule.AND_INTRO, (l, e), conj, None
    if isinstance(f, And):
        yield Rule.AND_ELIM_L, (e,), f.left, None
        yield Rule.AND_ELIM_R, (e,), f.right, None
    neg = Not(f)
    if neg in u.formulas:
        for n in get(neg, ()):
            yield Rule.NOT_ELIM, (e, n), BOT, None
    if isinstance(f, Not):
        for a in get(f.body, ()):
            yield Rule.NOT_ELIM, (a, e), BOT, None
    if isinstance(f, Falsum):
        for A in u.assumptions:
            yield Rule.NOT_INTRO, (e,), Not(A), assumption_label(A)
    for ex in u.exists_by_instance.get(f, ()):
        yield Rule.EXISTS_INTRO, (e,), ex, None


def _dominated(new: Entry, old: Entry, monotone: bool) -> bool:
    if monotone:
        if old.cred < new.cred:
            return False
    elif old.cred != new.cred:
        return False
    return witness_key(old.deriv) <= witness_key(new.deriv)


def saturate(theory: Theory, goals: Sequence[Formula], budget: SearchBudget,
             ttp: Optional[TTP] = None, mode: str = "best") -> Saturation:
    """Grow derivations level by level up to ``budget.max_depth``.

    ``mode="best"`` needs ``ttp`` and keeps undominated witnesses only;
    ``mode="all"`` keeps every distinct derivation (credibility filled in when
    a ``ttp`` is given).
    """
    if mode == "best" and ttp is None:
        raise ValueError("best mode needs a truth transfer policy")
    u = build_universe(theory, goals, budget)
    monotone = ttp.monotone if ttp is not None else False
    store: dict = defaultdict(list)
    frontier: list[Entry] = []
    total = 0
    truncated = False

    def consider(cand: Entry) -> bool:
        nonlocal total
        bucket = store[cand.deriv.conclusion]
        if mode == "best":
            same = [o for o in bucket if o.ctx == cand.ctx]
            if any(_dominated(cand, o, monotone) for o in same):
                return False
            for o in same:
                if _dominated(o, cand, monotone):
                    bucket.remove(o)
                    total -= 1
        bucket.append(cand)
        total += 1
        return True

    one = Fraction(1)
    for src, f in u.leaves:
        ent = Entry(frozenset(), Derivation(Rule.AXIOM, f, (), None, src), one if ttp else None)
        if consider(ent):
            frontier.append(ent)
    if u.calculus == "nd":
        for A in u.assumptions:
            ent = Entry(frozenset([A]), Derivation(Rule.ASSUME, A, (), assumption_label(A)),
                        one if ttp else None)
            if consider(ent):
                frontier.append(ent)

    rounds = 0
    saturated = False
    for depth in range(1, budget.max_depth + 1):
        if not frontier:
            saturated = True
            break
        rounds = depth
        seen: set = set()
        candidates: list[Entry] = []
        for e in frontier:
            for rule, prem, concl, label in _applications(u, store, e):
                key = (rule, tuple(id(p.deriv) for p in prem), concl, label)
                if key in seen:
                    continue
                seen.add(key)
                ctx = frozenset().union(*(p.ctx for p in prem))
                if rule is Rule.NOT_INTRO:
                    ctx = ctx - {concl.body}
                d = Derivation(rule, concl, tuple(p.deriv for p in prem), label)
                cred = ttp.apply(rule, [p.cred for p in prem]) if ttp is not None else None
                candidates.append(Entry(ctx, d, cred))
        frontier = []
        for c in candidates:
            if consider(c):
                frontier.append(c)
            if total > budget.max_items:
                truncated = True
                break
        if truncated:
            break
    else:
        if not frontier:
            saturated = True
    return Saturation(u, dict(store), rounds, saturated, truncated, mode)


# ---------------------------------------------------------------------------
# public operations


@dataclass
class ConsequenceResult:
    status: Status
    credibility: Optional[Fraction]
    witness: Optional[Derivation]
    budget: SearchBudget
    saturated: bool
    truncated: bool
    rounds: int
    explored: int

    @property
    def derivable(self) -> bool:
        """A positive-credibility derivation was found (of falsum, when REFUTED)."""
        return self.status in (Status.STRONG, Status.FEASIBLE, Status.REFUTED)

    @property
    def conclusive(self) -> bool:
        return self.derivable or (self.saturated and not self.truncated)


def _best_for(theory: Theory, target: Formula, m, budget: SearchBudget):
    ttp = measure_ttp(m)
    if ttp is not None:
        sat = saturate(theory, [target], budget, ttp, mode="best")
        best = sat.best(target)
        return sat, (None if best is None else (best.cred, best.deriv))
    sat = saturate(theory, [target], budget, None, mode="all")
    scored = [(_credibility(m, e.deriv), e.deriv) for e in sat.entries(target)]
    if not scored:
        return sat, None
    top = max(c for c, _ in scored)
    d = min((d for c, d in scored if c == top), key=witness_key)
    return sat, (top, d)


def feasible_consequence(theory: Theory, a: Formula, m, budget: SearchBudget = SearchBudget()
                         ) -> ConsequenceResult:
    """Is ``a`` derivable from ``theory`` with positive credibility within budget?"""
    sat, best = _best_for(theory, a, m, budget)
    if best is None or best[0] <= 0:
        status, cred, wit = Status.NOT_FOUND, None, None
    else:
        cred, wit = best
        status = Status.STRONG if cred == 1 else Status.FEASIBLE
    return ConsequenceResult(status, cred, wit, budget, sat.saturated, sat.truncated,
                             sat.rounds, sat.size)


def feasibly_consistent(theory: Theory, m, budget: SearchBudget = SearchBudget()
                        ) -> ConsequenceResult:
    """Search for a positive-credibility derivation of falsum."""
    res = feasible_consequence(theory, BOT, m, budget)
    res.status = Status.REFUTED if res.derivable else Status.CONSISTENT
    return res


@dataclass
class WellBehavedReport:
    derivable: ConsequenceResult
    negation_extension: ConsequenceResult
    agreement: Optional[bool]          # None: inconclusive within budget
    literal_agreement: Optional[bool]
    literal_text: str = "T |-_F A  <=>  T, not A is F-consistent"
    corrected_text: str = "T |-_F A  <=>  T, not A is F-inconsistent"


def well_behaved_probe(theory: Theory, a: Formula, m, budget: SearchBudget = SearchBudget()
                       ) -> WellBehavedReport:
    """Compare derivability of ``a`` with refutability of ``theory + not a``."""
    left = feasible_consequence(theory, a, m, budget)
    ext = theory.with_axiom("__negated_goal", Not(a))
    right = feasibly_consistent(ext, m, budget)
    refuted = right.status is Status.REFUTED
    if not (left.conclusive and right.conclusive):
        agreement = literal = None
    else:
        agreement = left.derivable == refuted
        literal = left.derivable == (not refuted)
    return WellBehavedReport(left, right, agreement, literal)
