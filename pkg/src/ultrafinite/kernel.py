"""Dissipative proof theory: derivations, theories, truth transfer policies
and credibility measures.

Two calculi share the :class:`Derivation` type.  The Hilbert calculus has
modus ponens and the logical axiom schemas K, S and double negation; the
natural-deduction (ND) fragment has and-intro/elim, not-intro/elim and
exists-intro with labelled assumptions.  One derivation uses one calculus.
"""
from __future__ import annotations

import enum
import itertools
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .arith import Var, numeral, unit, format_rational
from .fis import FIS, evaluate
from .syntax import (And, Atom, Exists, Falsum, Formula, Implies, Not, as_implication,
                     formula_size, formula_to_text, free_vars, immediate_subformulas, match,
                     subformulas, substitute)

# long modus-ponens chains are ~1000 nodes deep
if sys.getrecursionlimit() < 10000:
    sys.setrecursionlimit(10000)


class Rule(enum.Enum):
    AXIOM = "axiom"
    ASSUME = "assume"
    MP = "mp"
    AND_INTRO = "and-intro"
    AND_ELIM_L = "and-elim-l"
    AND_ELIM_R = "and-elim-r"
    NOT_ELIM = "not-elim"
    NOT_INTRO = "not-intro"
    EXISTS_INTRO = "exists-intro"


ARITY = {
    Rule.AXIOM: 0, Rule.ASSUME: 0, Rule.MP: 2, Rule.AND_INTRO: 2,
    Rule.AND_ELIM_L: 1, Rule.AND_ELIM_R: 1, Rule.NOT_ELIM: 2,
    Rule.NOT_INTRO: 1, Rule.EXISTS_INTRO: 1,
}
HILBERT_RULES = frozenset({Rule.AXIOM, Rule.MP})
ND_RULES = frozenset(set(Rule) - {Rule.MP})
INFERENCE_RULES = tuple(r for r in Rule if ARITY[r] > 0)
RULE_INDEX = {r: i for i, r in enumerate(Rule)}


@dataclass(frozen=True)
class Derivation:
    """A proof tree node.  Premise order: MP is (major ``A => B``, minor ``A``);
    NOT_ELIM is (``A``, ``not A``).  ``label`` names the assumption of an
    ASSUME leaf or the one discharged by NOT_INTRO; ``source`` records where
    an axiom leaf came from (for printing only)."""

    rule: Rule
    conclusion: Formula
    premises: tuple = ()
    label: Optional[str] = None
    source: Optional[str] = field(default=None, compare=False)
    size: int = field(init=False, compare=False, repr=False)
    height: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))
        object.__setattr__(self, "size", 1 + sum(p.size for p in self.premises))
        object.__setattr__(self, "height", 1 + max((p.height for p in self.premises), default=-1))

    def rule_sequence(self) -> tuple:
        out = []
        stack = [self]
        while stack:
            d = stack.pop()
            out.append(RULE_INDEX[d.rule])
            stack.extend(reversed(d.premises))
        return tuple(out)

    def nodes(self):
        stack = [self]
        while stack:
            d = stack.pop()
            yield d
            stack.extend(reversed(d.premises))

    def rules_used(self) -> set[Rule]:
        return {d.rule for d in self.nodes()}

    def __str__(self):
        return derivation_to_text(self)


def witness_key(d: Derivation) -> tuple:
    """Deterministic preference among equally credible witnesses: fewer nodes,
    then lexicographic rule order, then printed form."""
    return (d.size, d.rule_sequence(), derivation_to_text(d))


def leaf(f: Formula, source: str | None = None) -> Derivation:
    return Derivation(Rule.AXIOM, f, (), None, source)


def mp(major: Derivation, minor: Derivation) -> Derivation:
    imp = as_implication(major.conclusion)
    if imp is None:
        raise ValueError(f"major premise is not an implication: {major.conclusion}")
    return Derivation(Rule.MP, imp[1], (major, minor))


def derivation_to_text(d: Derivation) -> str:
    """Proof-term notation, the same syntax proof files use."""
    r = d.rule
    if r is Rule.AXIOM:
        if d.source:
            return d.source
        return f"(axiom-formula {formula_to_text(d.conclusion)})"
    if r is Rule.ASSUME:
        return f"(assume {d.label} {formula_to_text(d.conclusion)})"
    if r is Rule.NOT_INTRO:
        return f"(not-intro {d.label} {formula_to_text(d.conclusion.body)} {derivation_to_text(d.premises[0])})"
    if r is Rule.EXISTS_INTRO:
        return f"(exists-intro {formula_to_text(d.conclusion)} {derivation_to_text(d.premises[0])})"
    return "(" + r.value + " " + " ".join(derivation_to_text(p) for p in d.premises) + ")"


# ---------------------------------------------------------------------------
# theories


class InfiniteSchema(ValueError):
    pass


@dataclass(frozen=True)
class Schema:
    """Axiom template whose ``?``-variables range over numerals below ``bound``."""
    name: str
    template: Formula
    bound: int

    def __post_init__(self):
        if self.bound is None:
            raise InfiniteSchema("infinite axiom schemas forbidden: a :bound is required")
        if self.bound < 0:
            raise ValueError("schema bound must be non-negative")

    @property
    def variables(self) -> tuple[str, ...]:
        """Schema parameters (names starting with ``?``) in order of first occurrence."""
        seen: list[str] = []

        def term(t):
            if isinstance(t, Var):
                if t.name.startswith("?") and t.name not in seen:
                    seen.append(t.name)
            elif not t.closed:
                for a in t.args:
                    term(a)

        def walk(f):
            if isinstance(f, Atom):
                for a in f.args:
                    term(a)
            else:
                for g in immediate_subformulas(f):
                    walk(g)

        walk(self.template)
        return tuple(seen)

    def instance(self, *values: int) -> Formula:
        vs = self.variables
        if len(values) != len(vs):
            raise ValueError(f"schema {self.name} takes {len(vs)} parameters")
        if any(not 0 <= v < self.bound for v in values):
            raise ValueError(f"schema {self.name} parameters must be below {self.bound}")
        return substitute(self.template, {v: numeral(k) for v, k in zip(vs, values)})

    def instances(self) -> Iterable[tuple[tuple[int, ...], Formula]]:
        vs = self.variables
        for vals in itertools.product(range(self.bound), repeat=len(vs)):
            yield vals, substitute(self.template, {v: numeral(k) for v, k in zip(vs, vals)})

    def match(self, f: Formula) -> Optional[tuple[int, ...]]:
        env = match(self.template, f, self.variables)
        if env is None:
            return None
        vals = []
        for v in self.variables:
            t = env[v]
            if t.numeral is None or t.numeral >= self.bound:
                return None
            vals.append(t.numeral)
        return tuple(vals)


@dataclass(frozen=True)
class Theory:
    name: str = "T"
    axioms: tuple = ()      # (name, Formula) pairs
    schemas: tuple = ()     # Schema

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple((n, f) for n, f in self.axioms))
        object.__setattr__(self, "schemas", tuple(self.schemas))
        for n, f in self.axioms:
            if free_vars(f):
                raise ValueError(f"axiom {n} is not closed")
        names = [n for n, _ in self.axioms] + [s.name for s in self.schemas]
        if len(set(names)) != len(names):
            raise ValueError("axiom and schema names must be unique")

    @property
    def axiom_formulas(self) -> frozenset:
        return frozenset(f for _, f in self.axioms)

    def axiom(self, name: str) -> Formula:
        for n, f in self.axioms:
            if n == name:
                return f
        raise KeyError(name)

    def schema(self, name: str) -> Schema:
        for s in self.schemas:
            if s.name == name:
                return s
        raise KeyError(name)

    def axiom_source(self, f: Formula) -> Optional[str]:
        """Proof-term naming ``f`` as an axiom or schema instance, if it is one."""
        for n, g in self.axioms:
            if g == f:
                return f"(axiom {n})"
        for s in self.schemas:
            vals = s.match(f)
            if vals is not None:
                return f"(instance {s.name} " + " ".join(f"(num {v})" for v in vals) + ")"
        return None

    def is_axiom(self, f: Formula) -> bool:
        return f in self.axiom_formulas or any(s.match(f) is not None for s in self.schemas)

    def leaves(self) -> Iterable[tuple[str, Formula]]:
        for n, f in self.axioms:
            yield f"(axiom {n})", f
        for s in self.schemas:
            for vals, f in s.instances():
                yield f"(instance {s.name} " + " ".join(f"(num {v})" for v in vals) + ")", f

    def with_axiom(self, name: str, f: Formula) -> "Theory":
        return Theory(self.name, self.axioms + ((name, f),), self.schemas)

    def all_formulas(self) -> Iterable[Formula]:
        for _, f in self.axioms:
            yield f
        for s in self.schemas:
            yield s.template

    @property
    def uses_implication(self) -> bool:
        return any(isinstance(g, Implies) for f in self.all_formulas() for g in subformulas(f))


def logical_axiom_kind(f: Formula) -> Optional[str]:
    """'K', 'S' or 'DN' if ``f`` is an instance of that Hilbert axiom schema."""
    if not isinstance(f, Implies):
        return None
    a, rest = f.left, f.right
    if isinstance(rest, Implies) and rest.right == a:
        return "K"
    if (isinstance(a, Not) and isinstance(a.body, Not) and a.body.body == rest):
        return "DN"
    if (isinstance(a, Implies) and isinstance(a.right, Implies) and isinstance(rest, Implies)
            and isinstance(rest.left, Implies) and isinstance(rest.right, Implies)):
        A, B, C = a.left, a.right.left, a.right.right
        if rest.left == Implies(A, B) and rest.right == Implies(A, C):
            return "S"
    return None


# ---------------------------------------------------------------------------
# checking


@dataclass
class CheckResult:
    ok: bool
    path: tuple = ()
    reason: str = ""

    def __bool__(self):
        return self.ok


def _node_problem(d: Derivation, theory: Optional[Theory], hilbert: bool) -> Optional[str]:
    r, c, ps = d.rule, d.conclusion, d.premises
    if len(ps) != ARITY[r]:
        return f"{r.value} expects {ARITY[r]} premises, got {len(ps)}"
    if r is Rule.AXIOM:
        if theory is None:
            return None
        if theory.is_axiom(c):
            return None
        if hilbert and logical_axiom_kind(c):
            return None
        return f"leaf {formula_to_text(c)} is not an axiom"
    if r is Rule.ASSUME:
        return None if d.label else "assumption without label"
    if r is Rule.MP:
        imp = as_implication(ps[0].conclusion)
        if imp is None:
            return "major premise of mp is not an implication"
        if ps[1].conclusion != imp[0]:
            return "minor premise of mp does not match the antecedent"
        if c != imp[1]:
            return "mp conclusion is not the consequent"
        return None
    if r is Rule.AND_INTRO:
        return None if c == And(ps[0].conclusion, ps[1].conclusion) else "and-intro conclusion mismatch"
    if r in (Rule.AND_ELIM_L, Rule.AND_ELIM_R):
        p = ps[0].conclusion
        if not isinstance(p, And):
            return "and-elim premise is not a conjunction"
        want = p.left if r is Rule.AND_ELIM_L else p.right
        return None if c == want else "and-elim conclusion mismatch"
    if r is Rule.NOT_ELIM:
        if ps[1].conclusion != Not(ps[0].conclusion):
            return "not-elim premises are not A and not A"
        return None if isinstance(c, Falsum) else "not-elim must conclude bot"
    if r is Rule.NOT_INTRO:
        if not isinstance(ps[0].conclusion, Falsum):
            return "not-intro premise must conclude bot"
        if not isinstance(c, Not):
            return "not-intro must conclude a negation"
        return None if d.label else "not-intro without discharge label"
    if r is Rule.EXISTS_INTRO:
        if not isinstance(c, Exists):
            return "exists-intro must conclude an existential"
        env = match(c.body, ps[0].conclusion, {c.var})
        return None if env is not None else "exists-intro premise is not an instance of the body"
    return f"unknown rule {r}"


def check_derivation(d: Derivation, theory: Optional[Theory] = None,
                     allow_open: bool = False) -> CheckResult:
    """Every node locally valid, leaves axioms of ``theory`` (or logical axioms
    in the Hilbert calculus), assumptions discharged, one calculus only.

    With ``theory=None`` leaves are not checked against any axiom set.
    """
    rules = d.rules_used()
    hilbert = Rule.MP in rules
    if hilbert and rules & (ND_RULES - {Rule.AXIOM}):
        return CheckResult(False, (), "mixes Hilbert and natural-deduction rules")

    # iterative walk carrying path and the enclosing discharges
    stack = [(d, (), {})]
    while stack:
        node, path, scope = stack.pop()
        problem = _node_problem(node, theory, hilbert)
        if problem:
            return CheckResult(False, path, problem)
        if node.rule is Rule.ASSUME:
            want = scope.get(node.label)
            if want is None:
                if not allow_open:
                    return CheckResult(False, path, f"assumption {node.label} is never discharged")
            elif want != node.conclusion:
                return CheckResult(False, path, f"assumption {node.label} does not match its discharge")
        inner = scope
        if node.rule is Rule.NOT_INTRO:
            inner = {**scope, node.label: node.conclusion.body}
        for i, p in enumerate(node.premises):
            stack.append((p, path + (i,), inner))
    return CheckResult(True)


def open_assumptions(d: Derivation) -> set[tuple[str, Formula]]:
    if d.rule is Rule.ASSUME:
        return {(d.label, d.conclusion)}
    out: set = set()
    for p in d.premises:
        out |= open_assumptions(p)
    if d.rule is Rule.NOT_INTRO:
        out = {(l, f) for l, f in out if l != d.label}
    return out


# ---------------------------------------------------------------------------
# truth transfer policies


class Policy:
    """A credibility transfer function usable at any arity.

    ``monotone`` declares nondecreasing in every argument; proof search uses
    it to discard dominated witnesses.  ``analytic`` declares the three
    admissibility conditions hold by construction.
    """
    monotone = False
    analytic = False

    def __call__(self, *ps: Fraction) -> Fraction:
        raise NotImplementedError

    def residuum(self, a: Fraction, b: Fraction) -> Fraction:
        """max z in [0,1] with self(z, a) <= b; 0 if there is none."""
        raise NotImplementedError(f"{self} has no residuum")


@dataclass(frozen=True)
class ZeroDecay(Policy):
    """min: classical, no credibility is lost."""
    monotone = True
    analytic = True

    def __call__(self, *ps):
        return min(ps)

    def residuum(self, a, b):
        return Fraction(1) if a <= b else Fraction(b)

    def __str__(self):
        return "(zero-decay)"


@dataclass(frozen=True)
class Erosion(Policy):
    """max(0, min(p) - E): a constant loss per rule application."""
    E: Fraction
    monotone = True
    analytic = True

    def __post_init__(self):
        e = unit(self.E)
        if not 0 < e < 1:
            raise ValueError("erosion factor must satisfy 0 < E < 1")
        object.__setattr__(self, "E", e)

    def __call__(self, *ps):
        return max(Fraction(0), min(ps) - self.E)

    def residuum(self, a, b):
        return Fraction(1) if a - self.E <= b else b + self.E

    def __str__(self):
        return f"(erosion {format_rational(self.E)})"


@dataclass(frozen=True)
class Product(Policy):
    monotone = True
    analytic = True

    def __call__(self, *ps):
        out = Fraction(1)
        for p in ps:
            out *= p
        return out

    def residuum(self, a, b):
        if a == 0:
            return Fraction(1)
        return min(Fraction(1), Fraction(b) / a)

    def __str__(self):
        return "(product)"


@dataclass(frozen=True)
class Constant(Policy):
    c: Fraction
    monotone = True

    def __post_init__(self):
        object.__setattr__(self, "c", unit(self.c))

    def __call__(self, *ps):
        return self.c

    def residuum(self, a, b):
        return Fraction(1) if self.c <= b else Fraction(0)

    def __str__(self):
        return f"(constant {format_rational(self.c)})"


@dataclass(frozen=True)
class FunctionPolicy(Policy):
    """Wrap an arbitrary exact function; conditions are checked on a grid."""
    fn: Callable = field(compare=False)
    name: str = "custom"
    is_monotone: bool = False
    residuum_fn: Optional[Callable] = field(default=None, compare=False)

    @property
    def monotone(self):
        return self.is_monotone

    def __call__(self, *ps):
        return Fraction(self.fn(*ps))

    def residuum(self, a, b):
        if self.residuum_fn is None:
            raise NotImplementedError(f"policy {self.name} has no residuum")
        return Fraction(self.residuum_fn(a, b))

    def __str__(self):
        return f"(function {self.name})"


@dataclass(frozen=True)
class TTP:
    """Truth transfer policy: one policy per inference rule.

    Axioms and assumptions always receive credibility 1 (identity policy).
    """
    default: Policy = ZeroDecay()
    overrides: tuple = ()   # (Rule, Policy) pairs

    def __post_init__(self):
        ov = self.overrides
        if isinstance(ov, Mapping):
            ov = tuple(ov.items())
        object.__setattr__(self, "overrides", tuple(sorted(ov, key=lambda rp: RULE_INDEX[rp[0]])))

    def policy(self, rule: Rule) -> Policy:
        for r, p in self.overrides:
            if r is rule:
                return p
        return self.default

    def apply(self, rule: Rule, creds: Sequence[Fraction]) -> Fraction:
        if ARITY[rule] == 0:
            return Fraction(1)
        return self.policy(rule)(*creds)

    @property
    def monotone(self) -> bool:
        return all(self.policy(r).monotone for r in INFERENCE_RULES)

    def __str__(self):
        if not self.overrides:
            return str(self.default)
        parts = " ".join(f"({r.value} {p})" for r, p in self.overrides)
        return f"(per-rule {parts} (default {self.default}))"


def zero_decay_ttp() -> TTP:
    return TTP(ZeroDecay())


def erosion_ttp(E) -> TTP:
    """Every rule maps p to max(0, min(p) - E); requires 0 < E < 1."""
    return TTP(Erosion(Fraction(E)))


def product_ttp() -> TTP:
    return TTP(Product())


@dataclass
class TTPViolation:
    rule: Rule
    condition: str
    point: tuple
    value: Fraction


@dataclass
class TTPReport:
    ok: bool
    grid_denominator: int
    methods: dict
    violations: list


def validate_ttp(ttp: TTP, grid_denominator: int = 8, analytic: bool = True) -> TTPReport:
    """Check P(0..0)=0, P(1..1)>0 and P(p) <= min(p) for every inference rule,
    on the grid {0, 1/q, ..., 1}^arity (skipped for built-ins when ``analytic``)."""
    if grid_denominator < 1:
        raise ValueError("grid denominator must be >= 1")
    q = grid_denominator
    grid = [Fraction(i, q) for i in range(q + 1)]
    methods: dict = {}
    violations: list[TTPViolation] = []
    for rule in INFERENCE_RULES:
        pol = ttp.policy(rule)
        k = ARITY[rule]
        if analytic and pol.analytic:
            methods[rule] = "analytic"
            continue
        methods[rule] = "grid"
        zero = pol(*([Fraction(0)] * k))
        if zero != 0:
            violations.append(TTPViolation(rule, "P(0,...,0)=0", (0,) * k, zero))
        one = pol(*([Fraction(1)] * k))
        if not one > 0:
            violations.append(TTPViolation(rule, "P(1,...,1)>0", (1,) * k, one))
        for pt in itertools.product(grid, repeat=k):
            v = pol(*pt)
            if v < 0 or v > 1 or v > min(pt):
                violations.append(TTPViolation(rule, "P(p)<=min(p)", pt, v))
                break
    return TTPReport(ok=not violations, grid_denominator=q, methods=methods, violations=violations)


# ---------------------------------------------------------------------------
# credibility measures


@dataclass(frozen=True)
class FromTTP:
    ttp: TTP


@dataclass(frozen=True)
class Factored:
    """G o c: a complexity measure composed with a FIS."""
    complexity: Callable = field(compare=False)
    fis: FIS
    name: str = "complexity"


@dataclass(frozen=True)
class Composed:
    """inner o transform, e.g. credibility of the normal form."""
    transform: Callable = field(compare=False)
    inner: object
    name: str = "transform"


class MalformedDerivation(ValueError):
    pass


def symbol_count(d: Derivation) -> int:
    """Total symbols written down in the proof: the sum of node formula sizes."""
    return sum(formula_size(n.conclusion) for n in d.nodes())


def node_count(d: Derivation) -> int:
    return d.size


def ttp_credibility(ttp: TTP, d: Derivation) -> Fraction:
    memo: dict[int, Fraction] = {}
    # post-order without recursion
    stack = [(d, False)]
    while stack:
        node, done = stack.pop()
        if id(node) in memo:
            continue
        if done:
            memo[id(node)] = ttp.apply(node.rule, [memo[id(p)] for p in node.premises])
        else:
            stack.append((node, True))
            stack.extend((p, False) for p in node.premises)
    return memo[id(d)]


def credibility(m, d: Derivation, theory: Optional[Theory] = None) -> Fraction:
    """Credibility of ``d`` under measure ``m`` (FromTTP, Factored, Composed)."""
    chk = check_derivation(d, theory)
    if not chk:
        raise MalformedDerivation(f"{chk.reason} at path {list(chk.path)}")
    return _credibility(m, d)


def _credibility(m, d: Derivation) -> Fraction:
    if isinstance(m, TTP):
        m = FromTTP(m)
    if isinstance(m, FromTTP):
        return ttp_credibility(m.ttp, d)
    if isinstance(m, Factored):
        return evaluate(m.fis, m.complexity(d))
    if isinstance(m, Composed):
        return _credibility(m.inner, m.transform(d))
    raise TypeError(f"not a credibility measure: {m!r}")


def measure_ttp(m) -> Optional[TTP]:
    if isinstance(m, TTP):
        return m
    if isinstance(m, FromTTP):
        return m.ttp
    return None


# ---------------------------------------------------------------------------
# normalization


class NotNaturalDeduction(ValueError):
    pass


def _labels(d: Derivation) -> set[str]:
    return {n.label for n in d.nodes() if n.label}


def _fresh(base: str, taken: set[str]) -> str:
    for i in itertools.count(1):
        cand = f"{base}'{i}" if i > 1 else f"{base}'"
        if cand not in taken:
            return cand


def _plug(d: Derivation, label: str, repl: Derivation, avoid: set[str]) -> Derivation:
    """Replace open ASSUME(label) leaves of ``d`` by ``repl``, renaming inner
    discharges that would capture open assumptions of ``repl``."""
    if d.rule is Rule.ASSUME:
        return repl if d.label == label else d
    if d.rule is Rule.NOT_INTRO:
        if d.label == label:
            return d  # shadowed
        if d.label in avoid:
            new = _fresh(d.label, avoid | _labels(d) | _labels(repl))
            body = _rename(d.premises[0], d.label, new)
            d = Derivation(Rule.NOT_INTRO, d.conclusion, (body,), new)
    new_prem = tuple(_plug(p, label, repl, avoid) for p in d.premises)
    if all(a is b for a, b in zip(new_prem, d.premises)):
        return d
    return Derivation(d.rule, d.conclusion, new_prem, d.label, d.source)


def _rename(d: Derivation, old: str, new: str) -> Derivation:
    if d.rule is Rule.ASSUME and d.label == old:
        return Derivation(Rule.ASSUME, d.conclusion, (), new)
    if d.rule is Rule.NOT_INTRO and d.label == old:
        return d
    prem = tuple(_rename(p, old, new) for p in d.premises)
    return Derivation(d.rule, d.conclusion, prem, d.label, d.source)


def _reduce_once(d: Derivation) -> Optional[Derivation]:
    """Contract the leftmost-outermost detour, or None if ``d`` is normal."""
    r = d.rule
    if r in (Rule.AND_ELIM_L, Rule.AND_ELIM_R) and d.premises[0].rule is Rule.AND_INTRO:
        intro = d.premises[0]
        return intro.premises[0] if r is Rule.AND_ELIM_L else intro.premises[1]
    if r is Rule.NOT_ELIM and d.premises[1].rule is Rule.NOT_INTRO:
        minor, intro = d.premises
        avoid = {l for l, _ in open_assumptions(minor)}
        return _plug(intro.premises[0], intro.label, minor, avoid)
    for i, p in enumerate(d.premises):
        q = _reduce_once(p)
        if q is not None:
            prem = d.premises[:i] + (q,) + d.premises[i + 1:]
            return Derivation(d.rule, d.conclusion, prem, d.label, d.source)
    return None


def normalize_steps(d: Derivation, max_steps: int = 100000) -> list[Derivation]:
    """The whole rewrite sequence, starting with ``d`` and ending in normal form."""
    if Rule.MP in d.rules_used():
        raise NotNaturalDeduction("normalization is defined for natural-deduction derivations only")
    seq = [d]
    for _ in range(max_steps):
        nxt = _reduce_once(seq[-1])
        if nxt is None:
            return seq
        seq.append(nxt)
    raise RuntimeError("normalization did not terminate within max_steps")


def normalize(d: Derivation) -> Derivation:
    """Remove intro-then-elim detours (and-intro/and-elim, not-intro/not-elim)."""
    return normalize_steps(d)[-1]


def is_normal(d: Derivation) -> bool:
    return _reduce_once(d) is None
