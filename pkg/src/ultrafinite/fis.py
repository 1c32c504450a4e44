"""Fuzzy initial segments of the natural numbers.

A fuzzy initial segment (FIS) is a map G from naturals to [0, 1] with
G(0) = 1, G nonincreasing, and no jump from degree 1 straight to 0.
Descriptors below are symbolic and exact; every check is bounded by an
explicit horizon which is echoed back in the reports.
"""
from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .arith import (EXTRA_OPS, STANDARD_OPS, Op, Signature, Term, UnfeasibleComputation, floor_log2, tower,
                    unit, value_layers, TOWER_MAX_INDEX)

ONE = Fraction(1)
ZERO = Fraction(0)


@dataclass(frozen=True)
class Linear:
    """G_N(n) = max(1 - n/N, 0)."""
    N: int

    def __post_init__(self):
        # N = 1 would jump from 1 straight to 0
        if self.N < 2:
            raise ValueError("Linear needs N >= 2")


@dataclass(frozen=True)
class Sharp:
    """max(0, 1 - 2_n / 2_N) for n >= 1, with the value at 0 pinned to 1."""
    N: int

    def __post_init__(self):
        if self.N > TOWER_MAX_INDEX:
            raise UnfeasibleComputation(f"Sharp tower index {self.N} above {TOWER_MAX_INDEX}")
        # indices 0 and 1 would jump from 1 straight to 0
        if self.N < 2:
            raise ValueError("Sharp needs tower index >= 2")


@dataclass(frozen=True)
class LogRescale:
    """G'(n) = G(floor(log2 n) + 1), G'(0) = 1."""
    inner: "FIS"


@dataclass(frozen=True)
class SmallCut:
    """G^s(n) = G(2^n) for n >= 1, with G^s(0) = 1."""
    inner: "FIS"


@dataclass(frozen=True)
class Table:
    """Step function: the value at the greatest key <= n, ``tail`` past the last key."""
    entries: tuple
    tail: Fraction

    def __post_init__(self):
        entries = tuple((int(k), unit(v)) for k, v in self.entries)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "tail", unit(self.tail))
        if not entries or entries[0][0] != 0:
            raise ValueError("Table must have an entry for 0")
        keys = [k for k, _ in entries]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError("Table keys must be strictly increasing")
        vals = [v for _, v in entries]
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise ValueError("Table values must be nonincreasing")
        if self.tail > vals[-1]:
            raise ValueError("Table tail must not exceed the last value")


@dataclass(frozen=True)
class Shifted:
    """inner(max(0, n - n0)): strongly feasible up to n0, then inner's decay."""
    inner: "FIS"
    n0: int


FIS = Union[Linear, Sharp, LogRescale, SmallCut, Table, Shifted]


def table(pairs, tail=0) -> Table:
    return Table(tuple(pairs), Fraction(tail))


def evaluate(G: FIS, n: int) -> Fraction:
    """Exact membership degree of ``n``."""
    if n < 0:
        raise ValueError("naturals only")
    if isinstance(G, Linear):
        return ZERO if n >= G.N else 1 - Fraction(n, G.N)
    if isinstance(G, Sharp):
        if n == 0:
            return ONE
        if n >= G.N:
            return ZERO
        return max(ZERO, 1 - Fraction(tower(n), tower(G.N)))
    if isinstance(G, LogRescale):
        return ONE if n == 0 else evaluate(G.inner, floor_log2(n) + 1)
    if isinstance(G, SmallCut):
        return ONE if n == 0 else evaluate(G.inner, 1 << n)
    if isinstance(G, Table):
        last_key = G.entries[-1][0]
        if n > last_key:
            return G.tail
        val = G.entries[0][1]
        for k, v in G.entries:
            if k > n:
                break
            val = v
        return val
    if isinstance(G, Shifted):
        return evaluate(G.inner, max(0, n - G.n0))
    raise TypeError(f"not a FIS descriptor: {G!r}")


def log_rescale(G: FIS) -> LogRescale:
    return LogRescale(G)


def small_cut(G: FIS) -> SmallCut:
    return SmallCut(G)


class Feasibility(enum.Enum):
    STRONG = "strongly-feasible"
    WEAK = "weakly-feasible"
    UNFEASIBLE = "unfeasible"


def classify(G: FIS, n: int) -> Feasibility:
    g = evaluate(G, n)
    if g == 1:
        return Feasibility.STRONG
    if g == 0:
        return Feasibility.UNFEASIBLE
    return Feasibility.WEAK


# ---------------------------------------------------------------------------
# structural checks


@dataclass
class Violation:
    index: int
    condition: str
    detail: str = ""


@dataclass
class FISReport:
    horizon: int
    is_fis: bool
    is_strict: bool
    is_regular: bool
    first_violation: Optional[Violation] = None
    regularity_violation: Optional[Violation] = None
    strict_witness: Optional[int] = None


def check_fis(G: FIS, horizon: int) -> FISReport:
    """Conditions 1-3 of a FIS, strictness and regularity for all n <= horizon."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    vals = [evaluate(G, n) for n in range(horizon + 2)]
    viol = None
    if vals[0] != 1:
        viol = Violation(0, "G(0)=1", f"G(0)={vals[0]}")
    if viol is None:
        for n in range(horizon + 1):
            if vals[n + 1] > vals[n]:
                viol = Violation(n, "nonincreasing", f"G({n + 1})={vals[n + 1]} > G({n})={vals[n]}")
                break
            if vals[n] == 1 and vals[n + 1] == 0:
                viol = Violation(n, "no-jump", f"G({n})=1 but G({n + 1})=0")
                break
    strict = next((n for n in range(horizon + 1) if vals[n] == 0), None)
    reg_viol = None
    prev = None
    for n in range(horizon + 1):
        if vals[n] == 0:
            break
        r = vals[n] - vals[n + 1]
        if prev is not None and r < prev:
            reg_viol = Violation(n, "regular", f"R({n})={r} < R({n - 1})={prev}")
            break
        prev = r
    return FISReport(horizon=horizon, is_fis=viol is None, is_strict=strict is not None,
                     is_regular=reg_viol is None, first_violation=viol,
                     regularity_violation=reg_viol, strict_witness=strict)


# ---------------------------------------------------------------------------
# weak closure and radius


@dataclass
class ClosureReport:
    closed: bool
    strict_witness_found: bool
    witness_violation: Optional[dict] = None
    strict_witness: Optional[Term] = None
    bound: int = 0


def _strong_values(G: FIS, values) -> list[int]:
    return sorted(v for v in values if evaluate(G, v) == 1)


def check_weak_closure(G: FIS, sig: Signature, interp: Mapping[str, Op] | None = None,
                       term_len_bound: int = 4) -> ClosureReport:
    """Term-based weak closure: for every symbol f and strongly feasible term
    values t_i (terms of length <= bound), G(f(t_1..t_k)) > 0.  Also looks for
    an enumerated term of degree 0."""
    if term_len_bound < 1:
        raise ValueError("term_len_bound must be >= 1")
    ops = interp if interp is not None else sig.standard_interp()
    layers = value_layers(sig, term_len_bound, ops)
    witness: dict[int, Term] = {}
    for layer in layers:
        for v, t in layer.items():
            witness.setdefault(v, t)
    strong = _strong_values(G, witness)
    report = ClosureReport(closed=True, strict_witness_found=False, bound=term_len_bound)
    for v, t in witness.items():
        if evaluate(G, v) == 0:
            report.strict_witness_found = True
            report.strict_witness = t
            break
    for name, ar in sig.symbols:
        op = ops[name]
        for args in itertools.product(strong, repeat=ar):
            out = op.fn(*args)
            if evaluate(G, out) == 0:
                report.closed = False
                report.witness_violation = {
                    "symbol": name, "args": list(args), "value": out,
                    "terms": [str(witness[a]) for a in args]}
                return report
    return report


def check_weak_closure_values(G: FIS, ops: Mapping[str, Op], horizon: int,
                              strong: Sequence[int] | None = None) -> Optional[dict]:
    """Value-level weak closure over all naturals <= horizon.

    Returns the first violation ``{symbol, args, value}`` or None.
    """
    if strong is None:
        strong = [n for n in range(horizon + 1) if evaluate(G, n) == 1]
    for name, op in ops.items():
        for args in itertools.product(strong, repeat=op.arity):
            out = op.fn(*args)
            if evaluate(G, out) == 0:
                return {"symbol": name, "args": list(args), "value": out}
    return None


@dataclass
class RadiusReport:
    radius: int
    witness: Term
    horizon_limited: bool
    bound: int


class NoFeasibleTerm(ValueError):
    pass


def feasibility_radius(G: FIS, sig: Signature, interp: Mapping[str, Op] | None = None,
                       term_len_bound: int = 20) -> RadiusReport:
    """Largest value of a closed term (length <= bound) with positive degree.

    ``horizon_limited`` is set when some term of the maximal enumerated length
    still has positive degree, i.e. a longer bound might go further.
    """
    ops = interp if interp is not None else sig.standard_interp()
    layers = value_layers(sig, term_len_bound, ops)
    best: Optional[int] = None
    witness = None
    for layer in layers:
        for v, t in layer.items():
            if (best is None or v > best) and evaluate(G, v) > 0:
                best, witness = v, t
    if best is None:
        raise NoFeasibleTerm("no enumerated term has positive degree")
    limited = any(evaluate(G, v) > 0 for v in layers[term_len_bound])
    return RadiusReport(radius=best, witness=witness, horizon_limited=limited, bound=term_len_bound)


@dataclass
class Domination:
    weak: bool
    strict_paper: bool
    horizon: int
    strict_at: Optional[int] = None
    counterexample: Optional[int] = None


def dominates(G: FIS, G2: FIS, horizon: int) -> Domination:
    """Does G2 dominate G on 0..horizon?

    ``weak``: G <= G2 everywhere and < somewhere.  ``strict_paper``: G < G2
    everywhere (never true between two FIS since both are 1 at 0).
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    le_all, lt_all = True, True
    strict_at = counter = None
    for k in range(horizon + 1):
        a, b = evaluate(G, k), evaluate(G2, k)
        if a > b:
            le_all = False
            if counter is None:
                counter = k
        if a < b:
            if strict_at is None:
                strict_at = k
        else:
            lt_all = False
    return Domination(weak=le_all and strict_at is not None, strict_paper=lt_all,
                      horizon=horizon, strict_at=strict_at, counterexample=counter)


# ---------------------------------------------------------------------------
# parallel exhaustive pair checks


def _pair_chunk(args):
    G, op_name, lo, hi, strong = args
    fn = {**STANDARD_OPS, **EXTRA_OPS}[op_name].fn
    for m in strong[lo:hi]:
        for n in strong:
            if evaluate(G, fn(m, n)) == 0:
                return (m, n)
    return None


def binary_closure_violation(G: FIS, op_name: str, horizon: int, jobs: int = 1):
    """First (m, n) with m, n <= horizon, G(m) = G(n) = 1 and G(op(m, n)) = 0.

    With ``jobs > 1`` the outer index range is split across processes; the
    merged answer is the same lexicographically-first pair as the serial scan.
    """
    strong = [n for n in range(horizon + 1) if evaluate(G, n) == 1]
    if jobs <= 1 or len(strong) < 2 * jobs:
        return _pair_chunk((G, op_name, 0, len(strong), strong))
    step = -(-len(strong) // jobs)
    chunks = [(G, op_name, i, i + step, strong) for i in range(0, len(strong), step)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_pair_chunk, chunks))
    return next((r for r in results if r is not None), None)


# ---------------------------------------------------------------------------
# defuzzification


class StrongCut:
    pass


class SupportCut:
    pass


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "inf"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


class NotStrict(ValueError):
    pass


@dataclass(frozen=True)
class SaturatedArithmetic:
    """Crisp arithmetic on {0..radius} plus an absorbing infinity."""
    radius: int
    elements: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(range(self.radius + 1)) + (INF,))

    def _clip(self, v: int):
        return INF if v > self.radius else v

    def succ(self, x):
        return INF if x is INF else self._clip(x + 1)

    def add(self, x, y):
        return INF if x is INF or y is INF else self._clip(x + y)

    def mul(self, x, y):
        return INF if x is INF or y is INF else self._clip(x * y)

    def embed(self, n: int):
        return self._clip(n)


def defuzzify(G: FIS, cut, term_len_bound: int = 64) -> SaturatedArithmetic:
    """Collapse G to a finite arithmetic.

    ``SupportCut`` keeps the positively feasible numbers and identifies all
    degree-0 numbers; ``StrongCut`` keeps only the strongly feasible ones.
    Probes the numerals 0..term_len_bound-1.
    """
    cut_cls = cut if isinstance(cut, type) else type(cut)
    keep = (lambda g: g > 0) if cut_cls is SupportCut else (lambda g: g == 1)
    radius = None
    for n in range(term_len_bound):
        if not keep(evaluate(G, n)):
            radius = n - 1
            break
    if radius is None:
        raise NotStrict(f"no collapsed number found below the probe bound {term_len_bound}")
    if radius < 0:
        raise NotStrict("0 itself would be collapsed; not a FIS")
    return SaturatedArithmetic(radius)
