"""Unbounded naturals, unit-interval rationals, the exponential tower and
the closed-term algebra over a finite signature.

Naturals are Python ints and unit-interval values are ``Fraction``; no
floating point appears anywhere downstream.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, NamedTuple, Sequence

# ---------------------------------------------------------------------------
# unit-interval rationals


def unit(x) -> Fraction:
    """Coerce to an exact rational in [0, 1], rejecting anything else."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted as credibility/degree values")
    q = Fraction(x)
    if q < 0 or q > 1:
        raise ValueError(f"{q} is outside the unit interval")
    return q


def parse_rational(text: str) -> Fraction:
    """``"p/q"`` or ``"p"`` to a Fraction (lowest terms)."""
    t = text.strip()
    if "/" in t:
        p, q = t.split("/", 1)
        if not (p.isdigit() and q.isdigit()):
            raise ValueError(f"not a rational literal: {text!r}")
        if int(q) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(p), int(q))
    if not t.isdigit():
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(int(t))


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# tower


class UnfeasibleComputation(ArithmeticError):
    """Raised when a request would need an unrepresentable number."""


TOWER_MAX_INDEX = 5


def tower(k: int, max_index: int = TOWER_MAX_INDEX) -> int:
    """2_k with 2_0 = 1 and 2_{k+1} = 2 ** 2_k.

    2_5 has 19,729 decimal digits; 2_6 has about 10**19728 and is refused.
    """
    if k < 0:
        raise ValueError("tower index must be non-negative")
    if k > max_index:
        raise UnfeasibleComputation(f"tower({k}) exceeds the guard (max index {max_index})")
    v = 1
    for _ in range(k):
        v = 1 << v
    return v


def floor_log2(n: int) -> int:
    if n <= 0:
        raise ValueError("log2 undefined for n <= 0")
    return n.bit_length() - 1


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


class Term:
    """Hash-consed term node: structurally equal terms are the same object.

    ``length`` is the total symbol-occurrence count.  ``numeral`` caches the
    value of unary numerals S...S0 so deep numerals never need recursion.
    """

    __slots__ = ("head", "args", "length", "numeral", "closed", "depth")
    _table: dict = {}

    def __new__(cls, head: str, args: Sequence = ()):
        args = tuple(args)
        key = (head, args)
        t = cls._table.get(key)
        if t is not None:
            return t
        for a in args:
            if not isinstance(a, (Term, Var)):
                raise TypeError(f"term argument must be Term or Var, got {a!r}")
        t = object.__new__(cls)
        object.__setattr__(t, "head", head)
        object.__setattr__(t, "args", args)
        object.__setattr__(t, "length", 1 + sum(a.length if isinstance(a, Term) else 1 for a in args))
        object.__setattr__(t, "closed", all(isinstance(a, Term) and a.closed for a in args))
        object.__setattr__(t, "depth", 1 + max((a.depth if isinstance(a, Term) else 1 for a in args), default=0))
        num = None
        if head == "0" and not args:
            num = 0
        elif head == "S" and len(args) == 1 and isinstance(args[0], Term) and args[0].numeral is not None:
            num = args[0].numeral + 1
        object.__setattr__(t, "numeral", num)
        cls._table[key] = t
        return t

    def __setattr__(self, name, value):
        raise AttributeError("Term is immutable")

    def __reduce__(self):
        return (Term, (self.head, self.args))

    def __repr__(self) -> str:
        return f"Term({term_to_text(self)})"

    def __str__(self) -> str:
        return term_to_text(self)


def numeral(k: int) -> Term:
    """The unary numeral S^k(0), built bottom-up."""
    if k < 0:
        raise ValueError("numerals are non-negative")
    t = Term("0")
    for _ in range(k):
        t = Term("S", (t,))
    return t


def term_to_text(t) -> str:
    if isinstance(t, Var):
        return t.name
    if t.numeral is not None and t.numeral > 0:
        # iterative for deep numerals
        return "(S " * t.numeral + "0" + ")" * t.numeral
    if not t.args:
        return t.head
    return "(" + t.head + " " + " ".join(term_to_text(a) for a in t.args) + ")"


def subterms(t: Term) -> Iterator[Term]:
    """All closed subterms, each once (deep numerals handled without recursion)."""
    seen: set[int] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if not isinstance(u, Term) or id(u) in seen:
            continue
        seen.add(id(u))
        yield u
        stack.extend(u.args)


def term_symbols(t: Term) -> set[tuple[str, int]]:
    return {(u.head, len(u.args)) for u in subterms(t)}


def preorder_key(t: Term, index: Mapping[str, int]) -> tuple:
    out = []
    stack = [t]
    while stack:
        u = stack.pop()
        out.append(index[u.head])
        stack.extend(reversed(u.args))
    return tuple(out)


# ---------------------------------------------------------------------------
# signatures and interpretations


class Op(NamedTuple):
    arity: int
    fn: Callable[..., int]


STANDARD_OPS: dict[str, Op] = {
    "0": Op(0, lambda: 0),
    "S": Op(1, lambda n: n + 1),
    "+": Op(2, lambda m, n: m + n),
    "*": Op(2, lambda m, n: m * n),
}

# named total functions available to the CLI and file formats
EXTRA_OPS: dict[str, Op] = {
    "plus2": Op(2, lambda m, n: m + n + 2),
    "double": Op(1, lambda n: 2 * n),
}


class UnknownSymbol(KeyError):
    pass


class ArityMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    """Ordered function symbols; registration order drives enumeration order."""

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [n for n, _ in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate symbol names in {names}")
        if any(a < 0 for _, a in self.symbols):
            raise ValueError("arities must be non-negative")
        ar = dict(self.symbols)
        if ar.get("0") != 0 or ar.get("S") != 1:
            raise ValueError("a signature must contain the constant 0 and unary S")

    @classmethod
    def of(cls, *symbols) -> "Signature":
        """``Signature.of("+", "*")`` or pairs ``("f", 2)``; 0 and S are prepended."""
        out: list[tuple[str, int]] = [("0", 0), ("S", 1)]
        for s in symbols:
            if isinstance(s, tuple):
                name, ar = s
            else:
                name = s
                op = STANDARD_OPS.get(s) or EXTRA_OPS.get(s)
                if op is None:
                    raise UnknownSymbol(s)
                ar = op.arity
            if name not in ("0", "S"):
                out.append((name, ar))
        return cls(tuple(out))

    @property
    def arity(self) -> dict[str, int]:
        return dict(self.symbols)

    @property
    def index(self) -> dict[str, int]:
        return {n: i for i, (n, _) in enumerate(self.symbols)}

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.symbols]

    def standard_interp(self, extra: Mapping[str, Op] | None = None) -> dict[str, Op]:
        known = {**STANDARD_OPS, **EXTRA_OPS, **(extra or {})}
        out = {}
        for name, ar in self.symbols:
            if name not in known:
                raise UnknownSymbol(f"no interpretation registered for {name!r}")
            if known[name].arity != ar:
                raise ArityMismatch(f"{name!r} has arity {known[name].arity}, signature says {ar}")
            out[name] = known[name]
        return out


UNARY = Signature.of()
ARITHMETIC = Signature.of("+", "*")


def eval_term(t: Term, interp: Mapping[str, Op] | None = None) -> int:
    """Value of a closed term; built-in symbols default to their standard meaning."""
    ops = {**STANDARD_OPS, **(interp or {})}
    if t.numeral is not None and ops["0"] is STANDARD_OPS["0"] and ops["S"] is STANDARD_OPS["S"]:
        return t.numeral
    memo: dict[int, int] = {}

    def ev(u) -> int:
        if isinstance(u, Var):
            raise ValueError(f"cannot evaluate open term (free variable {u.name})")
        hit = memo.get(id(u))
        if hit is not None:
            return hit
        op = ops.get(u.head)
        if op is None:
            raise UnknownSymbol(f"uninterpreted symbol {u.head!r}")
        if op.arity != len(u.args):
            raise ArityMismatch(f"{u.head!r} expects {op.arity} arguments, got {len(u.args)}")
        v = op.fn(*(ev(a) for a in u.args))
        memo[id(u)] = v
        return v

    return ev(t)


# ---------------------------------------------------------------------------
# enumeration


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write ``total`` as ``parts`` positive integers."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def terms_of_length(sig: Signature, n: int, _cache: dict | None = None) -> list[Term]:
    cache = {} if _cache is None else _cache
    if n in cache:
        return cache[n]
    out: list[Term] = []
    for name, ar in sig.symbols:
        if ar == 0:
            if n == 1:
                out.append(Term(name))
        elif n - 1 >= ar:
            for split in _compositions(n - 1, ar):
                pools = [terms_of_length(sig, k, cache) for k in split]
                for kids in itertools.product(*pools):
                    out.append(Term(name, kids))
    idx = sig.index
    out.sort(key=lambda t: preorder_key(t, idx))
    cache[n] = out
    return out


def enumerate_terms(sig: Signature, max_len: int) -> Iterator[Term]:
    """Every closed term of length <= max_len once; by length, then lexicographic
    in symbol registration order."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    cache: dict = {}
    for n in range(1, max_len + 1):
        yield from terms_of_length(sig, n, cache)


def value_layers(sig: Signature, max_len: int,
                 interp: Mapping[str, Op] | None = None) -> list[dict[int, Term]]:
    """``layers[n]`` maps each value of a closed term of length exactly ``n``
    to a witness term (``layers[0]`` is empty).

    Works on value sets per length instead of term lists, so it scales to
    bounds where the terms themselves are far too many to list.
    """
    ops = interp if interp is not None else sig.standard_interp()
    layers: list[dict[int, Term]] = [dict()]
    for n in range(1, max_len + 1):
        layer: dict[int, Term] = {}
        for name, ar in sig.symbols:
            op = ops[name]
            if ar == 0:
                if n == 1:
                    layer.setdefault(op.fn(), Term(name))
                continue
            if n - 1 < ar:
                continue
            for split in _compositions(n - 1, ar):
                pools = [layers[k] for k in split]
                if any(not p for p in pools):
                    continue
                for vals in itertools.product(*(p.keys() for p in pools)):
                    v = op.fn(*vals)
                    if v not in layer:
                        layer[v] = Term(name, tuple(p[x] for p, x in zip(pools, vals)))
        layers.append(layer)
    return layers


def term_value_table(sig: Signature, max_len: int,
                     interp: Mapping[str, Op] | None = None) -> dict[int, Term]:
    """Each value reachable within ``max_len`` symbols, with a shortest witness."""
    first: dict[int, Term] = {}
    for layer in value_layers(sig, max_len, interp):
        for v, t in layer.items():
            first.setdefault(v, t)
    return first
