"""Seeded generators of derivation families for experiments and tests."""
from __future__ import annotations

import itertools
import random

from .kernel import Derivation, Rule, Theory, is_normal
from .syntax import BOT, And, Atom, Not

A, B = Atom("A"), Atom("B")

# deliberately inconsistent so that closed refutations exist to build detours from
DETOUR_THEORY = Theory("detours", (
    ("a", A), ("b", B), ("na", Not(A)), ("nb", Not(B)), ("ab", And(A, B)),
))


class _Builder:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.labels = itertools.count()

    def label(self) -> str:
        return f"u{next(self.labels)}"

    def axiom(self) -> Derivation:
        name, f = self.rng.choice(DETOUR_THEORY.axioms)
        return Derivation(Rule.AXIOM, f, (), None, f"(axiom {name})")

    def bottom(self) -> Derivation:
        """A closed refutation of the inconsistent base theory."""
        if self.rng.random() < 0.5:
            pos, neg = self.rng.choice([("a", "na"), ("b", "nb")])
            t = DETOUR_THEORY
            return Derivation(Rule.NOT_ELIM, BOT, (
                Derivation(Rule.AXIOM, t.axiom(pos), (), None, f"(axiom {pos})"),
                Derivation(Rule.AXIOM, t.axiom(neg), (), None, f"(axiom {neg})")))
        return self.not_detour(self.derive(1))

    def negation(self, X) -> Derivation:
        """A closed proof of (not X) by discharging nothing."""
        return Derivation(Rule.NOT_INTRO, Not(X), (self.bottom(),), self.label())

    def not_detour(self, minor: Derivation) -> Derivation:
        """not-elim(minor, not-intro(u, X, not-elim(assume u, proof of not X)))."""
        X = minor.conclusion
        u = self.label()
        body = Derivation(Rule.NOT_ELIM, BOT, (Derivation(Rule.ASSUME, X, (), u), self.negation(X)))
        return Derivation(Rule.NOT_ELIM, BOT, (minor, Derivation(Rule.NOT_INTRO, Not(X), (body,), u)))

    def and_detour(self, d: Derivation) -> Derivation:
        other = self.derive(1)
        if self.rng.random() < 0.5:
            return Derivation(Rule.AND_ELIM_L, d.conclusion,
                              (Derivation(Rule.AND_INTRO, And(d.conclusion, other.conclusion), (d, other)),))
        return Derivation(Rule.AND_ELIM_R, d.conclusion,
                          (Derivation(Rule.AND_INTRO, And(other.conclusion, d.conclusion), (other, d)),))

    def derive(self, depth: int) -> Derivation:
        if depth <= 0:
            return self.axiom()
        pick = self.rng.randrange(5)
        if pick == 0:
            l, r = self.derive(depth - 1), self.derive(depth - 1)
            return Derivation(Rule.AND_INTRO, And(l.conclusion, r.conclusion), (l, r))
        if pick == 1:
            return self.and_detour(self.derive(depth - 1))
        if pick == 2:
            return self.not_detour(self.derive(depth - 1))
        if pick == 3:
            d = self.derive(depth - 1)
            if isinstance(d.conclusion, And):
                rule = self.rng.choice([Rule.AND_ELIM_L, Rule.AND_ELIM_R])
                part = d.conclusion.left if rule is Rule.AND_ELIM_L else d.conclusion.right
                return Derivation(rule, part, (d,))
            return self.and_detour(d)
        Y = self.rng.choice([A, B, And(A, B)])
        return Derivation(Rule.NOT_INTRO, Not(Y), (self.not_detour(self.derive(depth - 1)),), self.label())


def detour_family(count: int = 100, seed: int = 0, depth: int = 3) -> list[Derivation]:
    """``count`` closed natural-deduction derivations over DETOUR_THEORY, each
    containing at least one introduction immediately followed by elimination.
    No discharged assumption is used more than once."""
    rng = random.Random(seed)
    out: list[Derivation] = []
    while len(out) < count:
        d = _Builder(rng).derive(rng.randint(1, depth))
        if not is_normal(d):
            out.append(d)
    return out


def parikh_chain(n: int, theory: Theory) -> Derivation:
    """F(num n) from F(0) by n modus-ponens steps over the bounded step schema."""
    step = theory.schema("step")
    d = Derivation(Rule.AXIOM, theory.axiom("f0"), (), None, "(axiom f0)")
    for k in range(n):
        inst = step.instance(k)
        major = Derivation(Rule.AXIOM, inst, (), None, f"(instance step (num {k}))")
        d = Derivation(Rule.MP, inst.right, (major, d))
    return d

