"""The regression corpus: three toy theories with bundled models.

* ``parikh10``: Hilbert calculus, F(0), bounded step schema, not F(2^10).
* ``prop``: propositional natural deduction.
* ``fo``: first-order natural deduction over 0 and S with an existential.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .formats import parse_formula, parse_proof, parse_structure, parse_theory
from .kernel import Derivation, Theory, erosion_ttp
from .semantics import FuzzyStructure, parikh_cut_model


def data_text(name: str) -> str:
    return resources.files("ultrafinite").joinpath("data").joinpath(name).read_text(encoding="utf-8")


def data_path(name: str) -> str:
    return str(resources.files("ultrafinite").joinpath("data").joinpath(name))


def load_theory(name: str) -> Theory:
    return parse_theory(data_text(name), source=name)


def load_structure(name: str) -> FuzzyStructure:
    return parse_structure(data_text(name), source=name)


def load_proof(name: str, theory: Theory) -> Derivation:
    return parse_proof(data_text(name), theory, source=name)


@dataclass
class CorpusEntry:
    theory: Theory
    goals: tuple                      # extra formulas to widen the search universe
    models: list                      # (name, FuzzyStructure) pairs, each a T-model
    adversarial: list = field(default_factory=list)


PARIKH_E = Fraction(1, 1024)


def parikh_theory() -> Theory:
    return load_theory("parikh10.thy")


def corpus() -> dict[str, CorpusEntry]:
    out = {}
    out["parikh10"] = CorpusEntry(
        parikh_theory(), (),
        [("cut-1024", parikh_cut_model(10, erosion_ttp(PARIKH_E)))])
    prop = load_theory("prop.thy")
    out["prop"] = CorpusEntry(
        prop, (parse_formula("(and A B)"),),
        [(n, load_structure(f"{n}.str")) for n in ("prop_crisp", "prop_fuzzy", "prop_product")],
        [("prop_adversarial", load_structure("prop_adversarial.str"))])
    fo = load_theory("fo.thy")
    out["fo"] = CorpusEntry(
        fo, (parse_formula("(exists x (P x))"), parse_formula("(exists x (and (R x) (P x)))")),
        [(n, load_structure(f"{n}.str")) for n in ("fo_crisp", "fo_erosion")])
    return out
