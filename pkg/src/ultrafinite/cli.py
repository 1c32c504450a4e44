"""Command-line front end.

Exit codes: 0 the property holds (or consistent within budget), 1 a
violation or refutation was found, 2 the verdict is budget-limited,
3 the input could not be read or validated.
"""
from __future__ import annotations

import argparse
import math
import os
import shlex
import sys
from fractions import Fraction

from . import fis as fislib
from .arith import format_rational
from .formats import (fis_to_text, parse_fis, parse_formula, parse_proof, parse_signature,
                      parse_structure, parse_theory, parse_ttp, proof_to_text, read_text,
                      structure_to_text)
from .corpus import data_text
from .kernel import (Composed, Erosion, Factored, FromTTP, MalformedDerivation, NotNaturalDeduction,
                     check_derivation, credibility, measure_ttp, node_count, normalize, normalize_steps,
                     symbol_count, validate_ttp)
from .search import SearchBudget, Status, feasible_consequence, feasibly_consistent, \
    well_behaved_probe
from .semantics import (BudgetTooSmall, ModelMismatch, RefutedTheory, build_term_model,
                        check_t_model, eval_degree, soundness_audit)
from .sexpr import ParseError

OK, VIOLATION, INCONCLUSIVE, INPUT_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


class Report:
    """Collects ``key=value`` records; prints them as text or record lines."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.records: list[tuple[str, list[tuple[str, object]]]] = []

    def add(self, kind: str, **fields):
        self.records.append((kind, list(fields.items())))

    def emit(self, out):
        for kind, fields in self.records:
            if self.fmt == "records":
                parts = [f"record={kind}"] + [f"{k}={shlex.quote(_show(v))}" for k, v in fields]
                out.write(" ".join(parts) + "\n")
            else:
                if len(fields) == 1 and fields[0][0] == "value":
                    out.write(_show(fields[0][1]) + "\n")
                    continue
                out.write(f"{kind}:\n")
                for k, v in fields:
                    out.write(f"  {k}: {_show(v)}\n")


def _show(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return format_rational(v)
    if v is None:
        return "-"
    return str(v)


def _step_denominator(m) -> int | None:
    """Denominator of the erosion step(s) of a TTP measure, used to display
    credibilities as whole numbers of steps (1022/1024 rather than 511/512)."""
    ttp = measure_ttp(m)
    if ttp is None:
        return None
    dens = {p.E.denominator for p in [ttp.default, *(p for _, p in ttp.overrides)] if isinstance(p, Erosion)}
    return math.lcm(*dens) if dens else None


def _over(q: Fraction, denom: int | None) -> str:
    """Show ``q`` over a fixed denominator when it divides evenly."""
    if denom is None or (q * denom).denominator != 1:
        return format_rational(q)
    return f"{q * denom}/{denom}"


# ---------------------------------------------------------------------------
# argument readers


def _load(arg: str) -> tuple[str, str]:
    # bare names of bundled corpus files (parikh10.thy, chain_2.prf, ...) work from anywhere
    if not arg.lstrip().startswith("(") and not os.path.exists(arg) and os.sep not in arg:
        try:
            return data_text(arg), arg
        except OSError:
            pass
    try:
        return read_text(arg)
    except OSError as e:
        raise InputError(f"{arg}: {e.strerror or e}") from None


def _formula(arg):
    # a bare atom such as ``A`` is a formula unless a file by that name exists
    if not arg.lstrip().startswith("(") and not os.path.exists(arg):
        return parse_formula(arg, "<inline>")
    return parse_formula(*_load(arg))


def _fis(arg):
    return parse_fis(*_load(arg))


def _theory(arg):
    return parse_theory(*_load(arg))


def _ttp(arg):
    return parse_ttp(*_load(arg))


def _measure(ns):
    if getattr(ns, "factored", None):
        cx = {"symbols": symbol_count, "nodes": node_count}[ns.complexity]
        m = Factored(cx, _fis(ns.factored), ns.complexity)
    else:
        m = FromTTP(_ttp(ns.ttp))
    if getattr(ns, "normalize_first", False):
        m = Composed(normalize, m, "normalize")
    return m


def _denom(ns, m) -> int | None:
    if ns.denom is None:
        return _step_denominator(m)
    return ns.denom or None


def _budget(ns) -> SearchBudget:
    return SearchBudget(max_depth=ns.depth, max_formula_size=ns.max_formula_size,
                        term_bound=ns.term_bound, max_items=ns.max_items, calculus=ns.calculus)


# ---------------------------------------------------------------------------
# fis


def cmd_fis_check(ns, rep):
    G = _fis(ns.spec)
    r = fislib.check_fis(G, ns.horizon)
    v = r.first_violation
    rep.add("fis-check", spec=fis_to_text(G), horizon=r.horizon, is_fis=r.is_fis,
            is_strict=r.is_strict, is_regular=r.is_regular, strict_witness=r.strict_witness,
            violation=None if v is None else f"{v.condition}@{v.index}: {v.detail}")
    return OK if r.is_fis else VIOLATION


def cmd_fis_eval(ns, rep):
    G = _fis(ns.spec)
    for n in ns.at:
        rep.add("degree", n=n, degree=fislib.evaluate(G, n), cls=fislib.classify(G, n).value)
    return OK


def cmd_fis_radius(ns, rep):
    G = _fis(ns.spec)
    sig = parse_signature(ns.sig, "<sig>")
    r = fislib.feasibility_radius(G, sig, None, ns.bound)
    if ns.format == "records":
        rep.add("radius", radius=r.radius, witness=r.witness, horizon_limited=r.horizon_limited,
                bound=r.bound)
    else:
        rep.add("radius", value=r.radius)
    return INCONCLUSIVE if r.horizon_limited else OK


def cmd_fis_dominates(ns, rep):
    G, G2 = _fis(ns.spec), _fis(ns.over)
    d = fislib.dominates(G, G2, ns.horizon)
    rep.add("dominates", weak=d.weak, strict_paper=d.strict_paper, horizon=d.horizon,
            strict_at=d.strict_at, counterexample=d.counterexample)
    return OK if d.weak else VIOLATION


def _transform(ns, rep, kind, op_name):
    G = _fis(ns.spec)
    H = fislib.log_rescale(G) if kind == "log-rescale" else fislib.small_cut(G)
    rep.add("transform", spec=fis_to_text(H))
    for n in ns.at:
        rep.add("degree", n=n, degree=fislib.evaluate(H, n))
    code = OK
    if ns.horizon is not None:
        bad = fislib.binary_closure_violation(H, op_name, ns.horizon, ns.jobs)
        dom = fislib.dominates(G, H, ns.horizon)
        rep.add("closure", op=op_name, horizon=ns.horizon, closed=bad is None,
                counterexample=None if bad is None else f"{bad[0]},{bad[1]}",
                dominates_weak=dom.weak)
        if bad is not None or (kind == "log-rescale" and not dom.weak):
            code = VIOLATION
    return code


def cmd_fis_rescale(ns, rep):
    return _transform(ns, rep, "log-rescale", "*")


def cmd_fis_small(ns, rep):
    return _transform(ns, rep, "small", "+")


def cmd_fis_defuzzify(ns, rep):
    G = _fis(ns.spec)
    cut = fislib.SupportCut if ns.cut == "support" else fislib.StrongCut
    try:
        A = fislib.defuzzify(G, cut, ns.bound)
    except fislib.NotStrict as e:
        rep.add("defuzzify", error=str(e))
        return VIOLATION
    rep.add("defuzzify", cut=ns.cut, radius=A.radius, size=len(A.elements),
            elements=" ".join(str(x) for x in A.elements))
    return OK


# ---------------------------------------------------------------------------
# proofs and policies


def _proof(ns, theory):
    text, src = _load(ns.proof)
    return parse_proof(text, theory, src)


def cmd_proof_check(ns, rep):
    t = _theory(ns.theory) if ns.theory else None
    d = _proof(ns, t)
    r = check_derivation(d, t)
    rep.add("proof-check", valid=r.ok, conclusion=d.conclusion, nodes=d.size,
            path="/".join(map(str, r.path)) if not r.ok else None, reason=r.reason or None)
    return OK if r.ok else VIOLATION


def cmd_proof_cred(ns, rep):
    t = _theory(ns.theory) if ns.theory else None
    d = _proof(ns, t)
    m = _measure(ns)
    denom = _denom(ns, m)
    try:
        c = credibility(m, d, t)
    except MalformedDerivation as e:
        rep.add("credibility", error=str(e))
        return VIOLATION
    if ns.format == "records":
        rep.add("credibility", credibility=c, shown=_over(c, denom), conclusion=d.conclusion,
                nodes=d.size)
    else:
        rep.add("credibility", value=_over(c, denom))
    return OK


def cmd_proof_normalize(ns, rep):
    t = _theory(ns.theory) if ns.theory else None
    d = _proof(ns, t)
    try:
        steps = normalize_steps(d)
    except NotNaturalDeduction as e:
        raise InputError(str(e)) from None
    nf = steps[-1]
    rep.add("normal-form", proof=proof_to_text(nf), steps=len(steps) - 1,
            nodes_before=d.size, nodes_after=nf.size,
            sizes=" ".join(str(s.size) for s in steps))
    return OK


def cmd_ttp_validate(ns, rep):
    p = _ttp(ns.ttp)
    r = validate_ttp(p, ns.grid, analytic=not ns.no_analytic)
    rep.add("ttp", policy=str(p), ok=r.ok, grid=r.grid_denominator)
    for v in r.violations:
        rep.add("violation", rule=v.rule.value, condition=v.condition,
                point="(" + " ".join(format_rational(Fraction(x)) for x in v.point) + ")",
                value=v.value)
    return OK if r.ok else VIOLATION


# ---------------------------------------------------------------------------
# theories


def _status_record(rep, kind, res, denom=None):
    rep.add(kind, status=res.status.value,
            credibility=None if res.credibility is None else _over(res.credibility, denom),
            witness=None if res.witness is None else proof_to_text(res.witness),
            rounds=res.rounds, explored=res.explored, saturated=res.saturated,
            truncated=res.truncated)


def cmd_theory_consequence(ns, rep):
    t = _theory(ns.theory)
    a = _formula(ns.goal)
    m = _measure(ns)
    res = feasible_consequence(t, a, m, _budget(ns))
    _status_record(rep, "consequence", res, _denom(ns, m))
    return OK if res.derivable else INCONCLUSIVE


def cmd_theory_consistency(ns, rep):
    t = _theory(ns.theory)
    m = _measure(ns)
    res = feasibly_consistent(t, m, _budget(ns))
    if ns.format == "records":
        _status_record(rep, "consistency", res, _denom(ns, m))
    else:
        rep.add("consistency", value=res.status.value)
        if res.witness is not None:
            rep.add("witness", value=proof_to_text(res.witness))
    return VIOLATION if res.status is Status.REFUTED else OK


def cmd_theory_well_behaved(ns, rep):
    t = _theory(ns.theory)
    a = _formula(ns.goal)
    r = well_behaved_probe(t, a, _measure(ns), _budget(ns))
    rep.add("well-behaved", derivable=r.derivable.status.value,
            negation_extension=r.negation_extension.status.value,
            agreement=("inconclusive" if r.agreement is None else r.agreement),
            literal_agreement=("inconclusive" if r.literal_agreement is None else r.literal_agreement),
            corrected=r.corrected_text, literal=r.literal_text)
    if r.agreement is None:
        return INCONCLUSIVE
    return OK if r.agreement else VIOLATION


# ---------------------------------------------------------------------------
# models


def _structure(arg):
    return parse_structure(*_load(arg))


def cmd_model_eval(ns, rep):
    M = _structure(ns.structure)
    for g in ns.formula:
        f = _formula(g)
        d = eval_degree(M, f)
        rep.add("degree", formula=f, degree=d, satisfied=d > 0, strongly=d == 1)
    return OK


def cmd_model_check(ns, rep):
    M = _structure(ns.structure)
    t = _theory(ns.theory)
    r = check_t_model(M, t)
    rep.add("t-model", model=r.ok, checked=r.checked, skipped=r.skipped, failures=len(r.failures))
    for x in r.failures:
        rep.add("failure", source=x.source, formula=x.formula, degree=x.degree)
    return OK if r.ok else VIOLATION


def cmd_model_audit(ns, rep):
    M = _structure(ns.structure)
    t = _theory(ns.theory)
    m = FromTTP(_ttp(ns.ttp)) if ns.ttp else FromTTP(M.ttp)
    goals = [_formula(g) for g in ns.goal]
    try:
        r = soundness_audit(M, t, m, _budget(ns), goals)
    except ModelMismatch as e:
        rep.add("audit", error=str(e))
        return VIOLATION
    rep.add("audit", derivations=r.derivations, tight=r.tight, violations=len(r.violations),
            depth=ns.depth, truncated=r.truncated)
    for v in r.violations:
        rep.add("violation", derivation=proof_to_text(v.derivation), degree=v.degree,
                credibility=v.credibility)
    return VIOLATION if r.violations else OK


def cmd_model_termmodel(ns, rep):
    t = _theory(ns.theory)
    if ns.factored:
        raise InputError("the term model needs --ttp; a factored measure has no per-rule policy")
    try:
        M = build_term_model(t, _measure(ns), _budget(ns),
                             vocabulary=[_formula(a) for a in ns.atom])
    except RefutedTheory as e:
        rep.add("term-model", error=str(e))
        return VIOLATION
    except BudgetTooSmall as e:
        rep.add("term-model", error=str(e))
        return INCONCLUSIVE
    if ns.format == "records":
        for p, pi in sorted(M.predicates.items()):
            for args, v in sorted(pi.table.items(), key=lambda kv: str(kv[0])):
                rep.add("atom", pred=p, args=" ".join(map(str, args)), degree=v)
    else:
        rep.add("term-model", value=structure_to_text(M))
    return OK


# ---------------------------------------------------------------------------
# parser


def _add_budget(p):
    p.add_argument("--depth", type=int, default=8, help="maximum derivation height")
    p.add_argument("--max-formula-size", type=int, default=None)
    p.add_argument("--term-bound", type=int, default=2,
                   help="length bound for existential witness terms / term-model domain")
    p.add_argument("--max-items", type=int, default=200_000)
    p.add_argument("--calculus", choices=["auto", "hilbert", "nd"], default="auto")


def _add_measure(p):
    p.add_argument("--ttp", default="(zero-decay)", help="policy s-expression or file")
    p.add_argument("--factored", metavar="FIS", help="use FIS o complexity instead of a TTP")
    p.add_argument("--complexity", choices=["symbols", "nodes"], default="symbols")
    p.add_argument("--normalize-first", action="store_true",
                   help="measure the normal form of each derivation")
    p.add_argument("--denom", type=int, default=None,
                   help="show credibilities over this denominator when exact (default: the erosion "
                        "step's denominator; 0 for lowest terms)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "records"], default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for exhaustive checks")

    top = argparse.ArgumentParser(prog="ultrafinite", description=__doc__,
                                  formatter_class=argparse.RawDescriptionHelpFormatter)
    groups = top.add_subparsers(dest="group", required=True)

    def sub(group, name, fn, help_):
        p = group.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    g = groups.add_parser("fis", help="fuzzy initial segments").add_subparsers(dest="cmd", required=True)
    p = sub(g, "check", cmd_fis_check, "check the FIS conditions up to a horizon")
    p.add_argument("--spec", required=True)
    p.add_argument("--horizon", type=int, default=64)
    p = sub(g, "eval", cmd_fis_eval, "degrees at given naturals")
    p.add_argument("--spec", required=True)
    p.add_argument("--at", type=int, nargs="+", required=True)
    p = sub(g, "radius", cmd_fis_radius, "feasibility radius over a signature")
    p.add_argument("--spec", required=True)
    p.add_argument("--sig", default="unary")
    p.add_argument("--bound", type=int, default=20)
    p = sub(g, "dominates", cmd_fis_dominates, "does --over dominate --spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--over", required=True)
    p.add_argument("--horizon", type=int, default=64)
    for name, fn, what in (("rescale", cmd_fis_rescale, "log rescale (closure under *)"),
                           ("small", cmd_fis_small, "small-number cut (closure under +)")):
        p = sub(g, name, fn, what)
        p.add_argument("--spec", required=True)
        p.add_argument("--at", type=int, nargs="*", default=[])
        p.add_argument("--horizon", type=int, default=None, help="verify closure up to this bound")
    p = sub(g, "defuzzify", cmd_fis_defuzzify, "collapse to saturating arithmetic")
    p.add_argument("--spec", required=True)
    p.add_argument("--cut", choices=["support", "strong"], default="support")
    p.add_argument("--bound", type=int, default=64)

    g = groups.add_parser("proof", help="derivations").add_subparsers(dest="cmd", required=True)
    for name, fn, what in (("check", cmd_proof_check, "check a derivation"),
                           ("cred", cmd_proof_cred, "credibility of a derivation"),
                           ("normalize", cmd_proof_normalize, "remove detours")):
        p = sub(g, name, fn, what)
        p.add_argument("--proof", required=True)
        p.add_argument("--theory")
        if name == "cred":
            _add_measure(p)

    g = groups.add_parser("ttp", help="truth transfer policies").add_subparsers(dest="cmd", required=True)
    p = sub(g, "validate", cmd_ttp_validate, "check the policy conditions on a grid")
    p.add_argument("--ttp", required=True)
    p.add_argument("--grid", type=int, default=16)
    p.add_argument("--no-analytic", action="store_true", help="grid-check built-ins too")

    g = groups.add_parser("theory", help="feasible derivability").add_subparsers(dest="cmd", required=True)
    for name, fn, what, goal in (("consequence", cmd_theory_consequence, "bounded proof search", True),
                                 ("consistency", cmd_theory_consistency, "search for a feasible bot", False),
                                 ("well-behaved", cmd_theory_well_behaved, "compare both sides", True)):
        p = sub(g, name, fn, what)
        p.add_argument("--theory", required=True)
        if goal:
            p.add_argument("--goal", required=True)
        _add_measure(p)
        _add_budget(p)

    g = groups.add_parser("model", help="fuzzy structures").add_subparsers(dest="cmd", required=True)
    p = sub(g, "eval", cmd_model_eval, "degree of closed formulas")
    p.add_argument("--structure", required=True)
    p.add_argument("--formula", nargs="+", required=True)
    p = sub(g, "check", cmd_model_check, "are all axioms strongly true")
    p.add_argument("--structure", required=True)
    p.add_argument("--theory", required=True)
    p = sub(g, "audit", cmd_model_audit, "degree >= credibility for every derivation in budget")
    p.add_argument("--structure", required=True)
    p.add_argument("--theory", required=True)
    p.add_argument("--ttp", default=None, help="defaults to the structure's policy")
    p.add_argument("--goal", nargs="*", default=[])
    _add_budget(p)
    p = sub(g, "termmodel", cmd_model_termmodel, "build the term model")
    p.add_argument("--theory", required=True)
    p.add_argument("--atom", action="append", default=[],
                   help="extra formula whose predicates the model must interpret (repeatable)")
    _add_measure(p)
    _add_budget(p)
    return top


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already printed usage; unknown flags are input errors
        return OK if e.code == 0 else INPUT_ERROR
    rep = Report(ns.format)
    try:
        code = ns.func(ns, rep)
    except ParseError as e:
        err.write(f"error: {e}\n")
        return INPUT_ERROR
    except InputError as e:
        err.write(f"error: {e}\n")
        return INPUT_ERROR
    except (ValueError, ArithmeticError, KeyError) as e:
        err.write(f"error: {e}\n")
        return INPUT_ERROR
    rep.emit(out)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
