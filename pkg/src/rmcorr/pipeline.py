"""The deterministic end-to-end pipeline: preprocessing, approximation,
backtracking variable elimination, simplification, and translation.

Each input formula becomes a list of goal inequalities (splitting
distributes meets and joins, monotone elimination removes one-sided
variables).  Every goal is then approximated to a quasi-inequality with
conclusion i <= m, its variables are eliminated by Ackermann steps found by
a depth-first search over variable orders and polarities, the resulting pure
quasi-inequality is simplified, and the translator produces one closed
first-order formula per goal.  The final correspondent is their conjunction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import calculus as ca
from . import fol
from . import formula as fm
from . import translate
from .calculus import (FreshSupply, Inequality, NotApplicable, QuasiInequality,
                       TraceStep)
from .formula import Atom, Formula
from .syntax import SyntaxMode

__all__ = [
    "PreprocessEvent",
    "GoalResult",
    "FailureInfo",
    "CorrespondenceResult",
    "preprocess",
    "approximate",
    "eliminate",
    "simplify",
    "correspondent",
]

MAX_ATTEMPT_LOG = 512


@dataclass(frozen=True)
class PreprocessEvent:
    kind: str  # "split" or "monotone"
    index: int
    before: Inequality
    after: tuple[Inequality, ...]
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "index": self.index,
            "before": self.before.to_json(),
            "after": [i.to_json() for i in self.after],
            "params": _jsonable(self.params),
        }


def _jsonable(params: dict) -> dict:
    out = {}
    for key, value in params.items():
        if isinstance(value, Atom):
            out[key] = {"kind": value.kind, "index": value.index,
                        "name": value.name}
        elif isinstance(value, tuple):
            out[key] = list(value)
        else:
            out[key] = value
    return out


def preprocess(phi: Formula) -> tuple[list[Inequality], list[PreprocessEvent]]:
    """Turn a formula into goal inequalities and run splitting and monotone
    variable elimination to a fixed point."""
    if phi.op == fm.IMP:
        goals = [Inequality(phi.args[0], phi.args[1])]
    else:
        goals = [Inequality(fm.t(), phi)]
    events: list[PreprocessEvent] = []
    changed = True
    while changed:
        changed = False
        # splitting sweeps
        split_again = True
        while split_again:
            split_again = False
            for idx, ineq in enumerate(goals):
                hit = ca.find_split(ineq)
                if hit is None:
                    continue
                side, path = hit
                a, b = ca.split_goal(ineq, side, path)
                goals[idx:idx + 1] = [a, b]
                events.append(PreprocessEvent("split", idx, ineq, (a, b),
                                              {"side": side, "path": path}))
                split_again = True
                changed = True
                break
        # monotone elimination, per goal
        for idx, ineq in enumerate(goals):
            done = False
            while not done:
                done = True
                for p in ineq.atoms(fm.PROP):
                    for polarity in ("+", "-"):
                        try:
                            new = ca.monotone_elim(ca.goal(ineq), p, polarity)
                        except NotApplicable:
                            continue
                        events.append(PreprocessEvent(
                            "monotone", idx, ineq, (new.conclusion,),
                            {"var": p, "polarity": polarity}))
                        ineq = new.conclusion
                        goals[idx] = ineq
                        done = False
                        changed = True
                        break
                    if not done:
                        break
    return goals, events


def approximate(ineq: Inequality,
                supply: Optional[FreshSupply] = None) -> tuple[QuasiInequality, list[TraceStep]]:
    """First approximation followed by exhaustive approximation rules
    interleaved with splitting on the premises."""
    if supply is None:
        supply = FreshSupply.for_qi(ca.goal(ineq))
    steps: list[TraceStep] = []
    qi = ca.first_approximation(ca.goal(ineq), supply)
    steps.append(TraceStep("first-approximation", None, {},
                           (qi.conclusion.lhs.atom, qi.conclusion.rhs.atom), qi))
    progress = True
    while progress:
        progress = False
        for k, prem in enumerate(qi.premises):
            hit = ca.find_split(prem)
            if hit is not None:
                side, path = hit
                qi = ca.split_premise(qi, k, side, path)
                steps.append(TraceStep("split", k,
                                       {"side": side, "path": path}, (), qi))
                progress = True
                break
            applied = False
            for rule in ca.APPROX_RULES:
                used_before = set(supply.used)
                try:
                    qi = ca.approximation(qi, k, rule, supply)
                except NotApplicable:
                    continue
                new_atoms = tuple(sorted(supply.used - used_before,
                                         key=lambda a: (a.kind, a.index)))
                steps.append(TraceStep(f"approx-{rule}", k, {}, new_atoms, qi))
                applied = True
                break
            if applied:
                progress = True
                break
    return qi, steps


@dataclass
class FailureInfo:
    stuck: QuasiInequality
    attempted: list[list[str]]

    def to_json(self) -> dict:
        return {"stuck": self.stuck.to_json(), "attempted": self.attempted}


def _signed_name(p: Atom, polarity: str) -> str:
    return f"{polarity}{p.name if p.name is not None else f'p_{p.index}'}"


def _candidate_vars(qi: QuasiInequality) -> list[Atom]:
    """Propositional variables in order of first occurrence scanning the
    premises from the most recently produced backwards, then the conclusion.
    This is the order the first-success search follows."""
    out: list[Atom] = []
    for prem in reversed(qi.premises):
        for a in prem.atoms(fm.PROP):
            if a not in out:
                out.append(a)
    for a in qi.conclusion.atoms(fm.PROP):
        if a not in out:
            out.append(a)
    return out


def _occurrence_site(prem: Inequality, p: Atom) -> tuple[str, tuple[int, ...]]:
    occs_l = fm.occurrences(prem.lhs, p)
    occs_r = fm.occurrences(prem.rhs, p)
    if occs_l:
        return "lhs", occs_l[0][0]
    return "rhs", occs_r[0][0]


def _solve_premise(qi: QuasiInequality, k: int, p: Atom,
                   polarity: str) -> Optional[tuple[QuasiInequality, list[TraceStep]]]:
    """Rewrite premise k by residuation and negation adjunction until it is
    solved for p: alpha <= p (polarity '+') or p <= alpha ('-')."""
    steps: list[TraceStep] = []
    target = fm.atom(p)
    for _ in range(4 * _formula_size(qi.premises[k].lhs)
                   + 4 * _formula_size(qi.premises[k].rhs) + 4):
        prem = qi.premises[k]
        if polarity == "+" and prem.rhs == target:
            return qi, steps
        if polarity == "-" and prem.lhs == target:
            return qi, steps
        side, path = _occurrence_site(prem, p)
        host = prem.lhs if side == "lhs" else prem.rhs
        if host.op == fm.ATOM:
            return None  # solved with the wrong polarity
        first = path[0]
        move = _solver_move(host, side, first)
        if move is None:
            return None
        rule, params = move
        try:
            if rule.startswith("residuation-"):
                qi = ca.residuation(qi, k, params["which"],
                                    commute=params.get("commute", False))
            else:
                qi = ca.adjunction(qi, k, params["which"])
        except NotApplicable:
            return None
        steps.append(TraceStep(rule, k, params, (), qi))
    return None


def _solver_move(host: Formula, side: str, first: int):
    if side == "lhs":
        if host.op == fm.FUS:
            return ("residuation-imp" if first == 0 else "residuation-rres",
                    {"which": "imp" if first == 0 else "rres"})
        if host.op == fm.AND:
            return ("residuation-and", {"which": "and", "commute": first == 1})
        if host.op == fm.COIMP:
            return ("residuation-or", {"which": "or"})
        if host.op in (fm.NEG, fm.NEG_FLAT):
            return ("adjunction-neg-left", {"which": "neg-left"})
        return None
    if host.op == fm.IMP:
        return ("residuation-imp", {"which": "imp"})
    if host.op == fm.RRES:
        return ("residuation-rres", {"which": "rres"})
    if host.op == fm.HIMP:
        return ("residuation-and", {"which": "and"})
    if host.op == fm.OR:
        return ("residuation-or", {"which": "or", "commute": first == 0})
    if host.op in (fm.NEG, fm.NEG_SHARP):
        return ("adjunction-neg-right", {"which": "neg-right"})
    return None


def _formula_size(phi: Formula) -> int:
    return 1 + sum(_formula_size(a) for a in phi.args)


def _try_eliminate_one(qi: QuasiInequality, p: Atom,
                       polarity: str) -> Optional[tuple[QuasiInequality, list[TraceStep]]]:
    want = 1 if polarity == "+" else -1
    holders = [k for k, prem in enumerate(qi.premises)
               if any(s == want for s in prem.signs(p))]
    if len(holders) != 1:
        return None
    k = holders[0]
    if len(qi.premises[k].signs(p)) != 1:
        return None
    solved = _solve_premise(qi, k, p, polarity)
    if solved is None:
        return None
    qi2, steps = solved
    try:
        out = ca.ackermann(qi2, p, polarity)
    except NotApplicable:
        return None
    steps.append(TraceStep(f"ackermann-{'right' if polarity == '+' else 'left'}",
                           k, {"var": p, "polarity": polarity}, (), out))
    return out, steps


def eliminate(qi: QuasiInequality):
    """Depth-first search over elimination orders: each remaining variable in
    candidate order, positive polarity before negative, with full
    backtracking.  Returns (pure_qi, signed order, steps) or FailureInfo."""
    attempted: list[list[str]] = []

    def dfs(state: QuasiInequality,
            path: list[str]) -> Optional[tuple[QuasiInequality, list[str], list[TraceStep]]]:
        variables = _candidate_vars(state)
        if not variables:
            return state, [], []
        moved = False
        for p in variables:
            for polarity in ("+", "-"):
                move = _try_eliminate_one(state, p, polarity)
                if move is None:
                    continue
                moved = True
                name = _signed_name(p, polarity)
                sub = dfs(move[0], path + [name])
                if sub is not None:
                    final, order, steps = sub
                    return final, [name] + order, move[1] + steps
        if not moved and len(attempted) < MAX_ATTEMPT_LOG:
            attempted.append(list(path))
        return None

    result = dfs(qi, [])
    if result is None:
        return FailureInfo(qi, attempted)
    return result


def simplify(qi: QuasiInequality) -> tuple[QuasiInequality, list[TraceStep]]:
    """Exhaustively drop identically-true premises and apply the left and
    right simplification rules."""
    steps: list[TraceStep] = []
    progress = True
    while progress:
        progress = False
        for k in range(len(qi.premises)):
            try:
                qi = ca.drop_trivial(qi, k)
            except NotApplicable:
                continue
            steps.append(TraceStep("drop-trivial", k, {}, (), qi))
            progress = True
            break
        if progress:
            continue
        for which in ("left", "right"):
            try:
                qi = ca.simplification(qi, which)
            except NotApplicable:
                continue
            steps.append(TraceStep(f"simplification-{which}", None, {}, (), qi))
            progress = True
            break
    return qi, steps


@dataclass
class GoalResult:
    initial: Inequality
    approximated: Optional[QuasiInequality] = None
    order: Optional[list[str]] = None
    pure: Optional[QuasiInequality] = None
    simplified: Optional[QuasiInequality] = None
    fo_translated: Optional[fol.FONode] = None
    fo: Optional[fol.FONode] = None
    steps: list[TraceStep] = field(default_factory=list)
    failure: Optional[FailureInfo] = None

    @property
    def succeeded(self) -> bool:
        return self.failure is None


@dataclass
class CorrespondenceResult:
    formula: Formula
    mode: SyntaxMode
    goals: list[GoalResult]
    preprocess_events: list[PreprocessEvent]

    @property
    def status(self) -> str:
        return "success" if all(g.succeeded for g in self.goals) else "failure"

    @property
    def fo(self) -> Optional[fol.FONode]:
        if self.status != "success":
            return None
        return fol.conjoin([g.fo for g in self.goals])

    @property
    def failure(self) -> Optional[FailureInfo]:
        for g in self.goals:
            if g.failure is not None:
                return g.failure
        return None


def correspondent(phi: Formula,
                  mode: SyntaxMode = SyntaxMode.RELEVANCE) -> CorrespondenceResult:
    """Run the whole pipeline on one formula."""
    goals, events = preprocess(phi)
    results: list[GoalResult] = []
    for ineq in goals:
        supply = FreshSupply.for_qi(ca.goal(ineq))
        res = GoalResult(initial=ineq)
        qi, steps = approximate(ineq, supply)
        res.approximated = qi
        res.steps.extend(steps)
        outcome = eliminate(qi)
        if isinstance(outcome, FailureInfo):
            res.failure = outcome
            results.append(res)
            continue
        pure_qi, order, steps = outcome
        res.pure = pure_qi
        res.order = order
        res.steps.extend(steps)
        simp, steps = simplify(pure_qi)
        res.simplified = simp
        res.steps.extend(steps)
        res.fo_translated = translate.tr_quasi(simp, supply)
        res.fo = translate.fo_simplify(res.fo_translated)
        if mode is SyntaxMode.RELATION_ALGEBRA:
            res.fo_translated = translate.order_as_equality(res.fo_translated)
            res.fo = translate.order_as_equality(res.fo)
        results.append(res)
    return CorrespondenceResult(phi, mode, results, events)
