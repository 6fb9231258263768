"""Rewrite calculus on quasi-inequalities.

A quasi-inequality is a finite list of premise inequalities together with one
conclusion inequality, read as: whenever all premises hold, the conclusion
holds (universally quantified over all atoms).  The rules below transform
quasi-inequalities while preserving that reading over perfect algebras of
up-sets; each application is recorded as a trace step so that derivations can
be replayed, exported, and checked for soundness against finite frames.

Sign conventions.  An occurrence of an atom inside an inequality carries the
formula-level sign on the right-hand side and the flipped sign on the
left-hand side ("inequality sign").  Inside a quasi-inequality, premise
occurrences flip once more, since premises sit in antecedent position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import formula as fm
from .formula import Atom, Formula
from .syntax import SyntaxMode, to_text

__all__ = [
    "Inequality",
    "QuasiInequality",
    "NotApplicable",
    "FreshSupply",
    "TraceStep",
    "monotone_elim",
    "first_approximation",
    "approximation",
    "residuation",
    "adjunction",
    "ackermann",
    "simplification",
    "drop_trivial",
    "find_split",
    "split_goal",
    "split_premise",
    "apply_step",
    "replay",
]


class NotApplicable(Exception):
    """Raised when a rule's shape or side conditions are not met."""


@dataclass(frozen=True)
class Inequality:
    lhs: Formula
    rhs: Formula

    def substitute(self, a: Atom, psi: Formula) -> "Inequality":
        return Inequality(fm.substitute(self.lhs, a, psi),
                          fm.substitute(self.rhs, a, psi))

    def atoms(self, kind: Optional[str] = None) -> list[Atom]:
        out = fm.atoms(self.lhs, kind)
        for a in fm.atoms(self.rhs, kind):
            if a not in out:
                out.append(a)
        return out

    def signs(self, a: Atom) -> list[int]:
        """Inequality-level signs of every occurrence of a."""
        out = [-s for _, s in fm.occurrences(self.lhs, a)]
        out.extend(s for _, s in fm.occurrences(self.rhs, a))
        return out

    def is_pure(self) -> bool:
        return fm.is_pure(self.lhs) and fm.is_pure(self.rhs)

    def text(self, mode: SyntaxMode = SyntaxMode.RELEVANCE) -> str:
        return f"{to_text(self.lhs, mode)} \\le {to_text(self.rhs, mode)}"

    def to_json(self) -> dict:
        from .syntax import formula_to_json
        return {"lhs": formula_to_json(self.lhs), "rhs": formula_to_json(self.rhs)}

    def __repr__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class QuasiInequality:
    premises: tuple[Inequality, ...]
    conclusion: Inequality

    def atoms(self, kind: Optional[str] = None) -> list[Atom]:
        out: list[Atom] = []
        for ineq in (*self.premises, self.conclusion):
            for a in ineq.atoms(kind):
                if a not in out:
                    out.append(a)
        return out

    def substitute(self, a: Atom, psi: Formula) -> "QuasiInequality":
        return QuasiInequality(
            tuple(p.substitute(a, psi) for p in self.premises),
            self.conclusion.substitute(a, psi),
        )

    def is_pure(self) -> bool:
        return all(p.is_pure() for p in self.premises) and self.conclusion.is_pure()

    def text(self, mode: SyntaxMode = SyntaxMode.RELEVANCE) -> str:
        parts = ",\\ ".join(p.text(mode) for p in self.premises)
        if parts:
            return f"{parts} \\quad\\Longrightarrow\\quad {self.conclusion.text(mode)}"
        return self.conclusion.text(mode)

    def to_json(self) -> dict:
        return {"premises": [p.to_json() for p in self.premises],
                "conclusion": self.conclusion.to_json()}

    def __repr__(self) -> str:
        return self.text()


def goal(ineq: Inequality) -> QuasiInequality:
    """A bare inequality viewed as a premise-free quasi-inequality."""
    return QuasiInequality((), ineq)


class FreshSupply:
    """Deterministic fresh-atom source; never reuses an index it has seen."""

    def __init__(self, seen: Iterable[Atom] = ()):
        self.used: set[Atom] = set(seen)

    @classmethod
    def for_qi(cls, qi: QuasiInequality) -> "FreshSupply":
        return cls(qi.atoms())

    def note(self, atoms: Iterable[Atom]) -> None:
        self.used.update(atoms)

    def fresh(self, kind: str) -> Atom:
        a = fm.fresh_atom(kind, self.used)
        self.used.add(a)
        return a


@dataclass(frozen=True)
class TraceStep:
    rule: str
    premise: Optional[int]
    params: dict = field(default_factory=dict)
    fresh: tuple[Atom, ...] = ()
    result: Optional[QuasiInequality] = None

    def to_json(self) -> dict:
        params = {}
        for key, value in self.params.items():
            if isinstance(value, Atom):
                params[key] = {"kind": value.kind, "index": value.index,
                               "name": value.name}
            elif isinstance(value, tuple):
                params[key] = list(value)
            else:
                params[key] = value
        return {
            "rule": self.rule,
            "premise": self.premise,
            "params": params,
            "fresh": [{"kind": a.kind, "index": a.index, "name": a.name}
                      for a in self.fresh],
            "result": None if self.result is None else self.result.to_json(),
        }


def _replace(qi: QuasiInequality, k: int, new: tuple[Inequality, ...]) -> QuasiInequality:
    return QuasiInequality(qi.premises[:k] + new + qi.premises[k + 1:], qi.conclusion)


def _is_atom_kind(phi: Formula, kind: str) -> bool:
    return phi.op == fm.ATOM and phi.atom.kind == kind


def _is_special_atom(phi: Formula) -> bool:
    return phi.op == fm.ATOM and phi.atom.kind in (fm.NOM, fm.CNOM)


# ---------------------------------------------------------------------------
# monotone variable elimination

def monotone_elim(qi: QuasiInequality, p: Atom, polarity: str) -> QuasiInequality:
    """Eliminate p by substituting bottom (polarity '+') or top ('-').

    The '+' case is the Ackermann rule instantiated with the vacuous lower
    bound: it needs every premise negative in p and the conclusion positive
    in p (in the inequality-level sense); '-' is the dual.
    """
    if p.kind != fm.PROP:
        raise NotApplicable("monotone elimination targets propositional variables")
    want = 1 if polarity == "+" else -1
    signs = list(qi.conclusion.signs(p))
    for prem in qi.premises:
        signs.extend(-s for s in prem.signs(p))
    if not signs:
        raise NotApplicable(f"{p} does not occur")
    if any(s != want for s in signs):
        raise NotApplicable(f"{p} occurs with the wrong sign")
    value = fm.bot() if polarity == "+" else fm.top()
    return qi.substitute(p, value)


# ---------------------------------------------------------------------------
# first approximation

def first_approximation(qi: QuasiInequality, supply: FreshSupply,
                        fresh: Optional[tuple[Atom, Atom]] = None) -> QuasiInequality:
    """Replace the conclusion phi <= psi by j <= m, adding j <= phi and
    psi <= m as premises, with j, m fresh."""
    if fresh is None:
        j = supply.fresh(fm.NOM)
        m = supply.fresh(fm.CNOM)
    else:
        j, m = fresh
        supply.note(fresh)
    concl = qi.conclusion
    new = (Inequality(fm.atom(j), concl.lhs), Inequality(concl.rhs, fm.atom(m)))
    return QuasiInequality(new + qi.premises, Inequality(fm.atom(j), fm.atom(m)))


# ---------------------------------------------------------------------------
# approximation rules

APPROX_RULES = ("imp-left", "imp-right", "fus-left", "fus-right",
                "neg-left", "neg-right")


def approximation(qi: QuasiInequality, k: int, rule: str, supply: FreshSupply,
                  fresh: Optional[Atom] = None) -> QuasiInequality:
    """Apply one approximation rule to premise k.

    Each rule pulls a non-special argument out of an implication, fusion or
    negation premise, naming it with a fresh nominal or co-nominal.  The
    rewritten premise keeps its position; the naming premise is inserted
    directly after it.
    """
    prem = qi.premises[k]
    lhs, rhs = prem.lhs, prem.rhs

    def take(kind: str) -> Formula:
        nonlocal fresh
        if fresh is None:
            fresh = supply.fresh(kind)
        else:
            supply.note((fresh,))
        return fm.atom(fresh)

    if rule == "imp-left":
        if lhs.op != fm.IMP or not _is_atom_kind(rhs, fm.CNOM):
            raise NotApplicable("premise is not an implication below a co-nominal")
        chi, phi = lhs.args
        if _is_special_atom(chi):
            raise NotApplicable("argument is already a nominal or co-nominal")
        j = take(fm.NOM)
        return _replace(qi, k, (Inequality(fm.imp(j, phi), rhs), Inequality(j, chi)))

    if rule == "imp-right":
        if lhs.op != fm.IMP or not _is_atom_kind(rhs, fm.CNOM):
            raise NotApplicable("premise is not an implication below a co-nominal")
        chi, phi = lhs.args
        if _is_special_atom(phi):
            raise NotApplicable("argument is already a nominal or co-nominal")
        n = take(fm.CNOM)
        return _replace(qi, k, (Inequality(fm.imp(chi, n), rhs), Inequality(phi, n)))

    if rule == "fus-left":
        if not _is_atom_kind(lhs, fm.NOM) or rhs.op != fm.FUS:
            raise NotApplicable("premise is not a nominal below a fusion")
        chi, phi = rhs.args
        if _is_special_atom(chi):
            raise NotApplicable("argument is already a nominal or co-nominal")
        j = take(fm.NOM)
        return _replace(qi, k, (Inequality(lhs, fm.fus(j, phi)), Inequality(j, chi)))

    if rule == "fus-right":
        if not _is_atom_kind(lhs, fm.NOM) or rhs.op != fm.FUS:
            raise NotApplicable("premise is not a nominal below a fusion")
        chi, phi = rhs.args
        if _is_special_atom(phi):
            raise NotApplicable("argument is already a nominal or co-nominal")
        j = take(fm.NOM)
        return _replace(qi, k, (Inequality(lhs, fm.fus(chi, j)), Inequality(j, phi)))

    if rule == "neg-left":
        if lhs.op != fm.NEG or not _is_atom_kind(rhs, fm.CNOM):
            raise NotApplicable("premise is not a negation below a co-nominal")
        phi = lhs.args[0]
        if _is_special_atom(phi):
            raise NotApplicable("argument is already a nominal or co-nominal")
        j = take(fm.NOM)
        return _replace(qi, k, (Inequality(fm.neg(j), rhs), Inequality(j, phi)))

    if rule == "neg-right":
        if not _is_atom_kind(lhs, fm.NOM) or rhs.op != fm.NEG:
            raise NotApplicable("premise is not a nominal below a negation")
        phi = rhs.args[0]
        if _is_special_atom(phi):
            raise NotApplicable("argument is already a nominal or co-nominal")
        n = take(fm.CNOM)
        return _replace(qi, k, (Inequality(lhs, fm.neg(n)), Inequality(phi, n)))

    raise NotApplicable(f"unknown approximation rule {rule!r}")


# ---------------------------------------------------------------------------
# residuation rules (invertible; the direction is read off the premise shape)

def residuation(qi: QuasiInequality, k: int, which: str,
                commute: bool = False) -> QuasiInequality:
    prem = qi.premises[k]
    lhs, rhs = prem.lhs, prem.rhs

    if which == "or":
        if rhs.op == fm.OR:
            chi, psi = rhs.args
            if commute:
                chi, psi = psi, chi
            new = Inequality(fm.coimp(lhs, chi), psi)
        elif lhs.op == fm.COIMP and not commute:
            phi, chi = lhs.args
            new = Inequality(phi, fm.disj(chi, rhs))
        else:
            raise NotApplicable("or-residuation shape mismatch")
    elif which == "and":
        if lhs.op == fm.AND:
            phi, chi = lhs.args
            if commute:
                phi, chi = chi, phi
            new = Inequality(phi, fm.himp(chi, rhs))
        elif rhs.op == fm.HIMP and not commute:
            chi, psi = rhs.args
            new = Inequality(fm.conj(lhs, chi), psi)
        else:
            raise NotApplicable("and-residuation shape mismatch")
    elif which == "imp":
        if rhs.op == fm.IMP:
            chi, psi = rhs.args
            new = Inequality(fm.fus(lhs, chi), psi)
        elif lhs.op == fm.FUS:
            phi, chi = lhs.args
            new = Inequality(phi, fm.imp(chi, rhs))
        else:
            raise NotApplicable("imp-residuation shape mismatch")
    elif which == "rres":
        if rhs.op == fm.RRES:
            phi, chi = rhs.args
            new = Inequality(fm.fus(phi, lhs), chi)
        elif lhs.op == fm.FUS:
            phi, psi = lhs.args
            new = Inequality(psi, fm.rres(phi, rhs))
        else:
            raise NotApplicable("rres-residuation shape mismatch")
    else:
        raise NotApplicable(f"unknown residuation {which!r}")
    return _replace(qi, k, (new,))


# ---------------------------------------------------------------------------
# adjunction rules

def _flatten(op: str, phi: Formula) -> list[Formula]:
    if phi.op == op:
        return _flatten(op, phi.args[0]) + _flatten(op, phi.args[1])
    return [phi]


def adjunction(qi: QuasiInequality, k: int, which: str) -> QuasiInequality:
    prem = qi.premises[k]
    lhs, rhs = prem.lhs, prem.rhs

    if which == "or":
        if lhs.op != fm.OR:
            raise NotApplicable("or-adjunction needs a join on the left")
        new = tuple(Inequality(part, rhs) for part in _flatten(fm.OR, lhs))
        return _replace(qi, k, new)
    if which == "and":
        if rhs.op != fm.AND:
            raise NotApplicable("and-adjunction needs a meet on the right")
        new = tuple(Inequality(lhs, part) for part in _flatten(fm.AND, rhs))
        return _replace(qi, k, new)
    if which == "neg-left":
        if lhs.op == fm.NEG:
            new = Inequality(fm.negflat(rhs), lhs.args[0])
        elif lhs.op == fm.NEG_FLAT:
            new = Inequality(fm.neg(rhs), lhs.args[0])
        else:
            raise NotApplicable("neg-left adjunction shape mismatch")
        return _replace(qi, k, (new,))
    if which == "neg-right":
        if rhs.op == fm.NEG:
            new = Inequality(rhs.args[0], fm.negsharp(lhs))
        elif rhs.op == fm.NEG_SHARP:
            new = Inequality(rhs.args[0], fm.neg(lhs))
        else:
            raise NotApplicable("neg-right adjunction shape mismatch")
        return _replace(qi, k, (new,))
    raise NotApplicable(f"unknown adjunction {which!r}")


# ---------------------------------------------------------------------------
# Ackermann rules

def ackermann(qi: QuasiInequality, p: Atom, polarity: str) -> QuasiInequality:
    """Eliminate p given exactly one solved premise: alpha <= p for '+',
    p <= alpha for '-'.

    Side conditions, checked mechanically: p does not occur in alpha; every
    other premise is negative ('+') / positive ('-') in p; the conclusion is
    positive ('+') / negative ('-') in p.
    """
    if p.kind != fm.PROP:
        raise NotApplicable("Ackermann elimination targets propositional variables")
    target = fm.atom(p)
    if polarity == "+":
        solved = [k for k, pr in enumerate(qi.premises) if pr.rhs == target]
    else:
        solved = [k for k, pr in enumerate(qi.premises) if pr.lhs == target]
    if len(solved) != 1:
        raise NotApplicable("need exactly one solved premise")
    k = solved[0]
    alpha = qi.premises[k].lhs if polarity == "+" else qi.premises[k].rhs
    if fm.occurrences(alpha, p):
        raise NotApplicable("solved bound still contains the variable")
    want = -1 if polarity == "+" else 1
    for idx, prem in enumerate(qi.premises):
        if idx == k:
            continue
        if any(s != want for s in prem.signs(p)):
            raise NotApplicable("context premise has a blocking occurrence")
    if any(s != -want for s in qi.conclusion.signs(p)):
        raise NotApplicable("conclusion has a blocking occurrence")
    rest = qi.premises[:k] + qi.premises[k + 1:]
    return QuasiInequality(
        tuple(pr.substitute(p, alpha) for pr in rest),
        qi.conclusion.substitute(p, alpha),
    )


# ---------------------------------------------------------------------------
# simplification rules

def simplification(qi: QuasiInequality, which: str) -> QuasiInequality:
    """Drop a premise i <= phi (resp. psi <= m) whose nominal (co-nominal)
    carries the conclusion, rewriting the conclusion accordingly."""
    concl = qi.conclusion
    if which == "left":
        if not _is_atom_kind(concl.lhs, fm.NOM):
            raise NotApplicable("conclusion left side is not a nominal")
        i = concl.lhs.atom
        for k, prem in enumerate(qi.premises):
            if prem.lhs != concl.lhs:
                continue
            rest = qi.premises[:k] + qi.premises[k + 1:]
            used_elsewhere = (
                any(i in r.atoms() for r in rest)
                or i in fm.atoms(prem.rhs)
                or i in fm.atoms(concl.rhs)
            )
            if used_elsewhere:
                continue
            return QuasiInequality(rest, Inequality(prem.rhs, concl.rhs))
        raise NotApplicable("no eligible premise for left simplification")
    if which == "right":
        if not _is_atom_kind(concl.rhs, fm.CNOM):
            raise NotApplicable("conclusion right side is not a co-nominal")
        m = concl.rhs.atom
        for k, prem in enumerate(qi.premises):
            if prem.rhs != concl.rhs:
                continue
            rest = qi.premises[:k] + qi.premises[k + 1:]
            used_elsewhere = (
                any(m in r.atoms() for r in rest)
                or m in fm.atoms(prem.lhs)
                or m in fm.atoms(concl.lhs)
            )
            if used_elsewhere:
                continue
            return QuasiInequality(rest, Inequality(concl.lhs, prem.lhs))
        raise NotApplicable("no eligible premise for right simplification")
    raise NotApplicable(f"unknown simplification {which!r}")


def drop_trivial(qi: QuasiInequality, k: int) -> QuasiInequality:
    """Remove a premise that holds identically: bot <= x, x <= top, or x <= x."""
    prem = qi.premises[k]
    if prem.lhs.op == fm.BOT or prem.rhs.op == fm.TOP or prem.lhs == prem.rhs:
        return _replace(qi, k, ())
    raise NotApplicable("premise is not trivially true")


# ---------------------------------------------------------------------------
# splitting (distribution of meets and joins over goals)

_SPLIT_DESCEND = {fm.NEG: None, fm.AND: None, fm.OR: None}


def _find_split_in(phi: Formula, sign: int, path: tuple[int, ...]):
    """First preorder position of a join at inequality-sign - or a meet at
    inequality-sign +, descending only through negation, meet, join, fusion
    at sign -, and implication at sign +."""
    if phi.op == fm.OR and sign == -1:
        return path
    if phi.op == fm.AND and sign == 1:
        return path
    if phi.op == fm.NEG:
        return _find_split_in(phi.args[0], -sign, path + (0,))
    if phi.op in (fm.AND, fm.OR):
        hit = _find_split_in(phi.args[0], sign, path + (0,))
        if hit is not None:
            return hit
        return _find_split_in(phi.args[1], sign, path + (1,))
    if phi.op == fm.FUS and sign == -1:
        hit = _find_split_in(phi.args[0], sign, path + (0,))
        if hit is not None:
            return hit
        return _find_split_in(phi.args[1], sign, path + (1,))
    if phi.op == fm.IMP and sign == 1:
        hit = _find_split_in(phi.args[0], -sign, path + (0,))
        if hit is not None:
            return hit
        return _find_split_in(phi.args[1], sign, path + (1,))
    return None


def find_split(ineq: Inequality) -> Optional[tuple[str, tuple[int, ...]]]:
    """Locate a splittable meet/join in an inequality: ('lhs'|'rhs', path)."""
    hit = _find_split_in(ineq.lhs, -1, ())
    if hit is not None:
        return ("lhs", hit)
    hit = _find_split_in(ineq.rhs, 1, ())
    if hit is not None:
        return ("rhs", hit)
    return None


def _replace_at(phi: Formula, path: tuple[int, ...], new: Formula) -> Formula:
    if not path:
        return new
    i = path[0]
    args = list(phi.args)
    args[i] = _replace_at(args[i], path[1:], new)
    return Formula(phi.op, tuple(args))


def _subformula_at(phi: Formula, path: tuple[int, ...]) -> Formula:
    for i in path:
        phi = phi.args[i]
    return phi


def split_goal(ineq: Inequality, side: str, path: tuple[int, ...]) -> tuple[Inequality, Inequality]:
    """Split the meet/join at (side, path) into two inequalities."""
    host = ineq.lhs if side == "lhs" else ineq.rhs
    node = _subformula_at(host, path)
    if node.op not in (fm.AND, fm.OR):
        raise NotApplicable("split target is not a meet or join")
    pieces = []
    for arg in node.args:
        new_host = _replace_at(host, path, arg)
        if side == "lhs":
            pieces.append(Inequality(new_host, ineq.rhs))
        else:
            pieces.append(Inequality(ineq.lhs, new_host))
    return pieces[0], pieces[1]


def split_premise(qi: QuasiInequality, k: int, side: str,
                  path: tuple[int, ...]) -> QuasiInequality:
    a, b = split_goal(qi.premises[k], side, path)
    return _replace(qi, k, (a, b))


# ---------------------------------------------------------------------------
# replay

def _atom_from_params(value) -> Atom:
    if isinstance(value, Atom):
        return value
    return Atom(value["kind"], value["index"], value.get("name"))


def apply_step(qi: QuasiInequality, step: TraceStep) -> QuasiInequality:
    """Re-apply a recorded step to a state; fresh atoms come from the record."""
    rule = step.rule
    supply = FreshSupply(qi.atoms())
    if rule == "first-approximation":
        return first_approximation(qi, supply, fresh=(step.fresh[0], step.fresh[1]))
    if rule.startswith("approx-"):
        return approximation(qi, step.premise, rule[len("approx-"):], supply,
                             fresh=step.fresh[0])
    if rule.startswith("residuation-"):
        return residuation(qi, step.premise, rule[len("residuation-"):],
                           commute=step.params.get("commute", False))
    if rule.startswith("adjunction-"):
        return adjunction(qi, step.premise, rule[len("adjunction-"):])
    if rule.startswith("ackermann"):
        return ackermann(qi, _atom_from_params(step.params["var"]),
                         step.params["polarity"])
    if rule == "monotone":
        return monotone_elim(qi, _atom_from_params(step.params["var"]),
                             step.params["polarity"])
    if rule.startswith("simplification-"):
        return simplification(qi, rule[len("simplification-"):])
    if rule == "drop-trivial":
        return drop_trivial(qi, step.premise)
    if rule == "split":
        return split_premise(qi, step.premise, step.params["side"],
                             tuple(step.params["path"]))
    raise NotApplicable(f"unknown rule {rule!r} in trace")


def replay(initial: QuasiInequality, steps: Iterable[TraceStep]) -> QuasiInequality:
    """Re-run a trace from its initial state, checking every snapshot."""
    state = initial
    for step in steps:
        state = apply_step(state, step)
        if step.result is not None and state != step.result:
            raise ValueError(f"trace replay diverged at rule {step.rule}")
    return state
