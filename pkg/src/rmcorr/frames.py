"""Finite frames with a ternary accessibility relation, a set of normal
worlds, and a star map; model-theoretic evaluation of object formulas and
first-order formulas; and the brute-force correspondence checker.

Worlds are 0..n-1 and sets of worlds are bitmasks, so the complex-algebra
operations are a handful of integer operations per application.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from . import fol
from . import formula as fm
from .calculus import Inequality, QuasiInequality
from .formula import Atom, Formula

__all__ = [
    "RMFrame",
    "BudgetError",
    "check_frame",
    "enumerate_frames",
    "random_frame",
    "eval_formula",
    "extension",
    "frame_valid",
    "eval_fo",
    "complex_algebra_eval",
    "universal_truth",
    "admissible_values",
    "correspondence_check",
    "CorrespondenceReport",
]

MAX_WORLDS = 3


class BudgetError(ValueError):
    """Requested frame size exceeds the exhaustive-search budget."""


class RMFrame:
    """Candidate frame (W, O, R, star); validity is a separate check.

    The order u <= v is derived: some normal world o has R o u v.
    """

    def __init__(self, n: int, O: frozenset[int], R: frozenset[tuple[int, int, int]],
                 star: tuple[int, ...]):
        self.n = n
        self.O = frozenset(O)
        self.R = frozenset(R)
        self.star = tuple(star)
        self.full = (1 << n) - 1
        self.o_mask = _mask(self.O)
        # derived order
        leq = [[False] * n for _ in range(n)]
        for (o, u, v) in self.R:
            if o in self.O:
                leq[u][v] = True
        self._leq = leq
        # up[w] = mask of {v : w <= v}; down[v] = mask of {u : u <= v}
        self.up = [_mask({v for v in range(n) if leq[w][v]}) for w in range(n)]
        self.down = [_mask({u for u in range(n) if leq[u][v]}) for v in range(n)]
        self._by_first: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self._by_mid: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self._results: list[list[int]] = [[0] * n for _ in range(n)]
        for (a, b, c) in self.R:
            self._by_first[a].append((b, c))
            self._by_mid[b].append((a, c))
            self._results[a][b] |= 1 << c
        self._upsets: Optional[list[int]] = None

    def __eq__(self, other) -> bool:
        return (isinstance(other, RMFrame)
                and (self.n, self.O, self.R, self.star)
                == (other.n, other.O, other.R, other.star))

    def __hash__(self) -> int:
        return hash((self.n, self.O, self.R, self.star))

    def __repr__(self) -> str:
        return (f"RMFrame(n={self.n}, O={sorted(self.O)}, "
                f"R={sorted(self.R)}, star={self.star})")

    def leq(self, u: int, v: int) -> bool:
        return self._leq[u][v]

    def upsets(self) -> list[int]:
        """All order-up-closed masks, ascending."""
        if self._upsets is None:
            self._upsets = [S for S in range(self.full + 1)
                            if self.is_upset(S)]
        return self._upsets

    def is_upset(self, S: int) -> bool:
        for w in range(self.n):
            if S & (1 << w) and (self.up[w] & ~S) & self.full:
                return False
        return True

    # complex-algebra operations on masks

    def op_neg(self, Y: int) -> int:
        return _mask({x for x in range(self.n) if not Y & (1 << self.star[x])})

    def op_negflat(self, Y: int) -> int:
        # left adjoint of negation: the up-closure of the starred complement
        # (equals the pointwise star image when star is an involution)
        out = 0
        for v in range(self.n):
            if not Y & (1 << v):
                out |= self.up[self.star[v]]
        return out

    def op_negsharp(self, Y: int) -> int:
        # right adjoint of negation: the largest up-set avoiding star[Y]
        hit = 0
        for v in range(self.n):
            if Y & (1 << v):
                hit |= 1 << self.star[v]
        out = 0
        for w in range(self.n):
            if not self.up[w] & hit:
                out |= 1 << w
        return out

    def op_fus(self, Y: int, Z: int) -> int:
        out = 0
        for y in range(self.n):
            if Y & (1 << y):
                row = self._results[y]
                for z in range(self.n):
                    if Z & (1 << z):
                        out |= row[z]
        return out

    def op_imp(self, Y: int, Z: int) -> int:
        out = 0
        for x in range(self.n):
            if all(not (Y & (1 << y)) or (Z & (1 << z))
                   for (y, z) in self._by_first[x]):
                out |= 1 << x
        return out

    def op_rres(self, Y: int, Z: int) -> int:
        out = 0
        for w in range(self.n):
            if all(not (Y & (1 << v)) or (Z & (1 << u))
                   for (v, u) in self._by_mid[w]):
                out |= 1 << w
        return out

    def op_coimp(self, Y: int, Z: int) -> int:
        out = 0
        for w in range(self.n):
            if self.down[w] & Y & ~Z & self.full:
                out |= 1 << w
        return out

    def op_himp(self, Y: int, Z: int) -> int:
        out = 0
        for w in range(self.n):
            if not (self.up[w] & Y & ~Z) & self.full:
                out |= 1 << w
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "O": sorted(self.O),
                "R": [list(t) for t in sorted(self.R)],
                "star": list(self.star)}

    @classmethod
    def from_json(cls, obj: dict) -> "RMFrame":
        return cls(obj["n"], frozenset(obj["O"]),
                   frozenset(tuple(t) for t in obj["R"]), tuple(obj["star"]))


def _mask(s) -> int:
    out = 0
    for w in s:
        out |= 1 << w
    return out


def check_frame(f: RMFrame) -> bool:
    """The six frame conditions for the derived order."""
    n = f.n
    for x in range(n):
        if not f.leq(x, x):
            return False
    for x in range(n):
        for y in range(n):
            if not f.leq(x, y):
                continue
            for (u, v) in f._by_first[y]:
                if (x, u, v) not in f.R:
                    return False
            if not f.leq(f.star[y], f.star[x]):
                return False
    for (u, y, v) in f.R:
        for x in range(n):
            if f.leq(x, y) and (u, x, v) not in f.R:
                return False
    for (u, v, x) in f.R:
        for y in range(n):
            if f.leq(x, y) and (u, v, y) not in f.R:
                return False
    for o in f.O:
        for o2 in range(n):
            if f.leq(o, o2) and o2 not in f.O:
                return False
    return True


def _bi_identities_hold(f: RMFrame) -> bool:
    sets = f.upsets()
    for Y in sets:
        for Z in sets:
            if f.op_fus(Y, Z) != f.op_fus(Z, Y):
                return False
            for W in sets:
                if f.op_fus(f.op_fus(Y, Z), W) != f.op_fus(Y, f.op_fus(Z, W)):
                    return False
    return True


def _ra_identities_hold(f: RMFrame) -> bool:
    # antichain order
    for u in range(f.n):
        for v in range(f.n):
            if u != v and f.leq(u, v):
                return False

    def conv(Y: int) -> int:
        return f.op_neg(f.op_himp(Y, 0))

    sets = f.upsets()
    for Y in sets:
        for Z in sets:
            if f.op_imp(Y, Z) != f.op_neg(f.op_fus(f.op_neg(Z), Y)):
                return False
            if conv(f.op_fus(Y, Z)) != f.op_fus(conv(Z), conv(Y)):
                return False
            for W in sets:
                if f.op_fus(f.op_fus(Y, Z), W) != f.op_fus(Y, f.op_fus(Z, W)):
                    return False
    return True


def enumerate_frames(n: int, mode: str = "relevance") -> Iterator[RMFrame]:
    """All valid frames on n worlds, lexicographic in (O, R, star).

    In bi mode only frames whose complex algebra has commutative associative
    fusion are produced; in ra mode the order must be an antichain and the
    relation-algebra identities must hold.
    """
    if n < 1:
        raise ValueError("need at least one world")
    if n > MAX_WORLDS:
        raise BudgetError(f"exhaustive enumeration is capped at {MAX_WORLDS} worlds")
    triples = list(itertools.product(range(n), repeat=3))
    for o_bits in range(1 << n):
        O = frozenset(w for w in range(n) if o_bits & (1 << w))
        for r_bits in range(1 << len(triples)):
            R = frozenset(t for i, t in enumerate(triples) if r_bits & (1 << i))
            for star in itertools.product(range(n), repeat=n):
                f = RMFrame(n, O, R, star)
                if not check_frame(f):
                    continue
                if mode == "bi" and not _bi_identities_hold(f):
                    continue
                if mode == "ra" and not _ra_identities_hold(f):
                    continue
                yield f


def random_frame(rng: random.Random, n: int, density: float = 0.3) -> RMFrame:
    """A pseudo-random valid frame: sprinkle R and O, close under the frame
    conditions, and reject if the star map refuses to be antitone."""
    if n < 1:
        raise ValueError("need at least one world")
    for _ in range(200):
        star = tuple(rng.randrange(n) for _ in range(n))
        O = {rng.randrange(n)}
        for w in range(n):
            if rng.random() < density:
                O.add(w)
        R = {t for t in itertools.product(range(n), repeat=3)
             if rng.random() < density}
        # grow O and R until conditions 1-4 and 6 hold
        for _ in range(2 * n * n * n + 4):
            f = RMFrame(n, frozenset(O), frozenset(R), star)
            changed = False
            for x in range(n):
                if not f.leq(x, x):
                    R.add((min(O), x, x))
                    changed = True
            for x in range(n):
                for y in range(n):
                    if not f.leq(x, y):
                        continue
                    for (u, v) in f._by_first[y]:
                        if (x, u, v) not in R:
                            R.add((x, u, v))
                            changed = True
            for (u, y, v) in list(R):
                for x in range(n):
                    if f.leq(x, y) and (u, x, v) not in R:
                        R.add((u, x, v))
                        changed = True
            for (u, v, x) in list(R):
                for y in range(n):
                    if f.leq(x, y) and (u, v, y) not in R:
                        R.add((u, v, y))
                        changed = True
            for o in list(O):
                for o2 in range(n):
                    if f.leq(o, o2) and o2 not in O:
                        O.add(o2)
                        changed = True
            if not changed:
                break
        f = RMFrame(n, frozenset(O), frozenset(R), star)
        if check_frame(f):
            return f
    # dense fallback is always valid
    return RMFrame(n, frozenset(range(n)),
                   frozenset(itertools.product(range(n), repeat=3)),
                   tuple(range(n)))


# ---------------------------------------------------------------------------
# evaluation

def extension(f: RMFrame, valuation: dict[Atom, int], phi: Formula) -> int:
    """Mask of worlds where phi holds."""
    op = phi.op
    if op == fm.ATOM:
        try:
            return valuation[phi.atom]
        except KeyError:
            raise ValueError(f"unassigned atom {phi.atom!r}") from None
    if op == fm.T:
        return f.o_mask
    if op == fm.TOP:
        return f.full
    if op == fm.BOT:
        return 0
    if op == fm.NEG:
        return f.op_neg(extension(f, valuation, phi.args[0]))
    if op == fm.NEG_FLAT:
        return f.op_negflat(extension(f, valuation, phi.args[0]))
    if op == fm.NEG_SHARP:
        return f.op_negsharp(extension(f, valuation, phi.args[0]))
    a = extension(f, valuation, phi.args[0])
    b = extension(f, valuation, phi.args[1])
    if op == fm.AND:
        return a & b
    if op == fm.OR:
        return a | b
    if op == fm.FUS:
        return f.op_fus(a, b)
    if op == fm.IMP:
        return f.op_imp(a, b)
    if op == fm.COIMP:
        return f.op_coimp(a, b)
    if op == fm.HIMP:
        return f.op_himp(a, b)
    if op == fm.RRES:
        return f.op_rres(a, b)
    raise ValueError(f"unknown connective {op!r}")


def eval_formula(f: RMFrame, valuation: dict[Atom, int], phi: Formula,
                 w: int) -> bool:
    """Truth of phi at a world under a valuation (atom -> mask)."""
    return bool(extension(f, valuation, phi) & (1 << w))


def admissible_values(f: RMFrame, a: Atom) -> list[int]:
    """The masks an atom may denote: up-sets for variables, principal up-sets
    for nominals, complements of principal down-sets for co-nominals."""
    if a.kind == fm.PROP:
        return f.upsets()
    if a.kind == fm.NOM:
        return list(dict.fromkeys(f.up[w] for w in range(f.n)))
    return list(dict.fromkeys(f.full & ~f.down[v] for v in range(f.n)))


def _check_valuation(f: RMFrame, valuation: dict[Atom, int]) -> None:
    for a, val in valuation.items():
        if val not in admissible_values(f, a):
            raise ValueError(f"valuation of {a!r} is out of range")


def frame_valid(f: RMFrame, phi: Formula) -> bool:
    """Frame validity: truth at every normal world under every assignment of
    up-sets to the propositional variables."""
    bad = [a for a in fm.atoms(phi) if a.kind != fm.PROP]
    if bad:
        raise ValueError(f"frame validity is defined for variable-only "
                         f"formulas; found {bad[0]!r}")
    pvars = fm.atoms(phi)
    for combo in itertools.product(f.upsets(), repeat=len(pvars)):
        valuation = dict(zip(pvars, combo))
        if extension(f, valuation, phi) & f.o_mask != f.o_mask:
            return False
    return True


def _eval_term(f: RMFrame, t: fol.Term, env: dict[fol.WVar, int]) -> int:
    if isinstance(t, fol.Star):
        return f.star[_eval_term(f, t.arg, env)]
    try:
        return env[t]
    except KeyError:
        raise ValueError(f"unbound variable {t!r}") from None


def eval_fo(f: RMFrame, g: fol.FONode, env: Optional[dict[fol.WVar, int]] = None,
            valuation: Optional[dict[Atom, int]] = None) -> bool:
    """Classical satisfaction over the frame signature.  The optional
    valuation interprets the unary predicates of standard translations."""
    env = env or {}

    def go(node: fol.FONode, e: dict[fol.WVar, int]) -> bool:
        if isinstance(node, fol.TrueF):
            return True
        if isinstance(node, fol.FalseF):
            return False
        if isinstance(node, fol.RAtom):
            return (_eval_term(f, node.a, e), _eval_term(f, node.b, e),
                    _eval_term(f, node.c, e)) in f.R
        if isinstance(node, fol.OAtom):
            return _eval_term(f, node.a, e) in f.O
        if isinstance(node, fol.LeqAtom):
            return f.leq(_eval_term(f, node.a, e), _eval_term(f, node.b, e))
        if isinstance(node, fol.EqAtom):
            return _eval_term(f, node.a, e) == _eval_term(f, node.b, e)
        if isinstance(node, fol.PVarAtom):
            if valuation is None:
                raise ValueError("predicate atom needs a valuation")
            for a, val in valuation.items():
                if a.kind == fm.PROP and a.index == node.index:
                    return bool(val & (1 << _eval_term(f, node.a, e)))
            raise ValueError(f"no valuation for variable index {node.index}")
        if isinstance(node, fol.Not):
            return not go(node.body, e)
        if isinstance(node, fol.And):
            return go(node.left, e) and go(node.right, e)
        if isinstance(node, fol.Or):
            return go(node.left, e) or go(node.right, e)
        if isinstance(node, fol.Implies):
            return (not go(node.left, e)) or go(node.right, e)
        if isinstance(node, fol.Forall):
            return all(go(node.body, {**e, node.var: w}) for w in range(f.n))
        if isinstance(node, fol.Exists):
            return any(go(node.body, {**e, node.var: w}) for w in range(f.n))
        raise ValueError(f"unknown first-order node {node!r}")

    return go(g, env)


def complex_algebra_eval(f: RMFrame, valuation: dict[Atom, int], obj) -> bool:
    """Truth of an inequality (containment of extensions) or quasi-inequality
    (premises imply conclusion) under one admissible valuation."""
    _check_valuation(f, valuation)
    return _holds(f, valuation, obj)


def _holds(f: RMFrame, valuation: dict[Atom, int], obj) -> bool:
    if isinstance(obj, Inequality):
        lhs = extension(f, valuation, obj.lhs)
        rhs = extension(f, valuation, obj.rhs)
        return lhs & ~rhs & f.full == 0
    if isinstance(obj, QuasiInequality):
        if all(_holds(f, valuation, p) for p in obj.premises):
            return _holds(f, valuation, obj.conclusion)
        return True
    raise TypeError(f"cannot evaluate {obj!r}")


def universal_truth(f: RMFrame, qi, partial: Optional[dict[Atom, int]] = None) -> bool:
    """Truth of a (quasi-)inequality under all admissible extensions of a
    partial valuation."""
    partial = dict(partial or {})
    missing = [a for a in qi.atoms() if a not in partial]
    for combo in itertools.product(*(admissible_values(f, a) for a in missing)):
        valuation = {**partial, **dict(zip(missing, combo))}
        if not _holds(f, valuation, qi):
            return False
    return True


@dataclass
class CorrespondenceReport:
    agree: bool
    counterexample: Optional[RMFrame]
    frames_checked: int

    def to_json(self) -> dict:
        return {
            "agree": self.agree,
            "frames_checked": self.frames_checked,
            "counterexample": None if self.counterexample is None
            else self.counterexample.to_json(),
        }


def correspondence_check(phi: Formula, g: fol.FONode, n: int,
                         mode: str = "relevance") -> CorrespondenceReport:
    """Compare frame validity of phi with truth of its first-order candidate
    on every valid frame of size 1..n."""
    if n > MAX_WORLDS:
        raise BudgetError(f"correspondence checking is capped at {MAX_WORLDS} worlds")
    if fol.free_vars(g):
        raise ValueError("the first-order formula must be closed")
    checked = 0
    for size in range(1, n + 1):
        for f in enumerate_frames(size, mode):
            checked += 1
            if frame_valid(f, phi) != eval_fo(f, g):
                return CorrespondenceReport(False, f, checked)
    return CorrespondenceReport(True, None, checked)
