"""Object language of the rewrite engine.

Formulas are finite trees over three families of atoms (propositional
variables, nominals, co-nominals), the constants t / top / bottom, and the
connectives of the extended relevance language: relevant negation with its
two adjoints, lattice meet and join, fusion, relevant implication, Heyting
implication, co-implication and the right residual of fusion.

Everything here is immutable and hashable, so formulas can be shared freely
between premises, trace snapshots and parallel workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

# atom kinds
PROP = "prop"
NOM = "nom"
CNOM = "cnom"

# node tags
ATOM = "atom"
T = "t"           # relevant truth constant
TOP = "top"
BOT = "bot"
NEG = "neg"       # relevant negation
NEG_FLAT = "negflat"    # left adjoint of negation
NEG_SHARP = "negsharp"  # right adjoint of negation
AND = "and"
OR = "or"
FUS = "fus"       # fusion
IMP = "imp"       # relevant implication (residual of fusion, 1st coord)
COIMP = "coimp"   # left residual of join
HIMP = "himp"     # Heyting implication (residual of meet)
RRES = "rres"     # residual of fusion in its 2nd coordinate

UNARY_OPS = (NEG, NEG_FLAT, NEG_SHARP)
BINARY_OPS = (AND, OR, FUS, IMP, COIMP, HIMP, RRES)
CONSTANTS = (T, TOP, BOT)

# Polarity type of each connective: +1 where the coordinate is
# order-preserving, -1 where it is order-reversing.
POLARITY = {
    NEG: (-1,),
    NEG_FLAT: (-1,),
    NEG_SHARP: (-1,),
    AND: (1, 1),
    OR: (1, 1),
    FUS: (1, 1),
    IMP: (-1, 1),
    HIMP: (-1, 1),
    RRES: (-1, 1),
    COIMP: (1, -1),
}

# Connectives admitted in the base (un-extended) relevance language.
BASE_OPS = frozenset({ATOM, T, TOP, BOT, NEG, AND, OR, FUS, IMP})


@dataclass(frozen=True, order=True)
class Atom:
    """Variable-like leaf; identity is (kind, index), never the display name."""

    kind: str
    index: int
    name: Optional[str] = field(default=None, compare=False)

    def display(self) -> str:
        if self.kind == PROP:
            return self.name if self.name is not None else f"p_{self.index}"
        if self.kind == NOM:
            return "\\mathbf i" if self.index == 0 else f"\\mathbf j_{{{self.index}}}"
        return "\\mathbf m" if self.index == 0 else f"\\mathbf n_{{{self.index}}}"

    def __repr__(self) -> str:
        return f"Atom({self.kind},{self.index})"


@dataclass(frozen=True)
class Formula:
    op: str
    args: tuple["Formula", ...] = ()
    atom: Optional[Atom] = None

    def __repr__(self) -> str:
        if self.op == ATOM:
            return self.atom.display()
        if not self.args:
            return self.op
        return f"{self.op}({','.join(map(repr, self.args))})"


# constructors

def atom(a: Atom) -> Formula:
    return Formula(ATOM, atom=a)


def var(index: int, name: Optional[str] = None) -> Formula:
    return atom(Atom(PROP, index, name))


def nom(index: int) -> Formula:
    return atom(Atom(NOM, index))


def cnom(index: int) -> Formula:
    return atom(Atom(CNOM, index))


def t() -> Formula:
    return Formula(T)


def top() -> Formula:
    return Formula(TOP)


def bot() -> Formula:
    return Formula(BOT)


def neg(a: Formula) -> Formula:
    return Formula(NEG, (a,))


def negflat(a: Formula) -> Formula:
    return Formula(NEG_FLAT, (a,))


def negsharp(a: Formula) -> Formula:
    return Formula(NEG_SHARP, (a,))


def conj(a: Formula, b: Formula) -> Formula:
    return Formula(AND, (a, b))


def disj(a: Formula, b: Formula) -> Formula:
    return Formula(OR, (a, b))


def fus(a: Formula, b: Formula) -> Formula:
    return Formula(FUS, (a, b))


def imp(a: Formula, b: Formula) -> Formula:
    return Formula(IMP, (a, b))


def coimp(a: Formula, b: Formula) -> Formula:
    return Formula(COIMP, (a, b))


def himp(a: Formula, b: Formula) -> Formula:
    return Formula(HIMP, (a, b))


def rres(a: Formula, b: Formula) -> Formula:
    return Formula(RRES, (a, b))


# structural queries

def subformulas(phi: Formula) -> Iterator[tuple[tuple[int, ...], Formula]]:
    """Yield (path, node) pairs in preorder; the path is a child-index tuple."""
    stack = [((), phi)]
    while stack:
        path, node = stack.pop()
        yield path, node
        for i in range(len(node.args) - 1, -1, -1):
            stack.append((path + (i,), node.args[i]))


def atoms(phi: Formula, kind: Optional[str] = None) -> list[Atom]:
    """Atoms of phi in order of first occurrence, optionally of one kind."""
    seen: list[Atom] = []
    for _, node in subformulas(phi):
        if node.op == ATOM and (kind is None or node.atom.kind == kind):
            if node.atom not in seen:
                seen.append(node.atom)
    return seen


def is_pure(phi: Formula) -> bool:
    """True when phi contains no propositional variables."""
    return not any(
        node.op == ATOM and node.atom.kind == PROP for _, node in subformulas(phi)
    )


def in_base_language(phi: Formula) -> bool:
    """True when phi lies in the base relevance language (no extended ops,
    no nominals or co-nominals)."""
    for _, node in subformulas(phi):
        if node.op not in BASE_OPS:
            return False
        if node.op == ATOM and node.atom.kind != PROP:
            return False
    return True


def occurrences(phi: Formula, a: Atom) -> list[tuple[tuple[int, ...], int]]:
    """All occurrences of atom a in phi as (path, sign) pairs.

    The sign of an occurrence is the product of the polarity-type entries
    along its path from the root.
    """
    out: list[tuple[tuple[int, ...], int]] = []

    def walk(node: Formula, path: tuple[int, ...], sign: int) -> None:
        if node.op == ATOM:
            if node.atom == a:
                out.append((path, sign))
            return
        pol = POLARITY.get(node.op, ())
        for i, child in enumerate(node.args):
            walk(child, path + (i,), sign * pol[i])

    walk(phi, (), 1)
    return out


def is_positive_in(phi: Formula, a: Atom) -> bool:
    """True iff every occurrence of a in phi is positive (vacuously true)."""
    return all(sign > 0 for _, sign in occurrences(phi, a))


def is_negative_in(phi: Formula, a: Atom) -> bool:
    return all(sign < 0 for _, sign in occurrences(phi, a))


def substitute(phi: Formula, a: Atom, psi: Formula) -> Formula:
    """Uniformly replace every occurrence of atom a by psi."""
    if phi.op == ATOM:
        return psi if phi.atom == a else phi
    if not phi.args:
        return phi
    new_args = tuple(substitute(arg, a, psi) for arg in phi.args)
    if new_args == phi.args:
        return phi
    return Formula(phi.op, new_args)


def fresh_atom(kind: str, used: set[Atom]) -> Atom:
    """Least-index atom of the given kind not present in `used`."""
    taken = {a.index for a in used if a.kind == kind}
    i = 0
    while i in taken:
        i += 1
    return Atom(kind, i)
