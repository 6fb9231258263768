import pytest
from hypothesis import given, strategies as st

from rmcorr import formula as fm
from rmcorr.formula import (Atom, fresh_atom, is_negative_in, is_positive_in,
                            occurrences, substitute)
from rmcorr.syntax import parse

p = Atom(fm.PROP, 0, "p")
q = Atom(fm.PROP, 1, "q")


def test_atom_equality_ignores_display_name():
    assert Atom(fm.PROP, 0, "p") == Atom(fm.PROP, 0, "renamed")
    assert Atom(fm.PROP, 0) != Atom(fm.NOM, 0)
    assert Atom(fm.NOM, 1) != Atom(fm.NOM, 2)


def test_occurrence_base_case():
    assert occurrences(fm.var(0, "p"), p) == [((), 1)]


def test_occurrence_signs_of_implication():
    phi = parse(r"p \to q")
    assert occurrences(phi, p) == [((0,), -1)]
    assert occurrences(phi, q) == [((1,), 1)]


def test_negated_fusion_occurrences_are_negative():
    phi = fm.neg(fm.fus(fm.var(0, "p"), fm.var(0, "p")))
    occs = occurrences(phi, p)
    assert len(occs) == 2
    assert all(sign == -1 for _, sign in occs)


def test_positive_in():
    assert is_positive_in(parse(r"q \lor q"), q)
    assert not is_positive_in(parse(r"p \to q"), p)
    assert is_negative_in(parse(r"p \to q"), p)
    assert is_positive_in(parse(r"\sim \sim p"), p)


def test_positive_in_vacuous():
    # atom identity is (kind, index): an absent index is vacuously both
    absent = Atom(fm.PROP, 7)
    assert is_positive_in(parse(r"q"), absent)
    assert is_negative_in(parse(r"q"), absent)


def test_substitute():
    phi = parse(r"p \land q")
    assert substitute(phi, p, fm.bot()) == fm.conj(fm.bot(), fm.var(1, "q"))
    r = fm.var(2, "r")
    assert substitute(r, p, fm.top()) == r


def test_substitute_solved_bound():
    # replacing q inside i <= j_1 -> q produces j_1 -> (i o j_1) on the right
    rhs = fm.imp(fm.nom(1), fm.var(1, "q"))
    alpha = fm.fus(fm.nom(0), fm.nom(1))
    assert substitute(rhs, q, alpha) == fm.imp(fm.nom(1), alpha)


def test_fresh_atom():
    assert fresh_atom(fm.NOM, {Atom(fm.NOM, 0)}) == Atom(fm.NOM, 1)
    assert fresh_atom(fm.CNOM, set()) == Atom(fm.CNOM, 0)
    assert fresh_atom(fm.NOM, {Atom(fm.NOM, 0), Atom(fm.NOM, 2)}) == Atom(fm.NOM, 1)


def test_fresh_atom_injective_across_accumulated_calls():
    used: set[Atom] = set()
    seen = []
    for _ in range(10):
        a = fresh_atom(fm.NOM, used)
        assert a not in seen
        seen.append(a)
        used.add(a)


def test_purity():
    assert fm.is_pure(parse(r"\mathbf i \circ \mathbf j_1"))
    assert not fm.is_pure(parse(r"\mathbf i \circ p"))


def test_base_language():
    assert fm.in_base_language(parse(r"\sim (p \circ q) \to \mathbf t"))
    assert not fm.in_base_language(parse(r"p \Rightarrow q"))
    assert not fm.in_base_language(parse(r"\mathbf i"))


def test_substitute_preserves_purity():
    phi = parse(r"p \to (\mathbf j_1 \circ p)")
    out = substitute(phi, p, fm.nom(2))
    assert fm.is_pure(out)


def test_substitution_removes_all_occurrences():
    phi = parse(r"(p \to q) \circ \sim p")
    out = substitute(phi, p, fm.t())
    assert occurrences(out, p) == []


# property: the sign reported for each occurrence equals the product of the
# polarity types along the reported path, recomputed by an independent walk

_ops = st.deferred(lambda: st.one_of(
    st.sampled_from([fm.var(0, "p"), fm.var(1, "q"), fm.t(), fm.bot()]),
    st.tuples(st.sampled_from(["neg", "negflat", "negsharp"]), _ops).map(
        lambda t: fm.Formula(t[0], (t[1],))),
    st.tuples(st.sampled_from(["and", "or", "fus", "imp", "coimp", "himp",
                               "rres"]), _ops, _ops).map(
        lambda t: fm.Formula(t[0], (t[1], t[2]))),
))


@given(_ops)
def test_sign_composition(phi):
    for path, sign in occurrences(phi, p):
        node = phi
        product = 1
        for i in path:
            product *= fm.POLARITY[node.op][i]
            node = node.args[i]
        assert node == fm.var(0)
        assert sign == product
