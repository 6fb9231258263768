import random

import pytest

from rmcorr import calculus as ca
from rmcorr import formula as fm
from rmcorr.calculus import Inequality
from rmcorr.pipeline import (FailureInfo, approximate, correspondent,
                             eliminate, preprocess, simplify)
from rmcorr.render import OutputFormat, render, result_to_json
from rmcorr.syntax import SyntaxMode, parse

from helpers import random_formula


def texts(items):
    return [i.text() for i in items]


def test_preprocess_splits_then_eliminates_monotone_variables():
    goals, _ = preprocess(parse(r"p \to q \land \mathbf t"))
    assert texts(goals) == [r"\top \le \bot", r"\top \le \mathbf t"]


def test_preprocess_keeps_b2_whole():
    goals, _ = preprocess(parse(r"(p \to q) \land (q \to r) \to (p \to r)"))
    assert texts(goals) == [r"(p \to q) \land (q \to r) \le p \to r"]


def test_preprocess_monotone_on_negated_context():
    goals, _ = preprocess(parse(r"A \to (\sim A \to B)"))
    assert texts(goals) == [r"A \le \sim A \to \bot"]


def test_preprocess_non_implication_gets_unit_bound():
    goals, _ = preprocess(parse(r"p \land q"))
    # t <= p /\ q splits; each right-side variable is replaced by bottom
    assert texts(goals) == [r"\mathbf t \le \bot", r"\mathbf t \le \bot"]


def test_approximate_b2():
    (goal,), _ = preprocess(parse(r"(p \to q) \land (q \to r) \to (p \to r)"))
    state, _ = approximate(goal)
    assert state.text() == (
        r"\mathbf i \le p \to q,\ \mathbf i \le q \to r,\ "
        r"\mathbf j_{1} \to \mathbf n_{1} \le \mathbf m,\ r \le \mathbf n_{1},\ "
        r"\mathbf j_{1} \le p \quad\Longrightarrow\quad \mathbf i \le \mathbf m")


def test_approximate_example_two():
    (goal,), _ = preprocess(parse(r"A \to (\sim A \to B)"))
    state, _ = approximate(goal)
    assert state.text() == (
        r"\mathbf i \le A,\ \mathbf j_{1} \to \mathbf n_{1} \le \mathbf m,\ "
        r"\bot \le \mathbf n_{1},\ \mathbf j_{1} \le \sim \mathbf n_{2},\ "
        r"A \le \mathbf n_{2} \quad\Longrightarrow\quad \mathbf i \le \mathbf m")


def test_approximate_trivial_goal():
    state, _ = approximate(Inequality(fm.t(), fm.t()))
    assert state.text() == (r"\mathbf i \le \mathbf t,\ \mathbf t \le \mathbf m "
                            r"\quad\Longrightarrow\quad \mathbf i \le \mathbf m")


def test_approximate_conclusion_shape_and_irreducibility():
    (goal,), _ = preprocess(parse(r"(p \circ q \to r) \to (p \to (q \to r))"))
    state, _ = approximate(goal)
    concl = state.conclusion
    assert concl.lhs.atom.kind == fm.NOM and concl.rhs.atom.kind == fm.CNOM
    for k in range(len(state.premises)):
        assert ca.find_split(state.premises[k]) is None
        for rule in ca.APPROX_RULES:
            with pytest.raises(ca.NotApplicable):
                ca.approximation(state, k, rule, ca.FreshSupply.for_qi(state))


def test_eliminate_b2_order_and_result():
    (goal,), _ = preprocess(parse(r"(p \to q) \land (q \to r) \to (p \to r)"))
    state, _ = approximate(goal)
    pure, order, _ = eliminate(state)
    assert order == ["+p", "+r", "+q"]
    assert pure.text() == (
        r"\mathbf j_{1} \to \mathbf n_{1} \le \mathbf m,\ "
        r"\mathbf i \circ (\mathbf i \circ \mathbf j_{1}) \le \mathbf n_{1} "
        r"\quad\Longrightarrow\quad \mathbf i \le \mathbf m")
    assert pure.is_pure()


def test_eliminate_pure_input_returns_empty_order():
    state, _ = approximate(Inequality(fm.t(), fm.t()))
    pure, order, steps = eliminate(state)
    assert order == [] and steps == [] and pure == state


def test_eliminate_failure_reports_stuck_state():
    (goal,), _ = preprocess(parse(r"((p \to p) \to q) \to q"))
    state, _ = approximate(goal)
    out = eliminate(state)
    assert isinstance(out, FailureInfo)
    assert any(a.kind == fm.PROP for a in out.stuck.atoms())
    assert out.attempted  # at least one dead-end order recorded


def test_simplify_example_two():
    (goal,), _ = preprocess(parse(r"A \to (\sim A \to B)"))
    state, _ = approximate(goal)
    pure, _, _ = eliminate(state)
    simp, _ = simplify(pure)
    assert simp.text() == (r"\mathbf j_{1} \le \sim \mathbf n_{2} "
                           r"\quad\Longrightarrow\quad "
                           r"\mathbf n_{2} \le \mathbf j_{1} \to \mathbf n_{1}")


def test_simplify_conclusion_only_is_fixed_point():
    state = ca.QuasiInequality((), Inequality(fm.nom(0), fm.cnom(0)))
    simp, steps = simplify(state)
    assert simp == state and steps == []


def test_correspondent_success_outputs_are_pure():
    res = correspondent(parse(r"(p \to q) \to ((q \to r) \to (p \to r))"))
    assert res.status == "success"
    for g in res.goals:
        assert g.pure.is_pure()
        assert g.simplified.is_pure()


def test_correspondent_failure_status():
    res = correspondent(parse(r"((p \to p) \to q) \to q"))
    assert res.status == "failure"
    assert res.fo is None
    assert res.failure is not None


def test_correspondent_of_unit_constant_is_true():
    import rmcorr.fol as fol
    res = correspondent(parse(r"\mathbf t"))
    assert res.status == "success"
    assert res.goals[0].initial.text() == r"\mathbf t \le \mathbf t"
    assert res.fo == fol.TRUE


def test_correspondent_multi_goal_conjunction():
    res = correspondent(parse(r"p \to q \land \mathbf t"))
    assert res.status == "success"
    assert len(res.goals) == 2
    fo = res.fo
    # conjunction of the two goal correspondents
    import rmcorr.fol as fol
    assert isinstance(fo, fol.And)


def test_determinism_full_results_identical():
    src = r"(p \to q) \land (q \to r) \to (p \to r)"
    a = correspondent(parse(src))
    b = correspondent(parse(src))
    assert result_to_json(a, trace=True) == result_to_json(b, trace=True)


def test_ra_mode_rewrites_order_to_equality():
    import rmcorr.fol as fol
    res = correspondent(parse(r"p \to p"), SyntaxMode.RELATION_ALGEBRA)
    assert res.status == "success"
    kinds = {type(n) for n in fol.walk(res.fo)}
    assert fol.LeqAtom not in kinds
    assert fol.EqAtom in kinds


def test_termination_on_random_formulas_quick():
    rng = random.Random(20240811)
    for _ in range(60):
        phi = random_formula(rng, depth=5, n_vars=3)
        res = correspondent(phi)
        if res.status == "success":
            assert all(g.simplified.is_pure() for g in res.goals)
        else:
            stuck = res.failure.stuck
            assert any(a.kind == fm.PROP for a in stuck.atoms())
