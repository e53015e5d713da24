"""Checks shared by the end-to-end tests."""

from ltlplan.ltl import eval_lasso
from ltlplan.product import induced_word
from ltlplan.workspace import is_simple_segment


def assert_plan_valid(scenario, report):
    """Everything a produced plan must satisfy: starts at the initial
    state, suffix non-empty, every consecutive pair (including the
    prefix-to-suffix hop and the suffix wrap-around) is a transition of
    the grown system with a simple segment, and the induced label lasso
    satisfies the formula."""
    plan = report.plan
    assert plan is not None, "expected a plan"
    tsys = report.tsys
    assert plan.prefix[0] == tsys.initial
    assert len(plan.suffix) >= 1

    hops = list(zip(plan.prefix, plan.prefix[1:]))
    hops.append((plan.prefix[-1], plan.suffix[0]))
    hops.extend(zip(plan.suffix, plan.suffix[1:]))
    hops.append((plan.suffix[-1], plan.suffix[0]))
    for source, target in hops:
        assert source != target, "grown systems never hold self-loops"
        assert tsys.has_transition(source, target), (source, target)
        assert is_simple_segment(scenario.env, tsys.point(source), tsys.point(target))

    word = induced_word(plan, tsys)
    assert eval_lasso(scenario.formula, word)

    floor = tsys.schedule.inner(len(tsys))
    assert tsys.min_pairwise_distance() >= floor
