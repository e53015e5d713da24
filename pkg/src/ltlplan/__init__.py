"""Plan infinite robot trajectories that satisfy linear temporal logic specs.

The pipeline: parse an LTL formula over region labels, translate it to a
Buchi automaton, grow a sparse random transition system inside the labeled
workspace, and incrementally search the product of the two for an accepting
lasso (finite prefix + repeating suffix).
"""

from .ltl import (
    Atom,
    LassoWord,
    LtlSyntaxError,
    eval_lasso,
    format_formula,
    parse_formula,
    to_nnf,
)
from .buchi import BuchiAutomaton, Guard, translate
from .workspace import Box, Environment, RadiusSchedule, Region, load_environment
from .tsys import TransitionSystem
from .inc_scc import SccIndex
from .product import (
    Plan,
    ProductAutomaton,
    UnsatisfiableError,
    batch_product,
    extract_plan,
    induced_word,
)
from .planner import PlannerParams, PlanReport, plan, success_rate

__all__ = [
    "Atom",
    "Box",
    "BuchiAutomaton",
    "Environment",
    "Guard",
    "LassoWord",
    "LtlSyntaxError",
    "Plan",
    "PlannerParams",
    "PlanReport",
    "ProductAutomaton",
    "RadiusSchedule",
    "Region",
    "SccIndex",
    "TransitionSystem",
    "UnsatisfiableError",
    "batch_product",
    "eval_lasso",
    "extract_plan",
    "format_formula",
    "induced_word",
    "load_environment",
    "parse_formula",
    "plan",
    "success_rate",
    "to_nnf",
    "translate",
]

__version__ = "0.1.0"
