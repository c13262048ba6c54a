"""Automatic generation of branching rules for d-Path Vertex Cover."""

from .branching import HANDLED, SubgraphBranchingRule, branching_factor, generate_rule
from .dpvc import HostGraph, Instance
from .genloop import GenerationFailed, RuleList, generate_rule_list
from .graphs import SmallGraph
from .solver import SolveResult, Solver, solve

__all__ = [
    "HANDLED",
    "GenerationFailed",
    "HostGraph",
    "Instance",
    "RuleList",
    "SmallGraph",
    "SolveResult",
    "Solver",
    "SubgraphBranchingRule",
    "branching_factor",
    "generate_rule",
    "generate_rule_list",
    "solve",
]
