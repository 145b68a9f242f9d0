"""Defining graphs, dihedral Artin groups, standard abelian subgroups and fixed set graph patches."""

from .classifier import Verdict, classify, me_compare
from .dihedral import DihedralGroup, GarsideNF, garside_nf
from .graph_core import LabeledGraph, ParseError, load_graph, parse_graph, serialize_graph
from .sas import StandardAbelianSubgroup, rank1_subgroups, sas_commute, sas_equal, sas_intersect
from .sas_theta import ThetaPatch, TypeI, TypeII, core_patch, parse_vertex, theta_patch
from .suite import lemma_suite
from .words import DEFAULT_BUDGET, GroupWord, equality, is_trivial, parabolic_membership

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_BUDGET",
    "DihedralGroup",
    "GarsideNF",
    "GroupWord",
    "LabeledGraph",
    "ParseError",
    "StandardAbelianSubgroup",
    "ThetaPatch",
    "TypeI",
    "TypeII",
    "Verdict",
    "classify",
    "core_patch",
    "equality",
    "garside_nf",
    "is_trivial",
    "lemma_suite",
    "load_graph",
    "me_compare",
    "parabolic_membership",
    "parse_graph",
    "parse_vertex",
    "rank1_subgroups",
    "sas_commute",
    "sas_equal",
    "sas_intersect",
    "serialize_graph",
    "theta_patch",
]
