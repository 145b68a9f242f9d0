"""
Rule engine from graph predicates to rigidity conclusions.

Graph facts (dimension, hyperbolicity, triangles, separation, symmetry) are
computed exactly.  Conclusions are derived from them by the declarative
rules in ``RULES``; each rule names the facts that define its setting and
one or more alternative premise sets.

* Setting not met: the conclusion is ``not_applicable``.
* Some premise set holds: ``holds``.
* Otherwise ``unknown``: the known results give sufficient conditions only,
  so a missing premise never turns into ``fails``.

Statuses of the graph facts themselves are ``holds`` or ``fails`` (or
``not_applicable`` for graphs without edges).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Mapping

from . import graph_core as gc
from .graph_core import LabeledGraph

HOLDS, FAILS, NOT_APPLICABLE, UNKNOWN = "holds", "fails", "not_applicable", "unknown"

PROPERTY_NAMES = (
    "two_dimensional",
    "hyperbolic_type",
    "large_type",
    "clttf",
    "no_separating",
    "vertex_rigid",
    "theta_nontrivial",
    "boundary_amenable",
    "cocycle_superrigid",
    "me_superrigid",
    "oe_superrigid",
    "wstar_superrigid",
    "wstar_wc_superrigid",
    "raag_girth5_class",
)


@dataclass(frozen=True)
class Fact:
    name: str
    rule_id: str
    anchor: str
    test: Callable[[LabeledGraph], bool | None]  # None: not applicable
    public: bool = True


@dataclass(frozen=True)
class Rule:
    rule_id: str
    conclusion: str
    setting: tuple[str, ...]
    premises: tuple[tuple[str, ...], ...]
    anchor: str


def _has_edge(g: LabeledGraph) -> bool:
    return bool(g.labels)


def _guard(fn: Callable[[LabeledGraph], bool]) -> Callable[[LabeledGraph], bool | None]:
    return lambda g: fn(g) if _has_edge(g) else None


def _triangle_free(g: LabeledGraph) -> bool:
    return next(gc.triangles(g), None) is None


def _large(g: LabeledGraph) -> bool:
    return all(m >= 3 for m in g.labels.values())


def _no_separating(g: LabeledGraph) -> bool | None:
    if not _has_edge(g) or not gc.is_connected(g):
        return None
    return not gc.separating_vertices(g) and not gc.separating_edges(g)


def _theta_nontrivial(g: LabeledGraph) -> bool | None:
    if not _has_edge(g):
        return None
    if len(g.vertices) == 2:
        return False
    for v in g.vertices:
        others = [x for x in g.vertices if x != v]
        if all(g.label(v, x) == 2 for x in others):
            return False
    return True


FACTS: tuple[Fact, ...] = (
    Fact("two_dimensional", "F-dim", "dimension two: every triangle has 1/m + 1/n + 1/r <= 1",
         _guard(gc.is_two_dimensional)),
    Fact("hyperbolic_type", "F-hyp", "hyperbolic type: triangle sums < 1 and a label >= 3 on every induced square",
         _guard(gc.is_hyperbolic_type)),
    Fact("large_type", "F-large", "large type: all labels at least 3", _guard(_large)),
    Fact("clttf", "F-clttf", "CLTTF: connected, triangle-free, all labels at least 3",
         _guard(lambda g: gc.is_connected(g) and _triangle_free(g) and _large(g))),
    Fact("no_separating", "F-sep", "no separating vertex and no separating edge", _no_separating),
    Fact("vertex_rigid", "F-rigid", "vertex rigidity: an automorphism fixing a closed neighbourhood is trivial",
         _guard(gc.is_vertex_rigid)),
    Fact("theta_nontrivial", "F-theta", "fixed set graph is more than a point: not an edge, not a 2-labelled star",
         _theta_nontrivial),
    Fact("triangle_free", "F-tri", "triangle-free defining graph", _guard(_triangle_free), public=False),
    Fact("bipartite", "F-bip", "bipartite defining graph", _guard(lambda g: gc.basic_predicates(g).bipartite),
         public=False),
    Fact("labels_at_least_4", "F-four", "all labels at least 4", _guard(lambda g: all(m >= 4 for m in g.labels.values())),
         public=False),
    Fact("right_angled", "F-raag", "all labels equal to 2", _guard(lambda g: all(m == 2 for m in g.labels.values())),
         public=False),
    Fact("connected", "F-conn", "connected defining graph", _guard(gc.is_connected), public=False),
    Fact("girth_at_least_5", "F-girth", "girth at least 5", _guard(lambda g: gc.girth(g) >= 5), public=False),
    Fact("transvection_free", "F-tv", "transvection-free: no link inside another vertex's star",
         lambda g: gc.is_transvection_free(g) if _has_edge(g) and all(m == 2 for m in g.labels.values()) else None,
         public=False),
)

_CRISP = ("clttf", "no_separating", "vertex_rigid")
_SETTING = ("two_dimensional", "hyperbolic_type")
_RIGID_SETTING = _SETTING + ("theta_nontrivial",)

RULES: tuple[Rule, ...] = (
    Rule("R-ba", "boundary_amenable", _SETTING, ((),),
         "boundary amenability of two-dimensional hyperbolic-type Artin groups via the coned-off Deligne complex"),
    Rule("R-cocycle", "cocycle_superrigid", _SETTING, ((),),
         "cocycle superrigidity from higher-rank lattices into two-dimensional hyperbolic-type Artin groups"),
    Rule("R-me", "me_superrigid", _RIGID_SETTING, (_CRISP,),
         "ME superrigidity when the action on the fixed set graph is rigid, certified by Crisp's rigidity theorem"),
    Rule("R-oe", "oe_superrigid", _RIGID_SETTING, (_CRISP,),
         "orbit equivalence rigidity under the same rigidity of the fixed set graph"),
    Rule("R-wstar", "wstar_superrigid", _RIGID_SETTING,
         (_CRISP + ("bipartite", "large_type"), _CRISP + ("triangle_free", "labels_at_least_4")),
         "W*-superrigidity for bipartite graphs with labels >= 3 or triangle-free graphs with labels >= 4"),
    Rule("R-wstar-wc", "wstar_wc_superrigid", _RIGID_SETTING, (_CRISP + ("triangle_free",),),
         "W*-rigidity among weakly compact actions for triangle-free graphs"),
    Rule("R-raag", "raag_girth5_class", ("right_angled",),
         (("connected", "girth_at_least_5", "transvection_free"),),
         "ME classification of transvection-free RAAGs with connected girth >= 5 graphs up to isomorphism"),
)


@dataclass
class Verdict:
    graph: LabeledGraph
    properties: dict[str, str]
    justifications: dict[str, list[str]] = field(default_factory=dict)

    def status(self, name: str) -> str:
        return self.properties[name]

    def to_json(self) -> dict:
        return {
            "graph": graph_echo(self.graph),
            "properties": {
                name: {"status": self.properties[name], "why": list(self.justifications[name])}
                for name in PROPERTY_NAMES
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"

    def format_text(self) -> str:
        width = max(len(n) for n in PROPERTY_NAMES)
        lines = []
        for name in PROPERTY_NAMES:
            why = "; ".join(self.justifications[name])
            lines.append(f"{name:<{width}}  {self.properties[name]:<14}  {why}")
        return "\n".join(lines) + "\n"


def graph_echo(g: LabeledGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [[u, v, m] for (u, v), m in sorted(g.labels.items())],
    }


def _fact_status(value: bool | None) -> str:
    if value is None:
        return NOT_APPLICABLE
    return HOLDS if value else FAILS


def evaluate_facts(g: LabeledGraph, overrides: Mapping[str, str] | None = None) -> tuple[dict[str, str], dict[str, list[str]]]:
    status, why = {}, {}
    for f in FACTS:
        status[f.name] = _fact_status(f.test(g))
        why[f.name] = [f"{f.rule_id}: {f.anchor}"]
    for name, s in (overrides or {}).items():
        status[name] = s
        why[name] = [f"override: {name} set to {s}"]
    return status, why


def classify(g: LabeledGraph, overrides: Mapping[str, str] | None = None) -> Verdict:
    """Evaluate every fact and rule for g.

    ``overrides`` replaces computed fact statuses, e.g. to supply an
    external certificate for vertex rigidity.
    """
    status, why = evaluate_facts(g, overrides)
    for r in RULES:
        missing = [s for s in r.setting if status[s] != HOLDS]
        if missing:
            status[r.conclusion] = NOT_APPLICABLE
            why[r.conclusion] = [f"{r.rule_id}: setting not met ({', '.join(missing)})"]
            continue
        met = next((p for p in r.premises if all(status[x] == HOLDS for x in p)), None)
        if met is None:
            gaps = [", ".join(x for x in p if status[x] != HOLDS) for p in r.premises]
            status[r.conclusion] = UNKNOWN
            why[r.conclusion] = [f"{r.rule_id}: premises not established ({' | '.join(gaps)})"]
        else:
            status[r.conclusion] = HOLDS
            used = list(r.setting) + list(met)
            why[r.conclusion] = [f"{r.rule_id}: {r.anchor}"] + [f"uses {x}" for x in used]
    props = {n: status[n] for n in PROPERTY_NAMES}
    return Verdict(g, props, {n: why[n] for n in PROPERTY_NAMES})


ME_EQUIVALENT, NOT_ME, INCONCLUSIVE = "ME_equivalent_via_isomorphism", "not_ME", "inconclusive"


def me_compare(g1: LabeledGraph, g2: LabeledGraph) -> str:
    """Measure equivalence between two CLTTF Artin groups.

    When both graphs are CLTTF and one of them has no separating vertex or
    edge, the groups are measure equivalent exactly when the labelled graphs
    are isomorphic.  Anything else is reported as inconclusive.
    """
    def clttf(g: LabeledGraph) -> bool:
        return _has_edge(g) and gc.is_connected(g) and _triangle_free(g) and _large(g)

    if not (clttf(g1) and clttf(g2)):
        return INCONCLUSIVE
    if not (_no_separating(g1) or _no_separating(g2)):
        return INCONCLUSIVE
    return ME_EQUIVALENT if gc.are_isomorphic(g1, g2) is not None else NOT_ME
