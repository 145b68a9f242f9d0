"""
The lemma-verification suite: build fixed set graph patches around a few
base vertices, run every patch checker on them, and run the dihedral
checks for each label of the graph.

Patches for different bases are independent, so they can be farmed out to
a process pool.  Results are merged in base order, which keeps reports
identical whatever the pool size.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .graph_core import LabeledGraph
from .lemmas import CHECK_ORDER, STATEMENTS, CheckResult, check_crisp_commute, check_normalizer, check_patch
from .sas_theta import ThetaPatch, ThetaVertex, TypeI, TypeII, theta_patch, vertex_ref
from .words import DEFAULT_BUDGET, IDENTITY

DEFAULT_L = 2
DEFAULT_K = 1
DEFAULT_RADIUS = 2
NORMALIZER_LENGTH = 6
CONJUGATOR_LENGTH = 3
THREADS_ENV = "ARTINLAB_THREADS"


def worker_count(requested: int | None = None) -> int:
    """Pool size: ``requested`` if given, else ARTINLAB_THREADS, else 1."""
    if requested is None:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            requested = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return max(1, requested)


def default_bases(g: LabeledGraph) -> list[ThetaVertex]:
    """The tree of the first non-isolated generator, and the first edge group with label >= 3."""
    bases: list[ThetaVertex] = []
    for v in g.vertices:
        if g.neighbors(v):
            bases.append(TypeI(IDENTITY, v))
            break
    for e, m in sorted(g.labels.items()):
        if m >= 3:
            bases.append(TypeII(IDENTITY, e))
            break
    return bases


@dataclass
class SuiteReport:
    graph: LabeledGraph
    settings: dict
    patches: list[dict] = field(default_factory=list)
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failed(self) -> int:
        return sum(c.failed for c in self.checks)

    @property
    def unresolved(self) -> int:
        return sum(p["unresolved"] for p in self.patches)

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> dict:
        return {
            "graph": {
                "vertices": list(self.graph.vertices),
                "edges": [[u, v, m] for (u, v), m in sorted(self.graph.labels.items())],
            },
            "settings": dict(self.settings),
            "patches": list(self.patches),
            "checks": [c.as_dict() for c in self.checks],
            "failed": self.failed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    def format_text(self) -> str:
        s = self.settings
        lines = [f"lemma suite: L={s['L']} K={s['K']} budget={s['budget']} radius={s['radius']}"]
        for p in self.patches:
            lines.append(f"  patch at {p['base']}: {p['vertices']} vertices, {p['edges']} edges, "
                         f"{p['unresolved']} unresolved")
        width = max(len(n) for n in CHECK_ORDER)
        for c in self.checks:
            lines.append(f"{c.name:<{width}}  {c.status:<7}  passed={c.passed} failed={c.failed} skipped={c.skipped}")
            lines.extend(f"    {f}" for f in c.failures)
        lines.append("result: " + ("FAIL" if self.failed else "ok"))
        return "\n".join(lines) + "\n"


def _patch_job(args) -> tuple[dict, list[CheckResult]]:
    g, base, radius, L, K, budget = args
    patch = theta_patch(g, base, radius, L, K, budget)
    return _summarise(patch, base), check_patch(g, patch, budget)


def _summarise(patch: ThetaPatch, base: ThetaVertex) -> dict:
    return {"base": vertex_ref(base), **patch.summary()}


def _merge(results: list[list[CheckResult]]) -> dict[str, CheckResult]:
    merged = {name: CheckResult(name, STATEMENTS[name]) for name in CHECK_ORDER}
    for batch in results:
        for r in batch:
            merged[r.name].merge(r)
    return merged


def check_patches(g: LabeledGraph, patches: list[ThetaPatch], budget: int = DEFAULT_BUDGET) -> SuiteReport:
    """Run the patch checkers on ready-made patches (no dihedral checks)."""
    L, K = patches[0].truncation if patches else (DEFAULT_L, DEFAULT_K)
    settings = {"L": L, "K": K, "budget": budget, "radius": max((p.radius for p in patches), default=0)}
    batches = [check_patch(g, p, budget) for p in patches]
    merged = _merge(batches)
    return SuiteReport(
        g, settings,
        [{"base": vertex_ref(p.vertices[p.base]) if p.base >= 0 else "-", **p.summary()} for p in patches],
        [merged[n] for n in CHECK_ORDER if n not in ("normalizer", "crisp-commute")],
    )


def lemma_suite(g: LabeledGraph, L: int = DEFAULT_L, K: int = DEFAULT_K, budget: int = DEFAULT_BUDGET,
                radius: int = DEFAULT_RADIUS, bases: list[ThetaVertex] | None = None,
                threads: int | None = None, normalizer_length: int = NORMALIZER_LENGTH,
                conjugator_length: int = CONJUGATOR_LENGTH) -> SuiteReport:
    """Run every checker on g and collect pass/fail/skipped counts.

    The dihedral checks run for each label >= 3 that occurs in g; label 2
    is excluded since two commuting generators are a genuine exception to
    the commutation statement.
    """
    if L < 0 or K < 0 or radius < 0:
        raise ValueError("L, K and radius must be >= 0")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    bases = default_bases(g) if bases is None else list(bases)
    jobs = [(g, b, radius, L, K, budget) for b in bases]
    workers = min(worker_count(threads), max(len(jobs), 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_patch_job, jobs))
    else:
        outcomes = [_patch_job(j) for j in jobs]
    labels = sorted({m for m in g.labels.values() if m >= 3})
    batches = [checks for _, checks in outcomes]
    batches.append([check_normalizer(labels, normalizer_length),
                    check_crisp_commute(labels, conjugator_length)])
    merged = _merge(batches)
    settings = {
        "L": L, "K": K, "budget": budget, "radius": radius,
        "normalizer_length": normalizer_length, "conjugator_length": conjugator_length,
    }
    return SuiteReport(g, settings, [s for s, _ in outcomes], [merged[n] for n in CHECK_ORDER])
