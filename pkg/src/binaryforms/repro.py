"""Reproduction suites: named runs comparing computed values with reference ones.

A suite returns a SuiteResult whose checks each carry an expected and an
observed value; artifacts are text files for the caller to write out.
"""
from __future__ import annotations

import json
import time
from math import gcd
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional

from . import reference as ref
from .dimension import DimQuery, covariant_dimension, hilbert_series, invariant_count
from .diophantine import DiophantineSystem, HilbertBasis, hilbert_basis, reduced_expand_count
from .gordan import (S4_RELATION_ORDER, S6_RELATION_ORDER, CandidateFilters, GeneratorSet, Relation,
                     adjoin_s2, candidate_transvectants, find_relations, joint_basis, named_basis,
                     simple_basis, verify_generation)
from .kernel import UsageError


@dataclass
class Check:
    name: str
    expected: object
    observed: object

    @property
    def ok(self) -> bool:
        return self.expected == self.observed

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "expected": _jsonable(self.expected),
                "observed": _jsonable(self.observed)}


@dataclass
class SuiteResult:
    name: str
    stretch: bool = False
    checks: List[Check] = field(default_factory=list)
    artifacts: Dict[str, str] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def check(self, name: str, expected, observed) -> Check:
        c = Check(name, expected, observed)
        self.checks.append(c)
        return c

    def discrepancies(self) -> List[dict]:
        return [c.to_dict() for c in self.checks if not c.ok]

    def to_dict(self) -> dict:
        return {"suite": self.name, "stretch": self.stretch, "ok": self.ok,
                "seconds": round(self.seconds, 3), "checks": [c.to_dict() for c in self.checks]}

    def summary(self) -> str:
        lines = [f"suite {self.name}: {'ok' if self.ok else 'FAILED'} ({self.seconds:.1f} s)"]
        for c in self.checks:
            mark = "ok  " if c.ok else "FAIL"
            lines.append(f"  {mark} {c.name}: observed {_short(c.observed)}"
                         + ("" if c.ok else f", expected {_short(c.expected)}"))
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, dict):
        return {(",".join(map(str, k)) if isinstance(k, tuple) else str(k)): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _short(x) -> str:
    s = json.dumps(_jsonable(x))
    return s if len(s) <= 100 else s[:97] + "..."


def degree_order_matrix(G: GeneratorSet) -> Dict[int, Dict[int, int]]:
    out: Dict[int, Dict[int, int]] = {}
    for (d, k), n in G.degree_order_counts().items():
        out.setdefault(d, {})[k] = n
    return {d: dict(sorted(row.items())) for d, row in sorted(out.items())}


def relation_pattern(rel: Relation) -> Dict[tuple, int]:
    """Monomials as sorted (name, exponent) tuples, coefficients made primitive."""
    return {tuple(sorted((g, e) for g, e in zip(rel.generators, m) if e)): c for c, m in rel.terms}


def proportional(a: Mapping, b: Mapping) -> bool:
    if set(a) != set(b) or not a:
        return False
    k0 = next(iter(a))
    return all(a[k] * b[k0] == b[k] * a[k0] for k in a)


# ------------------------------------------------------------------ suites

def suite_s3s4(res: SuiteResult):
    A, B = named_basis(3), named_basis(4, "v")
    G = joint_basis(A, B)
    res.check("candidate transvectants", ref.COV_S3_S4_CANDIDATES, G.stats["candidates"])
    res.check("minimal basis size", 63, len(G))
    res.check("degree/order matrix", ref.COV_S3_S4, degree_order_matrix(G))
    res.artifacts["basis.json"] = G.to_json()
    res.artifacts["table.txt"] = render_table(G)


def suite_s6s2(res: SuiteResult, verify_bound: int = 15):
    G = adjoin_s2(named_basis(6))
    res.check("minimal basis size", 99, len(G))
    res.check("order totals", ref.COV_S6_S2_ORDER_TOTALS, G.order_totals())
    res.check("degree/order matrix", ref.COV_S6_S2, degree_order_matrix(G))
    rep = verify_generation(G, verify_bound)
    res.check(f"generation verified up to degree {verify_bound}", True, rep.full)
    res.check("no redundant generator", True, rep.minimal)
    res.artifacts["basis.json"] = G.to_json()
    res.artifacts["table.txt"] = render_table(G)
    res.artifacts["verification.json"] = json.dumps(rep.to_dict())


def suite_simple(res: SuiteResult):
    bases = {4: simple_basis(4)}
    for n in (3, 4, 5, 6):
        G = bases[n] if n in bases else simple_basis(n, bases)
        bases[n] = G
        res.check(f"Cov(S{n}) basis size", ref.SIMPLE_COUNTS[n], len(G))
        res.artifacts[f"s{n}.json"] = G.to_json()
        res.artifacts[f"s{n}.txt"] = render_table(G)
    res.check("Cov(S6) degree/order grid", ref.COV_S6, degree_order_matrix(bases[6]))


def suite_dims(res: SuiteResult):
    res.check("dim (4,4,4) order 0", 1004, covariant_dimension(DimQuery((8, 4, 4), (4, 4, 4), 0)))
    got = {md: covariant_dimension(DimQuery((8, 4, 4), md, 0)) for md in ref.INV_S8_S4_S4_DEG12}
    res.check("degree 12 invariant table", ref.INV_S8_S4_S4_DEG12, got)
    res.check("invariants in total degree 49", ref.INV_S8_S4_S4_DEG49, invariant_count((8, 4, 4), 49))
    series = hilbert_series((4, 3), "total", len(ref.SERIES_S4_S3) - 1)
    res.check("Cov(S4+S3) series, graded by degree + order", ref.SERIES_S4_S3, list(series.coefficients))


def suite_diophantine(res: SuiteResult):
    hb = hilbert_basis(DiophantineSystem((3, 2, 3), (4, 4, 6)))
    res.check("S3+S4 system solutions", ref.COV_S3_S4_CANDIDATES, len(hb))
    red = hilbert_basis(DiophantineSystem(ref.SE_ROW1, ref.SE_ROW2, invariant=True))
    res.check("invariant system, expanded solutions", ref.SE_SOLUTIONS,
              reduced_expand_count(red, ref.SE_MULTIPLICITIES))
    res.artifacts["s3s4_system.json"] = hb.to_json()
    res.artifacts["invariant_reduced_system.json"] = red.to_json()


def suite_relations(res: SuiteResult):
    S4 = named_basis(4)
    rels = find_relations(S4, (6,), 12, S4_RELATION_ORDER, normalization="gordan")
    res.check("Cov(S4) slice (6, 12) kernel dimension", 1, len(rels))
    if rels:
        res.check("Cov(S4) relation coefficients", True, proportional(relation_pattern(rels[0]), ref.S4_RELATION))
    S6 = named_basis(6)
    rels6 = find_relations(S6, (6,), 24, S6_RELATION_ORDER, normalization="gordan")
    res.check("Cov(S6) slice (6, 24) kernel dimension", 1, len(rels6))
    if rels6:
        res.check("h3_12 square relation coefficients", True,
                  proportional(relation_pattern(rels6[0]), ref.S6_H3_12_RELATION))
    res.artifacts["relations.json"] = json.dumps([r.to_dict() for r in rels + rels6])


S6_LEADS = [{g: 2} for g in ("h12_2", "h10_2", "h8_2", "h7_2", "h9_4", "h7_4", "h5_4", "h6_6a",
                               "h6_6b", "h3_12", "h5_8", "h4_10")] + [{"h12_2": 1, "h10_2": 1}]
S4_LEADS = [{"k3_6": 2}]


def suite_s6s4(res: SuiteResult):
    A, B = named_basis(6), named_basis(4, "v")
    filters = CandidateFilters(relations_a=S6_LEADS, relations_b=S4_LEADS)
    cands = candidate_transvectants(A, B, filters)
    kept = [c for c in cands if c.kept]
    res.check("candidate transvectants", ref.COV_S6_S4_CANDIDATES, len(cands))
    res.check("after relation filtering", ref.COV_S6_S4_FILTERED, len(kept))
    res.check("filtered candidates by order", ref.COV_S6_S4_FILTERED_BY_ORDER,
              dict(sorted(Counter(c.u + c.v for c in kept).items())))
    G = joint_basis(A, B, filters=filters)
    res.check("minimal basis size", 194, len(G))
    res.check("degree/order matrix", ref.COV_S6_S4, degree_order_matrix(G))
    res.check("incomplete slices", [], [list(g[0]) + [g[1]] for g, _, _ in G.report.incomplete])
    res.artifacts["basis.json"] = G.to_json()
    res.artifacts["table.txt"] = render_table(G)


def suite_s8(res: SuiteResult, degree_bound: int = 12, verify_bound: int = 14):
    G = simple_basis(8, {4: simple_basis(4)}, degree_bound=degree_bound)
    res.check("Cov(S8) basis size", ref.SIMPLE_COUNTS[8], len(G))
    res.check("Cov(S8) degree/order list", sorted(ref.COV_S8), sorted((g.degree, g.order) for g in G))
    rep = verify_generation(G, verify_bound)
    res.check(f"generation verified up to degree {verify_bound}", True, rep.full)
    res.check("no redundant generator", True, rep.minimal)
    res.artifacts["basis.json"] = G.to_json()
    res.artifacts["table.txt"] = render_table(G)
    res.artifacts["verification.json"] = json.dumps(rep.to_dict())


SUITES: Dict[str, Callable[[SuiteResult], None]] = {
    "s3s4": suite_s3s4, "s6s2": suite_s6s2, "simple": suite_simple, "dims": suite_dims,
    "diophantine": suite_diophantine, "relations": suite_relations,
    "s6s4": suite_s6s4, "s8": suite_s8,
}
STRETCH = {"s6s4", "s8"}


def run_suite(name: str) -> SuiteResult:
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    res = SuiteResult(name, stretch=name in STRETCH)
    t = time.perf_counter()
    SUITES[name](res)
    res.seconds = time.perf_counter() - t
    res.artifacts["report.json"] = json.dumps(res.to_dict(), indent=1)
    if res.stretch and not res.ok:
        res.artifacts["discrepancies.json"] = json.dumps(res.discrepancies(), indent=1)
    return res


# ------------------------------------------------------------------ tables

def render_table(G: GeneratorSet) -> str:
    """Degree x order count matrix with per-row and cumulative counts."""
    counts = G.degree_order_counts()
    if not counts:
        return "d/o: | # | Cum\n"
    step = 0
    for (_, k) in counts:
        step = gcd(step, k)
    step = step or 1
    orders = list(range(0, max(k for _, k in counts) + 1, step))
    dmax = max(d for d, _ in counts)
    width = max(len(str(n)) for n in counts.values())
    lines = ["d/o: " + " ".join(str(k).rjust(width) for k in orders) + " | # | Cum"]
    cum = 0
    for d in range(1, dmax + 1):
        row = [counts.get((d, k), 0) for k in orders]
        if not any(row):
            continue
        cum += sum(row)
        cells = " ".join((str(n) if n else "–").rjust(width) for n in row)
        lines.append(f"{d}: {cells} | {sum(row)} | {cum}")
    totals = [sum(counts.get((d, k), 0) for d in range(dmax + 1)) for k in orders]
    lines.append("Tot: " + " ".join(str(t) for t in totals) + f" | {cum}")
    return "\n".join(lines) + "\n"

