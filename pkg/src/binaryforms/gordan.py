"""Gordan's algorithm: joint covariants, adjunction of a quadratic form, the
simple-form iteration, relations between generators and minimization.

Linear algebra on a graded slice is done on sources evaluated modulo a
large prime at random points (see ``evaluation``).  Modular ranks never
exceed true ranks, and true ranks never exceed the Cayley-Sylvester
dimension, so a slice whose modular rank reaches that dimension is
certified spanned, and every accepted generator is certified independent
of the products of earlier ones.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .dimension import DimQuery, covariant_dimension
from .diophantine import DiophantineSystem, hilbert_basis
from .evaluation import PRIME, ModSpan, ModularEvaluator, as_node, audit_recipe, exact_covariant
from .forms import (Atom, FormSpace, Node, Prod, Trans, format_recipe, parse_recipe, product,
                    recipe_grading, rename_slots, substitute_atoms)
from .kernel import ExactMatrix, MultiPoly, UsageError, exact_kernel

log = logging.getLogger(__name__)

Grade = Tuple[Tuple[int, ...], int]


@dataclass
class Generator:
    recipe: str
    multidegree: Tuple[int, ...]
    order: int
    provenance: str = ""
    label: Optional[str] = None

    @property
    def name(self) -> str:
        return self.label or self.recipe

    @property
    def degree(self) -> int:
        return sum(self.multidegree)

    @property
    def grade(self) -> Grade:
        return (tuple(self.multidegree), self.order)

    @property
    def index_r(self) -> int:
        node = parse_recipe(self.recipe)
        return node.r if isinstance(node, Trans) else 0

    def to_dict(self) -> dict:
        d = {"recipe": self.recipe, "multidegree": list(self.multidegree), "order": self.order,
             "provenance": self.provenance}
        if self.label is not None:
            d["label"] = self.label
        return d


def make_generator(recipe: Union[str, Node], space: FormSpace, provenance: str = "",
                   label: Optional[str] = None) -> Generator:
    node = as_node(recipe)
    md, order = recipe_grading(node, space)
    return Generator(format_recipe(node), tuple(md), order, provenance, label)


@dataclass
class MinimizeReport:
    incomplete: List[Tuple[Grade, int, int]] = field(default_factory=list)  # (grade, dim, rank)
    candidates: int = 0
    slices: int = 0
    points: int = 0


class GeneratorSet:
    """Generators with recipes, per-(multidegree, order) counts and provenance."""

    def __init__(self, space: Optional[FormSpace], generators: Iterable[Generator] = (),
                 report: Optional[MinimizeReport] = None):
        self.space = space
        self.generators: List[Generator] = list(generators)
        self.report = report
        self.stats: Dict[str, int] = {}

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    def __eq__(self, other):
        return (isinstance(other, GeneratorSet) and self.space == other.space
                and [g.to_dict() for g in self.generators] == [g.to_dict() for g in other.generators])

    def __repr__(self):
        return f"GeneratorSet({self.space}, {len(self)} generators)"

    def counts(self) -> Dict[Grade, int]:
        out: Dict[Grade, int] = {}
        for g in self.generators:
            out[g.grade] = out.get(g.grade, 0) + 1
        return out

    def degree_order_counts(self) -> Dict[Tuple[int, int], int]:
        out: Dict[Tuple[int, int], int] = {}
        for g in self.generators:
            key = (g.degree, g.order)
            out[key] = out.get(key, 0) + 1
        return out

    def order_totals(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for g in self.generators:
            out[g.order] = out.get(g.order, 0) + 1
        return dict(sorted(out.items()))

    def invariants(self) -> List[int]:
        return [i for i, g in enumerate(self.generators) if g.order == 0]

    def non_invariants(self) -> List[int]:
        return [i for i, g in enumerate(self.generators) if g.order > 0]

    def index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.label == name:
                return i
        for i, g in enumerate(self.generators):
            if g.recipe == name:
                return i
        raise UsageError(f"no generator named {name!r}")

    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    def recipes(self) -> List[str]:
        return [g.recipe for g in self.generators]

    def substituted(self, space: FormSpace, mapping: Mapping[str, Node], provenance: str) -> "GeneratorSet":
        """Replace slot atoms by recipes; labels keep the original names."""
        gens = [make_generator(substitute_atoms(parse_recipe(g.recipe), dict(mapping)), space,
                               provenance, g.name) for g in self.generators]
        return GeneratorSet(space, gens)

    def audit(self, seed: int = 0) -> List[Tuple[str, Dict[str, bool]]]:
        """Generators failing the modular homogeneity/equivariance/nonzero checks."""
        bad = []
        for i, g in enumerate(self.generators):
            res = audit_recipe(g.recipe, self.space, seed=seed + i)
            if not all(res.values()):
                bad.append((g.name, res))
        return bad

    def to_json(self) -> str:
        d: dict = {"generators": [g.to_dict() for g in self.generators],
                   "counts": {f"{','.join(map(str, md))}:{k}": n
                              for (md, k), n in sorted(self.counts().items(), key=lambda t: (sum(t[0][0]), t[0][1], t[0][0]))}}
        if self.space is not None:
            d["space"] = {"orders": list(self.space.orders), "names": list(self.space.names)}
        return json.dumps(d, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "GeneratorSet":
        d = json.loads(text)
        space = None
        if "space" in d:
            space = FormSpace(d["space"]["orders"], d["space"]["names"])
        gens = []
        for g in d.get("generators", []):
            gens.append(Generator(g["recipe"], tuple(g["multidegree"]), int(g["order"]),
                                  g.get("provenance", ""), g.get("label")))
        out = cls(space, gens)
        if "counts" in d:
            recount = {f"{','.join(map(str, md))}:{k}": n for (md, k), n in out.counts().items()}
            if recount != d["counts"]:
                raise UsageError("counts table does not match the generators")
        return out


# ---------------------------------------------------------------- named bases

_NAMED = {
    1: [("f", "f")],
    2: [("f", "f"), ("delta", "T(f, f, 2)")],
    3: [("f", "f"), ("H", "T(f, f, 2)"), ("T", "T(f, T(f, f, 2), 1)"),
        ("Delta", "T(T(f, f, 2), T(f, f, 2), 2)")],
    4: [("v", "f"), ("k2_4", "T(f, f, 2)"), ("k3_6", "T(f, T(f, f, 2), 1)"),
        ("i", "T(f, f, 4)"), ("j", "T(f, T(f, f, 2), 4)")],
}

_S6 = {
    "f": "f", "h2_0": "T(f, f, 6)", "h2_4": "T(f, f, 4)", "h2_8": "T(f, f, 2)",
    "h3_2": "T(h2_4, f, 4)", "h3_6": "T(h2_4, f, 2)", "h3_8": "T(h2_4, f, 1)", "h3_12": "T(h2_8, f, 1)",
    "h4_0": "T(h2_4, h2_4, 4)", "h4_4": "T(h3_2, f, 2)", "h4_6": "T(h3_2, f, 1)", "h4_10": "T(h2_8, h2_4, 1)",
    "h5_2": "T(h2_4, h3_2, 2)", "h5_4": "T(h2_4, h3_2, 1)", "h5_8": "T(h2_8, h3_2, 1)",
    "h6_0": "T(h3_2, h3_2, 2)", "h6_6a": "T(h3_8, h3_2, 2)", "h6_6b": "T(h3_6, h3_2, 1)",
    "h7_2": "T(f, h3_2^2, 4)", "h7_4": "T(f, h3_2^2, 3)", "h8_2": "T(h2_4, h3_2^2, 3)",
    "h9_4": "T(h3_8, h3_2^2, 4)", "h10_0": "T(h3_2^3, f, 6)", "h10_2": "T(h3_2^3, f, 5)",
    "h12_2": "T(h3_8, h3_2^3, 6)", "h15_0": "T(h3_8, h3_2^4, 8)",
}

# generator order used by the sextic relations, greatest first
S6_RELATION_ORDER = ["h3_12", "h4_10", "h5_8", "h8_2", "h10_2", "h12_2", "h9_4", "h7_2", "h5_2",
                     "h7_4", "h3_8", "h6_6b", "h6_6a", "h2_8", "h5_4", "h4_6", "h3_6", "f", "h4_4",
                     "h2_4", "h3_2", "h15_0", "h10_0", "h6_0", "h4_0", "h2_0"]
S4_RELATION_ORDER = ["k3_6", "k2_4", "v", "i", "j"]


def named_basis(n: int, slot: str = "f") -> GeneratorSet:
    """Classical minimal bases of Cov(S_n) for n in 1, 2, 3, 4, 6, with labels."""
    space = FormSpace((n,), (slot,))
    if n == 6:
        atoms = {}
        for name, rec in _S6.items():
            atoms[name] = substitute_atoms(parse_recipe(rec), atoms)
        items = [(name, atoms[name]) for name in _S6]
    elif n in _NAMED:
        items = [(name, parse_recipe(rec)) for name, rec in _NAMED[n]]
    else:
        raise UsageError(f"no built-in basis for S{n}")
    if slot != "f":
        items = [(name, rename_slots(node, {"f": slot})) for name, node in items]
    gens = [make_generator(node, space, "classical", name) for name, node in items]
    gens.sort(key=lambda g: (g.degree, g.order, g.recipe))
    return GeneratorSet(space, gens)


# ------------------------------------------------------------- slice engine

class _NeedPoints(Exception):
    def __init__(self, points):
        self.points = points


def _sub_grade(a: Grade, b: Grade) -> Optional[Grade]:
    md = tuple(x - y for x, y in zip(a[0], b[0]))
    k = a[1] - b[1]
    if min(md, default=0) < 0 or k < 0 or (not any(md)):
        return None
    return (md, k)


def _grade_key(g: Grade):
    return (sum(g[0]), g[1], g[0])


class _Engine:
    """Bases of graded slices of the algebra generated by accepted generators."""

    def __init__(self, space: FormSpace, evaluator: ModularEvaluator, margin: int = 8):
        self.space = space
        self.ev = evaluator
        self.margin = margin
        self.gens: List[Generator] = []
        self._src = np.zeros((16, evaluator.points), dtype=np.int64)
        self.by_grade: Dict[Grade, List[int]] = {}
        self.bases: Dict[Grade, List[Tuple[int, ...]]] = {}
        self._dims: Dict[Grade, int] = {}

    def dim(self, grade: Grade) -> int:
        if grade not in self._dims:
            self._dims[grade] = covariant_dimension(DimQuery(self.space.orders, grade[0], grade[1]))
        return self._dims[grade]

    def cols(self, grade: Grade) -> int:
        c = self.dim(grade) + self.margin
        if c > self.ev.points:
            raise _NeedPoints(c)
        return c

    def _add(self, gen: Generator, src: np.ndarray) -> int:
        idx = len(self.gens)
        if idx >= self._src.shape[0]:
            grown = np.zeros((2 * self._src.shape[0], self._src.shape[1]), dtype=np.int64)
            grown[:idx] = self._src[:idx]
            self._src = grown
        self._src[idx] = src
        self.gens.append(gen)
        self.by_grade.setdefault(gen.grade, []).append(idx)
        return idx

    def values(self, monomials: Sequence[Tuple[int, ...]], cols: int) -> np.ndarray:
        out = np.empty((len(monomials), cols), dtype=np.int64)
        S = self._src[: len(self.gens), :cols]
        groups: Dict[int, List[int]] = {}
        for i, m in enumerate(monomials):
            groups.setdefault(len(m), []).append(i)
        for L, rows in groups.items():
            idx = np.array([monomials[i] for i in rows], dtype=np.int64)
            acc = S[idx[:, 0]].copy()
            for t in range(1, L):
                acc = (acc * S[idx[:, t]]) % PRIME
            out[rows] = acc
        return out

    def _blocks(self, grade: Grade, cols: int) -> Iterator[Tuple[List[Tuple[int, ...]], np.ndarray]]:
        seen = set()
        lowers = []
        for gi, g in enumerate(self.gens):
            low = _sub_grade(grade, g.grade)
            if low is not None and self.dim(low):
                lowers.append((-self.dim(low), gi, low))
        lowers.sort()
        for _, gi, low in lowers:
            mons = []
            for m in self.basis(low):
                mm = tuple(sorted(m + (gi,)))
                if mm not in seen:
                    seen.add(mm)
                    mons.append(mm)
            if mons:
                yield mons, self.values(mons, cols)

    def basis(self, grade: Grade) -> List[Tuple[int, ...]]:
        if grade not in self.bases:
            self.process(grade, [])
        return self.bases[grade]

    def process(self, grade: Grade, candidates: Sequence[Generator]) -> Tuple[List[Generator], int]:
        """Fill the slice with products, then candidates in the given order.

        Returns the accepted candidates and the final modular rank.
        """
        dim = self.dim(grade)
        if dim == 0:
            self.bases[grade] = []
            return [], 0
        cols = self.cols(grade)
        span = ModSpan(cols)
        chosen: List[Tuple[int, ...]] = []
        for mons, V in self._blocks(grade, cols):
            if span.rank >= dim:
                break
            mask = span.add(V, stop_at=dim)
            chosen.extend(m for m, keep in zip(mons, mask) if keep)
        for gi in self.by_grade.get(grade, []):
            if span.rank < dim and span.add(self._src[gi: gi + 1, :cols], stop_at=dim)[0]:
                chosen.append((gi,))
        accepted = []
        for cand in candidates:
            if span.rank >= dim:
                break
            src = self.ev.source(cand.recipe)
            if span.add(src[None, :cols], stop_at=dim)[0]:
                gi = self._add(cand, src)
                chosen.append((gi,))
                accepted.append(cand)
        if span.rank > dim:
            raise ArithmeticError(f"slice {grade} has rank {span.rank} above its dimension {dim}")
        self.bases[grade] = chosen
        return accepted, span.rank


def _required_points(space: FormSpace, grades: Iterable[Grade], margin: int) -> int:
    best = 0
    for g in grades:
        best = max(best, covariant_dimension(DimQuery(space.orders, g[0], g[1])))
    return max(32, best + margin)


def _as_generators(items, space: FormSpace) -> List[Generator]:
    out = []
    for it in items:
        if isinstance(it, Generator):
            out.append(it)
        elif isinstance(it, CandidateTransvectant):
            out.append(make_generator(it.node, space, it.provenance))
        else:
            out.append(make_generator(it, space, "input"))
    return out


def minimize(candidates: Sequence, space: FormSpace, bound: Optional[int] = None,
             complete: bool = True, normalization: str = "paper", seed: int = 0,
             margin: int = 8, preserve_order: bool = False) -> GeneratorSet:
    """Keep the candidates that enlarge their slice modulo products of earlier ones.

    Slices are visited by increasing total degree, then order.  Within a
    slice candidates are tried by increasing outer transvectant index and
    then recipe string (``preserve_order`` keeps the given order instead).
    With ``complete`` set, each visited slice is expected to reach its
    Cayley-Sylvester dimension and shortfalls are listed in the report.
    Without it the result generates the same algebra as the candidates.
    """
    gens = [g for g in _as_generators(candidates, space)
            if g.order >= 0 and (bound is None or g.degree <= bound)]
    by_grade: Dict[Grade, List[Generator]] = {}
    for g in gens:
        if g.order < 0 or not any(g.multidegree):
            continue
        by_grade.setdefault(g.grade, []).append(g)
    for grade, lst in by_grade.items():
        if not preserve_order:
            lst.sort(key=lambda g: (g.index_r, g.recipe))
        dedup, seen = [], set()
        for g in lst:
            if g.recipe not in seen:
                seen.add(g.recipe)
                dedup.append(g)
        by_grade[grade] = dedup
    points = _required_points(space, by_grade, margin)
    while True:
        try:
            return _minimize_run(by_grade, space, complete, normalization, seed, margin, points, len(gens))
        except _NeedPoints as e:
            points = max(2 * points, e.points + margin)
            log.info("restarting minimization with %d evaluation points", points)


def _minimize_run(by_grade, space, complete, normalization, seed, margin, points, ncand) -> GeneratorSet:
    ev = ModularEvaluator(space, points=points, seed=seed, normalization=normalization)
    eng = _Engine(space, ev, margin)
    report = MinimizeReport(candidates=ncand, points=points)
    accepted: List[Generator] = []
    for grade in sorted(by_grade, key=_grade_key):
        acc, rank = eng.process(grade, by_grade[grade])
        accepted.extend(acc)
        report.slices += 1
        log.debug("slice %s: dimension %d, rank %d, %d of %d candidates kept",
                  grade, eng.dim(grade), rank, len(acc), len(by_grade[grade]))
        if complete and rank < eng.dim(grade):
            report.incomplete.append((grade, eng.dim(grade), rank))
    return GeneratorSet(space, accepted, report)


# --------------------------------------------------------------- verification

@dataclass
class GenerationReport:
    bound: int
    slices: int
    deficient: List[Tuple[Grade, int, int]]  # (grade, dimension, rank)
    redundant: List[str]

    @property
    def full(self) -> bool:
        return not self.deficient

    @property
    def minimal(self) -> bool:
        return not self.redundant

    def to_dict(self) -> dict:
        return {"bound": self.bound, "slices": self.slices, "full": self.full, "minimal": self.minimal,
                "deficient": [{"multidegree": list(g[0]), "order": g[1], "dimension": d, "rank": r}
                              for g, d, r in self.deficient],
                "redundant": self.redundant}


def all_grades(orders: Sequence[int], bound: int) -> List[Grade]:
    """Nonzero graded slices with total degree at most ``bound``."""
    out = []

    def degs(i, left, acc):
        if i == len(orders):
            yield tuple(acc)
            return
        for d in range(left + 1):
            yield from degs(i + 1, left - d, acc + [d])

    for md in degs(0, bound, []):
        if not any(md):
            continue
        W = sum(n * d for n, d in zip(orders, md))
        for k in range(W % 2, W + 1, 2):
            if covariant_dimension(DimQuery(tuple(orders), md, k)):
                out.append((md, k))
    out.sort(key=_grade_key)
    return out


def verify_generation(G: GeneratorSet, bound: Optional[int] = None, seed: int = 1,
                      normalization: str = "paper", margin: int = 8) -> GenerationReport:
    """Check every slice up to ``bound`` is spanned by monomials in G.

    Also lists generators lying in the span of products of the others
    (which makes the set non-minimal).  The default bound is the largest
    generator degree plus two.
    """
    space = G.space
    if bound is None:
        bound = max((g.degree for g in G), default=0) + 2
    grades = all_grades(space.orders, bound)
    by_grade: Dict[Grade, List[Generator]] = {}
    for g in G:
        by_grade.setdefault(g.grade, []).append(g)
    extra = [g for g in by_grade if g not in set(grades) and sum(g[0]) <= bound]
    grades = sorted(set(grades) | set(extra), key=_grade_key)
    points = _required_points(space, grades, margin)
    while True:
        try:
            ev = ModularEvaluator(space, points=points, seed=seed, normalization=normalization)
            eng = _Engine(space, ev, margin)
            deficient, redundant = [], []
            for grade in grades:
                cands = by_grade.get(grade, [])
                acc, rank = eng.process(grade, cands)
                ids = {id(a) for a in acc}
                redundant.extend(c.name for c in cands if id(c) not in ids)
                if rank < eng.dim(grade):
                    deficient.append((grade, eng.dim(grade), rank))
            return GenerationReport(bound, len(grades), deficient, redundant)
        except _NeedPoints as e:
            points = max(2 * points, e.points + margin)


# ---------------------------------------------------------------- candidates

@dataclass
class CandidateTransvectant:
    solution: Tuple[int, ...]
    U: Tuple[int, ...]          # exponents over the first family
    V: Tuple[int, ...]          # exponents over the second family
    r: int
    node: Node = field(repr=False)
    degree: int = 0
    status: str = "kept"
    reason: Optional[str] = None
    provenance: str = "transvectant"

    @property
    def recipe(self) -> str:
        return format_recipe(self.node)

    @property
    def u(self) -> int:
        return self.solution[-3]

    @property
    def v(self) -> int:
        return self.solution[-2]

    @property
    def kept(self) -> bool:
        return self.status == "kept"


@dataclass
class CandidateFilters:
    """Optional pruners, applied in order: order bound, total degree bound,
    relation leading monomials, invariant-ideal monomials.  Solutions above
    the degree bound are skipped while solving and never listed.  Monomials are given as Relations,
    dicts name -> exponent, or exponent tuples over the family."""

    order_bound: bool = True
    degree_bound: Optional[int] = None
    relations_a: Sequence = ()
    relations_b: Sequence = ()
    invariant_monomials_a: Sequence = ()
    invariant_monomials_b: Sequence = ()


def _resolve_monomial(item, G: GeneratorSet) -> Tuple[int, ...]:
    if isinstance(item, Relation):
        item = item.lead_dict()
    if isinstance(item, Mapping):
        e = [0] * len(G)
        for name, k in item.items():
            e[G.index(name)] += int(k)
        return tuple(e)
    t = tuple(int(k) for k in item)
    if len(t) != len(G):
        raise UsageError("monomial exponent vector does not match the generator family")
    return t


def _divides(m: Sequence[int], e: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(m, e))


def joint_space(A: GeneratorSet, B: GeneratorSet) -> Tuple[FormSpace, Dict[str, str]]:
    """Space carrying both families, with the renaming applied to B's slots."""
    if A.space == B.space:
        return A.space, {}
    used = set(A.space.names)
    rename = {}
    pool = [c for c in "fghpqstwuvz" if c not in used and c not in B.space.names]
    for nm in B.space.names:
        if nm in used:
            rename[nm] = pool.pop(0)
        used.add(rename.get(nm, nm))
    names = list(A.space.names) + [rename.get(n, n) for n in B.space.names]
    return FormSpace(A.space.orders + B.space.orders, names), rename


def _embed(G: GeneratorSet, space: FormSpace, rename: Mapping[str, str], provenance=None) -> List[Generator]:
    return [make_generator(rename_slots(parse_recipe(g.recipe), dict(rename)), space,
                           provenance or g.provenance, g.label) for g in G]


def candidate_transvectants(A: GeneratorSet, B: GeneratorSet,
                            filters: Optional[CandidateFilters] = None) -> List[CandidateTransvectant]:
    """Transvectants <U, V>_r attached to irreducible solutions of the system
    built from the orders of the non-invariant generators of A and B."""
    if not len(A) and not len(B):
        raise UsageError("at least one family must be nonempty")
    filters = filters or CandidateFilters()
    space, rename = joint_space(A, B)
    a_nodes = [parse_recipe(g.recipe) for g in A]
    b_nodes = [rename_slots(parse_recipe(g.recipe), rename) for g in B]
    ia, ib = A.non_invariants(), B.non_invariants()
    system = DiophantineSystem([A[i].order for i in ia], [B[j].order for j in ib])
    lead_a = [_resolve_monomial(m, A) for m in filters.relations_a]
    lead_b = [_resolve_monomial(m, B) for m in filters.relations_b]
    inv_a = [_resolve_monomial(m, A) for m in filters.invariant_monomials_a]
    inv_b = [_resolve_monomial(m, B) for m in filters.invariant_monomials_b]
    amax = max((A[i].order for i in ia), default=0)
    bmax = max((B[j].order for j in ib), default=0)
    out = []
    weights = [A[i].degree for i in ia] + [B[j].degree for j in ib]
    for sol in hilbert_basis(system, weights, filters.degree_bound):
        U = [0] * len(A)
        V = [0] * len(B)
        for t, i in enumerate(ia):
            U[i] = sol[t]
        for t, j in enumerate(ib):
            V[j] = sol[len(ia) + t]
        r = sol[-1]
        un = product([(a_nodes[i], e) for i, e in enumerate(U) if e])
        vn = product([(b_nodes[j], e) for j, e in enumerate(V) if e])
        node = product([(un, 1), (vn, 1)]) if r == 0 else Trans(un, vn, r)
        deg = sum(e * A[i].degree for i, e in enumerate(U)) + sum(e * B[j].degree for j, e in enumerate(V))
        c = CandidateTransvectant(tuple(sol), tuple(U), tuple(V), r, node, deg)
        if filters.order_bound and ia and ib and sol[-3] + sol[-2] >= amax + bmax:
            c.status, c.reason = "pruned", "order bound u+v >= a+b"
        elif filters.degree_bound is not None and deg > filters.degree_bound:
            c.status, c.reason = "pruned", "above the degree bound"
        elif any(_divides(m, U) for m in lead_a) or any(_divides(m, V) for m in lead_b):
            c.status, c.reason = "pruned", "divisible by a relation leading monomial"
        elif any(_divides(m, U) for m in inv_a) or any(_divides(m, V) for m in inv_b):
            c.status, c.reason = "pruned", "in the ideal generated by invariants"
        out.append(c)
    return out


def evaluate_candidate(c: CandidateTransvectant, space: FormSpace, normalization: str = "paper"):
    """Exact covariant of a candidate, with its grading checked against u + v."""
    cov = exact_covariant(c.node, space, normalization)
    if not cov.is_zero() and cov.order != c.u + c.v:
        raise ArithmeticError(f"candidate {c.recipe} has order {cov.order}, expected {c.u + c.v}")
    if not cov.audit():
        raise ArithmeticError(f"candidate {c.recipe} fails the homogeneity audit")
    return cov


# ---------------------------------------------------------------- algorithms

def joint_basis(A: GeneratorSet, B: GeneratorSet, relations_a: Sequence = (), relations_b: Sequence = (),
                filters: Optional[CandidateFilters] = None, normalization: str = "paper",
                seed: int = 0) -> GeneratorSet:
    """Minimal basis of Cov(V1 + V2) from bases of Cov(V1) and Cov(V2)."""
    if filters is None:
        filters = CandidateFilters(relations_a=relations_a, relations_b=relations_b)
    space, rename = joint_space(A, B)
    cands = candidate_transvectants(A, B, filters)
    kept = [c for c in cands if c.kept]
    invs = [g for g in _embed(A, space, {}, "invariant") if g.order == 0]
    invs += [g for g in _embed(B, space, rename, "invariant") if g.order == 0]
    out = minimize(invs + [make_generator(c.node, space, "transvectant") for c in kept],
                   space, normalization=normalization, seed=seed)
    out.stats = {"candidates": len(cands), "kept": len(kept), "invariants": len(invs)}
    return out


def adjoin_s2(V: GeneratorSet, slot: Optional[str] = None, normalization: str = "paper",
              seed: int = 0) -> GeneratorSet:
    """Minimal basis of Cov(V + S2) from a basis h_1..h_s of Cov(V)."""
    if slot is None:
        slot = next(c for c in "uvwzpqst" if c not in V.space.names)
    space = FormSpace(V.space.orders + (2,), V.space.names + (slot,))
    u = Atom(slot)
    hs = _embed(V, space, {})
    nodes = [parse_recipe(h.recipe) for h in hs]
    cands: List[Generator] = list(hs)
    cands.append(make_generator(u, space, "quadratic"))
    cands.append(make_generator(Trans(u, u, 2), space, "quadratic"))

    def upow(r):
        return product([(u, r)])

    for h, node in zip(hs, nodes):
        k = h.order
        for r in range(1, k // 2 + 2):
            if 2 * r - 1 <= k:
                cands.append(make_generator(Trans(node, upow(r), 2 * r - 1), space, "odd index"))
            if 2 * r <= k:
                cands.append(make_generator(Trans(node, upow(r), 2 * r), space, "even index"))
    odd = [i for i, h in enumerate(hs) if h.order % 2 == 1]
    for a in range(len(odd)):
        for b in range(a, len(odd)):
            i, j = odd[a], odd[b]
            r = (hs[i].order + hs[j].order) // 2
            pair = product([(nodes[i], 1), (nodes[j], 1)])
            cands.append(make_generator(Trans(pair, upow(r), 2 * r), space, "odd pair"))
    out = minimize(cands, space, normalization=normalization, seed=seed)
    out.stats = {"candidates": len(cands)}
    return out


def _nonzero(recipe: Node, space: FormSpace, normalization: str) -> bool:
    ev = ModularEvaluator(space, points=4, seed=99, normalization=normalization)
    return bool(ev.coefficients(recipe).any())


def _default_leads(p: int, base: GeneratorSet) -> List[Tuple[int, ...]]:
    # Cov(S4): the only relation, led by the square of the (3, 6) generator
    if p != 4:
        return []
    idx = [i for i, g in enumerate(base) if g.degree == 3 and g.order == 6]
    if len(idx) != 1:
        return []
    e = [0] * len(base)
    e[idx[0]] = 2
    return [tuple(e)]


def simple_basis(n: int, known_bases: Optional[Mapping[int, GeneratorSet]] = None,
                 relations: Optional[Mapping[int, Sequence]] = None, normalization: str = "paper",
                 seed: int = 0, recursive: bool = False,
                 degree_bound: Optional[int] = None) -> GeneratorSet:
    """Minimal basis of Cov(S_n) by the iteration over H_2k = (f, f)_2k.

    ``known_bases`` maps an order p < n to a basis of Cov(S_p), needed
    whenever some H_2k has order p < n (the quadratic case is built in).
    With ``recursive`` the missing ones are computed.  ``relations`` maps p
    to leading monomials used to prune the monomials V over that basis
    (for p = 4 the square of the degree 3 order 6 generator by default).
    ``degree_bound`` drops candidates above that degree at every step; the
    result is then only claimed up to the bound (check with verify_generation).
    """
    if n < 0:
        raise UsageError("order must be nonnegative")
    if n <= 2:
        return named_basis(n) if n else GeneratorSet(FormSpace((0,)), [
            make_generator("f", FormSpace((0,)), "classical", "f")])
    known: Dict[int, GeneratorSet] = {2: named_basis(2)}
    known.update(known_bases or {})
    relations = dict(relations or {})
    space = FormSpace((n,))
    f = Atom("f")
    A = GeneratorSet(space, [make_generator(f, space, "A0", "f")])
    q = n // 2
    last = q - 1 if n % 2 == 0 else q
    for k in range(1, last + 1):
        H = Trans(f, f, 2 * k)
        p = 2 * n - 4 * k
        extra: List[Generator] = []
        rel_b: Sequence = ()
        if p > n:
            B = GeneratorSet(space, [make_generator(H, space, f"H{2 * k}", f"H{2 * k}")])
        elif p == n:
            B = GeneratorSet(space, [make_generator(H, space, f"H{2 * k}", f"H{2 * k}")])
            delta = Trans(Trans(f, f, n // 2), f, n)
            if _nonzero(delta, space, normalization):
                extra.append(make_generator(delta, space, "triangle", "Delta"))
            else:
                log.info("triangle invariant vanishes for n=%d; continuing without it", n)
        else:
            if p not in known:
                if not recursive:
                    raise UsageError(f"a covariant basis of S{p} is required for S{n}")
                known[p] = simple_basis(p, known, relations, normalization, seed, True, degree_bound)
            base = known[p]
            slot = base.space.names[0]
            B = base.substituted(space, {slot: H}, f"S{p} basis at H{2 * k}")
            rel_b = relations[p] if p in relations else _default_leads(p, base)
        cands = candidate_transvectants(A, B, CandidateFilters(relations_b=rel_b, degree_bound=degree_bound))
        family = [make_generator(c.node, space, f"C{k}") for c in cands if c.kept]
        family += [g for g in A if g.order == 0] + [g for g in B if g.order == 0] + extra
        A = minimize(family, space, bound=degree_bound, complete=False,
                     normalization=normalization, seed=seed)
        log.info("S%d step %d: %d candidates, %d kept", n, k, len(family), len(A))
    final = list(A)
    if n % 2 == 0:
        final.append(make_generator(Trans(f, f, n), space, f"H{n}"))
    return minimize(final, space, bound=degree_bound, complete=True,
                    normalization=normalization, seed=seed)


# ---------------------------------------------------------------- relations

SHAPES = ("single-power", "two-factor", "invariant-multiple", "general")


@dataclass
class Relation:
    """sum_t coefficient_t * monomial_t = 0 over named generators.

    Monomials are exponent vectors in the declared generator order
    (greatest first); the leading monomial is the lexicographically largest.
    """

    generators: Tuple[str, ...]
    terms: Tuple[Tuple[int, Tuple[int, ...]], ...]
    shape: str
    invariant_flags: Tuple[bool, ...] = ()

    @property
    def lead(self) -> Tuple[int, ...]:
        return self.terms[0][1]

    def lead_dict(self) -> Dict[str, int]:
        return {g: e for g, e in zip(self.generators, self.lead) if e}

    @property
    def lhs(self) -> Tuple[int, ...]:
        return self.lead

    @property
    def rhs(self) -> List[Tuple[Fraction, Tuple[int, ...]]]:
        c0 = self.terms[0][0]
        return [(Fraction(-c, c0), m) for c, m in self.terms[1:]]

    def coefficients(self) -> List[int]:
        return [c for c, _ in self.terms]

    def monomial_string(self, m: Sequence[int]) -> str:
        parts = [g if e == 1 else f"{g}^{e}" for g, e in zip(self.generators, m) if e]
        return "*".join(parts) or "1"

    def __str__(self):
        s = " + ".join(f"({c})*{self.monomial_string(m)}" for c, m in self.terms)
        return f"{s} = 0  [{self.shape}]"

    def to_dict(self) -> dict:
        return {"generators": list(self.generators), "shape": self.shape,
                "terms": [{"coefficient": c, "monomial": list(m)} for c, m in self.terms]}


def _classify(terms, invariant_flags) -> str:
    lead = terms[0][1]
    others = [m for _, m in terms[1:]]
    support = [i for i, e in enumerate(lead) if e]
    if len(support) == 1:
        i = support[0]
        if all(all(e == 0 for e in m[:i]) and m[i] < lead[i] for m in others):
            return "single-power"
    if len(support) == 2:
        c = support[1]
        if all(all(e == 0 for e in m[: c + 1]) for m in others):
            return "two-factor"
    if others and all(any(e and invariant_flags[i] for i, e in enumerate(m)) for m in others):
        return "invariant-multiple"
    return "general"


def slice_monomials(G: GeneratorSet, multidegree: Sequence[int], order: int) -> List[Tuple[int, ...]]:
    """Exponent vectors over G of all monomials in the given slice."""
    target = (tuple(multidegree), order)
    gens = list(G)
    out = []

    def rec(i, md, k, acc):
        if i == len(gens):
            if md == target[0] and k == order:
                out.append(tuple(acc))
            return
        g = gens[i]
        e = 0
        while True:
            nmd = tuple(a + e * b for a, b in zip(md, g.multidegree))
            nk = k + e * g.order
            if any(a > b for a, b in zip(nmd, target[0])) or nk > order:
                break
            rec(i + 1, nmd, nk, acc + [e])
            if not any(g.multidegree):
                break
            e += 1

    rec(0, tuple([0] * len(G.space)), 0, [])
    return [m for m in out if any(m)]


def find_relations(G: GeneratorSet, multidegree: Sequence[int], order: int,
                   generator_order: Optional[Sequence[str]] = None,
                   normalization: str = "paper") -> List[Relation]:
    """Exact kernel of the evaluation map on the monomials of one slice."""
    names = list(generator_order) if generator_order is not None else G.names()
    if sorted(names) != sorted(G.names()):
        raise UsageError("the generator order must list every generator exactly once")
    perm = [G.index(nm) for nm in names]
    mons = slice_monomials(G, multidegree, order)
    if not mons:
        return []
    used = sorted({i for m in mons for i, e in enumerate(m) if e})
    cache: dict = {}
    sources = {i: exact_covariant(G[i].recipe, G.space, normalization, cache).coeffs()[0] for i in used}
    vs = G.space.varspace
    polys = []
    for m in mons:
        p = MultiPoly.const(vs, 1)
        for i, e in enumerate(m):
            if e:
                p = p * sources[i] ** e
        polys.append(p)
    keys = sorted({k for p in polys for k in p.terms})
    row = {k: t for t, k in enumerate(keys)}
    entries = {}
    for j, p in enumerate(polys):
        for k, c in p.terms.items():
            entries[(row[k], j)] = c
    kernel = exact_kernel(ExactMatrix(len(keys), len(mons), entries))
    flags = tuple(G[i].order == 0 for i in perm)
    out = []
    for vec in kernel:
        vec = [Fraction(x) for x in vec]
        den = 1
        for x in vec:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in vec]
        g = 0
        for x in ints:
            g = gcd(g, abs(x))
        ints = [x // g for x in ints]
        terms = [(c, tuple(mons[j][i] for i in perm)) for j, c in enumerate(ints) if c]
        terms.sort(key=lambda t: t[1], reverse=True)
        if terms[0][0] < 0:
            terms = [(-c, m) for c, m in terms]
        out.append(Relation(tuple(names), tuple(terms), _classify(terms, flags), flags))
    return out


def check_relation(rel: Relation, G: GeneratorSet, normalization: str = "paper") -> bool:
    """Expand every monomial of the relation as a covariant and add them up exactly."""
    cache: dict = {}
    total = None
    for c, m in rel.terms:
        factors = [(parse_recipe(G[G.index(nm)].recipe), e) for nm, e in zip(rel.generators, m) if e]
        cov = exact_covariant(product(factors), G.space, normalization, cache)
        term = cov.value * c
        total = term if total is None else total + term
    return total is not None and total.is_zero
