"""Transvectants, the Cayley operator and molecular covariants.

The canonical normalization is

    (f, g)_r = (n-r)! (p-r)! [Omega^r f(x_a) g(x_b)] at x_a = x_b = x,

with Omega = d/dx_a d/dy_b - d/dy_a d/dx_b.  Passing ``normalization="gordan"``
divides the result by n! p!, which is the scaling in which
(a_x^n, b_x^p)_r = (ab)^r a_x^(n-r) b_x^(p-r).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .forms import BinaryForm, Covariant, FormSpace, generic_form
from .kernel import ExactMatrix, MultiPoly, UsageError, VarSpace, exact_kernel

NORMALIZATIONS = ("paper", "gordan")


def _ff(a: int, k: int) -> int:
    """Falling factorial a (a-1) ... (a-k+1); zero when k > a."""
    if k > a:
        return 0
    out = 1
    for i in range(k):
        out *= a - i
    return out


@lru_cache(maxsize=None)
def transvectant_table(n: int, p: int, r: int) -> Tuple[Tuple[int, int, int, int], ...]:
    """Integer bilinear table (m, j, l, c) with H_m = sum c F_j G_l.

    F, G, H are plain coefficient lists (coefficient of x^(k-j) y^j).
    """
    if r > min(n, p):
        return ()
    scale = factorial(n - r) * factorial(p - r)
    out = []
    for j in range(n + 1):
        for l in range(p + 1):
            m = j + l - r
            if m < 0 or m > n + p - 2 * r:
                continue
            c = 0
            for i in range(r + 1):
                c += ((-1) ** i) * comb(r, i) * _ff(n - j, r - i) * _ff(j, i) * _ff(p - l, i) * _ff(l, r - i)
            if c:
                out.append((m, j, l, c * scale))
    return tuple(out)


def transvect_coefficients(F: Sequence, n: int, G: Sequence, p: int, r: int, zero):
    """Apply the bilinear table to coefficient lists over any commutative ring."""
    if r > min(n, p):
        return None
    H = [zero for _ in range(n + p - 2 * r + 1)]
    for m, j, l, c in transvectant_table(n, p, r):
        H[m] = H[m] + F[j] * G[l] * c
    return H


def _as_covariant(f) -> Covariant:
    if isinstance(f, BinaryForm):
        return f.as_covariant()
    if isinstance(f, Covariant):
        return f
    raise UsageError("expected a BinaryForm or Covariant")


def _gordan_factor(n: int, p: int) -> Fraction:
    return Fraction(1, factorial(n) * factorial(p))


def transvectant(f, g, r: int, normalization: str = "paper") -> Covariant:
    """Closed bidifferential formula; zero when r > min(n, p)."""
    if r < 0:
        raise UsageError("transvectant index must be nonnegative")
    if normalization not in NORMALIZATIONS:
        raise UsageError(f"unknown normalization {normalization!r}")
    f, g = _as_covariant(f), _as_covariant(g)
    if f.space != g.space:
        raise UsageError("transvectant of covariants from different form spaces")
    n, p = f.order, g.order
    md = tuple(a + b for a, b in zip(f.multidegree, g.multidegree))
    recipe = None
    if f.recipe is not None and g.recipe is not None:
        recipe = f"T({f.recipe}, {g.recipe}, {r})"
    vs = f.space.varspace
    if r > min(n, p):
        return Covariant(f.space, MultiPoly.zero(vs), md, max(n + p - 2 * r, 0), recipe)
    H = transvect_coefficients(f.coeffs(), n, g.coeffs(), p, r, MultiPoly.zero(vs))
    if normalization == "gordan":
        H = [h.scale(_gordan_factor(n, p)) for h in H]
    return Covariant.from_coeffs(f.space, H, md, recipe)


def _dup_names(tag: str) -> Tuple[str, str]:
    return f"x__{tag}", f"y__{tag}"


def _polarize(value: MultiPoly, vs: VarSpace, tag: str) -> MultiPoly:
    """f(x, y) -> f(x_tag, y_tag) inside the larger space vs."""
    xa, ya = _dup_names(tag)
    return value.embed(vs).substitute({"x": MultiPoly.var(vs, xa), "y": MultiPoly.var(vs, ya)}, vs)


def apply_omega(P: MultiPoly, a: str, b: str, times: int = 1) -> MultiPoly:
    xa, ya = _dup_names(a)
    xb, yb = _dup_names(b)
    for _ in range(times):
        P = P.diff(xa).diff(yb) - P.diff(ya).diff(xb)
    return P


def apply_sigma(P: MultiPoly, a: str, times: int = 1) -> MultiPoly:
    xa, ya = _dup_names(a)
    vs = P.space
    x, y = MultiPoly.var(vs, "x"), MultiPoly.var(vs, "y")
    for _ in range(times):
        P = x * P.diff(xa) + y * P.diff(ya)
    return P


def transvectant_operator_route(f, g, r: int, normalization: str = "paper") -> Covariant:
    """Omega^r sigma_a^(n-r) sigma_b^(p-r) applied literally to f(x_a) g(x_b)."""
    if r < 0:
        raise UsageError("transvectant index must be nonnegative")
    f, g = _as_covariant(f), _as_covariant(g)
    if f.space != g.space:
        raise UsageError("transvectant of covariants from different form spaces")
    n, p = f.order, g.order
    md = tuple(a + b for a, b in zip(f.multidegree, g.multidegree))
    base = f.space.varspace
    if r > min(n, p):
        return Covariant(f.space, MultiPoly.zero(base), md, max(n + p - 2 * r, 0))
    vs = base.extend(*_dup_names("a"), *_dup_names("b"))
    P = _polarize(f.value, vs, "a") * _polarize(g.value, vs, "b")
    P = apply_sigma(P, "a", n - r)
    P = apply_sigma(P, "b", p - r)
    P = apply_omega(P, "a", "b", r)
    value = P.restrict(base)
    if normalization == "gordan":
        value = value.scale(_gordan_factor(n, p))
    return Covariant(f.space, value, md, n + p - 2 * r)


# molecules

@dataclass(frozen=True)
class MoleculeAtom:
    id: str
    color: int
    valence: int


@dataclass(frozen=True)
class Edge:
    origin: str
    target: str
    weight: int


class Molecule:
    """Weighted digraph of atoms; even-weight edges are stored origin < target."""

    def __init__(self, atoms: Sequence[MoleculeAtom], edges: Sequence[Edge] = ()):
        ids = [a.id for a in atoms]
        if len(set(ids)) != len(ids):
            raise UsageError("atom ids must be distinct")
        self.atoms = tuple(atoms)
        self._by_id = {a.id: a for a in atoms}
        canon = []
        for e in edges:
            if e.origin == e.target:
                raise UsageError("edge endpoints must be distinct atoms")
            if e.origin not in self._by_id or e.target not in self._by_id:
                raise UsageError(f"edge {e} references an unknown atom")
            if e.weight < 1:
                raise UsageError("edge weights must be at least 1")
            if e.weight % 2 == 0 and ids.index(e.origin) > ids.index(e.target):
                e = Edge(e.target, e.origin, e.weight)
            canon.append(e)
        self.edges = tuple(canon)

    def free_valence(self, atom_id: str) -> int:
        a = self._by_id[atom_id]
        used = sum(e.weight for e in self.edges if atom_id in (e.origin, e.target))
        return a.valence - used

    def order(self) -> int:
        return sum(self.free_valence(a.id) for a in self.atoms)

    def with_edges(self, extra: Sequence[Edge]) -> "Molecule":
        return Molecule(self.atoms, list(self.edges) + list(extra))

    def __eq__(self, other):
        return isinstance(other, Molecule) and (self.atoms, self.edges) == (other.atoms, other.edges)

    def __repr__(self):
        return f"Molecule({format_molecule(self)!r})"


def format_molecule(m: Molecule) -> str:
    lines = []
    for a in m.atoms:
        lines.append(f"atom {a.id}:{a.valence}" + (f" color={a.color}" if a.color else ""))
    for e in m.edges:
        lines.append(f"edge {e.origin} {e.target} {e.weight}")
    return "\n".join(lines) + "\n"


def parse_molecule(text: str) -> Molecule:
    atoms, edges = [], []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"atom\s+(\w+):(\d+)(?:\s+color=(\d+))?", line)
        if m:
            atoms.append(MoleculeAtom(m.group(1), int(m.group(3) or 0), int(m.group(2))))
            continue
        m = re.fullmatch(r"edge\s+(\w+)\s+(\w+)\s+(\d+)", line)
        if m:
            edges.append(Edge(m.group(1), m.group(2), int(m.group(3))))
            continue
        raise UsageError(f"cannot parse molecule line {raw!r}")
    return Molecule(atoms, edges)


def evaluate_molecule(m: Molecule, forms: Union[Mapping[str, object], Sequence[object]]) -> Covariant:
    """Product of Omega^w over edges and sigma^(free valence) over atoms.

    ``forms`` maps atom ids to forms, or is a sequence indexed by atom color.
    """
    per_atom = {}
    for a in m.atoms:
        f = forms[a.id] if isinstance(forms, Mapping) else forms[a.color]
        f = _as_covariant(f)
        if f.order != a.valence:
            raise UsageError(f"atom {a.id} has valence {a.valence} but its form has order {f.order}")
        per_atom[a.id] = f
    spaces = {f.space for f in per_atom.values()}
    if len(spaces) != 1:
        raise UsageError("all forms must share one form space")
    space = spaces.pop()
    md = [0] * len(space)
    for f in per_atom.values():
        md = [x + y for x, y in zip(md, f.multidegree)]
    base = space.varspace
    free = {a.id: m.free_valence(a.id) for a in m.atoms}
    if any(v < 0 for v in free.values()):
        return Covariant(space, MultiPoly.zero(base), md, 0)
    names = []
    for a in m.atoms:
        names.extend(_dup_names(a.id))
    vs = base.extend(*names)
    P = MultiPoly.const(vs, 1)
    for a in m.atoms:
        P = P * _polarize(per_atom[a.id].value, vs, a.id)
    for e in m.edges:
        P = apply_omega(P, e.origin, e.target, e.weight)
    for a in m.atoms:
        P = apply_sigma(P, a.id, free[a.id])
    return Covariant(space, P.restrict(base), md, sum(free.values()))


def _context_molecule(atoms, context) -> Molecule:
    return Molecule(atoms, [Edge(*e) if not isinstance(e, Edge) else e for e in context])


def identity_check(kind: str, parameters: Mapping) -> bool:
    """Evaluate both sides of a named identity and compare exactly.

    syzygy1/2/3 and binom_expand take ``forms`` (one form per atom, in atom
    order) and an optional ``context`` list of (origin, target, weight) edges
    shared by every side; stroh takes ``g`` and ``k`` = (k1, k2, k3).
    """
    if kind == "stroh":
        return _stroh(parameters["g"], tuple(parameters["k"]))
    forms = [_as_covariant(f) for f in parameters["forms"]]
    context = list(parameters.get("context", ()))
    ids = ["A", "B", "C", "D"][: len(forms)]
    atoms = [MoleculeAtom(i, k, f.order) for k, (i, f) in enumerate(zip(ids, forms))]
    fmap = dict(zip(ids, forms))
    base = _context_molecule(atoms, context)

    def ev(extra):
        mol = base.with_edges([Edge(*e) for e in extra if e[2]])
        if any(mol.free_valence(a.id) < 0 for a in mol.atoms):
            raise UsageError(f"identity {kind}: a side has negative free valence")
        return evaluate_molecule(mol, fmap).value

    if kind == "syzygy1":
        if len(forms) < 2:
            raise UsageError("syzygy1 needs two forms")
        w = parameters.get("w", 1)
        return ev([("A", "B", w)]) == ev([("B", "A", w)]).scale((-1) ** w)
    if kind == "syzygy2":
        if len(forms) < 3:
            raise UsageError("syzygy2 needs three forms")
        return ev([("A", "B", 1)]) == ev([("A", "C", 1)]) + ev([("C", "B", 1)])
    if kind == "syzygy3":
        if len(forms) < 4:
            raise UsageError("syzygy3 needs four forms")
        lhs = ev([("A", "B", 1), ("D", "C", 1)])
        rhs = ev([("A", "D", 1), ("B", "C", 1)]) + ev([("A", "C", 1), ("D", "B", 1)])
        return lhs == rhs
    if kind == "binom_expand":
        if len(forms) < 3:
            raise UsageError("binom_expand needs three forms")
        r = parameters["r"]
        if r > min(f.order for f in forms[:3]):
            raise UsageError("binom_expand needs r <= min(n, p, q)")
        lhs = ev([("A", "B", r)])
        rhs = None
        for i in range(r + 1):
            extra = [e for e in (("A", "C", i), ("C", "B", r - i)) if e[2]]
            term = ev(extra).scale(comb(r, i))
            rhs = term if rhs is None else rhs + term
        return lhs == rhs
    raise UsageError(f"unknown identity {kind!r}")


def _stroh(g: int, k: Tuple[int, int, int]) -> bool:
    k1, k2, k3 = k
    if min(k) < 0 or k1 + k2 + k3 != g - 1:
        raise UsageError("stroh needs nonnegative k with k1+k2+k3 = g-1")
    vs = VarSpace(["u1", "u2"])
    u1, u2 = MultiPoly.var(vs, "u1"), MultiPoly.var(vs, "u2")
    u3 = -(u1 + u2)

    def block(sign_k, ka, kb, a, b):
        s = MultiPoly.zero(vs)
        for i in range(ka + 1):
            s = s + (a ** (g - i) * b ** i).scale(comb(g, i) * comb(ka + kb - i, kb))
        return s.scale((-1) ** sign_k)

    total = block(k2, k1, k3, u3, u1) + block(k3, k2, k1, u1, u2) + block(k1, k3, k2, u2, u3)
    return total.is_zero()


# grade bounds

@dataclass(frozen=True)
class GradeQuery:
    e0: int
    e1: int
    e2: int
    n: int

    def __post_init__(self):
        e = (self.e0, self.e1, self.e2)
        if min(e) < 0 or self.n < 0:
            raise UsageError("weights and order must be nonnegative")
        if self.e0 + self.e1 > self.n or self.e1 + self.e2 > self.n or self.e0 + self.e2 > self.n:
            raise UsageError("need e_i + e_j <= n for i != j")


def grade_bound(q: GradeQuery, even: bool = False) -> int:
    """Lower bound for the grade of the degree-three triangle D(e0, e1, e2).

    With ``even=True`` the bound is rounded up to an even number, which is
    valid for a single form where the odd Gordan ideals coincide with the
    next even ones.
    """
    w = q.e0 + q.e1 + q.e2
    bounds = [-((-2 * w) // 3) if w <= q.n else q.n - w // 3]
    half = Fraction(q.n, 2)
    if q.e0 <= half and q.e1 + q.e2 > Fraction(q.e0, 2) and not (q.e0 == q.e1 == q.e2 == half):
        bounds.append(q.e0 + 1)
    b = max(bounds)
    if even and b % 2:
        b += 1
    return b


def triangle(n: int, e0: int, e1: int, e2: int, color: int = 0) -> Molecule:
    atoms = [MoleculeAtom(i, color, n) for i in ("A", "B", "C")]
    edges = [Edge(o, t, w) for o, t, w in (("A", "B", e0), ("B", "C", e1), ("C", "A", e2)) if w]
    return Molecule(atoms, edges)


# change of basis between the two bracketings of degree-three transvectants

def _admissible(n: int, p: int, i: int) -> bool:
    return 0 <= i <= min(n, p)


def reassociate_pairs(n: int, p: int, q: int, r: int):
    """Index pairs of both bracketings landing in order r."""
    left, right = [], []
    if (n + p + q - r) % 2 or r < 0:
        return left, right
    s = (n + p + q - r) // 2
    for j1 in range(s + 1):
        j2 = s - j1
        if _admissible(n, p, j1) and _admissible(n + p - 2 * j1, q, j2):
            left.append((j1, j2))
    for i1 in range(s + 1):
        i2 = s - i1
        if _admissible(p, q, i1) and _admissible(n, p + q - 2 * i1, i2):
            right.append((i1, i2))
    return left, right


def reassociate_basis(n: int, p: int, q: int, r: int) -> List[List[Fraction]]:
    """Matrix M with ((f,g)_j1, h)_j2 = sum_k M[row][k] (f, (g,h)_i1)_i2.

    Rows follow the (j1, j2) pairs and columns the (i1, i2) pairs returned
    by ``reassociate_pairs``; r is the order of the target.
    """
    left, right = reassociate_pairs(n, p, q, r)
    if len(left) != len(right):
        raise ArithmeticError("bracketings have different sizes")
    if not left:
        return []
    space = FormSpace([n, p, q])
    f, g, h = (generic_form(space, s) for s in range(3))
    L = [transvectant(transvectant(f, g, j1), h, j2).value for j1, j2 in left]
    R = [transvectant(f, transvectant(g, h, i1), i2).value for i1, i2 in right]
    keys = sorted({k for P in L + R for k in P.terms})
    pos = {k: i for i, k in enumerate(keys)}
    cols = len(R)
    out = []
    for P in L:
        # solve sum_k m_k R_k = P, i.e. kernel of [R_1 .. R_m | -P]
        ent = {}
        for c, Q in enumerate(R):
            for k, v in Q.terms.items():
                ent[(pos[k], c)] = v
        for k, v in P.terms.items():
            ent[(pos[k], cols)] = -v
        ker = exact_kernel(ExactMatrix(len(keys), cols + 1, ent))
        sol = [v for v in ker if v[cols] != 0]
        if len(ker) != 1 or not sol:
            raise ArithmeticError("bracketing families are not bases of the same space")
        v = sol[0]
        out.append([Fraction(v[c]) / Fraction(v[cols]) for c in range(cols)])
    return out
