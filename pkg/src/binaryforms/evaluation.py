"""Evaluation of transvectant recipes, exactly or modulo a prime.

The modular evaluator draws random coefficient values for every form slot
and carries each covariant as its list of plain coefficients (one row per
power of y) over a batch of points.  Two covariants of the same degree and
order are linearly dependent iff their leading coefficients (sources) are,
and the source of a product is the product of the sources, so linear
algebra on graded slices only ever touches one row per covariant.
"""
from __future__ import annotations

import random
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from .forms import (Atom, Covariant, FormSpace, Node, Prod, Trans, UnimodularMatrix,
                    covariant_one, fold_recipe, format_recipe, generic_form, parse_recipe,
                    recipe_grading)
from .kernel import UsageError
from .transvectant import NORMALIZATIONS, transvectant, transvectant_table

PRIME = 2 ** 31 - 1


def as_node(recipe: Union[str, Node]) -> Node:
    return parse_recipe(recipe) if isinstance(recipe, str) else recipe


def exact_covariant(recipe: Union[str, Node], space: FormSpace, normalization: str = "paper",
                    cache: Optional[dict] = None) -> Covariant:
    """Expand a recipe into an exact covariant."""
    node = as_node(recipe)
    forms = {}

    def leaf(name):
        if name not in forms:
            forms[name] = generic_form(space, name).as_covariant()
        return forms[name]

    def trans(a, b, r):
        return transvectant(a, b, r, normalization)

    out = fold_recipe(node, leaf, trans, lambda a, b: a * b, lambda a, e: a ** e,
                      lambda: covariant_one(space), cache)
    out.recipe = format_recipe(node)
    return out



def poly_mul_mod(F: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Product of coefficient lists (rows) over a batch of points."""
    out = np.zeros((F.shape[0] + G.shape[0] - 1, F.shape[1]), dtype=np.int64)
    for i in range(F.shape[0]):
        fi = F[i]
        if not fi.any():
            continue
        out[i: i + G.shape[0]] = (out[i: i + G.shape[0]] + (fi * G) % PRIME) % PRIME
    return out


def poly_pow_mod(F: np.ndarray, e: int) -> np.ndarray:
    result = None
    base = F
    while e:
        if e & 1:
            result = base if result is None else poly_mul_mod(result, base)
        e >>= 1
        if e:
            base = poly_mul_mod(base, base)
    if result is None:
        return np.ones((1, F.shape[1]), dtype=np.int64)
    return result


def transvect_mod(F: np.ndarray, G: np.ndarray, r: int, normalization: str = "paper") -> np.ndarray:
    n, p = F.shape[0] - 1, G.shape[0] - 1
    if r > min(n, p):
        return np.zeros((max(n + p - 2 * r, 0) + 1, F.shape[1]), dtype=np.int64)
    H = np.zeros((n + p - 2 * r + 1, F.shape[1]), dtype=np.int64)
    scale = 1
    if normalization == "gordan":
        scale = pow(factorial(n) * factorial(p) % PRIME, PRIME - 2, PRIME)
    for m, j, l, c in transvectant_table(n, p, r):
        c = c * scale % PRIME
        H[m] = (H[m] + (F[j] * c % PRIME) * G[l]) % PRIME
    return H


def substitute_linear_mod(F: np.ndarray, g: UnimodularMatrix) -> np.ndarray:
    """Coefficients of F(a x + b y, c x + d y) for g = [[a, b], [c, d]]."""
    k = F.shape[0] - 1
    npts = F.shape[1]
    lx = np.array([[g.a % PRIME], [g.b % PRIME]], dtype=np.int64).repeat(npts, axis=1)
    ly = np.array([[g.c % PRIME], [g.d % PRIME]], dtype=np.int64).repeat(npts, axis=1)
    out = np.zeros((k + 1, npts), dtype=np.int64)
    for i in range(k + 1):
        term = poly_mul_mod(poly_pow_mod(lx, k - i), poly_pow_mod(ly, i))
        out = (out + (term * F[i]) % PRIME) % PRIME
    return out


class ModularEvaluator:
    """Evaluates recipes at ``points`` random coefficient vectors mod PRIME."""

    def __init__(self, space: FormSpace, points: int = 64, seed: int = 0,
                 normalization: str = "paper", forms: Optional[Dict[str, np.ndarray]] = None):
        if normalization not in NORMALIZATIONS:
            raise UsageError(f"unknown normalization {normalization!r}")
        self.space = space
        self.normalization = normalization
        self.seed = seed
        if forms is None:
            rng = np.random.default_rng(seed)
            forms = {}
            for s, (n, name) in enumerate(zip(space.orders, space.names)):
                a = rng.integers(1, PRIME, size=(n + 1, points), dtype=np.int64)
                binom = np.array([comb(n, i) % PRIME for i in range(n + 1)], dtype=np.int64)
                forms[name] = (a * binom[:, None]) % PRIME
        self.forms = forms
        self.points = next(iter(forms.values())).shape[1] if forms else points
        self._cache: Dict[str, np.ndarray] = {}

    def clear(self):
        self._cache.clear()

    def coefficients(self, recipe: Union[str, Node]) -> np.ndarray:
        """Plain coefficient rows of the covariant, shape (order + 1, points)."""
        node = as_node(recipe)
        return self._eval(node)

    def source(self, recipe: Union[str, Node]) -> np.ndarray:
        return self.coefficients(recipe)[0]

    def _eval(self, node: Node) -> np.ndarray:
        if isinstance(node, Atom):
            if node.name not in self.forms:
                raise UsageError(f"unknown slot {node.name!r}")
            return self.forms[node.name]
        if isinstance(node, Trans):
            key = format_recipe(node)
            hit = self._cache.get(key)
            if hit is not None:
                return hit
            out = transvect_mod(self._eval(node.lhs), self._eval(node.rhs), node.r, self.normalization)
            self._cache[key] = out
            return out
        out = None
        for sub, e in node.factors:
            t = self._eval(sub)
            if e != 1:
                t = poly_pow_mod(t, e)
            out = t if out is None else poly_mul_mod(out, t)
        if out is None:
            out = np.ones((1, self.points), dtype=np.int64)
        return out

    def transformed(self, g: UnimodularMatrix) -> "ModularEvaluator":
        """Evaluator at the same points with every form replaced by f(g x)."""
        forms = {k: substitute_linear_mod(v, g) for k, v in self.forms.items()}
        return ModularEvaluator(self.space, normalization=self.normalization, forms=forms)

    def scaled(self, slot: str, lam: int) -> "ModularEvaluator":
        forms = dict(self.forms)
        forms[slot] = (forms[slot] * (lam % PRIME)) % PRIME
        return ModularEvaluator(self.space, normalization=self.normalization, forms=forms)


def audit_recipe(recipe: Union[str, Node], space: FormSpace, seed: int = 0, points: int = 3,
                 normalization: str = "paper") -> Dict[str, bool]:
    """Homogeneity and SL2 equivariance spot checks at random points mod PRIME.

    Homogeneity: scaling slot s by lambda scales the value by lambda^d_s and the
    number of coefficient rows is order + 1.  Equivariance: C(f o g) = C(f) o g
    for a random unimodular g.
    """
    node = as_node(recipe)
    md, order = recipe_grading(node, space)
    ev = ModularEvaluator(space, points=points, seed=seed, normalization=normalization)
    base = ev.coefficients(node)
    homog = base.shape[0] == order + 1
    rng = np.random.default_rng(seed + 1)
    for s, name in enumerate(space.names):
        lam = int(rng.integers(2, 1000))
        scaled = ev.scaled(name, lam).coefficients(node)
        homog = homog and np.array_equal(scaled, (base * pow(lam, md[s], PRIME)) % PRIME)
    g = UnimodularMatrix.random(random.Random(seed + 2))
    lhs = ev.transformed(g).coefficients(node)
    rhs = substitute_linear_mod(base, g)
    equiv = np.array_equal(lhs, rhs)
    nonzero = bool(base.any())
    return {"homogeneous": bool(homog), "equivariant": bool(equiv), "nonzero": nonzero}


def _matmul_mod(C: np.ndarray, R: np.ndarray) -> np.ndarray:
    """C @ R mod PRIME without int64 overflow (split C into 16-bit halves)."""
    lo = C & 0xFFFF
    hi = C >> 16
    return ((hi @ R) % PRIME * 65536 + (lo @ R) % PRIME) % PRIME


class ModSpan:
    """Incrementally maintained row space mod PRIME (reduced echelon form)."""

    def __init__(self, cols: int):
        self.cols = cols
        self._R = np.zeros((cols, cols), dtype=np.int64)
        self.pivots: List[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, V: np.ndarray, stop_at: Optional[int] = None, chunk: int = 64) -> List[bool]:
        """Insert rows in order; returns which rows enlarged the span.

        Rows after the span reaches ``stop_at`` are reported as not enlarging.
        Rows are reduced against the span a chunk at a time, so elimination
        inside the block never touches more than ``chunk`` rows.
        """
        V = np.asarray(V)
        if V.ndim != 2:
            raise UsageError("expected a 2-d block of rows")
        V = np.array(V[:, : self.cols], dtype=np.int64) % PRIME
        mask = [False] * V.shape[0]
        for lo in range(0, V.shape[0], chunk):
            if stop_at is not None and self.rank >= stop_at:
                break
            C = V[lo: lo + chunk]
            rho = self.rank
            if rho:
                C = (C - _matmul_mod(C[:, self.pivots], self._R[:rho])) % PRIME
            for i in np.flatnonzero(C.any(axis=1)):
                if stop_at is not None and self.rank >= stop_at:
                    break
                row = C[i]
                nz = np.flatnonzero(row)
                if not len(nz):
                    continue
                c = int(nz[0])
                row = (row * pow(int(row[c]), PRIME - 2, PRIME)) % PRIME
                if i + 1 < C.shape[0]:
                    f = C[i + 1:, c].copy()
                    if f.any():
                        C[i + 1:] = (C[i + 1:] - (f[:, None] * row[None, :]) % PRIME) % PRIME
                rho = self.rank
                if rho:
                    f = self._R[:rho, c].copy()
                    if f.any():
                        self._R[:rho] = (self._R[:rho] - (f[:, None] * row[None, :]) % PRIME) % PRIME
                self._R[rho] = row
                self.pivots.append(c)
                mask[lo + i] = True
        return mask

    def contains(self, v: np.ndarray) -> bool:
        v = np.array(v[: self.cols], dtype=np.int64) % PRIME
        rho = self.rank
        if rho:
            v = (v - _matmul_mod(v[None, self.pivots], self._R[:rho])[0]) % PRIME
        return not v.any()
