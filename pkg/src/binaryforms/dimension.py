"""Dimensions of covariant spaces by Cayley-Sylvester weight counting."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, List, Sequence, Tuple

from .kernel import UsageError

GRADINGS = ("total", "degree", "multigraded")


@dataclass(frozen=True)
class DimQuery:
    orders: Tuple[int, ...]
    multidegree: Tuple[int, ...]
    order: int

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        object.__setattr__(self, "multidegree", tuple(int(d) for d in self.multidegree))
        if len(self.orders) != len(self.multidegree):
            raise UsageError("one degree per summand is required")
        if min(self.orders + self.multidegree + (self.order,), default=0) < 0:
            raise UsageError("orders, degrees and the covariant order must be nonnegative")


@lru_cache(maxsize=None)
def gaussian_binomial(m: int, k: int) -> Tuple[int, ...]:
    """Coefficients of [m choose k]_q, lowest degree first."""
    if k < 0 or k > m:
        return (0,)
    if k == 0 or k == m:
        return (1,)
    # [m,k] = [m-1,k-1] + q^k [m-1,k]
    a = gaussian_binomial(m - 1, k - 1)
    b = gaussian_binomial(m - 1, k)
    out = [0] * (k * (m - k) + 1)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + k] += c
    return tuple(out)


def _mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def _weight_counts(orders: Tuple[int, ...], degrees: Tuple[int, ...]) -> Tuple[int, ...]:
    poly: Sequence[int] = (1,)
    for n, d in zip(orders, degrees):
        poly = _mul(poly, gaussian_binomial(n + d, d))
    return tuple(poly)


def covariant_dimension(q: DimQuery) -> int:
    W = sum(n * d for n, d in zip(q.orders, q.multidegree))
    if W < q.order or (W - q.order) % 2:
        return 0
    w = (W - q.order) // 2
    N = _weight_counts(q.orders, q.multidegree)
    hi = N[w] if w < len(N) else 0
    lo = N[w - 1] if 0 < w <= len(N) else 0
    return hi - lo


@dataclass(frozen=True)
class SeriesTruncation:
    orders: Tuple[int, ...]
    grading: str
    bound: int
    coefficients: Tuple  # scalar list, or {multidegree: {order: dim}} for multigraded
    invariants_only: bool = False


def _slices(orders, bound, grading, invariants_only):
    s = len(orders)
    for degs in product(range(bound + 1), repeat=s):
        d = sum(degs)
        if d > bound:
            continue
        kmax = 0 if invariants_only else sum(n * e for n, e in zip(orders, degs))
        for k in range(kmax + 1):
            g = d + k if grading == "total" else d
            if g > bound:
                break
            yield degs, k, g


def hilbert_series(orders: Sequence[int], grading: str = "total", bound: int = 10,
                   invariants_only: bool = False) -> SeriesTruncation:
    """Truncated Hilbert series of Cov(S_n1 + ... + S_ns).

    ``total`` grades by degree plus order, ``degree`` by degree alone.
    ``multigraded`` returns a dict keyed by multidegree whose values map
    order to dimension, with total degree at most ``bound``.
    """
    orders = tuple(int(n) for n in orders)
    if grading not in GRADINGS:
        raise UsageError(f"unknown grading {grading!r}; expected one of {GRADINGS}")
    if bound < 0:
        raise UsageError("bound must be nonnegative")
    if grading == "multigraded":
        table: Dict[Tuple[int, ...], Dict[int, int]] = {}
        for degs, k, _ in _slices(orders, bound, "degree", invariants_only):
            dim = covariant_dimension(DimQuery(orders, degs, k))
            if dim:
                table.setdefault(degs, {})[k] = dim
        return SeriesTruncation(orders, grading, bound, tuple(sorted(table.items())), invariants_only)
    coeffs = [0] * (bound + 1)
    if invariants_only:
        for d in range(bound + 1):
            coeffs[d] = invariant_count(orders, d)
    else:
        for degs, k, g in _slices(orders, bound, grading, invariants_only):
            coeffs[g] += covariant_dimension(DimQuery(orders, degs, k))
    return SeriesTruncation(orders, grading, bound, tuple(coeffs), invariants_only)


def invariant_count(orders: Sequence[int], total_degree: int) -> int:
    """Dimension of the invariants of total degree ``total_degree``."""
    orders = tuple(orders)

    def compositions(t, parts):
        if parts == 1:
            yield (t,)
            return
        for first in range(t + 1):
            for rest in compositions(t - first, parts - 1):
                yield (first,) + rest

    if not orders:
        return 1 if total_degree == 0 else 0
    return sum(covariant_dimension(DimQuery(orders, degs, 0))
               for degs in compositions(total_degree, len(orders)))
