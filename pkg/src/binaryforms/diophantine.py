"""Irreducible solutions of the two-row system

    sum_i a_i alpha_i = u + r,    sum_j b_j beta_j = v + r,

with all unknowns nonnegative.  Solutions are stored as flat tuples
(alpha_1..alpha_p, beta_1..beta_q, u, v, r).

Write X for the multiset of a-values selected by alpha and Y for the
b-values selected by beta.  A solution splits as a sum of two nonzero
solutions exactly when some sub-pair (X1, Y1), other than the empty pair
and the full pair, satisfies -v <= sum(X1) - sum(Y1) <= u.  Enumeration
fixes (u, v), runs over Y and grows X one element at a time while keeping
the set of sub-pair differences (as a bitmask) clear of that window.

Sizes are bounded through primitive partition identities: adding the
single value |u - v| to the lighter side gives a balanced pair without
proper balanced sub-pairs, so |alpha| <= max(b, |u-v|) and
|beta| <= max(a, |u-v|).  Variables sharing a coefficient are grouped and
expanded afterwards; a full solution is irreducible iff its grouped image
is.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .kernel import UsageError

Solution = Tuple[int, ...]


@dataclass(frozen=True)
class DiophantineSystem:
    row1: Tuple[int, ...]
    row2: Tuple[int, ...]
    invariant: bool = False  # force u = v = 0

    def __post_init__(self):
        object.__setattr__(self, "row1", tuple(int(a) for a in self.row1))
        object.__setattr__(self, "row2", tuple(int(b) for b in self.row2))
        if any(a <= 0 for a in self.row1 + self.row2):
            raise UsageError("coefficients must be positive integers")

    @property
    def p(self) -> int:
        return len(self.row1)

    @property
    def q(self) -> int:
        return len(self.row2)

    @property
    def width(self) -> int:
        return self.p + self.q + 3

    def is_solution(self, s: Sequence[int]) -> bool:
        if len(s) != self.width or min(s) < 0:
            return False
        al, be = s[: self.p], s[self.p: self.p + self.q]
        u, v, r = s[-3:]
        if self.invariant and (u or v):
            return False
        return (sum(a * x for a, x in zip(self.row1, al)) == u + r
                and sum(b * y for b, y in zip(self.row2, be)) == v + r)


def sort_key(s: Sequence[int], p: int, q: int):
    return (s[-1], sum(s[: p + q]), tuple(s))


class HilbertBasis:
    """Irreducible solutions in canonical order (r, alpha+beta total, vector)."""

    def __init__(self, system: DiophantineSystem, solutions: Iterable[Sequence[int]]):
        self.system = system
        sols = {tuple(s) for s in solutions}
        self.solutions: List[Solution] = sorted(sols, key=lambda s: sort_key(s, system.p, system.q))

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __eq__(self, other):
        return isinstance(other, HilbertBasis) and self.system == other.system and self.solutions == other.solutions

    def to_json(self) -> str:
        d = {"row1": list(self.system.row1), "row2": list(self.system.row2),
             "solutions": [list(s) for s in self.solutions]}
        if self.system.invariant:
            d["invariant"] = True
        return json.dumps(d)

    @classmethod
    def from_json(cls, text: str) -> "HilbertBasis":
        d = json.loads(text)
        system = DiophantineSystem(d["row1"], d["row2"], bool(d.get("invariant", False)))
        return cls(system, [tuple(int(x) for x in s) for s in d.get("solutions", [])])


def system_from_json(text: str) -> DiophantineSystem:
    d = json.loads(text)
    return DiophantineSystem(d["row1"], d["row2"], bool(d.get("invariant", False)))


def reduce_system(system: DiophantineSystem):
    """Group equal coefficients: (reduced system, multiplicities, grouping)."""
    def group(row):
        vals = sorted(set(row))
        members = [[i for i, a in enumerate(row) if a == v] for v in vals]
        return tuple(vals), [len(m) for m in members], members

    a, ma, ga = group(system.row1)
    b, mb, gb = group(system.row2)
    return DiophantineSystem(a, b, system.invariant), (ma, mb), (ga, gb)


def _multisets(types: Sequence[int], max_size: int) -> Iterator[Tuple[int, ...]]:
    """Count vectors over ``types`` with total size between 1 and max_size."""
    k = len(types)
    counts = [0] * k

    def rec(i, left):
        if i == k:
            if sum(counts):
                yield tuple(counts)
            return
        for c in range(left + 1):
            counts[i] = c
            yield from rec(i + 1, left - c)
        counts[i] = 0

    yield from rec(0, max_size)


def _solve_reduced(system: DiophantineSystem) -> List[Solution]:
    a, b = system.row1, system.row2
    p, q = len(a), len(b)
    out: List[Solution] = []
    # units (r = 0)
    if not system.invariant:
        for i in range(p):
            s = [0] * (p + q + 3)
            s[i], s[-3] = 1, a[i]
            out.append(tuple(s))
        for j in range(q):
            s = [0] * (p + q + 3)
            s[p + j], s[-2] = 1, b[j]
            out.append(tuple(s))
    if not p or not q:
        return out
    amax, bmax = max(a), max(b)
    urange = [0] if system.invariant else range(amax)
    vrange = [0] if system.invariant else range(bmax)
    for u in urange:
        xt = [i for i in range(p) if a[i] > u]
        if not xt:
            continue
        for v in vrange:
            yt = [j for j in range(q) if b[j] > v]
            if not yt:
                continue
            gap = abs(u - v)
            size_x = max(bmax, gap)
            size_y = max(amax, gap)
            lo, hi = -v, u
            for ycounts in _multisets([b[j] for j in yt], size_y):
                yvals = [b[j] for j, c in zip(yt, ycounts) for _ in range(c)]
                sy = sum(yvals)
                target = sy + u - v  # required sum of X
                if target - u < 1:
                    continue
                off = sy
                # differences of proper nonempty sub-pairs inside Y alone
                sums = 1
                for yv in yvals:
                    sums |= sums << yv
                proper_bits = 0
                for s in range(1, sy):
                    if (sums >> s) & 1:
                        proper_bits |= 1 << (off - s)
                window = ((1 << (hi - lo + 1)) - 1) << (off + lo)
                if proper_bits & window:
                    continue
                _grow_x(a, xt, ycounts, yt, p, q, u, v, target, size_x,
                        proper_bits, -sy, off, window, out)
    return out


def _grow_x(a, xt, ycounts, yt, p, q, u, v, target, size_x, proper, total, off, window, out):
    """Depth-first growth of X in nondecreasing type order."""
    counts = [0] * p

    def rec(start, proper, total, sx, size):
        for idx in range(start, len(xt)):
            i = xt[idx]
            e = a[i]
            if sx + e > target:
                break
            # sub-pairs of the new partial other than itself
            np_ = proper | (1 << (off + total)) | (1 << (off + e)) | (proper << e)
            if np_ & window:
                continue
            counts[i] += 1
            if sx + e == target:
                s = counts + [0] * q + [0, 0, 0]
                for j, c in zip(yt, ycounts):
                    s[p + j] = c
                s[-3], s[-2], s[-1] = u, v, target - u
                out.append(tuple(s))
            elif size + 1 < size_x:
                rec(idx, np_, total + e, sx + e, size + 1)
            counts[i] -= 1

    rec(0, proper, total, 0, 0)


def hilbert_basis(system: DiophantineSystem, weights: Optional[Sequence[int]] = None,
                  max_weight: Optional[int] = None) -> HilbertBasis:
    """Irreducible solutions of ``system``.

    With ``weights`` (one nonnegative integer per alpha and beta unknown) and
    ``max_weight``, only solutions of weight at most ``max_weight`` are
    listed; the pruning happens while expanding grouped variables.
    """
    reduced, mult, _ = reduce_system(system)
    red = _solve_reduced(reduced)
    if weights is not None:
        weights = tuple(int(w) for w in weights)
        if len(weights) != system.p + system.q or min(weights, default=0) < 0:
            raise UsageError("one nonnegative weight per alpha and beta unknown is required")
    return _expand(system, reduced, red, mult, weights, max_weight)


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _expand_one(sol: Solution, reduced: DiophantineSystem, mult, wflat=None, cap=None) -> Iterator[Solution]:
    ma, mb = mult
    pr, qr = reduced.p, reduced.q
    sizes = list(ma) + list(mb)
    totals = [sol[i] for i in range(pr)] + [sol[pr + j] for j in range(qr)]
    blocks = []
    pos = 0
    for t, m in zip(totals, sizes):
        comps = list(_compositions(t, m))
        if wflat is None:
            blocks.append([(c, 0) for c in comps])
        else:
            w = wflat[pos: pos + m]
            blocks.append(sorted(((c, sum(a * b for a, b in zip(c, w))) for c in comps), key=lambda t: t[1]))
        pos += m
    # cheapest completion of the remaining blocks
    rest = [0] * (len(blocks) + 1)
    for k in range(len(blocks) - 1, -1, -1):
        rest[k] = rest[k + 1] + (blocks[k][0][1] if blocks[k] else 0)
    tail = tuple(sol[-3:])

    def rec(k, acc, wsum):
        if k == len(blocks):
            yield acc + tail
            return
        for c, w in blocks[k]:
            if cap is not None and wsum + w + rest[k + 1] > cap:
                break
            yield from rec(k + 1, acc + c, wsum + w)

    if cap is None or rest[0] <= cap:
        yield from rec(0, (), 0)


def _expand(system, reduced, red_solutions, mult, weights=None, cap=None) -> HilbertBasis:
    # the full system's variables may be listed in any order; map back through the grouping
    _, _, (ga, gb) = reduce_system(system)
    order = [i for members in ga for i in members] + [system.p + j for members in gb for j in members]
    wflat = None if weights is None else [weights[i] for i in order]
    sols = []
    for s in red_solutions:
        for flat in _expand_one(s, reduced, mult, wflat, cap):
            full = [0] * system.width
            for pos, i in enumerate(order):
                full[i] = flat[pos]
            full[-3:] = flat[-3:]
            sols.append(tuple(full))
    return HilbertBasis(system, sols)


def expanded_system(reduced: DiophantineSystem, multiplicities) -> DiophantineSystem:
    ma, mb = multiplicities
    if len(ma) != reduced.p or len(mb) != reduced.q or min(list(ma) + list(mb) + [1]) < 1:
        raise UsageError("multiplicities must give a positive count for every reduced variable")
    row1 = [a for a, m in zip(reduced.row1, ma) for _ in range(m)]
    row2 = [b for b, m in zip(reduced.row2, mb) for _ in range(m)]
    return DiophantineSystem(row1, row2, reduced.invariant)


def reduced_expand(reduced: HilbertBasis, multiplicities, check: bool = True) -> HilbertBasis:
    """Expand irreducible solutions of a grouped system into the full system.

    The full system lists each reduced variable ``m`` times consecutively.
    When it has at most 12 unknowns the result is checked against a direct
    solve.
    """
    full = expanded_system(reduced.system, multiplicities)
    ma, mb = multiplicities
    if len(set(reduced.system.row1)) != reduced.system.p or len(set(reduced.system.row2)) != reduced.system.q:
        raise UsageError("a reduced system has pairwise distinct coefficients in each row")
    out = HilbertBasis(full, [s for r in reduced.solutions for s in _expand_one(r, reduced.system, (ma, mb))])
    if check and full.width <= 12:
        direct = hilbert_basis(full)
        if direct.solutions != out.solutions:
            raise ArithmeticError("reduced expansion disagrees with a direct solve")
    return out


def reduced_expand_count(reduced: HilbertBasis, multiplicities) -> int:
    """Number of full solutions produced by ``reduced_expand`` without listing them."""
    ma, mb = multiplicities
    expanded_system(reduced.system, multiplicities)
    pr = reduced.system.p
    total = 0
    for s in reduced.solutions:
        n = 1
        for i, m in enumerate(ma):
            n *= comb(s[i] + m - 1, m - 1)
        for j, m in enumerate(mb):
            n *= comb(s[pr + j] + m - 1, m - 1)
        total += n
    return total


def is_irreducible(system: DiophantineSystem, s: Sequence[int]) -> bool:
    """Direct test of the sub-pair criterion on one solution."""
    if not system.is_solution(s):
        return False
    p, q = system.p, system.q
    u, v = s[-3], s[-2]
    items = [(system.row1[i], s[i]) for i in range(p) if s[i]]
    items += [(-system.row2[j], s[p + j]) for j in range(q) if s[p + j]]
    whole = tuple(c for _, c in items)
    if not whole:
        return False

    def rec(k, chosen, diff):
        if k == len(items):
            if any(chosen) and tuple(chosen) != whole and -v <= diff <= u:
                return False
            return True
        val, c = items[k]
        for t in range(c + 1):
            if not rec(k + 1, chosen + [t], diff + t * val):
                return False
        return True

    return rec(0, [], 0)


def decompose(basis: HilbertBasis, s: Sequence[int]) -> Optional[List[Solution]]:
    """Write a solution as a sum of basis elements (depth-first), or None."""
    elems = basis.solutions
    memo: Dict[Solution, Optional[List[Solution]]] = {}

    def rec(t):
        if not any(t):
            return []
        if t in memo:
            return memo[t]
        memo[t] = None
        for e in elems:
            if all(x <= y for x, y in zip(e, t)):
                rest = rec(tuple(y - x for x, y in zip(e, t)))
                if rest is not None:
                    memo[t] = [e] + rest
                    break
        return memo[t]

    return rec(tuple(s))
