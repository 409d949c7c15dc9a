"""Exact arithmetic: sparse multivariate polynomials over Q and exact linear algebra.

Exponent vectors are packed into a single Python int, ``BITS`` bits per
variable, so that monomial multiplication is integer addition.
"""
from __future__ import annotations

import random
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

import flint

BITS = 20
MASK = (1 << BITS) - 1


class UsageError(ValueError):
    """Raised when an operation is called outside its contract."""


def _norm(c):
    # keep integers as int, other rationals as Fraction
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class VarSpace:
    """Ordered, immutable list of variable names."""

    __slots__ = ("names", "index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate variable names in {names}")
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, VarSpace) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarSpace({list(self.names)})"

    def extend(self, *names: str) -> "VarSpace":
        return VarSpace(self.names + tuple(n for n in names if n not in self.index))

    def pos(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UsageError(f"undeclared variable {name!r}") from None

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != len(self.names):
            raise UsageError("exponent vector length does not match the variable space")
        key = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MASK:
                raise UsageError(f"exponent {e} out of range")
            key |= e << (BITS * i)
        return key

    def unpack(self, key: int) -> Tuple[int, ...]:
        return tuple((key >> (BITS * i)) & MASK for i in range(len(self.names)))


class MultiPoly:
    """Sparse polynomial with rational coefficients over a VarSpace."""

    __slots__ = ("space", "terms")

    def __init__(self, space: VarSpace, terms: Mapping[int, Rational] | None = None):
        self.space = space
        self.terms: Dict[int, Rational] = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self.terms[k] = _norm(c)

    # constructors
    @classmethod
    def _raw(cls, space, terms):
        p = cls.__new__(cls)
        p.space = space
        p.terms = terms
        return p

    @classmethod
    def zero(cls, space: VarSpace) -> "MultiPoly":
        return cls._raw(space, {})

    @classmethod
    def const(cls, space: VarSpace, c) -> "MultiPoly":
        return cls._raw(space, {0: _norm(c)} if c else {})

    @classmethod
    def var(cls, space: VarSpace, name: str) -> "MultiPoly":
        return cls._raw(space, {1 << (BITS * space.pos(name)): 1})

    @classmethod
    def monomial(cls, space: VarSpace, exps: Sequence[int], c=1) -> "MultiPoly":
        return cls._raw(space, {space.pack(exps): _norm(c)} if c else {})

    @classmethod
    def from_dict(cls, space: VarSpace, d: Mapping[Tuple[int, ...], Rational]) -> "MultiPoly":
        return cls(space, {space.pack(e): c for e, c in d.items()})

    def to_dict(self) -> Dict[Tuple[int, ...], Rational]:
        return {self.space.unpack(k): c for k, c in self.terms.items()}

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def _check(self, other):
        if self.space != other.space:
            raise UsageError("polynomials live in different variable spaces")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(self.space, other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.space == other.space and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.space, frozenset(self.terms.items())))

    def exponents(self, key: int) -> Tuple[int, ...]:
        return self.space.unpack(key)

    def sorted_terms(self) -> List[Tuple[Tuple[int, ...], Rational]]:
        """Terms in decreasing graded-lexicographic order."""
        items = [(self.space.unpack(k), c) for k, c in self.terms.items()]
        items.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return items

    def degree(self) -> int:
        if not self.terms:
            raise UsageError("degree of the zero polynomial is undefined")
        return max(sum(self.space.unpack(k)) for k in self.terms)

    def degree_in(self, names: Iterable[str]) -> set:
        """Set of total degrees in the given variables over all terms."""
        if not self.terms:
            raise UsageError("degree of the zero polynomial is undefined")
        idx = [self.space.pos(n) for n in names]
        return {sum((k >> (BITS * i)) & MASK for i in idx) for k in self.terms}

    # arithmetic
    def __neg__(self):
        return MultiPoly._raw(self.space, {k: -c for k, c in self.terms.items()})

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k, 0) + c
            if s:
                t[k] = _norm(s)
            else:
                t.pop(k, None)
        return MultiPoly._raw(self.space, t)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = _norm(c)
        if not c:
            return MultiPoly.zero(self.space)
        return MultiPoly._raw(self.space, {k: _norm(v * c) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return poly_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise UsageError("negative power")
        result = MultiPoly.const(self.space, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def diff(self, name: str, times: int = 1) -> "MultiPoly":
        return poly_diff(self, name, times)

    def substitute(self, bindings: Mapping[str, "MultiPoly"], target: VarSpace | None = None) -> "MultiPoly":
        return poly_substitute(self, bindings, target)

    def embed(self, target: VarSpace) -> "MultiPoly":
        """Same polynomial read in a larger variable space."""
        if target == self.space:
            return self
        pos = [target.pos(n) for n in self.space.names]
        if pos == list(range(len(pos))):
            return MultiPoly._raw(target, dict(self.terms))
        t = {}
        for k, c in self.terms.items():
            nk = 0
            for i, j in enumerate(pos):
                nk |= ((k >> (BITS * i)) & MASK) << (BITS * j)
            t[nk] = c
        return MultiPoly._raw(target, t)

    def restrict(self, target: VarSpace) -> "MultiPoly":
        """Read in a smaller space; every used variable must exist there."""
        pos = []
        for i, n in enumerate(self.space.names):
            pos.append(target.index.get(n))
        t = {}
        for k, c in self.terms.items():
            nk = 0
            for i, j in enumerate(pos):
                e = (k >> (BITS * i)) & MASK
                if e:
                    if j is None:
                        raise UsageError(f"variable {self.space.names[i]!r} missing from target space")
                    nk |= e << (BITS * j)
            t[nk] = c
        return MultiPoly._raw(target, t)

    def evaluate(self, values: Mapping[str, Rational]):
        """Full numeric evaluation (all variables must be bound)."""
        vals = [values[n] for n in self.space.names]
        total = 0
        for k, c in self.terms.items():
            term = c
            for i, v in enumerate(vals):
                e = (k >> (BITS * i)) & MASK
                if e:
                    term *= v ** e
            total += term
        return _norm(total)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(self.space.names, exps) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                cs = f"({c})" if isinstance(c, Fraction) else str(c)
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check(q)
    if len(p.terms) > len(q.terms):
        p, q = q, p
    t: Dict[int, Rational] = {}
    qi = list(q.terms.items())
    get = t.get
    for k1, c1 in p.terms.items():
        for k2, c2 in qi:
            k = k1 + k2
            t[k] = get(k, 0) + c1 * c2
    return MultiPoly._raw(p.space, {k: _norm(c) for k, c in t.items() if c})


def poly_diff(p: MultiPoly, name: str, times: int = 1) -> MultiPoly:
    i = p.space.pos(name)
    shift = BITS * i
    t = {}
    for k, c in p.terms.items():
        e = (k >> shift) & MASK
        if e < times:
            continue
        f = 1
        for j in range(times):
            f *= e - j
        t[k - (times << shift)] = _norm(c * f)
    return MultiPoly._raw(p.space, t)


def poly_substitute(p: MultiPoly, bindings: Mapping[str, MultiPoly],
                    target: VarSpace | None = None) -> MultiPoly:
    """Ring homomorphism sending each bound variable to a polynomial.

    Unbound variables are kept and must exist in ``target``.
    """
    if target is None:
        spaces = {b.space for b in bindings.values()}
        target = spaces.pop() if len(spaces) == 1 else p.space
    images = []
    for n in p.space.names:
        if n in bindings:
            b = bindings[n]
            if b.space != target:
                b = b.embed(target) if all(v in target.index for v in b.space.names) else b.restrict(target)
            images.append(b)
        else:
            images.append(None)
    power_cache: Dict[Tuple[int, int], MultiPoly] = {}

    def power(i, e):
        key = (i, e)
        if key not in power_cache:
            if e == 1:
                power_cache[key] = images[i]
            else:
                power_cache[key] = power(i, e - 1) * images[i]
        return power_cache[key]

    result: Dict[int, Rational] = {}
    for k, c in p.terms.items():
        fixed = 0
        term = None
        for i, n in enumerate(p.space.names):
            e = (k >> (BITS * i)) & MASK
            if not e:
                continue
            if images[i] is None:
                fixed |= e << (BITS * target.pos(n))
            else:
                term = power(i, e) if term is None else term * power(i, e)
        if term is None:
            result[fixed] = result.get(fixed, 0) + c
        else:
            for tk, tc in term.terms.items():
                kk = tk + fixed
                result[kk] = result.get(kk, 0) + c * tc
    return MultiPoly._raw(target, {k: _norm(c) for k, c in result.items() if c})


class ExactMatrix:
    """Sparse rational matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[Tuple[int, int], Rational] | None = None):
        self.rows = rows
        self.cols = cols
        self.entries: Dict[Tuple[int, int], Rational] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise UsageError(f"entry {(i, j)} outside a {rows}x{cols} matrix")
            if v:
                self.entries[(i, j)] = _norm(v)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Rational]]) -> "ExactMatrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        ent = {}
        for i, row in enumerate(rows):
            if len(row) != nc:
                raise UsageError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    ent[(i, j)] = v
        return cls(nr, nc, ent)

    def dense(self) -> List[List[Rational]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def apply(self, v: Sequence[Rational]) -> List[Rational]:
        out = [0] * self.rows
        for (i, j), a in self.entries.items():
            out[i] += a * v[j]
        return [_norm(x) for x in out]

    def _flint(self):
        m = flint.fmpq_mat(self.rows, self.cols)
        for (i, j), v in self.entries.items():
            v = Fraction(v)
            m[i, j] = flint.fmpq(v.numerator, v.denominator)
        return m

    def rank(self) -> int:
        if not self.rows or not self.cols:
            return 0
        return self._flint().rank()


def _from_fmpq(x) -> Rational:
    return _norm(Fraction(int(x.p), int(x.q)))


def exact_kernel(M: ExactMatrix) -> List[List[Rational]]:
    """Basis of the right kernel read off the reduced row echelon form.

    One vector per free column, with a 1 in that column; the result is
    verified exactly before being returned.
    """
    if M.cols == 0:
        return []
    if M.rows == 0:
        return [[1 if j == i else 0 for j in range(M.cols)] for i in range(M.cols)]
    R, rank = M._flint().rref()
    pivots = []
    for i in range(rank):
        for j in range(M.cols):
            if R[i, j] != 0:
                pivots.append(j)
                break
    pivset = set(pivots)
    basis = []
    for free in range(M.cols):
        if free in pivset:
            continue
        v = [0] * M.cols
        v[free] = 1
        for i, pj in enumerate(pivots):
            v[pj] = -_from_fmpq(R[i, free])
        basis.append(v)
    for v in basis:
        if any(M.apply(v)):
            raise ArithmeticError("kernel verification failed")
    return basis


# modular helpers

def random_prime(bits: int, rng: random.Random) -> int:
    while True:
        c = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if flint.fmpz(c).is_prime():
            return c


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    if not rows or not rows[0]:
        return 0
    return flint.nmod_mat([[x % p for x in r] for r in rows], p).rank()


def rational_rank_mod_p(M: ExactMatrix, p: int) -> int | None:
    """Rank of M reduced mod p, or None when p divides a denominator."""
    rows = [[0] * M.cols for _ in range(M.rows)]
    for (i, j), v in M.entries.items():
        v = Fraction(v)
        if v.denominator % p == 0:
            return None
        rows[i][j] = v.numerator * pow(v.denominator, -1, p) % p
    return rank_mod_p(rows, p)
