"""Binary forms, covariants and the transvectant recipe grammar.

A form of order n is written f = sum_i C(n, i) a_i x^(n-i) y^i.  Covariants
carry their multidegree (one entry per summand of the form space), their
order and optionally the recipe that produced them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .kernel import MultiPoly, UsageError, VarSpace

_DEFAULT_NAMES = "fghpqstw"


class FormSpace:
    """A direct sum S_{n1} + ... + S_{ns} with one named slot per summand."""

    def __init__(self, orders: Sequence[int], names: Optional[Sequence[str]] = None):
        orders = tuple(int(n) for n in orders)
        if any(n < 0 for n in orders):
            raise UsageError("form orders must be nonnegative")
        if names is None:
            if len(orders) > len(_DEFAULT_NAMES):
                names = [f"f{i}" for i in range(len(orders))]
            else:
                names = list(_DEFAULT_NAMES[: len(orders)])
        names = tuple(names)
        if len(names) != len(orders) or len(set(names)) != len(names):
            raise UsageError("slot names must be distinct, one per summand")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm) or nm == "T" or nm in ("x", "y"):
                raise UsageError(f"invalid slot name {nm!r}")
        self.orders = orders
        self.names = names
        cvars = [c for s in range(len(orders)) for c in self.coefficient_names(s)]
        self.varspace = VarSpace(cvars + ["x", "y"])

    def __repr__(self):
        return "FormSpace(" + " + ".join(f"S{n}[{m}]" for n, m in zip(self.orders, self.names)) + ")"

    def __eq__(self, other):
        return isinstance(other, FormSpace) and (self.orders, self.names) == (other.orders, other.names)

    def __hash__(self):
        return hash((self.orders, self.names))

    def __len__(self):
        return len(self.orders)

    def slot(self, name_or_index) -> int:
        if isinstance(name_or_index, int):
            if not 0 <= name_or_index < len(self.orders):
                raise UsageError(f"invalid slot {name_or_index}")
            return name_or_index
        try:
            return self.names.index(name_or_index)
        except ValueError:
            raise UsageError(f"unknown slot {name_or_index!r}") from None

    def coefficient_names(self, slot: int) -> List[str]:
        nm = self.names[slot]
        return [f"{nm}_{i}" for i in range(self.orders[slot] + 1)]

    def unit(self, slot: int) -> Tuple[int, ...]:
        return tuple(1 if i == slot else 0 for i in range(len(self.orders)))


@dataclass
class BinaryForm:
    """Form of order n given by its n+1 binomial-convention coefficients."""

    order: int
    coefficients: List[Union[MultiPoly, int, Fraction]]
    space: Optional[FormSpace] = None
    slot: Optional[int] = None

    def __post_init__(self):
        if len(self.coefficients) != self.order + 1:
            raise UsageError("a form of order n needs n+1 coefficients")

    def as_covariant(self) -> "Covariant":
        space = self.space
        if space is None:
            raise UsageError("form is not attached to a form space")
        vs = space.varspace
        x, y = MultiPoly.var(vs, "x"), MultiPoly.var(vs, "y")
        n = self.order
        value = MultiPoly.zero(vs)
        for i, a in enumerate(self.coefficients):
            if not isinstance(a, MultiPoly):
                a = MultiPoly.const(vs, a)
            value = value + a * x ** (n - i) * y ** i * comb(n, i)
        md = space.unit(self.slot) if self.slot is not None else tuple([0] * len(space))
        recipe = space.names[self.slot] if self.slot is not None else None
        return Covariant(space, value, md, n, recipe)


def generic_form(space: FormSpace, slot) -> BinaryForm:
    s = space.slot(slot)
    vs = space.varspace
    coeffs = [MultiPoly.var(vs, c) for c in space.coefficient_names(s)]
    return BinaryForm(space.orders[s], coeffs, space, s)


class Covariant:
    """Polynomial in form coefficients and (x, y) with grading bookkeeping."""

    __slots__ = ("space", "value", "multidegree", "order", "recipe", "_coeffs")

    def __init__(self, space: FormSpace, value: MultiPoly, multidegree: Sequence[int],
                 order: int, recipe: Optional[str] = None):
        if value.space != space.varspace:
            raise UsageError("covariant value must live in the form space's variables")
        self.space = space
        self.value = value
        self.multidegree = tuple(multidegree)
        self.order = int(order)
        self.recipe = recipe
        self._coeffs = None

    def __repr__(self):
        tag = self.recipe if self.recipe is not None else "?"
        return f"Covariant({tag}, degree={self.multidegree}, order={self.order})"

    @property
    def degree(self) -> int:
        return sum(self.multidegree)

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def coeffs(self) -> List[MultiPoly]:
        """Plain coefficients c_j of x^(k-j) y^j, as polynomials free of x, y."""
        if self._coeffs is None:
            vs = self.space.varspace
            ix, iy = vs.pos("x"), vs.pos("y")
            from .kernel import BITS, MASK
            mx = MASK << (BITS * ix)
            my = MASK << (BITS * iy)
            parts: List[Dict[int, object]] = [dict() for _ in range(self.order + 1)]
            for k, c in self.value.terms.items():
                ey = (k & my) >> (BITS * iy)
                ex = (k & mx) >> (BITS * ix)
                if ex + ey != self.order:
                    raise UsageError(f"value is not homogeneous of order {self.order} in (x, y)")
                parts[ey][k & ~(mx | my)] = c
            self._coeffs = [MultiPoly._raw(vs, p) for p in parts]
        return self._coeffs

    @classmethod
    def from_coeffs(cls, space: FormSpace, coeffs: Sequence[MultiPoly], multidegree, recipe=None):
        vs = space.varspace
        k = len(coeffs) - 1
        from .kernel import BITS
        ix, iy = vs.pos("x"), vs.pos("y")
        terms = {}
        for j, c in enumerate(coeffs):
            shift = ((k - j) << (BITS * ix)) | (j << (BITS * iy))
            for key, v in c.terms.items():
                terms[key + shift] = v
        cov = cls(space, MultiPoly._raw(vs, terms), multidegree, k, recipe)
        cov._coeffs = [c if c.space == vs else c.embed(vs) for c in coeffs]
        return cov

    def __mul__(self, other: "Covariant") -> "Covariant":
        if not isinstance(other, Covariant):
            return NotImplemented
        if other.space != self.space:
            raise UsageError("covariants from different form spaces")
        md = tuple(a + b for a, b in zip(self.multidegree, other.multidegree))
        recipe = None
        if self.recipe is not None and other.recipe is not None:
            recipe = format_recipe(parse_recipe(f"{self.recipe}*{other.recipe}"))
        return Covariant(self.space, self.value * other.value, md, self.order + other.order, recipe)

    def __pow__(self, e: int) -> "Covariant":
        if e < 0:
            raise UsageError("negative power")
        md = tuple(a * e for a in self.multidegree)
        recipe = None
        if self.recipe is not None:
            recipe = format_recipe(parse_recipe(f"({self.recipe})^{e}")) if e else "1"
        return Covariant(self.space, self.value ** e, md, self.order * e, recipe)

    def scale(self, c) -> "Covariant":
        return Covariant(self.space, self.value.scale(c), self.multidegree, self.order, None)

    def audit(self) -> bool:
        """True iff the value is homogeneous with the declared grading (zero passes)."""
        if self.value.is_zero():
            return True
        vs = self.space.varspace
        for s in range(len(self.space)):
            if self.value.degree_in(self.space.coefficient_names(s)) != {self.multidegree[s]}:
                return False
        return self.value.degree_in(["x", "y"]) == {self.order}


def covariant_one(space: FormSpace) -> Covariant:
    return Covariant(space, MultiPoly.const(space.varspace, 1), [0] * len(space), 0, "1")


@dataclass(frozen=True)
class UnimodularMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise UsageError("matrix must have determinant 1")

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, o: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                                self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    @classmethod
    def random(cls, rng, bound: int = 10, steps: int = 4) -> "UnimodularMatrix":
        """Product of elementary shears with entries bounded by ``bound``."""
        while True:
            g = cls(1, 0, 0, 1)
            for _ in range(steps):
                t = rng.randint(-3, 3)
                g = g @ (cls(1, t, 0, 1) if rng.random() < 0.5 else cls(1, 0, t, 1))
            if max(abs(g.a), abs(g.b), abs(g.c), abs(g.d)) <= bound:
                return g


def _induced_coefficients(space: FormSpace, slot: int, g: UnimodularMatrix) -> List[MultiPoly]:
    """Binomial coefficients of f(g x), read back from the substituted form."""
    vs = space.varspace
    f = generic_form(space, slot).as_covariant().value
    x, y = MultiPoly.var(vs, "x"), MultiPoly.var(vs, "y")
    fg = f.substitute({"x": x * g.a + y * g.b, "y": x * g.c + y * g.d}, vs)
    n = space.orders[slot]
    cov = Covariant(space, fg, space.unit(slot), n)
    return [c.scale(Fraction(1, comb(n, i))) for i, c in enumerate(cov.coeffs())]


def sl2_act(g: UnimodularMatrix, c: Covariant) -> Covariant:
    """(g.c)(f, x) = c(g^-1 . f, g^-1 x) with (g.f)(x) = f(g^-1 x)."""
    space = c.space
    vs = space.varspace
    bindings: Dict[str, MultiPoly] = {}
    for s in range(len(space)):
        for name, image in zip(space.coefficient_names(s), _induced_coefficients(space, s, g)):
            bindings[name] = image
    gi = g.inverse()
    x, y = MultiPoly.var(vs, "x"), MultiPoly.var(vs, "y")
    bindings["x"] = x * gi.a + y * gi.b
    bindings["y"] = x * gi.c + y * gi.d
    return Covariant(space, c.value.substitute(bindings, vs), c.multidegree, c.order, c.recipe)


def coefficient_vector(c: Covariant, basis_monomials: Sequence[Sequence[int]]) -> List:
    vs = c.space.varspace
    keys = [vs.pack(m) for m in basis_monomials]
    pos = {k: i for i, k in enumerate(keys)}
    out = [0] * len(keys)
    for k, v in c.value.terms.items():
        if k not in pos:
            raise ArithmeticError(f"monomial {vs.unpack(k)} is not in the supplied basis")
        out[pos[k]] = v
    return out


def from_coefficient_vector(space: FormSpace, vec, basis_monomials, multidegree, order) -> Covariant:
    vs = space.varspace
    value = MultiPoly(vs, {vs.pack(m): v for m, v in zip(basis_monomials, vec)})
    return Covariant(space, value, multidegree, order)


# recipe grammar:  expr := factor ('*' factor)* ; factor := atom ('^' int)?
#                  atom := name | '1' | 'T(' expr ',' expr ',' int ')' | '(' expr ')'

@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Trans:
    lhs: "Node"
    rhs: "Node"
    r: int


@dataclass(frozen=True)
class Prod:
    factors: Tuple[Tuple["Node", int], ...] = field(default=())


Node = Union[Atom, Trans, Prod]

_TOKEN = re.compile(r"\s*(?:(T\()|([A-Za-z_][A-Za-z0-9_]*)|(\d+)|(.))")


def _tokens(s: str):
    pos = 0
    out = []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            break
        pos = m.end()
        if m.group(1):
            out.append(("T", None))
        elif m.group(2):
            out.append(("name", m.group(2)))
        elif m.group(3):
            out.append(("int", int(m.group(3))))
        elif m.group(4) and not m.group(4).isspace():
            out.append(("op", m.group(4)))
    return out


def parse_recipe(text: str) -> Node:
    toks = _tokens(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else (None, None)

    def take(kind, val=None):
        nonlocal i
        t = peek()
        if t[0] != kind or (val is not None and t[1] != val):
            raise UsageError(f"malformed recipe {text!r} near token {i}")
        i += 1
        return t[1]

    def atom():
        t = peek()
        if t[0] == "T":
            take("T")
            a = expr()
            take("op", ",")
            b = expr()
            take("op", ",")
            r = take("int")
            take("op", ")")
            return Trans(a, b, r)
        if t[0] == "name":
            return Atom(take("name"))
        if t[0] == "int":
            v = take("int")
            if v != 1:
                raise UsageError("only the constant 1 is allowed in recipes")
            return Prod(())
        if t == ("op", "("):
            take("op", "(")
            e = expr()
            take("op", ")")
            return e
        raise UsageError(f"malformed recipe {text!r}")

    def factor():
        a = atom()
        e = 1
        if peek() == ("op", "^"):
            take("op", "^")
            e = take("int")
        return a, e

    def expr():
        fs = [factor()]
        while peek() == ("op", "*"):
            take("op", "*")
            fs.append(factor())
        if len(fs) == 1 and fs[0][1] == 1:
            return fs[0][0]
        return _make_prod(fs)

    node = expr()
    if i != len(toks):
        raise UsageError(f"trailing input in recipe {text!r}")
    return node


def _make_prod(factors) -> Node:
    acc: Dict[str, List] = {}
    for node, e in factors:
        if isinstance(node, Prod):
            for sub, se in node.factors:
                key = format_recipe(sub)
                acc.setdefault(key, [sub, 0])[1] += se * e
        elif e:
            key = format_recipe(node)
            acc.setdefault(key, [node, 0])[1] += e
    items = tuple((acc[k][0], acc[k][1]) for k in sorted(acc) if acc[k][1])
    if len(items) == 1 and items[0][1] == 1:
        return items[0][0]
    return Prod(items)


def product(factors: Sequence[Tuple[Node, int]]) -> Node:
    return _make_prod(list(factors))


def format_recipe(node: Node) -> str:
    if isinstance(node, Atom):
        return node.name
    if isinstance(node, Trans):
        return f"T({format_recipe(node.lhs)}, {format_recipe(node.rhs)}, {node.r})"
    if not node.factors:
        return "1"
    parts = []
    for sub, e in node.factors:
        s = format_recipe(sub)
        parts.append(s if e == 1 else f"{s}^{e}")
    return "*".join(parts)


def recipe_grading(node: Node, space: FormSpace) -> Tuple[Tuple[int, ...], int]:
    """(multidegree, order) of a recipe, assuming it does not vanish."""
    if isinstance(node, Atom):
        s = space.slot(node.name)
        return space.unit(s), space.orders[s]
    if isinstance(node, Trans):
        da, oa = recipe_grading(node.lhs, space)
        db, ob = recipe_grading(node.rhs, space)
        return tuple(a + b for a, b in zip(da, db)), oa + ob - 2 * node.r
    md = [0] * len(space)
    order = 0
    for sub, e in node.factors:
        d, o = recipe_grading(sub, space)
        md = [a + e * b for a, b in zip(md, d)]
        order += e * o
    return tuple(md), order


def rename_slots(node: Node, mapping: Dict[str, str]) -> Node:
    if isinstance(node, Atom):
        return Atom(mapping.get(node.name, node.name))
    if isinstance(node, Trans):
        return Trans(rename_slots(node.lhs, mapping), rename_slots(node.rhs, mapping), node.r)
    return _make_prod([(rename_slots(s, mapping), e) for s, e in node.factors])


def substitute_atoms(node: Node, mapping: Dict[str, Node]) -> Node:
    if isinstance(node, Atom):
        return mapping.get(node.name, node)
    if isinstance(node, Trans):
        return Trans(substitute_atoms(node.lhs, mapping), substitute_atoms(node.rhs, mapping), node.r)
    return _make_prod([(substitute_atoms(s, mapping), e) for s, e in node.factors])


def fold_recipe(node: Node, leaf: Callable, trans: Callable, mul: Callable, power: Callable,
                one: Callable, cache: Optional[dict] = None):
    """Evaluate a recipe bottom-up with caller-supplied operations, memoised by string."""
    if cache is None:
        cache = {}

    def go(n):
        key = format_recipe(n)
        if key in cache:
            return cache[key]
        if isinstance(n, Atom):
            v = leaf(n.name)
        elif isinstance(n, Trans):
            v = trans(go(n.lhs), go(n.rhs), n.r)
        else:
            v = None
            for sub, e in n.factors:
                t = go(sub)
                if e != 1:
                    t = power(t, e)
                v = t if v is None else mul(v, t)
            if v is None:
                v = one()
        cache[key] = v
        return v

    return go(node)
