"""Finite commutative rings: Z/n, finite fields, and finite products.

Elements are dense indices 0..n-1.  Small rings get full addition and
multiplication tables; larger ones fall back to modular or log/antilog
arithmetic.  Units, square roots of one and the set W_A of elements a with
a and 1-a both invertible are computed by enumeration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import factorint

from .abgrp import FpAbelianGroup, direct_sum

TABLE_LIMIT = 256


class RingSpecError(ValueError):
    pass


@dataclass(frozen=True)
class RingSpec:
    kind: str  # "zmod" | "gf" | "prod"
    n: int = 0
    factors: Tuple["RingSpec", ...] = field(default=())

    def __post_init__(self):
        if self.kind == "zmod":
            if self.n < 2:
                raise RingSpecError(f"zmod modulus must be >= 2, got {self.n}")
        elif self.kind == "gf":
            if self.n < 2 or len(factorint(self.n)) != 1:
                raise RingSpecError(f"gf order must be a prime power, got {self.n}")
        elif self.kind == "prod":
            if len(self.factors) < 2:
                raise RingSpecError("prod needs at least two factors")
            if any(f.kind == "prod" for f in self.factors):
                raise RingSpecError("nested prod is not allowed")
        else:
            raise RingSpecError(f"unknown ring kind {self.kind!r}")

    def __str__(self) -> str:
        if self.kind == "prod":
            return "prod:" + ",".join(str(f) for f in self.factors)
        return f"{self.kind}:{self.n}"


def parse_ring_spec(text: str) -> RingSpec:
    """Parse ``zmod:<n>``, ``gf:<q>`` or ``prod:<spec>,<spec>[,...]``."""
    text = text.strip()
    kind, sep, rest = text.partition(":")
    if not sep:
        raise RingSpecError(f"malformed ring spec {text!r}")
    if kind == "prod":
        parts = [p.strip() for p in rest.split(",")]
        if any(p.startswith("prod") for p in parts):
            raise RingSpecError("nested prod is not allowed")
        return RingSpec("prod", factors=tuple(parse_ring_spec(p) for p in parts))
    if kind not in ("zmod", "gf"):
        raise RingSpecError(f"unknown ring kind {kind!r}")
    try:
        n = int(rest)
    except ValueError:
        raise RingSpecError(f"malformed ring spec {text!r}") from None
    return RingSpec(kind, n)


# ---------------------------------------------------------------------------


class FiniteRing:
    """Base class; subclasses provide _add/_mul/_neg on indices."""

    spec: RingSpec
    size: int

    def _setup_tables(self) -> None:
        n = self.size
        if n <= TABLE_LIMIT:
            self._addt = [[self._add(a, b) for b in range(n)] for a in range(n)]
            self._mult = [[self._mul(a, b) for b in range(n)] for a in range(n)]
        else:
            self._addt = self._mult = None
        self._negt = [self._neg(a) for a in range(n)]

    # arithmetic ------------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return self._addt[a][b] if self._addt is not None else self._add(a, b)

    def mul(self, a: int, b: int) -> int:
        return self._mult[a][b] if self._mult is not None else self._mul(a, b)

    def neg(self, a: int) -> int:
        return self._negt[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._negt[b])

    def pow(self, a: int, e: int) -> int:
        r = self.one
        base = a
        while e:
            if e & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            e >>= 1
        return r

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return self.from_int(1)

    def elements(self) -> range:
        return range(self.size)

    @cached_property
    def _inverses(self) -> Dict[int, int]:
        one = self.one
        inv = {}
        for a in range(self.size):
            if a in inv:
                continue
            for b in range(self.size):
                if self.mul(a, b) == one:
                    inv[a] = b
                    inv[b] = a
                    break
        return inv

    def inv(self, a: int) -> int:
        try:
            return self._inverses[a]
        except KeyError:
            raise ZeroDivisionError(f"{self.render(a)} is not a unit in {self.spec}") from None

    def is_unit(self, a: int) -> bool:
        return a in self._inverses

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    @cached_property
    def units(self) -> List[int]:
        return sorted(self._inverses)

    def from_int(self, k: int) -> int:
        raise NotImplementedError

    def render(self, a: int) -> str:
        raise NotImplementedError

    def parse_element(self, text: str) -> int:
        for a in range(self.size):
            if self.render(a) == text.replace(" ", ""):
                return a
        raise ValueError(f"no element {text!r} in {self.spec}")

    def additive_group(self):
        """(FpAbelianGroup, element -> generator vector) for the additive group."""
        raise NotImplementedError

    def is_field(self) -> bool:
        return len(self.units) == self.size - 1

    def is_local(self) -> bool:
        """A finite commutative ring is local iff its non-units form an additive subgroup."""
        nonunits = [a for a in range(self.size) if not self.is_unit(a)]
        s = set(nonunits)
        return all(self.add(a, b) in s for a in nonunits for b in nonunits)

    def __repr__(self) -> str:
        return f"<FiniteRing {self.spec}>"

    def __str__(self) -> str:
        return str(self.spec)


class ZMod(FiniteRing):
    def __init__(self, n: int):
        self.spec = RingSpec("zmod", n)
        self.size = n
        self._setup_tables()

    def _add(self, a, b):
        return (a + b) % self.size

    def _mul(self, a, b):
        return (a * b) % self.size

    def _neg(self, a):
        return (-a) % self.size

    @cached_property
    def _inverses(self) -> Dict[int, int]:
        n = self.size
        return {a: pow(a, -1, n) for a in range(n) if math.gcd(a, n) == 1}

    def from_int(self, k: int) -> int:
        return k % self.size

    def render(self, a: int) -> str:
        return str(a)

    def additive_group(self):
        return FpAbelianGroup.cyclic(self.size), (lambda a: [a])


def _poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> List[int]:
    d = len(mod) - 1
    prod_ = [0] * (2 * d - 1 if d else 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod_[i + j] = (prod_[i + j] + x * y) % p
    for k in range(len(prod_) - 1, d - 1, -1):
        c = prod_[k]
        if c:
            for j in range(d + 1):
                prod_[k - d + j] = (prod_[k - d + j] - c * mod[j]) % p
    return (prod_ + [0] * d)[:d]


def least_irreducible(p: int, d: int) -> List[int]:
    """Lexicographically least monic irreducible of degree d over F_p (low coefficients first)."""
    if d == 1:
        return [0, 1]
    for code in range(p ** d):
        coeffs = [(code // p ** i) % p for i in range(d)] + [1]
        if coeffs[0] == 0:
            continue
        if _is_irreducible(coeffs, p):
            return coeffs
    raise ArithmeticError("no irreducible polynomial found")


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    # trial division by all monic polynomials of degree <= d/2
    d = len(f) - 1
    for k in range(1, d // 2 + 1):
        for code in range(p ** k):
            g = [(code // p ** i) % p for i in range(k)] + [1]
            if _poly_rem(f, g, p) == [0] * k:
                return False
    return True


def _poly_rem(f: Sequence[int], g: Sequence[int], p: int) -> List[int]:
    r = list(f)
    k = len(g) - 1
    for i in range(len(r) - 1, k - 1, -1):
        c = r[i]
        if c:
            for j in range(k + 1):
                r[i - k + j] = (r[i - k + j] - c * g[j]) % p
    return r[:k]


class GF(FiniteRing):
    """F_q with q = p^d; element index = sum c_i p^i for the coefficient vector."""

    def __init__(self, q: int):
        self.spec = RingSpec("gf", q)
        (p, d), = factorint(q).items()
        self.p, self.d, self.size = int(p), int(d), q
        self.modulus = least_irreducible(self.p, self.d)
        self._digits = [self._to_digits(a) for a in range(q)]
        # log/antilog tables w.r.t. the least primitive element
        self._exp: List[int] = []
        self._log: Dict[int, int] = {}
        for g in range(1, q):
            seq = [1]
            x = 1
            for _ in range(q - 2):
                x = self._mul_poly(x, g)
                if x == 1:
                    break
                seq.append(x)
            if len(seq) == q - 1:
                self._exp = seq
                self._log = {v: i for i, v in enumerate(seq)}
                self.primitive = g
                break
        self._setup_tables()

    def _to_digits(self, a: int) -> List[int]:
        return [(a // self.p ** i) % self.p for i in range(self.d)]

    def _from_digits(self, c: Sequence[int]) -> int:
        return sum(int(x) * self.p ** i for i, x in enumerate(c))

    def _mul_poly(self, a: int, b: int) -> int:
        return self._from_digits(_poly_mulmod(self._to_digits(a), self._to_digits(b), self.modulus, self.p))

    def _add(self, a, b):
        return self._from_digits([(x + y) % self.p for x, y in zip(self._digits[a], self._digits[b])])

    def _neg(self, a):
        return self._from_digits([(-x) % self.p for x in self._digits[a]])

    def _mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.size - 1)]

    @cached_property
    def _inverses(self) -> Dict[int, int]:
        m = self.size - 1
        return {a: self._exp[(-self._log[a]) % m] for a in range(1, self.size)}

    def from_int(self, k: int) -> int:
        return k % self.p

    def render(self, a: int) -> str:
        if self.d == 1:
            return str(a)
        terms = []
        for i in range(self.d - 1, -1, -1):
            c = self._digits[a][i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) if terms else "0"

    def additive_group(self):
        G = FpAbelianGroup(self.d, [{i: self.p} for i in range(self.d)])
        return G, (lambda a: list(self._digits[a]))


class ProductRing(FiniteRing):
    def __init__(self, factors: Sequence[FiniteRing]):
        self.factors = list(factors)
        self.spec = RingSpec("prod", factors=tuple(f.spec for f in self.factors))
        self.size = math.prod(f.size for f in self.factors)
        self._strides = []
        s = 1
        for f in reversed(self.factors):
            self._strides.append(s)
            s *= f.size
        self._strides.reverse()
        self._comp = [self.split(a) for a in range(self.size)]
        self._setup_tables()

    def split(self, a: int) -> Tuple[int, ...]:
        return tuple((a // st) % f.size for st, f in zip(self._strides, self.factors))

    def join(self, comps: Sequence[int]) -> int:
        return sum(c * st for c, st in zip(comps, self._strides))

    def _add(self, a, b):
        return self.join([f.add(x, y) for f, x, y in zip(self.factors, self._comp[a], self._comp[b])])

    def _mul(self, a, b):
        return self.join([f.mul(x, y) for f, x, y in zip(self.factors, self._comp[a], self._comp[b])])

    def _neg(self, a):
        return self.join([f.neg(x) for f, x in zip(self.factors, self._comp[a])])

    @cached_property
    def _inverses(self) -> Dict[int, int]:
        out = {}
        for combo in product(*[f.units for f in self.factors]):
            out[self.join(combo)] = self.join([f.inv(x) for f, x in zip(self.factors, combo)])
        return out

    def from_int(self, k: int) -> int:
        return self.join([f.from_int(k) for f in self.factors])

    def render(self, a: int) -> str:
        return "(" + ",".join(f.render(x) for f, x in zip(self.factors, self._comp[a])) + ")"

    def additive_group(self):
        parts = [f.additive_group() for f in self.factors]
        ds = direct_sum(*[g for g, _ in parts])

        def vec(a):
            out = []
            for (g, fn), x in zip(parts, self._comp[a]):
                out.extend(fn(x))
            return out

        return ds.group, vec


def make_ring(spec) -> FiniteRing:
    """Build a ring from a RingSpec or spec string."""
    if isinstance(spec, str):
        spec = parse_ring_spec(spec)
    if spec.kind == "zmod":
        return ZMod(spec.n)
    if spec.kind == "gf":
        return GF(spec.n)
    return ProductRing([make_ring(f) for f in spec.factors])


# ---------------------------------------------------------------------------


class UnitGroup:
    """The unit group A* with an abelian-group structure and discrete logs.

    Generators are picked greedily (largest order first); the relation module
    is the polycyclic one, so ``structure`` presents A* on those generators and
    ``vector(a)`` is the exponent vector of a in them.
    """

    def __init__(self, R: FiniteRing):
        self.ring = R
        self.elements = R.units
        one = R.one
        orders = {a: self._order(a) for a in self.elements}
        table: Dict[int, Tuple[int, ...]] = {one: ()}
        gens: List[int] = []
        rels: List[Dict[int, int]] = []
        for a in sorted(self.elements, key=lambda x: (-orders[x], x)):
            if a in table:
                continue
            k = len(gens)
            # relative order of a modulo the current subgroup
            m, x = 1, a
            while x not in table:
                x = R.mul(x, a)
                m += 1
            rel = {k: m}
            for i, e in enumerate(table[x]):
                if e:
                    rel[i] = -e
            rels.append(rel)
            gens.append(a)
            new = {}
            for h, vec in table.items():
                y = h
                for e in range(m):
                    new[y] = vec + (e,)
                    y = R.mul(y, a)
            table = new
        self.generators = gens
        self._vec = {h: tuple(v) + (0,) * (len(gens) - len(v)) for h, v in table.items()}
        self.structure = FpAbelianGroup(len(gens), rels, name="units")
        if len(self._vec) != len(self.elements):
            raise ArithmeticError("unit group enumeration inconsistent")

    def _order(self, a: int) -> int:
        R = self.ring
        one = R.one
        k, x = 1, a
        while x != one:
            x = R.mul(x, a)
            k += 1
        return k

    def vector(self, a: int) -> Tuple[int, ...]:
        """Exponent vector of a unit in ``generators``."""
        return self._vec[a]

    def dlog(self, a: int) -> Tuple[int, ...]:
        """Canonical coordinates of a unit (one per invariant factor)."""
        return self.structure.coords(self._vec[a])

    def from_vector(self, v: Sequence[int]) -> int:
        R = self.ring
        x = R.one
        for g, e in zip(self.generators, v):
            x = R.mul(x, R.pow(g, e % self.order))
        return x

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def invariant_factors(self) -> List[int]:
        return self.structure.torsion

    @cached_property
    def independent_generators(self) -> List[int]:
        """One unit per canonical cyclic factor."""
        return [self.from_vector([self.structure.lift(i).get(g, 0) for g in range(len(self.generators))])
                for i in range(self.structure.rank)]

    def element_order(self, a: int) -> int:
        return self._order(a)


_UNIT_CACHE: Dict[RingSpec, UnitGroup] = {}


def unit_group(R: FiniteRing) -> UnitGroup:
    if R.spec not in _UNIT_CACHE:
        _UNIT_CACHE[R.spec] = UnitGroup(R)
    return _UNIT_CACHE[R.spec]


def mu2(R: FiniteRing) -> List[int]:
    """Units with a^2 = 1."""
    one = R.one
    return [a for a in R.units if R.mul(a, a) == one]


def w_set(R: FiniteRing) -> List[int]:
    """Elements a with a and 1 - a both invertible."""
    one = R.one
    return [a for a in R.elements() if R.is_unit(a) and R.is_unit(R.sub(one, a))]


def h0_units_on_A(R: FiniteRing) -> FpAbelianGroup:
    """Coinvariants of A under a.x = a^2 x: A modulo the span of (a^2 - 1) b."""
    G, vec = R.additive_group()
    one = R.one
    rel_vecs = []
    seen = set()
    for a in R.units:
        c = R.sub(R.mul(a, a), one)
        if c in seen:
            continue
        seen.add(c)
        for b in _additive_generators(R):
            rel_vecs.append(vec(R.mul(c, b)))
    return FpAbelianGroup(G.ngens, list(G.relations) + rel_vecs, name="H0(A*,A)")


def _additive_generators(R: FiniteRing) -> List[int]:
    if isinstance(R, ZMod):
        return [1]
    if isinstance(R, GF):
        return [R.p ** i for i in range(R.d)]
    gens = []
    for k, f in enumerate(R.factors):
        for g in _additive_generators(f):
            comps = [0] * len(R.factors)
            comps[k] = g
            gens.append(R.join(comps))
    return gens
