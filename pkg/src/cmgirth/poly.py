"""Exact multivariate polynomials.

Coefficients live in either the rationals (``fractions.Fraction``) or a prime
field ``F_p`` (plain ``int`` reduced mod ``p``).  Monomials are tuples of
nonnegative exponents, one per ring variable.  Every polynomial carries a
reference to its :class:`PolyRing`; arithmetic across different rings is
rejected so that variable indices never get silently confused.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InputError

Monomial = tuple  # tuple[int, ...]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """Coefficient field: ``characteristic == 0`` means Q, otherwise F_p."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and not _is_prime(p):
            raise InputError(f"modulus {p} is not prime")
        if p >= 2**64:
            raise InputError(f"modulus {p} exceeds the machine-word limit")

    @classmethod
    def rationals(cls) -> Field:
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> Field:
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def size(self):
        """Number of elements, or ``None`` for Q."""
        return self.characteristic or None

    def __call__(self, c):
        p = self.characteristic
        if p == 0:
            if isinstance(c, Fraction):
                return c
            if isinstance(c, int):
                return Fraction(c)
            raise InputError(f"coefficient {c!r} is not rational")
        if isinstance(c, Fraction):
            if c.denominator % p == 0:
                raise InputError(f"coefficient {c} is not representable modulo {p}")
            return c.numerator * pow(c.denominator, -1, p) % p
        if isinstance(c, int):
            return c % p
        raise InputError(f"coefficient {c!r} is not an integer")

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def inv(self, c):
        if not c:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        if p == 0:
            return 1 / Fraction(c)
        return pow(c, -1, p)

    def div(self, a, b):
        return self.normalize(a * self.inv(b))

    def normalize(self, c):
        p = self.characteristic
        return c % p if p else Fraction(c)

    def lift(self, c):
        """Canonical printable representative (symmetric range for F_p)."""
        p = self.characteristic
        if p == 0:
            return c
        return c - p if c > p // 2 else c

    def random_element(self, rng, nonzero=False, bound=None):
        p = self.characteristic
        if p:
            lo = 1 if nonzero else 0
            hi = p - 1 if bound is None else min(p - 1, bound)
            return rng.randint(lo, hi)
        b = bound or 9
        while True:
            c = Fraction(rng.randint(-b, b))
            if c or not nonzero:
                return c

    def __str__(self):
        return "Q" if self.characteristic == 0 else f"F {self.characteristic}"


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(min(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class MonomialOrder:
    """``lex``, ``degrevlex`` or ``block`` (degrevlex on the first k, then the rest).

    ``block`` with k variables is an elimination order for those k variables.
    """

    kind: str = "degrevlex"
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "degrevlex", "block"):
            raise InputError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.k < 0:
            raise InputError("block size must be nonnegative")

    @classmethod
    def block(cls, k: int) -> MonomialOrder:
        return cls("block", k)

    @cached_property
    def key(self):
        """Function mapping an exponent tuple to a flat sort key (bigger = larger)."""
        if self.kind == "lex":
            return tuple
        if self.kind == "degrevlex":
            return lambda e: (sum(e),) + tuple(-x for x in reversed(e))
        k = self.k

        def block_key(e):
            head, tail = e[:k], e[k:]
            return ((sum(head),) + tuple(-x for x in reversed(head))
                    + (sum(tail),) + tuple(-x for x in reversed(tail)))
        return block_key

    def __reduce__(self):
        # the cached key closure does not pickle
        return (MonomialOrder, (self.kind, self.k))

    def compare(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __str__(self):
        return f"block {self.k}" if self.kind == "block" else self.kind


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


@dataclass(frozen=True)
class PolyRing:
    field: Field
    variables: tuple
    order: MonomialOrder = DEGREVLEX

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        names = self.variables
        for v in names:
            if not isinstance(v, str) or not _NAME_RE.match(v):
                raise InputError(f"invalid variable name {v!r}")
        if len(set(names)) != len(names):
            raise InputError("variable names must be distinct")
        if self.order.kind == "block" and self.order.k > len(names):
            raise InputError("block size exceeds the number of variables")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise InputError(f"unknown variable {name!r}") from None

    def with_order(self, order: MonomialOrder) -> PolyRing:
        return PolyRing(self.field, self.variables, order)

    def subring(self, names: Sequence[str], order: MonomialOrder = DEGREVLEX) -> PolyRing:
        return PolyRing(self.field, tuple(names), order)

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.constant(1)

    def constant(self, c) -> Polynomial:
        c = self.field(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exp: Monomial, coeff=1) -> Polynomial:
        if len(exp) != self.nvars or any(e < 0 for e in exp):
            raise InputError(f"bad exponent vector {exp!r}")
        c = self.field(coeff)
        return Polynomial(self, {tuple(exp): c} if c else {})

    def gen(self, name_or_index) -> Polynomial:
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        exp = [0] * self.nvars
        exp[i] = 1
        return Polynomial(self, {tuple(exp): self.field.one()})

    @property
    def gens(self) -> list:
        return [self.gen(i) for i in range(self.nvars)]

    def from_terms(self, terms: Iterable) -> Polynomial:
        """Build a polynomial from raw ``(coefficient, exponents)`` pairs."""
        return canonicalize(terms, self)

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(text, self)

    def __str__(self):
        return f"{self.field}[{', '.join(self.variables)}] ({self.order})"


def canonicalize(terms: Iterable, ring: PolyRing) -> Polynomial:
    """Merge like terms, drop zeros; ordering is handled by :class:`Polynomial`."""
    field = ring.field
    d = {}
    for coeff, exp in terms:
        exp = tuple(exp)
        if len(exp) != ring.nvars or any(e < 0 for e in exp):
            raise InputError(f"bad exponent vector {exp!r}")
        c = field(coeff)
        d[exp] = field.normalize(d.get(exp, 0) + c)
    return Polynomial(ring, {e: c for e, c in d.items() if c})


class Polynomial:
    """Immutable polynomial; ``terms`` are sorted descending under the ring order."""

    __slots__ = ("ring", "_d", "_terms")

    def __init__(self, ring: PolyRing, d: dict):
        # ``d`` must already be normalized (field elements, no zeros).
        self.ring = ring
        self._d = d
        self._terms = None

    @property
    def coeffs(self) -> dict:
        """Read-only view of the ``{exponents: coefficient}`` mapping."""
        return self._d

    @property
    def terms(self) -> list:
        if self._terms is None:
            key = self.ring.order.key
            self._terms = sorted(((c, e) for e, c in self._d.items()),
                                 key=lambda t: key(t[1]), reverse=True)
        return self._terms

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self):
        return bool(self._d)

    def __len__(self):
        return len(self._d)

    @property
    def lm(self) -> Monomial:
        if not self._d:
            raise InputError("zero polynomial has no leading monomial")
        return self.terms[0][1]

    @property
    def lc(self):
        if not self._d:
            raise InputError("zero polynomial has no leading coefficient")
        return self.terms[0][0]

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._d), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._d), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._d}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._d)

    def coefficient(self, exp: Monomial):
        return self._d.get(tuple(exp), self.ring.field.zero())

    def support(self) -> set:
        """Indices of the variables occurring in the polynomial."""
        return {i for e in self._d for i, x in enumerate(e) if x}

    def monic(self) -> Polynomial:
        if not self._d:
            return self
        return self * self.ring.field.inv(self.lc)

    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise InputError("operands belong to different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        f = self.ring.field
        d = dict(self._d)
        for e, c in other._d.items():
            v = f.normalize(d.get(e, 0) + c)
            if v:
                d[e] = v
            else:
                d.pop(e, None)
        return Polynomial(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return Polynomial(self.ring, {e: f.normalize(-c) for e, c in self._d.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        f = self.ring.field
        if isinstance(other, (int, Fraction)):
            c = f(other)
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, {e: f.normalize(x * c) for e, x in self._d.items()})
        other = self._check(other)
        if other is NotImplemented:
            return other
        d = {}
        for e1, c1 in self._d.items():
            for e2, c2 in other._d.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, 0) + c1 * c2
        return Polynomial(self.ring, {e: v for e, v in ((e, f.normalize(v)) for e, v in d.items()) if v})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise InputError("exponent must be a nonnegative integer")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, exp: Monomial, coeff=1) -> Polynomial:
        f = self.ring.field
        c = f(coeff)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {tuple(a + b for a, b in zip(e, exp)): f.normalize(x * c)
                                      for e, x in self._d.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self._d.items())))

    def in_ring(self, ring: PolyRing) -> Polynomial:
        """Re-home into a ring with the same field and variables (order may differ)."""
        if ring.field != self.ring.field or ring.variables != self.ring.variables:
            raise InputError("target ring has a different field or variable list")
        return Polynomial(ring, self._d)

    def restrict(self, ring: PolyRing) -> Polynomial:
        """Re-express in a ring whose variables are a subset of ours (by name)."""
        idx = [self.ring.index(v) for v in ring.variables]
        drop = set(range(self.ring.nvars)) - set(idx)
        d = {}
        for e, c in self._d.items():
            if any(e[i] for i in drop):
                raise InputError("polynomial involves variables outside the target ring")
            d[tuple(e[i] for i in idx)] = c
        return Polynomial(ring, d)

    def extend(self, ring: PolyRing) -> Polynomial:
        """Embed into a ring whose variables contain ours (by name)."""
        pos = [ring.index(v) for v in self.ring.variables]
        d = {}
        for e, c in self._d.items():
            new = [0] * ring.nvars
            for i, x in zip(pos, e):
                new[i] = x
            d[tuple(new)] = c
        return Polynomial(ring, d)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self})"


def _format_monomial(exp: Monomial, names) -> str:
    parts = []
    for name, x in zip(names, exp):
        if x == 1:
            parts.append(name)
        elif x > 1:
            parts.append(f"{name}^{x}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    if not f:
        return "0"
    field, names = f.ring.field, f.ring.variables
    out = []
    for c, e in f.terms:
        c = field.lift(c)
        neg = c < 0
        a = -c if neg else c
        mono = _format_monomial(e, names)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def is_monic_in(f: Polynomial, v) -> bool:
    """True when the coefficient of ``v^deg(f)`` in ``f`` is a nonzero scalar."""
    if not f:
        raise InputError("is_monic_in: zero polynomial")
    i = v if isinstance(v, int) else f.ring.index(v)
    exp = [0] * f.ring.nvars
    exp[i] = f.degree()
    return tuple(exp) in f.coeffs


# ---------------------------------------------------------------- substitutions

def _det_is_nonzero(matrix, field: Field) -> bool:
    a = [[field(x) for x in row] for row in matrix]
    n = len(a)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return False
        a[col], a[piv] = a[piv], a[col]
        inv = field.inv(a[col][col])
        for r in range(col + 1, n):
            if a[r][col]:
                m = field.normalize(a[r][col] * inv)
                a[r] = [field.normalize(x - m * y) for x, y in zip(a[r], a[col])]
    return True


@dataclass(frozen=True)
class Substitution:
    """Ring automorphism given by variable images.

    ``linear``: variable i maps to ``sum_j matrix[i][j] * x_j``.
    ``power``: ``x_variable -> x_variable + x_source^exponent``, others fixed
    (``negate`` flips the sign, giving the inverse map).
    """

    ring: PolyRing
    kind: str = "linear"
    matrix: tuple = ()
    variable: int = 0
    source: int = 0
    exponent: int = 2
    negate: bool = False

    def __post_init__(self):
        n = self.ring.nvars
        field = self.ring.field
        if self.kind == "linear":
            m = tuple(tuple(field(x) for x in row) for row in self.matrix)
            if len(m) != n or any(len(row) != n for row in m):
                raise InputError("substitution matrix has the wrong shape")
            if not _det_is_nonzero(m, field):
                raise InputError("substitution matrix is not invertible")
            object.__setattr__(self, "matrix", m)
        elif self.kind == "power":
            if not (0 <= self.variable < n and 0 <= self.source < n):
                raise InputError("power substitution refers to an unknown variable")
            if self.variable == self.source:
                raise InputError("power substitution needs two distinct variables")
            if self.exponent < 2:
                raise InputError("power substitution exponent must be at least 2")
        else:
            raise InputError(f"unknown substitution kind {self.kind!r}")

    @classmethod
    def identity(cls, ring: PolyRing) -> Substitution:
        n = ring.nvars
        return cls(ring, "linear", tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def linear(cls, ring: PolyRing, matrix) -> Substitution:
        return cls(ring, "linear", tuple(tuple(r) for r in matrix))

    @classmethod
    def power(cls, ring: PolyRing, variable, source, exponent: int) -> Substitution:
        v = variable if isinstance(variable, int) else ring.index(variable)
        u = source if isinstance(source, int) else ring.index(source)
        return cls(ring, "power", variable=v, source=u, exponent=exponent)

    def images(self) -> list:
        ring = self.ring
        if self.kind == "linear":
            return [canonicalize(((c, tuple(int(i == j) for i in range(ring.nvars)))
                                  for j, c in enumerate(row)), ring) for row in self.matrix]
        gens = ring.gens
        shift = gens[self.source] ** self.exponent
        gens[self.variable] = gens[self.variable] + (-shift if self.negate else shift)
        return gens

    def is_identity(self) -> bool:
        n = self.ring.nvars
        return self.kind == "linear" and all(
            self.matrix[i][j] == int(i == j) for i in range(n) for j in range(n))

    def then(self, other: Substitution) -> Substitution:
        """Substitution equal to applying ``self`` first, then ``other``."""
        if other.ring.variables != self.ring.variables or other.ring.field != self.ring.field:
            raise InputError("substitutions live on different rings")
        if self.kind != "linear" or other.kind != "linear":
            raise InputError("only linear substitutions compose into a matrix")
        f = self.ring.field
        a, b = self.matrix, other.matrix
        n = len(a)
        prod = tuple(tuple(f.normalize(sum(a[i][k] * b[k][j] for k in range(n)))
                           for j in range(n)) for i in range(n))
        return Substitution(self.ring, "linear", prod)

    def inverse(self) -> Substitution:
        if self.kind == "power":
            return Substitution(self.ring, "power", variable=self.variable, source=self.source,
                                exponent=self.exponent, negate=not self.negate)
        f = self.ring.field
        n = len(self.matrix)
        a = [list(row) + [f(int(i == j)) for j in range(n)] for i, row in enumerate(self.matrix)]
        for col in range(n):
            piv = next(r for r in range(col, n) if a[r][col])
            a[col], a[piv] = a[piv], a[col]
            inv = f.inv(a[col][col])
            a[col] = [f.normalize(x * inv) for x in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    m = a[r][col]
                    a[r] = [f.normalize(x - m * y) for x, y in zip(a[r], a[col])]
        return Substitution(self.ring, "linear", tuple(tuple(row[n:]) for row in a))

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_substitution(f, self)


def apply_substitution(f: Polynomial, s: Substitution) -> Polynomial:
    """Image of ``f`` under the automorphism ``s``."""
    if f.ring.variables != s.ring.variables or f.ring.field != s.ring.field:
        raise InputError("substitution is defined over a different ring")
    ring = f.ring
    images = [g.in_ring(ring) for g in s.images()]
    powers = [{0: ring.one()} for _ in images]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            cache[k] = power(i, k - 1) * images[i]
        return cache[k]

    result = ring.zero()
    for c, e in f.terms:
        term = ring.constant(c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        result = result + term
    return result


# ---------------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, text: str, ring: PolyRing, line=None, offset=0):
        self.text, self.ring, self.line, self.offset = text, ring, line, offset
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN_RE.match(text, pos)
            if not m:
                self.error("unexpected character " + repr(text[pos].strip() or text[pos]),
                           pos + len(text[pos:]) - len(text[pos:].lstrip()))
            start = m.start(m.lastindex)
            kind = ("int", "name", "op")[m.lastindex - 1]
            val = m.group(m.lastindex)
            self.tokens.append((kind, "^" if val == "**" else val, start))
            pos = m.end()
        self.i = 0

    def error(self, msg, pos=None):
        if pos is None:
            pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise InputError(msg, line=self.line, column=self.offset + pos + 1)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            self.error("empty polynomial")
        f = self.expr()
        if self.i != len(self.tokens):
            self.error(f"unexpected token {self.peek()[1]!r}")
        return f

    def expr(self):
        f = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            g = self.unary()
            if op == "*":
                f = f * g
            else:
                if not g.is_constant() or not g:
                    self.error("division is only allowed by a nonzero constant", pos)
                f = f * self.ring.field.inv(g.lc)
        return f

    def unary(self):
        if self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            f = self.unary()
            return -f if op == "-" else f
        return self.power()

    def power(self):
        f = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                self.error("exponent must be a nonnegative integer literal", pos)
            f = f ** int(val)
        return f

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            try:
                return self.ring.constant(int(val))
            except InputError as exc:
                self.error(str(exc), pos)
        if kind == "name":
            if val not in self.ring.variables:
                self.error(f"unknown variable {val!r}", pos)
            return self.ring.gen(val)
        if val == "(":
            f = self.expr()
            if self.take()[1] != ")":
                self.error("expected ')'")
            return f
        if kind is None:
            self.error("unexpected end of polynomial", pos)
        self.error(f"unexpected token {val!r}", pos)


def parse_polynomial(text: str, ring: PolyRing, line=None, offset=0) -> Polynomial:
    """Parse ``x^2 - 3*y*z`` style text.  ``line``/``offset`` position error messages."""
    return _Parser(text, ring, line, offset).parse()
