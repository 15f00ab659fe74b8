"""Hilbert series of graded quotients, Krull dimension, multiplicity, lengths.

Series are computed on monomial ideals with the pivot recursion

    K(M) = K(M + (p)) + t^deg(p) * K(M : p)

where ``K`` is the numerator over ``(1 - t)^n``.  Passing to the leading ideal
of a Groebner basis does not change the series of a homogeneous quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Iterable, Sequence

from .errors import InputError, PreconditionError
from .groebner import GroebnerBasis, Ideal
from .poly import Monomial, PolyRing, Polynomial

# ------------------------------------------------------------ t-polynomials
# Integer polynomials in t are lists of coefficients, lowest degree first.


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def tpoly_add(a: Sequence[int], b: Sequence[int]) -> list:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def tpoly_sub(a: Sequence[int], b: Sequence[int]) -> list:
    return tpoly_add(a, [-c for c in b])


def tpoly_mul(a: Sequence[int], b: Sequence[int]) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def tpoly_shift(a: Sequence[int], k: int) -> list:
    if k < 0:
        raise InputError("negative degree shifts are not supported in Hilbert series")
    return _trim([0] * k + list(a)) if a else []


def one_minus_t_power(k: int) -> list:
    """Coefficients of ``(1 - t)^k``."""
    return [(-1) ** i * comb(k, i) for i in range(k + 1)]


def tpoly_eval(a: Sequence[int], x: int) -> int:
    return sum(c * x ** i for i, c in enumerate(a))


def _divide_one_minus_t(a: Sequence[int]) -> list:
    # synthetic division by (1 - t); caller guarantees a(1) == 0
    q, acc = [], 0
    for c in a[:-1]:
        acc += c
        q.append(acc)
    return _trim(q)


# --------------------------------------------------------- monomial ideals

def minimalize(monomials: Iterable[Monomial]) -> list:
    """Minimal generators (an antichain under divisibility), sorted."""
    ms = sorted(set(tuple(m) for m in monomials), key=lambda m: (sum(m), m))
    out = []
    for m in ms:
        if not any(all(a <= b for a, b in zip(g, m)) for g in out):
            out.append(m)
    return sorted(out)


@dataclass(frozen=True)
class MonomialIdeal:
    ring: PolyRing
    minimal_generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "minimal_generators", tuple(minimalize(self.minimal_generators)))
        for g in self.minimal_generators:
            if len(g) != self.ring.nvars:
                raise InputError("monomial has the wrong number of exponents")

    def contains(self, m: Monomial) -> bool:
        return any(all(a <= b for a, b in zip(g, m)) for g in self.minimal_generators)

    def __str__(self):
        from .poly import _format_monomial
        return "(" + ", ".join(_format_monomial(g, self.ring.variables) or "1"
                               for g in self.minimal_generators) + ")"


def _coprime_product(gens) -> list:
    out = [1]
    for g in gens:
        out = tpoly_mul(out, tpoly_sub([1], tpoly_shift([1], sum(g))))
    return out


def _numerator(gens: tuple, memo: dict) -> list:
    if gens in memo:
        return memo[gens]
    if not gens:
        return [1]
    if any(not any(g) for g in gens):
        return []
    supports = [frozenset(i for i, x in enumerate(g) if x) for g in gens]
    counts = {}
    pairwise_coprime = True
    seen = set()
    for s in supports:
        if seen & s:
            pairwise_coprime = False
        seen |= s
        for i in s:
            counts[i] = counts.get(i, 0) + 1
    if pairwise_coprime:
        result = _coprime_product(gens)
    else:
        var = min(counts, key=lambda i: (-counts[i], i))
        exps = sorted(g[var] for g in gens if g[var])
        e = exps[(len(exps) - 1) // 2]
        pivot = tuple(e if i == var else 0 for i in range(len(gens[0])))
        plus = tuple(minimalize(list(gens) + [pivot]))
        colon = tuple(minimalize(tuple(max(a - b, 0) for a, b in zip(g, pivot)) for g in gens))
        result = tpoly_add(_numerator(plus, memo), tpoly_shift(_numerator(colon, memo), e))
    memo[gens] = result
    return result


def hilbert_numerator(gens: Iterable[Monomial]) -> list:
    """Numerator ``K`` with ``HS(S/M) = K / (1 - t)^n``."""
    return _numerator(tuple(minimalize(gens)), {})


@dataclass(frozen=True)
class HilbertSeries:
    """``numerator / (1 - t)^nvars`` together with its reduced form."""

    numerator: tuple
    nvars: int
    reduced_numerator: tuple = field(init=False)
    pole_order: int = field(init=False)

    def __post_init__(self):
        num = _trim(list(self.numerator))
        object.__setattr__(self, "numerator", tuple(num))
        k = 0
        red = list(num)
        while red and tpoly_eval(red, 1) == 0:
            red = _divide_one_minus_t(red)
            k += 1
        object.__setattr__(self, "reduced_numerator", tuple(red))
        object.__setattr__(self, "pole_order", self.nvars - k if red else -1)

    def is_zero(self) -> bool:
        return not self.numerator

    @property
    def dimension(self) -> int:
        return self.pole_order

    @property
    def multiplicity(self) -> int:
        return tpoly_eval(self.reduced_numerator, 1)

    def coefficient(self, t: int) -> int:
        """Value of the Hilbert function in degree ``t``."""
        if t < 0:
            return 0
        n = self.nvars
        if n == 0:
            return self.numerator[t] if t < len(self.numerator) else 0
        return sum(a * comb(t - i + n - 1, n - 1)
                   for i, a in enumerate(self.numerator) if i <= t)

    def expansion(self, upto: int) -> list:
        return [self.coefficient(t) for t in range(upto + 1)]

    def same_function(self, other: HilbertSeries) -> bool:
        """Equality as rational functions."""
        if self.nvars >= other.nvars:
            a = self.numerator
            b = tpoly_mul(other.numerator, one_minus_t_power(self.nvars - other.nvars))
        else:
            a = tpoly_mul(self.numerator, one_minus_t_power(other.nvars - self.nvars))
            b = other.numerator
        return list(a) == list(b)

    def __str__(self):
        def fmt(p):
            terms = []
            for i, c in enumerate(p):
                if c:
                    mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                    coef = str(c) if not mono else ("" if c == 1 else "-" if c == -1 else f"{c}*")
                    terms.append(coef + mono)
            return " + ".join(terms).replace("+ -", "- ") or "0"
        return f"({fmt(self.reduced_numerator)})/(1-t)^{max(self.pole_order, 0)}"


def hilbert_series(M: MonomialIdeal) -> HilbertSeries:
    """Hilbert series of ``ring / M``."""
    return HilbertSeries(tuple(hilbert_numerator(M.minimal_generators)), M.ring.nvars)


def module_hilbert_series(leading: Sequence[Iterable[Monomial]], twists: Sequence[int],
                          nvars: int) -> HilbertSeries:
    """Series of ``(+)_i S(-twist_i) / M_i`` for monomial ideals ``M_i``."""
    num = []
    for gens, tw in zip(leading, twists):
        num = tpoly_add(num, tpoly_shift(hilbert_numerator(gens), tw))
    return HilbertSeries(tuple(num), nvars)


def free_module_series(twists: Sequence[int], nvars: int) -> HilbertSeries:
    num = []
    for tw in twists:
        num = tpoly_add(num, tpoly_shift([1], tw))
    return HilbertSeries(tuple(num), nvars)


# ------------------------------------------------------------------ quotients

def leading_ideal(ideal: Ideal) -> MonomialIdeal:
    G = ideal.groebner_basis()
    return MonomialIdeal(ideal.ring, tuple(G.leading_monomials()))


class QuotientPresentation:
    """Graded quotient ``A = K[X]/I`` of a polynomial ring by a homogeneous ideal."""

    def __init__(self, ring: PolyRing, ideal=(), allow_zero_ring: bool = True):
        if not isinstance(ideal, Ideal):
            ideal = Ideal(ring, ideal)
        if ideal.ring != ring:
            raise InputError("defining ideal lives in a different ring")
        if not ideal.is_homogeneous():
            raise InputError("defining ideal must be homogeneous")
        self.ring = ring
        self.ideal = ideal
        if not allow_zero_ring and self.is_zero_ring():
            raise InputError("the quotient is the zero ring")

    @property
    def gb(self) -> GroebnerBasis:
        return self.ideal.groebner_basis()

    def is_zero_ring(self) -> bool:
        return self.gb.is_unit()

    @cached_property
    def leading(self) -> MonomialIdeal:
        return leading_ideal(self.ideal)

    @cached_property
    def series(self) -> HilbertSeries:
        return hilbert_series(self.leading)

    def standard_monomials(self, degree: int) -> list:
        from itertools import combinations_with_replacement
        n = self.ring.nvars
        out = []
        for combo in combinations_with_replacement(range(n), degree):
            e = [0] * n
            for i in combo:
                e[i] += 1
            e = tuple(e)
            if not self.leading.contains(e):
                out.append(e)
        return out

    def add(self, generators) -> QuotientPresentation:
        """Quotient by ``I + (generators)``."""
        gens = [self.ring.parse(g) if isinstance(g, str) else g for g in generators]
        return QuotientPresentation(self.ring, Ideal(self.ring, self.ideal.generators + tuple(gens)))

    def reduce(self, f: Polynomial) -> Polynomial:
        from .groebner import normal_form
        return normal_form(f, self.gb)

    def __repr__(self):
        return f"QuotientPresentation({self.ring}, {self.ideal})"


def dimension(Q: QuotientPresentation) -> int:
    """Krull dimension; ``-1`` for the zero ring."""
    return Q.series.pole_order


def multiplicity(Q: QuotientPresentation) -> int:
    if Q.is_zero_ring():
        raise InputError("multiplicity of the zero ring is undefined")
    return Q.series.multiplicity


def length_zero_dim(Q: QuotientPresentation) -> int:
    """Vector-space dimension of an Artinian graded quotient."""
    d = dimension(Q)
    if d != 0:
        raise PreconditionError(f"length_zero_dim needs a zero-dimensional quotient (dim = {d})")
    return sum(Q.series.reduced_numerator)


def operational_height(Q: QuotientPresentation, a) -> int:
    """``dim A - dim A/a`` for a proper homogeneous ideal ``a`` of ``A``."""
    gens = list(a.generators) if isinstance(a, Ideal) else list(a)
    gens = [Q.ring.parse(g) if isinstance(g, str) else g for g in gens]
    if any(not g.is_homogeneous() for g in gens):
        raise InputError("operational_height: ideal must be homogeneous")
    quot = Q.add(gens)
    if quot.is_zero_ring():
        raise InputError("operational_height: the ideal is the whole ring")
    return dimension(Q) - dimension(quot)


# ------------------------------------------- height through monomial primes

def monomial_minimal_primes(gens: Sequence[Monomial], nvars: int) -> list:
    """Minimal primes of a monomial ideal as frozensets of variable indices."""
    from itertools import combinations
    gens = minimalize(gens)
    supports = [frozenset(i for i, x in enumerate(g) if x) for g in gens]
    if any(not s for s in supports):
        return []
    found = []
    for size in range(nvars + 1):
        for cover in combinations(range(nvars), size):
            c = frozenset(cover)
            if all(s & c for s in supports) and not any(f <= c for f in found):
                found.append(c)
    return found


def monomial_height(ambient: Sequence[Monomial], bigger: Sequence[Monomial], nvars: int) -> int:
    """Height of ``bigger/ambient`` in ``S/ambient`` via minimal monomial primes."""
    base = monomial_minimal_primes(ambient, nvars)
    top = monomial_minimal_primes(bigger, nvars)
    if not top:
        raise InputError("monomial_height: the ideal is the whole ring")
    best = None
    for P in top:
        h = max(len(P) - len(Q) for Q in base if Q <= P)
        best = h if best is None else min(best, h)
    return best


def leading_height(Q: QuotientPresentation, a) -> int:
    """Height computed on the leading monomial ideals (the corpus agreement check)."""
    quot = Q.add(list(a.generators) if isinstance(a, Ideal) else list(a))
    return monomial_height(Q.leading.minimal_generators, quot.leading.minimal_generators,
                           Q.ring.nvars)
