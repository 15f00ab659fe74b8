"""Noether normalization and the invariants built on it.

The normalization follows the classical recursion: make some generator
monic in the first remaining variable (random linear change of the later
variables), eliminate that variable, recurse.  The result is certified on
the block-order Groebner basis of the transformed ideal: every fiber
variable must appear as a pure power among its leading monomials.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .errors import (HypothesisError, InputError, InvariantViolation, PreconditionError,
                     ResourceError)
from .groebner import GroebnerBasis, Ideal, buchberger, eliminate, normal_form
from .hilbert import QuotientPresentation, dimension, length_zero_dim, multiplicity
from .poly import (DEGREVLEX, MonomialOrder, PolyRing, Polynomial, Substitution, _format_monomial,
                   is_monic_in)
from .resolve import (DEFAULT_MAX_RANK, GradedResolution, cm_type, is_cohen_macaulay,
                      minimal_generator_count, resolve_submodule)

MIN_FIELD_SIZE = 101
MAX_RETRIES = 32


def make_rng(seed, *salt) -> random.Random:
    """Deterministic generator; string seeds are hashed with sha512 by ``random``."""
    return random.Random(":".join(str(s) for s in (seed,) + salt))


@dataclass
class NoetherData:
    """Certified Noether normalization of ``K[X]/I``.

    ``transformed`` is the image of the defining ideal under ``substitution``;
    the base variables are the last ``len(base_vars)`` ring variables.
    """

    ring: PolyRing
    substitutions: tuple
    transformed: Ideal
    fiber_vars: tuple
    base_vars: tuple
    block_gb: GroebnerBasis = None
    basis: tuple = ()
    closure_certificate: dict = field(default_factory=dict)
    graded: bool = True

    @property
    def N(self) -> int:
        return len(self.basis)

    @property
    def k(self) -> int:
        return len(self.fiber_vars)

    @property
    def substitution(self) -> Substitution:
        """Composed linear substitution (only when no power step was used)."""
        total = Substitution.identity(self.ring)
        for s in self.substitutions:
            total = total.then(s)
        return total

    @property
    def base_ring(self) -> PolyRing:
        return PolyRing(self.ring.field, self.base_vars, DEGREVLEX)

    def transform(self, f: Polynomial) -> Polynomial:
        """Image of an element of the original ring in the normalized coordinates."""
        f = f.in_ring(self.ring)
        for s in self.substitutions:
            f = s(f)
        return f

    def basis_polynomials(self) -> list:
        return [self.ring.monomial(b) for b in self.basis]

    def summary(self) -> dict:
        names = self.ring.variables
        out = {
            "fiber_vars": list(self.fiber_vars),
            "base_vars": list(self.base_vars),
            "basis": [_format_monomial(b, names) or "1" for b in self.basis],
            "N": self.N,
            "graded": self.graded,
            "transformed_ideal": [str(g) for g in self.transformed.generators],
        }
        if all(s.kind == "linear" for s in self.substitutions):
            m = self.substitution.matrix
            out["substitution"] = [[int(self.ring.field.lift(c)) if self.ring.field.characteristic
                                    else str(c) for c in row] for row in m]
        else:
            out["substitution"] = None
        return out


def _check_field(ring: PolyRing, power_fallback: bool):
    size = ring.field.size
    if size is not None and size < MIN_FIELD_SIZE and not power_fallback:
        raise ResourceError(f"field F_{size} is too small for random linear substitutions; "
                            f"use F 32003 or Q")


def _random_shear(ring: PolyRing, i: int, rng) -> Substitution:
    """``x_j -> x_j + c_j x_i`` for every ``j > i``."""
    n = ring.nvars
    rows = []
    for r in range(n):
        row = [int(r == c) for c in range(n)]
        if r > i:
            row[i] = ring.field.random_element(rng, nonzero=True)
        rows.append(row)
    return Substitution.linear(ring, rows)


def _nagata(ring: PolyRing, i: int, gens) -> list:
    """Power substitutions ``x_j -> x_j + x_i^(r^(j-i))`` making some generator monic in x_i."""
    r = max(g.degree() for g in gens) + 1
    return [Substitution.power(ring, j, i, r ** (j - i)) for j in range(i + 1, ring.nvars)]


def noether_position(ideal: Ideal, seed=0, *, power_fallback: bool = False,
                     max_retries: int = MAX_RETRIES) -> NoetherData:
    """Put ``K[X]/I`` in Noether position and certify it.

    Returns a completed :class:`NoetherData` (see :func:`module_generators`).
    """
    src = ideal.ring
    ring = src.with_order(DEGREVLEX)
    _check_field(ring, power_fallback)
    rng = make_rng(seed, "noether")
    gens = [g.in_ring(ring) for g in ideal.generators]
    if buchberger(Ideal(ring, gens)).is_unit():
        raise InputError("noether_position: the ideal is not proper")
    n = ring.nvars
    subs = []
    graded = all(g.is_homogeneous() for g in gens)
    current = list(gens)       # I_i, written in the full ring, involving x_i.. only
    i = 0
    while i < n and current:
        monic = [g for g in current if is_monic_in(g, i)]
        if not monic:
            for _ in range(max_retries):
                s = _random_shear(ring, i, rng)
                trial = [s(g) for g in current]
                if any(is_monic_in(g, i) for g in trial):
                    subs.append(s)
                    current = trial
                    break
            else:
                if not power_fallback:
                    raise ResourceError("no generator became monic after "
                                        f"{max_retries} random substitutions; "
                                        "use a larger field")
                for s in _nagata(ring, i, current):
                    subs.append(s)
                    current = [s(g) for g in current]
                graded = False
                if not any(is_monic_in(g, i) for g in current):
                    raise InvariantViolation("power substitution failed to produce a monic generator")
        keep = ring.variables[i + 1:]
        small = eliminate(Ideal(ring, current), keep)
        current = [g.extend(ring) for g in small.generators]
        i += 1
    transformed = [g for g in gens]
    for s in subs:
        transformed = [s(g) for g in transformed]
    nd = NoetherData(ring=ring, substitutions=tuple(subs),
                     transformed=Ideal(ring, transformed),
                     fiber_vars=ring.variables[:i], base_vars=ring.variables[i:],
                     graded=graded)
    return module_generators(nd)


def module_generators(nd: NoetherData) -> NoetherData:
    """Fill in the staircase basis, ``N`` and the verified closure certificate."""
    ring, k = nd.ring, nd.k
    block_ring = ring.with_order(MonomialOrder.block(k))
    G = buchberger(nd.transformed.in_ring(block_ring))
    if G.is_unit():
        raise InputError("module_generators: the ideal is not proper")
    pure = [g.lm for g in G.elements if not any(g.lm[k:])]
    bounds = []
    for v in range(k):
        powers = [m[v] for m in pure if all(x == 0 for j, x in enumerate(m[:k]) if j != v)]
        if not powers:
            raise InvariantViolation(f"fiber variable {ring.variables[v]} is not integral "
                                     "over the base; Noether position was not reached")
        bounds.append(min(powers))
    basis = []
    for head in product(*(range(b) for b in bounds)):
        exp = tuple(head) + (0,) * (ring.nvars - k)
        if not any(all(a <= b for a, b in zip(m, exp)) for m in pure):
            basis.append(exp)
    basis.sort(key=DEGREVLEX.key)
    nd.block_gb = G
    nd.basis = tuple(basis)
    nd.closure_certificate = {}
    for v in range(k):
        xv = block_ring.gen(v)
        for b in basis:
            target = xv * block_ring.monomial(b)
            coords = express_in_basis(target, nd)
            if normal_form(reassemble(coords, nd).in_ring(block_ring) - target, G):
                raise InvariantViolation("closure certificate failed to verify")
            nd.closure_certificate[(ring.variables[v], b)] = coords
    return nd


def express_in_basis(f: Polynomial, nd: NoetherData) -> list:
    """Coordinates of ``f`` (in normalized coordinates) over ``K[base]``, indexed like ``basis``."""
    G = nd.block_gb
    f = f.in_ring(G.ring)
    r = normal_form(f, G)
    k = nd.k
    base = nd.base_ring
    index = {b[:k]: i for i, b in enumerate(nd.basis)}
    parts = [{} for _ in nd.basis]
    for e, c in r.coeffs.items():
        i = index.get(e[:k])
        if i is None:
            raise InvariantViolation("standard monomial has a fiber part outside the basis")
        parts[i][e[k:]] = c
    return [Polynomial(base, d) for d in parts]


def reassemble(coords, nd: NoetherData) -> Polynomial:
    """``sum coords[i] * basis[i]`` back in the normalized ring."""
    ring = nd.ring
    total = ring.zero()
    for c, b in zip(coords, nd.basis):
        total = total + c.extend(ring) * ring.monomial(b)
    return total


# ---------------------------------------------------------- parameter degree

@dataclass
class ParameterTrial:
    linear_forms: tuple
    length: int
    seed: str


def fiber_degree(nd: NoetherData) -> int:
    """``dim_K A/(Y)A``: the number of points in the fiber over the origin of the base."""
    ring = nd.ring
    quot = QuotientPresentation(ring, Ideal(ring, list(nd.transformed.generators)
                                            + [ring.gen(v) for v in nd.base_vars]))
    return length_zero_dim(quot)


def _base_forms_original(nd: NoetherData) -> list:
    """Base variables pulled back to the original coordinates."""
    if not all(s.kind == "linear" for s in nd.substitutions):
        return []
    inv = nd.substitution.inverse()
    return [inv(nd.ring.gen(v)) for v in nd.base_vars]


def parameter_degree_upper(Q: QuotientPresentation, trials: int = 16, seed=0,
                           nd: NoetherData = None) -> tuple:
    """Upper bound for the parameter degree: min length of ``A/(l_1..l_d)`` over trials.

    Trial 0 is always the Noether base, so the value never exceeds ``N``.
    """
    if Q.is_zero_ring():
        raise InputError("parameter degree of the zero ring is undefined")
    d = dimension(Q)
    if d == 0:
        return length_zero_dim(Q), ParameterTrial((), length_zero_dim(Q), "artinian")
    if nd is None:
        nd = noether_position(Q.ideal, seed)
    ring = Q.ring.with_order(DEGREVLEX)
    Qd = QuotientPresentation(ring, Q.ideal.in_ring(ring))
    best = ParameterTrial(tuple(_base_forms_original(nd)), fiber_degree(nd), "noether")
    rng = make_rng(seed, "paramdeg")
    field_ = ring.field
    for t in range(trials):
        for _ in range(MAX_RETRIES):
            forms = [ring.from_terms((field_.random_element(rng), tuple(int(i == j) for j in range(ring.nvars)))
                                     for i in range(ring.nvars)) for _ in range(d)]
            quot = Qd.add(forms)
            if dimension(quot) == 0:
                break
        else:
            raise ResourceError("could not sample a system of parameters")
        length = length_zero_dim(quot)
        if length < best.length:
            best = ParameterTrial(tuple(forms), length, f"trial {t + 1}")
    return best.length, best


@dataclass
class InvariantChain:
    e: int
    paramdeg_upper: int
    N: int
    cm: bool

    @property
    def holds(self) -> bool:
        return self.e <= self.paramdeg_upper <= self.N

    @property
    def cm_equality_consistent(self) -> bool:
        return (self.e == self.paramdeg_upper) == self.cm

    @property
    def passed(self) -> bool:
        return self.holds and self.cm_equality_consistent


def invariant_chain(Q: QuotientPresentation, trials: int = 16, seed=0,
                    nd: NoetherData = None, max_rank: int = DEFAULT_MAX_RANK) -> InvariantChain:
    """Multiplicity, parameter degree bound and ``N``; CM iff the first two agree."""
    if Q.is_zero_ring():
        raise InputError("invariant_chain: zero ring")
    if not Q.ideal.is_homogeneous():
        raise InputError("invariant_chain: defining ideal must be homogeneous")
    e = multiplicity(Q)
    if nd is None:
        nd = noether_position(Q.ideal, seed)
    pdu, _ = parameter_degree_upper(Q, trials, seed, nd)
    return InvariantChain(e, pdu, nd.N, is_cohen_macaulay(Q, max_rank))


# ------------------------------------------------------------- W construction

@dataclass
class WData:
    """``W = phi^{-1}(a)`` inside ``S^N`` with its minimal resolution over ``S``."""

    generators: list          # vectors {(basis index, base exponent): coeff}
    twists: tuple             # degrees of the basis elements
    resolution: GradedResolution   # of S^N / W; tail() resolves W
    q: int
    p: int
    pd_W: int
    tau: int
    N: int
    mu_a: int
    euler_ok: bool
    composition_ok: bool

    @property
    def checks(self) -> dict:
        return {
            "p <= tau*N": self.p <= self.tau * self.N,
            "q <= p + N": self.q <= self.p + self.N,
            "mu_A(a) <= q": self.mu_a <= self.q,
            "composition": self.composition_ok,
            "euler": self.euler_ok,
        }

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def build_W(Q: QuotientPresentation, a, nd: NoetherData = None, seed=0,
            max_rank: int = DEFAULT_MAX_RANK) -> WData:
    """Module ``W`` of the exact sequence ``0 -> W -> S^N -> A/a -> 0`` and its resolution."""
    gens = list(a.generators) if isinstance(a, Ideal) else list(a)
    gens = [Q.ring.parse(g) if isinstance(g, str) else g for g in gens]
    if nd is None:
        nd = noether_position(Q.ideal, seed)
    if not nd.graded:
        raise PreconditionError("build_W needs a graded (linear) Noether normalization")
    if not is_cohen_macaulay(Q, max_rank):
        raise PreconditionError("build_W: A is not Cohen-Macaulay, so it is not free over S")
    e = multiplicity(Q)
    if nd.N != e:
        raise PreconditionError(f"freeness certificate failed: N = {nd.N} but e = {e}")
    quot = Q.add(gens)
    if quot.is_zero_ring():
        raise InputError("build_W: the ideal is the whole ring")
    vectors = []
    for g in gens:
        tg = nd.transform(g)
        for b in nd.basis:
            coords = express_in_basis(tg * nd.ring.monomial(b), nd)
            v = {}
            for idx, c in enumerate(coords):
                for exp, coef in c.coeffs.items():
                    v[(idx, exp)] = coef
            if v:
                vectors.append(v)
    twists = tuple(sum(b) for b in nd.basis)
    S = nd.base_ring
    res = resolve_submodule(S, vectors, twists, max_rank=max_rank)
    q = res.betti[1] if len(res.betti) > 1 else 0
    p = res.betti[2] if len(res.betti) > 2 else 0
    pd_W = res.length - 1
    if pd_W > 1:
        raise HypothesisError(f"pd_S(W) = {pd_W} > 1: A/a is not CM of the expected codimension")
    composition_ok = res.compositions_vanish() and res.tail().minimal
    euler_ok = res.euler_series().same_function(quot.series)
    tau = cm_type(quot, max_rank) if is_cohen_macaulay(quot, max_rank) else 0
    mu = minimal_generator_count(gens, Q)
    return WData(vectors, twists, res, q, p, pd_W, tau, nd.N, mu, euler_ok, composition_ok)
