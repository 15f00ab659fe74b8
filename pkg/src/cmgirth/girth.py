"""Generator bounds for Cohen-Macaulay ideals of height one and two.

Local checks compare the minimal number of generators ``mu`` of a graded
ideal with ``N`` (height one) or ``(tau + 1) N`` (height two).  The global
calculators are plain integer formulas.  :func:`analyze_case` bundles every
invariant and check for one case file; :func:`run_corpus` sweeps many.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import __version__
from .casefile import CaseFile
from .errors import CmGirthError, HypothesisError, InputError, InvariantViolation, PreconditionError
from .groebner import Ideal, normal_form
from .hilbert import (QuotientPresentation, _divide_one_minus_t, dimension, multiplicity,
                      operational_height, tpoly_eval, tpoly_sub)
from .noether import fiber_degree, invariant_chain, noether_position
from .poly import DEGREVLEX, Field, PolyRing, Substitution
from .resolve import (DEFAULT_MAX_RANK, cm_type, depth_and_pd, is_cohen_macaulay,
                      minimal_generator_count)

PASS, FAIL, OUT = "pass", "fail", "out-of-hypothesis"


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: int
    rhs: int
    passed: bool

    @classmethod
    def le(cls, name, lhs, rhs):
        return cls(name, lhs, rhs, lhs <= rhs)

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "pass": self.passed}


# ---------------------------------------------------------------- formulas

def global_bound(d: int, N: int, h: int, tau: int = 1) -> int:
    """Generators needed globally for a CM ideal of height ``h`` in a ``d``-dimensional ring."""
    if h not in (1, 2):
        raise InputError(f"global_bound: height must be 1 or 2, got {h}")
    if d < 0 or N < 1 or tau < 1:
        raise InputError("global_bound: need d >= 0, N >= 1, tau >= 1")
    if h == 1:
        return 1 if N == 1 else N + d - 1
    if N == 1 and tau == 1:
        return d + 1
    return (tau + 1) * N + d - 2


def forster_swan_bound(F: int, d: int, dim_quotient: int) -> int:
    if min(F, d, dim_quotient) < 0:
        raise InputError("forster_swan_bound: arguments must be nonnegative")
    return max(d + 1, F + dim_quotient)


SCHEME_VARIANTS = {
    "general": lambda f, d: 2 * f + 3 * d - 2,
    "cm": lambda f, d: 2 * f + d - 2,
    "ee": lambda f, d: 2 * f + 3 * d - 4,
}


def scheme_intersection_bound(f: int, d: int, variant: str = "general") -> int:
    """Hypersurfaces cutting out a codimension-two Gorenstein subscheme of a degree-``f`` cover."""
    if variant not in SCHEME_VARIANTS:
        raise InputError(f"unknown variant {variant!r}; choose from {sorted(SCHEME_VARIANTS)}")
    if f < 1 or d < 1:
        raise InputError("scheme_intersection_bound: need f >= 1 and d >= 1")
    return SCHEME_VARIANTS[variant](f, d)


# -------------------------------------------------------------- mu and height

def _gens(Q, a) -> list:
    gens = list(a.generators) if isinstance(a, Ideal) else list(a)
    gens = [Q.ring.parse(g) if isinstance(g, str) else g.in_ring(Q.ring) for g in gens]
    return [g for g in gens if g]


def mu_via_hilbert(Q: QuotientPresentation, gens) -> int:
    """``dim_K a/ma`` from the Hilbert series of ``A/ma`` and ``A/a``."""
    ring = Q.ring
    big = Q.add([x * g for g in gens for x in ring.gens])
    small = Q.add(gens)
    diff = tpoly_sub(big.series.numerator, small.series.numerator)
    for _ in range(ring.nvars):
        diff = _divide_one_minus_t(diff)
    return tpoly_eval(diff, 1)


def mu_in_quotient(Q: QuotientPresentation, a, cross_check: bool = True) -> int:
    gens = _gens(Q, a)
    mu = minimal_generator_count(gens, Q)
    if cross_check and mu != mu_via_hilbert(Q, gens):
        raise InvariantViolation("mu disagrees with the Hilbert-series count of a/ma")
    return mu


# ------------------------------------------------------------ local bounds

def verify_local_bounds(Q: QuotientPresentation, a, nd=None, seed=0,
                        max_rank: int = DEFAULT_MAX_RANK) -> list:
    """Local generator bounds for a CM ideal ``a`` of height one or two in ``A = Q``.

    Raises :class:`HypothesisError` when ``a`` has another height or ``A/a``
    is not Cohen-Macaulay.
    """
    gens = _gens(Q, a)
    quot = Q.add(gens)
    if quot.is_zero_ring():
        raise InputError("verify_local_bounds: the ideal is not proper")
    h = operational_height(Q, gens)
    if h not in (1, 2):
        raise HypothesisError(f"height {h} is outside {{1, 2}}")
    if not is_cohen_macaulay(quot, max_rank):
        raise HypothesisError("A/a is not Cohen-Macaulay")
    if nd is None:
        nd = noether_position(Q.ideal, seed)
    mu = mu_in_quotient(Q, gens)
    checks = []
    a_is_cm = is_cohen_macaulay(Q, max_rank)
    if h == 1:
        checks.append(BoundCheck.le("cm1_local", mu, nd.N))
        if a_is_cm:
            checks.append(BoundCheck.le("cm1_local_e", mu, multiplicity(Q)))
    else:
        tau = cm_type(quot, max_rank)
        checks.append(BoundCheck.le("cm2tau_local", mu, (tau + 1) * nd.N))
        if a_is_cm:
            checks.append(BoundCheck.le("cm2tau_local_e", mu, (tau + 1) * multiplicity(Q)))
    return checks


def bound_via_intermediate(Q: QuotientPresentation, a, inner) -> BoundCheck:
    """``mu_A(a) <= mu_B(aB) + mu_A(inner)`` with ``B = A/inner``."""
    gens, inner_gens = _gens(Q, a), _gens(Q, inner)
    big = Q.add(gens)
    for g in inner_gens:
        if normal_form(g, big.gb):
            raise InputError(f"inner ideal is not contained in a: {g} is not in I + a")
    B = Q.add(inner_gens)
    lhs = mu_in_quotient(Q, gens)
    rhs = mu_in_quotient(B, gens) + mu_in_quotient(Q, inner_gens)
    return BoundCheck.le("cor6_3", lhs, rhs)


# --------------------------------------------------------------- case record

@dataclass
class CaseRecord:
    case_id: str
    ring: PolyRing
    ideals: dict
    invariants: dict
    checks: list = field(default_factory=list)
    expectations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if any(not c.passed for c in self.checks) or any(not e["pass"] for e in self.expectations):
            return FAIL
        return OUT if self.notes else PASS

    def to_dict(self, seed=0) -> dict:
        return {
            "case_id": self.case_id,
            "ring": {"field": str(self.ring.field), "vars": list(self.ring.variables),
                     "order": str(self.ring.order)},
            "ideals": {k: [str(g) for g in v] for k, v in self.ideals.items()},
            "invariants": self.invariants,
            "checks": [c.to_dict() for c in self.checks],
            "expectations": self.expectations,
            "notes": self.notes,
            "status": self.status,
            "seed": seed,
            "version": __version__,
        }


def _chain_check(chain) -> BoundCheck:
    return BoundCheck("chain4_5", chain.e, chain.N, chain.passed)


def analyze_case(case: CaseFile, seed=0, trials: int = 16,
                 max_rank: int = DEFAULT_MAX_RANK) -> CaseRecord:
    """Every invariant and applicable bound check for one case."""
    ring = case.ring.with_order(DEGREVLEX)
    I = [g.in_ring(ring) for g in case.I]
    Q = QuotientPresentation(ring, Ideal(ring, I))
    if Q.is_zero_ring():
        raise InputError("the defining ideal is the unit ideal")
    ideals = {"I": I}
    pd, depth = depth_and_pd(Q, max_rank)
    d = dimension(Q)
    cm = depth == d
    nd = noether_position(Q.ideal, seed)
    chain = invariant_chain(Q, trials, seed, nd, max_rank)
    inv = {
        "dim": d, "depth": depth, "pd": pd, "cm": cm,
        "e": chain.e, "N": nd.N, "paramdeg_upper": chain.paramdeg_upper,
        "f": fiber_degree(nd), "type_A": cm_type(Q, max_rank) if cm else None,
        "height": None, "mu": None, "type": None, "cm_quotient": None,
    }
    rec = CaseRecord(case.case_id or "case", case.ring, ideals, inv)
    rec.checks.append(_chain_check(chain))

    if case.a is not None:
        gens = [g.in_ring(ring) for g in case.a if g]
        ideals["a"] = gens
        quot = Q.add(gens)
        if quot.is_zero_ring():
            raise InputError("the test ideal a is not proper in A")
        h = operational_height(Q, gens)
        mu = mu_in_quotient(Q, gens)
        qcm = is_cohen_macaulay(quot, max_rank)
        tau = cm_type(quot, max_rank) if qcm else None
        inv.update(height=h, mu=mu, cm_quotient=qcm, type=tau)
        try:
            rec.checks.extend(verify_local_bounds(Q, gens, nd, seed, max_rank))
        except HypothesisError as exc:
            rec.notes.append(str(exc))
        else:
            rec.checks.extend(_global_checks(h, d, nd.N, tau, mu, inv["f"], cm, dimension(quot)))
            if h == 2 and not I:
                rec.checks.append(BoundCheck("hilbert_burch_tightness", mu, tau + 1,
                                             mu == tau + 1))
        if case.inner is not None:
            inner = [g.in_ring(ring) for g in case.inner if g]
            ideals["inner"] = inner
            rec.checks.append(bound_via_intermediate(Q, gens, inner))

    values = {"dim": d, "depth": depth, "e": chain.e, "N": nd.N, "mu": inv["mu"],
              "type": inv["type"] if case.a is not None else inv["type_A"],
              "height": inv["height"]}
    for key, want in case.expect.items():
        got = values.get(key)
        rec.expectations.append({"key": key, "expected": want, "actual": got,
                                 "pass": got == want})
    return rec


def _global_checks(h, d, N, tau, mu, f, cm, dim_quotient) -> list:
    checks = []
    if h == 1:
        checks.append(BoundCheck.le("cm1_global", mu, global_bound(d, N, 1)))
    else:
        checks.append(BoundCheck.le("cm2tau_global", mu, global_bound(d, N, 2, tau)))
    local = N if h == 1 else (tau + 1) * N
    checks.append(BoundCheck.le("forster_swan", mu, forster_swan_bound(local, d, dim_quotient)))
    if h == 2 and tau == 1 and d >= 2:
        checks.append(BoundCheck.le("thm1_1", mu, scheme_intersection_bound(f, d, "general")))
        if cm:
            checks.append(BoundCheck.le("thm1_1_cm", mu, scheme_intersection_bound(f, d, "cm")))
        checks.append(BoundCheck.le("ex5_4", mu, scheme_intersection_bound(f, d, "ee")))
    return checks


# -------------------------------------------------------------------- corpus

@dataclass
class CorpusReport:
    records: list
    errors: list
    seed: object = 0

    @property
    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, OUT: 0, "error": len(self.errors)}
        for r in self.records:
            out[r.status] += 1
        return out

    @property
    def ok(self) -> bool:
        c = self.counts
        return c[FAIL] == 0 and c["error"] == 0

    def to_dict(self) -> dict:
        return {
            "cases": [r.to_dict(self.seed) for r in self.records],
            "errors": self.errors,
            "summary": self.counts,
            "seed": self.seed,
            "version": __version__,
        }


def _analyze_safely(args):
    case, seed, trials, max_rank = args
    try:
        return analyze_case(case, seed, trials, max_rank)
    except CmGirthError as exc:
        return {"case_id": case.case_id, "error": f"{type(exc).__name__}: {exc}"}


def run_corpus(cases, seed=0, trials: int = 16, max_rank: int = DEFAULT_MAX_RANK,
               jobs: int = 1) -> CorpusReport:
    """Analyze every case; records come back sorted by ``case_id``."""
    work = [(c, seed, trials, max_rank) for c in cases]
    if jobs > 1 and len(work) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_analyze_safely, work))
    else:
        results = [_analyze_safely(w) for w in work]
    records = sorted((r for r in results if isinstance(r, CaseRecord)), key=lambda r: r.case_id)
    errors = sorted((r for r in results if isinstance(r, dict)), key=lambda r: str(r["case_id"]))
    return CorpusReport(records, errors, seed)


# ----------------------------------------------------------------- generator

FAMILIES = ("hypersurface", "complete_intersection", "determinantal", "monomial_cm",
            "non_cm", "height3")


def _random_form(ring: PolyRing, degree: int, rng) -> object:
    from itertools import combinations_with_replacement
    terms = []
    for combo in combinations_with_replacement(range(ring.nvars), degree):
        e = [0] * ring.nvars
        for i in combo:
            e[i] += 1
        terms.append((rng.randrange(-3, 4), tuple(e)))
    return ring.from_terms(terms)


def _linear_forms(ring, k, rng):
    return [_random_form(ring, 1, rng) for _ in range(k)]


def _random_change(ring: PolyRing, rng) -> Substitution:
    n = ring.nvars
    while True:
        m = [[rng.randrange(-2, 3) for _ in range(n)] for _ in range(n)]
        try:
            return Substitution.linear(ring, m)
        except InputError:
            continue


def _minors(ring, matrix) -> list:
    """Maximal minors of a ``(t+1) x t`` matrix of polynomials."""
    rows = len(matrix)

    def det(m):
        if len(m) == 1:
            return m[0][0]
        total = ring.zero()
        for j, entry in enumerate(m[0]):
            if entry:
                sub = [row[:j] + row[j + 1:] for row in m[1:]]
                term = entry * det(sub)
                total = total + term if j % 2 == 0 else total - term
        return total

    return [det(matrix[:i] + matrix[i + 1:]) for i in range(rows)]


def _candidate(family: str, rng, field: Field):
    """One raw candidate ``(variables, I, a, inner, intended height or None)``."""
    if family == "hypersurface":
        n = rng.choice((3, 4))
        ring = PolyRing(field, ("x", "y", "z", "w")[:n])
        I = [_random_form(ring, rng.choice((2, 3)), rng)]
        h = rng.choice((1, 2))
        a = _linear_forms(ring, h, rng) if rng.random() < 0.7 else \
            [_random_form(ring, 2, rng) for _ in range(h)]
        return ring, I, a, None, h
    if family == "complete_intersection":
        ring = PolyRing(field, ("x", "y", "z", "w"))
        I = [_random_form(ring, 2, rng), _random_form(ring, rng.choice((1, 2)), rng)]
        h = rng.choice((1, 2))
        return ring, I, _linear_forms(ring, h, rng), None, h
    if family == "determinantal":
        n = rng.choice((3, 4))
        t = rng.choice((1, 2, 2, 3)) if n == 4 else rng.choice((1, 2))
        ring = PolyRing(field, ("x", "y", "z", "w")[:n])
        matrix = [[_random_form(ring, 1, rng) for _ in range(t)] for _ in range(t + 1)]
        inner = None
        a = _minors(ring, matrix)
        if t == 1 and rng.random() < 0.5:
            inner = [a[0]]
        return ring, [], a, inner, 2
    if family == "monomial_cm":
        choice = rng.randrange(4)
        if choice == 0:
            ring = PolyRing(field, ("x", "y", "z"))
            I = ["x*y", "x*z", "y*z"]
        elif choice == 1:
            ring = PolyRing(field, ("x", "y", "z"))
            k = rng.choice((2, 3))
            I = [f"x^{i}*y^{k - i}" for i in range(k + 1)]
        elif choice == 2:
            ring = PolyRing(field, ("x", "y", "z", "w"))
            I = [f"x^{rng.choice((1, 2))}*y", f"z*w^{rng.choice((1, 2))}"]
        else:
            ring = PolyRing(field, ("x", "y", "z", "w"))
            I = ["x*y", "y*z", "z*w"]
        I = [ring.parse(g) for g in I]
        s = _random_change(ring, rng) if rng.random() < 0.5 else None
        if s is not None:
            I = [s(g) for g in I]
        return ring, I, _linear_forms(ring, 1, rng), None, 1
    if family == "non_cm":
        choice = rng.randrange(4)
        if choice == 0:
            ring = PolyRing(field, ("x", "y"))
            I, a = ["x^2", "x*y"], ["x", "y"]
            h = 1
        elif choice == 1:
            ring = PolyRing(field, ("x", "y", "z"))
            I, a, h = ["x*z", "y*z"], ["x", "y"], 1
        elif choice == 2:
            ring = PolyRing(field, ("x", "y", "z", "w"))
            I, a, h = ["x*z", "x*w", "y*z", "y*w"], ["x", "y"], None
        else:
            ring = PolyRing(field, ("x", "y", "z"))
            I, a, h = ["x^2", "x*y", "x*z"], ["x", "y", "z"], None
        I = [ring.parse(g) for g in I]
        a = [ring.parse(g) for g in a]
        if rng.random() < 0.6:
            s = _random_change(ring, rng)
            I, a = [s(g) for g in I], [s(g) for g in a]
        return ring, I, a, None, h
    # height 3: out of hypothesis on purpose
    ring = PolyRing(field, ("x", "y", "z", "w"))
    return ring, [], _linear_forms(ring, 3, rng), None, 3


def generate_corpus(n: int, seed=0, field: Field = None, families=FAMILIES) -> list:
    """``n`` deterministic random cases cycling through ``families``.

    Candidates whose computed height disagrees with the intended one (a
    degenerate random choice) are resampled.
    """
    field = field or Field(32003)
    rng = random.Random(f"{seed}:corpus")
    cases = []
    for i in range(n):
        family = families[i % len(families)]
        for _ in range(64):
            ring, I, a, inner, h = _candidate(family, rng, field)
            Q = QuotientPresentation(ring, Ideal(ring, I))
            if Q.is_zero_ring() or any(not g for g in a):
                continue
            if Q.add(a).is_zero_ring():
                continue
            if h is not None and operational_height(Q, a) != h:
                continue
            break
        else:
            raise PreconditionError(f"could not generate a {family} case")
        cases.append(CaseFile(ring, tuple(I), tuple(a), None if inner is None else tuple(inner),
                              {}, f"g{i:03d}_{family}"))
    return cases
