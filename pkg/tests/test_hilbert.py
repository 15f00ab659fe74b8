import random

import pytest

from cmgirth.errors import InputError, PreconditionError
from cmgirth.groebner import Ideal
from cmgirth.hilbert import (HilbertSeries, MonomialIdeal, QuotientPresentation, dimension,
                             hilbert_series, length_zero_dim, monomial_minimal_primes,
                             multiplicity, operational_height)
from cmgirth.poly import Field, PolyRing

from oracles import hilbert_function_by_rank, monomial_standard_count, monomials_of_degree

F = Field(32003)


def quotient(names, gens, field=F):
    ring = PolyRing(field, tuple(names))
    return QuotientPresentation(ring, Ideal(ring, gens))


@pytest.mark.parametrize("names, gens, dim, e", [
    ("xy", ["x^2", "x*y"], 1, 1),
    ("xy", ["x^2"], 1, 2),
    ("xyz", ["x^2 - y*z"], 2, 2),
    ("xyzw", ["x*z - y^2", "x*w - y*z", "y*w - z^2"], 2, 3),
    ("xyz", ["x*y", "x*z", "y*z"], 1, 3),
    ("xy", [], 2, 1),
    ("x", ["x^3"], 0, 3),
])
def test_dimension_and_multiplicity(names, gens, dim, e):
    Q = quotient(names, gens)
    assert dimension(Q) == dim
    assert multiplicity(Q) == e


def test_series_reduced_form():
    s = quotient("xy", ["x^2", "x*y"]).series
    assert s.reduced_numerator == (1, 1, -1)
    assert s.pole_order == 1
    assert s.expansion(4) == [1, 2, 1, 1, 1]
    assert str(s) == "(1 + t - t^2)/(1-t)^1"


def test_zero_ring():
    Q = quotient("xy", ["x", "1"])
    assert Q.is_zero_ring() and dimension(Q) == -1
    with pytest.raises(InputError):
        multiplicity(Q)


def test_length_needs_artinian():
    assert length_zero_dim(quotient("xy", ["x^2", "y^3"])) == 6
    with pytest.raises(PreconditionError):
        length_zero_dim(quotient("xy", ["x^2"]))


def test_same_function_across_variable_counts():
    a = HilbertSeries((1, -1), 2)   # 1/(1-t)
    b = HilbertSeries((1,), 1)
    assert a.same_function(b) and b.same_function(a)
    assert not a.same_function(HilbertSeries((1,), 2))


def test_inhomogeneous_rejected():
    with pytest.raises(InputError):
        quotient("xy", ["x^2 + y"])


def test_operational_height():
    Q = quotient("xy", ["x^2", "x*y"])
    assert operational_height(Q, ["x", "y"]) == 1
    assert operational_height(quotient("xyz", []), ["x", "y"]) == 2


def test_minimal_primes():
    primes = monomial_minimal_primes([(1, 1, 0), (0, 1, 1)], 3)
    assert sorted(sorted(p) for p in primes) == [[0, 2], [1]]


def test_polynomial_ideals_against_rank_oracle():
    rng = random.Random(3)
    ring = PolyRing(F, ("x", "y", "z", "w"))
    for _ in range(6):
        gens = []
        for _ in range(rng.randint(1, 3)):
            d = rng.randint(1, 3)
            gens.append(ring.from_terms((rng.randrange(-5, 6), m)
                                        for m in rng.sample(monomials_of_degree(4, d), 3)))
        gens = [g for g in gens if g]
        Q = QuotientPresentation(ring, Ideal(ring, gens))
        for t in range(7):
            assert Q.series.coefficient(t) == hilbert_function_by_rank(gens, 4, t, 32003)


def random_monomial_ideal(rng, n, k, maxdeg):
    gens = []
    for _ in range(k):
        d = rng.randint(1, maxdeg)
        e = [0] * n
        for _ in range(d):
            e[rng.randrange(n)] += 1
        gens.append(tuple(e))
    return gens


def test_pivot_recursion_matches_enumeration():
    rng = random.Random(17)
    for _ in range(30):
        n = rng.randint(1, 5)
        gens = random_monomial_ideal(rng, n, rng.randint(1, 6), 5)
        ring = PolyRing(F, tuple("abcde"[:n]))
        s = hilbert_series(MonomialIdeal(ring, gens))
        for t in range(10):
            assert s.coefficient(t) == monomial_standard_count(gens, n, t)
