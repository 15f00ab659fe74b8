import random

import pytest

from cmgirth.errors import InputError, PreconditionError, ResourceError
from cmgirth.groebner import Ideal
from cmgirth.hilbert import QuotientPresentation
from cmgirth.poly import Field, PolyRing
from cmgirth.resolve import (HomogeneousMatrix, cm_type, cokernel_generator_count, depth_and_pd,
                             euler_characteristic_holds, free_resolution, is_cohen_macaulay,
                             minimal_generator_count, transpose_ext1_generators)

from oracles import socle_dimension

F = Field(32003)


def quotient(names, gens, field=F):
    ring = PolyRing(field, tuple(names))
    return QuotientPresentation(ring, Ideal(ring, gens))


def certified(res, Q):
    assert res.compositions_vanish()
    assert res.minimal
    assert res.euler_series().same_function(Q.series)
    assert euler_characteristic_holds(res)


@pytest.mark.parametrize("names, gens, betti", [
    ("xy", ["x^2", "x*y"], [1, 2, 1]),
    ("xy", ["x", "y"], [1, 2, 1]),
    ("xy", ["x^2"], [1, 1]),
    ("xy", ["x^2", "x*y", "y^2"], [1, 3, 2]),
    ("xyzw", ["x*z - y^2", "x*w - y*z", "y*w - z^2"], [1, 3, 2]),
    ("xyz", ["x", "y", "z"], [1, 3, 3, 1]),
    ("xyz", ["x*y", "x*z", "y*z"], [1, 3, 2]),
    ("xyz", [], [1]),
    ("xyz", ["x^2", "x*y + y*z", "x*y"], None),
])
def test_betti_numbers(names, gens, betti):
    Q = quotient(names, gens)
    res = free_resolution(Q)
    if betti is not None:
        assert res.betti == betti
    certified(res, Q)


def test_graded_betti_twisted_cubic():
    res = free_resolution(quotient("xyzw", ["x*z - y^2", "x*w - y*z", "y*w - z^2"]))
    assert res.graded_betti() == {(0, 0): 1, (1, 2): 3, (2, 3): 2}
    assert res.betti_table().splitlines() == ["total: 1 3 2", "    0: 1 . .", "    1: . 3 2"]


def test_redundant_generators_are_dropped():
    res = free_resolution(quotient("xy", ["x^2", "x*y", "x^2 + x*y", "x^3"]))
    assert res.betti == [1, 2, 1]


@pytest.mark.parametrize("names, gens, pd, depth, cm", [
    ("xy", ["x^2", "x*y"], 2, 0, False),
    ("xy", ["x^2"], 1, 1, True),
    ("xyzw", ["x*z - y^2", "x*w - y*z", "y*w - z^2"], 2, 2, True),
    ("xyzw", ["x*z", "x*w", "y*z", "y*w"], 3, 1, False),
])
def test_depth_and_cm(names, gens, pd, depth, cm):
    Q = quotient(names, gens)
    assert depth_and_pd(Q) == (pd, depth)
    assert is_cohen_macaulay(Q) is cm


@pytest.mark.parametrize("names, gens", [
    ("xy", ["x^2", "y^2"]),
    ("xy", ["x^2", "x*y", "y^2"]),
    ("xy", ["x^3", "x*y", "y^2"]),
    ("xyz", ["x^2", "y^2", "z^2", "x*y"]),
    ("xyz", ["x", "y", "z"]),
    ("xyz", ["x^2", "y^2", "z^2", "x*y", "x*z", "y*z"]),
])
def test_type_matches_socle_dimension(names, gens):
    Q = quotient(names, gens)
    assert cm_type(Q) == socle_dimension(Q)


def test_type_after_cutting_by_linear_forms():
    # type of a CM ring is unchanged modulo a regular sequence of linear forms
    Q = quotient("xyzw", ["x*z - y^2", "x*w - y*z", "y*w - z^2"])
    cut = Q.add(["x - 3*w", "y + 2*z + w"])
    assert cm_type(Q) == socle_dimension(cut) == 2


def test_type_needs_cm():
    with pytest.raises(PreconditionError):
        cm_type(quotient("xy", ["x^2", "x*y"]))


def test_minimal_generator_count():
    ring = PolyRing(F, ("x", "y"))
    gens = [ring.parse(s) for s in ("x", "y", "x + y")]
    assert minimal_generator_count(gens) == 2
    Q = quotient("xy", ["x^2", "x*y"])
    assert minimal_generator_count([ring.parse("x"), ring.parse("y")], Q) == 2
    assert minimal_generator_count([ring.parse("x^2"), ring.parse("y")], Q) == 1
    with pytest.raises(InputError):
        minimal_generator_count([ring.parse("x + y^2")])


def test_hilbert_burch_transpose():
    ring = PolyRing(F, ("x", "y", "z", "w"))
    f = HomogeneousMatrix.from_rows([["x", "y"], ["y", "z"], ["z", "w"]], ring)
    p, ft = transpose_ext1_generators(f)
    assert p == 2 and ft.shape == (2, 3)
    assert cokernel_generator_count(f) == 3
    res = free_resolution(f)
    assert res.betti == [3, 2] and res.compositions_vanish()


def test_transpose_rejects_units():
    ring = PolyRing(F, ("x", "y"))
    with pytest.raises(PreconditionError):
        transpose_ext1_generators(HomogeneousMatrix.from_rows([["1", "x"]], ring))


def test_wrong_degree_entry_rejected():
    ring = PolyRing(F, ("x", "y"))
    with pytest.raises(InputError):
        HomogeneousMatrix.from_rows([["x", "y"], ["x^2", "y"]], ring)


def test_rank_cap():
    with pytest.raises(ResourceError):
        free_resolution(quotient("xyzw", ["x", "y", "z", "w"]), max_rank=3)


def test_random_resolutions_are_certified():
    rng = random.Random(5)
    ring = PolyRing(F, ("x", "y", "z"))
    for _ in range(8):
        gens = []
        for _ in range(rng.randint(1, 4)):
            e = [0, 0, 0]
            for _ in range(rng.randint(1, 3)):
                e[rng.randrange(3)] += 1
            gens.append(ring.monomial(tuple(e)) + ring.monomial(
                (e[2], e[0], e[1]), rng.randrange(1, 5)))
        Q = QuotientPresentation(ring, Ideal(ring, gens))
        if not Q.is_zero_ring():
            certified(free_resolution(Q), Q)
