"""Acceptance criteria 1-10.

Each criterion prints one ``criterion N: PASS|FAIL`` line.  Run directly with
``python tests/test_acceptance.py`` or through pytest.
"""

import json
import random
import sys
import tempfile
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cmgirth.casefile import parse_case  # noqa: E402
from cmgirth.cli import main  # noqa: E402
from cmgirth.girth import (analyze_case, forster_swan_bound, generate_corpus,  # noqa: E402
                           global_bound, scheme_intersection_bound)
from cmgirth.groebner import (Ideal, buchberger, is_groebner_basis, is_reduced,  # noqa: E402
                              normal_form, s_polynomial)
from cmgirth.hilbert import MonomialIdeal, QuotientPresentation, hilbert_series  # noqa: E402
from cmgirth.noether import build_W, invariant_chain, noether_position  # noqa: E402
from cmgirth.poly import DEGREVLEX, Field, PolyRing  # noqa: E402
from cmgirth.resolve import cm_type, free_resolution, is_cohen_macaulay  # noqa: E402

from oracles import monomial_standard_count  # noqa: E402

F = Field(32003)
TWISTED = ["x*z - y^2", "x*w - y*z", "y*w - z^2"]


def quotient_of(case):
    ring = case.ring.with_order(DEGREVLEX)
    return QuotientPresentation(ring, Ideal(ring, [g.in_ring(ring) for g in case.I]))


def by_name(rec):
    return {c.name: c for c in rec.checks}


def criterion_1():
    for field in ("F 32003", "Q"):
        rec = analyze_case(parse_case(f"field {field}\nring x y\nideal I: x^2, x*y\nideal a: x, y\n"))
        inv = rec.invariants
        assert (inv["e"], inv["N"], inv["cm"], inv["mu"], inv["height"]) == (1, 2, False, 2, 1)
        c = by_name(rec)["cm1_local"]
        assert (c.lhs, c.rhs, c.passed) == (2, 2, True)
    return 1.0


def criterion_2():
    rec = analyze_case(parse_case("field F 32003\nring x y z w\nideal a: " + ", ".join(TWISTED)))
    inv = rec.invariants
    assert (inv["mu"], inv["type"], inv["N"], inv["height"]) == (3, 2, 1, 2)
    assert inv["cm"] and inv["cm_quotient"]
    c = by_name(rec)["cm2tau_local"]
    assert (c.lhs, c.rhs, c.passed) == (3, 3, True)
    return 2.0


def criterion_3():
    cases = generate_corpus(60, seed=3)
    cm_count = non_cm = 0
    for case in cases:
        chain = invariant_chain(quotient_of(case), trials=16, seed=3)
        assert chain.e <= chain.paramdeg_upper <= chain.N
        if chain.cm:
            assert chain.e == chain.paramdeg_upper
            cm_count += 1
        else:
            assert chain.e < chain.paramdeg_upper
            non_cm += 1
    assert len(cases) >= 50 and cm_count and non_cm >= 5
    return 60.0


def criterion_4():
    cases = generate_corpus(30, seed=4,
                            families=("hypersurface", "complete_intersection", "monomial_cm"))
    checked = 0
    for case in cases:
        Q = quotient_of(case)
        assert is_cohen_macaulay(Q)
        nd = noether_position(Q.ideal, seed=4)
        assert nd.graded and all(s.kind == "linear" for s in nd.substitutions)
        assert nd.N == invariant_chain(Q, trials=2, seed=4, nd=nd).e
        checked += 1
    assert checked >= 20
    return 60.0


def criterion_5():
    def quotient(names, gens):
        ring = PolyRing(F, tuple(names))
        return QuotientPresentation(ring, Ideal(ring, gens))

    koszul = build_W(quotient("xy", []), ["x", "y"])
    assert (koszul.p, koszul.q) == (1, 2) and koszul.passed
    cubic = build_W(quotient("xyzw", []), TWISTED)
    assert (cubic.p, cubic.q) == (2, 3) and cubic.passed
    cone = build_W(quotient("xyz", ["x^2 - y*z"]), ["x", "y"])
    assert cone.N == 2 and cone.passed
    for W in (koszul, cubic, cone):
        assert W.p <= W.tau * W.N and W.q <= W.p + W.N
        assert W.composition_ok and W.euler_ok
    return 10.0


def criterion_6():
    assert global_bound(5, 1, 2, 1) == 6 and global_bound(2, 1, 2, 1) == 3
    assert global_bound(3, 4, 1) == 6 and global_bound(3, 4, 2, 2) == 13
    for d in range(1, 6):
        for f in range(1, 6):
            assert scheme_intersection_bound(f, d, "general") == 2 * f + 3 * d - 2
            assert scheme_intersection_bound(f, d, "cm") == 2 * f + d - 2
    for f in range(1, 10):
        assert scheme_intersection_bound(f, 3, "ee") == 2 * f + 5
        assert scheme_intersection_bound(f, 3, "cm") == 2 * f + 1
    assert forster_swan_bound(4, 3, 1) == 5 and forster_swan_bound(1, 3, 0) == 4
    return 1.0


def criterion_7():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 5)
        gens = []
        for _ in range(rng.randint(1, 6)):
            e = [0] * n
            for _ in range(rng.randint(1, 5)):
                e[rng.randrange(n)] += 1
            gens.append(tuple(e))
        ring = PolyRing(F, tuple("abcde"[:n]))
        s = hilbert_series(MonomialIdeal(ring, gens))
        assert s.expansion(12) == [monomial_standard_count(gens, n, t) for t in range(13)]
    return 30.0


def _certify(res, series):
    assert res.compositions_vanish()
    assert res.minimal
    assert res.euler_series().same_function(series)


def criterion_8():
    resolutions = 0
    for case in generate_corpus(30, seed=8):
        Q = quotient_of(case)
        _certify(free_resolution(Q), Q.series)
        quot = Q.add([g.in_ring(Q.ring) for g in case.a])
        _certify(free_resolution(quot), quot.series)
        resolutions += 2
    tight = 0
    for case in generate_corpus(24, seed=8, families=("determinantal",)):
        rec = analyze_case(case, seed=8, trials=2)
        inv = rec.invariants
        assert inv["cm_quotient"] and inv["height"] == 2
        assert inv["mu"] == inv["type"] + 1
        assert by_name(rec)["hilbert_burch_tightness"].passed
        Q = quotient_of(case).add(list(case.a))
        _certify(free_resolution(Q), Q.series)
        assert cm_type(Q) == inv["type"]
        tight += 1
    assert tight >= 20 and resolutions >= 60
    return 60.0


def criterion_9():
    rng = random.Random(9)
    ring = PolyRing(F, ("x", "y", "z"))

    def random_poly():
        return ring.from_terms((rng.randrange(-4, 5), tuple(rng.randrange(3) for _ in range(3)))
                               for _ in range(rng.randint(1, 3)))

    for _ in range(60):
        gens = [g for g in (random_poly() for _ in range(rng.randint(1, 3))) if g]
        if not gens:
            continue
        G = buchberger(Ideal(ring, gens))
        shuffled = gens[:]
        rng.shuffle(shuffled)
        assert buchberger(Ideal(ring, shuffled + [gens[0] * ring.gen(rng.randrange(3))])).elements \
            == G.elements
        assert is_reduced(G) and is_groebner_basis(G)
        for i, f in enumerate(G.elements):
            for g in G.elements[i + 1:]:
                assert not normal_form(s_polynomial(f, g), G)
        f = random_poly() * random_poly()
        r = normal_form(f, G)
        assert normal_form(r, G) == r and not normal_form(f - r, G)
    return 30.0


def criterion_10():
    with tempfile.TemporaryDirectory() as tmp:
        outs = []
        for name, extra in (("a", []), ("b", []), ("c", ["--jobs", "2"])):
            path = Path(tmp) / f"{name}.json"
            code = main(["corpus", "--generate", "30", "--seed", "7", "--json", str(path)] + extra)
            assert code == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1] == outs[2]
        assert json.loads(outs[0])["seed"] == 7
    return 60.0


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def run(fn):
    """Run one criterion; returns ``(ok, line)``."""
    n = fn.__name__.split("_")[1]
    start = time.perf_counter()
    try:
        limit = fn()
        elapsed = time.perf_counter() - start
        ok = elapsed < limit
        detail = f"{elapsed:.2f}s (limit {limit:.0f}s)"
    except AssertionError as exc:
        ok, detail = False, f"assertion failed {exc}".strip()
    return ok, f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("fn", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(fn, capsys):
    ok, line = run(fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run(fn) for fn in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
