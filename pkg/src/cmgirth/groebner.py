"""Normal forms, Buchberger's algorithm, membership and elimination.

The kernel works on plain dictionaries ``{(position, exponents): coeff}`` so
the same code serves ideals (position always 0) and submodules of graded free
modules (used by :mod:`cmgirth.resolve`).  The public API wraps it in
:class:`Ideal` / :class:`GroebnerBasis` over :class:`~cmgirth.poly.Polynomial`.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import InputError, InvariantViolation
from .poly import MonomialOrder, PolyRing, Polynomial

# ----------------------------------------------------------------------- kernel
# A "vector" is a dict mapping module monomials (pos, exp) to nonzero field
# elements.  ``okey`` maps a module monomial to a flat tuple; larger is bigger.


def _normalize_fn(p: int):
    return (lambda v: v % p) if p else (lambda v: v)


def lead(f: dict, okey: Callable):
    return max(f, key=okey)


def make_monic(f: dict, okey: Callable, field) -> dict:
    c = f[lead(f, okey)]
    if c == 1:
        return f
    inv = field.inv(c)
    norm = field.normalize
    return {m: norm(v * inv) for m, v in f.items()}


def _index(basis):
    by_pos = {}
    for lm, g in basis:
        by_pos.setdefault(lm[0], []).append((lm[1], g))
    return by_pos


def reduce_vector(f: dict, basis, okey: Callable, field, by_pos=None) -> dict:
    """Full normal form of ``f`` modulo monic ``basis = [(lm, g), ...]``."""
    if by_pos is None:
        by_pos = _index(basis)
    p = field.characteristic
    f = dict(f)
    heap = [(tuple(-x for x in okey(m)), m) for m in f]
    heapq.heapify(heap)
    r = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, None)
        if c is None:
            continue
        pos, e = m
        for lm_e, g in by_pos.get(pos, ()):
            if all(a <= b for a, b in zip(lm_e, e)):
                q = tuple(b - a for a, b in zip(lm_e, e))
                for (gp, ge), gc in g.items():
                    t = (gp, tuple(x + y for x, y in zip(ge, q)))
                    if t == m:
                        continue
                    old = f.get(t)
                    v = (0 if old is None else old) - c * gc
                    if p:
                        v %= p
                    if v:
                        f[t] = v
                        if old is None:
                            heapq.heappush(heap, (tuple(-x for x in okey(t)), t))
                    elif old is not None:
                        del f[t]
                break
        else:
            r[m] = c
    return r


def s_vector(f: dict, g: dict, lf, lg, field) -> dict:
    """S-vector of monic ``f``, ``g`` with leading monomials ``lf``, ``lg`` (same position)."""
    lcm = tuple(max(a, b) for a, b in zip(lf[1], lg[1]))
    qf = tuple(a - b for a, b in zip(lcm, lf[1]))
    qg = tuple(a - b for a, b in zip(lcm, lg[1]))
    norm = field.normalize
    out = {}
    for (pos, e), c in f.items():
        out[(pos, tuple(x + y for x, y in zip(e, qf)))] = c
    for (pos, e), c in g.items():
        t = (pos, tuple(x + y for x, y in zip(e, qg)))
        v = norm(out.get(t, 0) - c)
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def groebner_kernel(gens: Iterable[dict], okey: Callable, field, *, rank_one: bool,
                    degree: Callable = None, max_size: int = None) -> list:
    """Reduced Groebner basis of the submodule spanned by ``gens``.

    Buchberger with the product criterion (``rank_one`` only, it is invalid for
    modules), Buchberger's chain criterion and the normal selection strategy.
    Returns monic vectors sorted by leading monomial, largest first.
    """
    if degree is None:
        def degree(m):
            return sum(m[1])
    G = []       # (lm, vector)
    by_pos = {}
    pairs = []   # heap of (deg, okey(lcm), i, j)
    pending = set()

    def add(h):
        h = make_monic(h, okey, field)
        lm = lead(h, okey)
        idx = len(G)
        G.append((lm, h))
        for k in range(idx):
            lk = G[k][0]
            if lk[0] != lm[0]:
                continue
            lcm = (lm[0], tuple(max(a, b) for a, b in zip(lk[1], lm[1])))
            heapq.heappush(pairs, (degree(lcm), okey(lcm), k, idx))
            pending.add((k, idx))
        by_pos.setdefault(lm[0], []).append((lm[1], h))
        if max_size is not None and len(G) > max_size:
            from .errors import ResourceError
            raise ResourceError(f"Groebner basis exceeded {max_size} elements")

    for g in sorted((g for g in gens if g), key=lambda v: okey(lead(v, okey))):
        r = reduce_vector(g, G, okey, field, by_pos)
        if r:
            add(r)

    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        pending.discard((i, j))
        (li, gi), (lj, gj) = G[i], G[j]
        if rank_one and all(not (a and b) for a, b in zip(li[1], lj[1])):
            continue
        lcm = tuple(max(a, b) for a, b in zip(li[1], lj[1]))
        chain = False
        for k, (lk, _) in enumerate(G):
            if k == i or k == j or lk[0] != li[0]:
                continue
            if all(a <= b for a, b in zip(lk[1], lcm)) \
                    and (min(i, k), max(i, k)) not in pending \
                    and (min(j, k), max(j, k)) not in pending:
                chain = True
                break
        if chain:
            continue
        r = reduce_vector(s_vector(gi, gj, li, lj, field), G, okey, field, by_pos)
        if r:
            add(r)
    return interreduce([g for _, g in G], okey, field)


def interreduce(vectors: Sequence[dict], okey: Callable, field) -> list:
    """Minimalize and fully reduce a Groebner basis; result sorted largest first."""
    items = [(lead(v, okey), v) for v in vectors if v]
    items.sort(key=lambda t: okey(t[0]))
    kept = []
    for idx, (lm, v) in enumerate(items):
        redundant = False
        for jdx, (lm2, _) in enumerate(items):
            if jdx == idx or lm2[0] != lm[0]:
                continue
            if all(a <= b for a, b in zip(lm2[1], lm[1])) and (lm2 != lm or jdx < idx):
                redundant = True
                break
        if not redundant:
            kept.append((lm, make_monic(v, okey, field)))
    out = []
    for idx, (lm, v) in enumerate(kept):
        others = [kv for jdx, kv in enumerate(kept) if jdx != idx]
        tail = dict(v)
        c = tail.pop(lm)
        red = reduce_vector(tail, others, okey, field)
        red[lm] = c
        out.append((lm, red))
    out.sort(key=lambda t: okey(t[0]), reverse=True)
    return [v for _, v in out]


# ------------------------------------------------------------ polynomial layer

def _vec(f: Polynomial) -> dict:
    return {(0, e): c for e, c in f.coeffs.items()}


def _poly(v: dict, ring: PolyRing) -> Polynomial:
    return Polynomial(ring, {e: c for (_, e), c in v.items()})


def _ideal_key(order: MonomialOrder):
    key = order.key
    return lambda m: key(m[1])


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis; elements are monic and sorted largest lead first."""

    ring: PolyRing
    elements: tuple

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    def leading_monomials(self) -> list:
        return [g.lm for g in self.elements]

    def is_unit(self) -> bool:
        return any(not any(g.lm) for g in self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __str__(self):
        return "{" + ", ".join(str(g) for g in self.elements) + "}"


class Ideal:
    """Ideal of a polynomial ring, with a lazily computed reduced Groebner basis."""

    def __init__(self, ring: PolyRing, generators: Iterable = ()):
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = ring.parse(g)
            if not isinstance(g, Polynomial) or g.ring != ring:
                raise InputError("ideal generators must belong to the ideal's ring")
            if g:
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self._gb = None

    def groebner_basis(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = buchberger(self)
        return self._gb

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def in_ring(self, ring: PolyRing) -> Ideal:
        return Ideal(ring, [g.in_ring(ring) for g in self.generators])

    def __add__(self, other: Ideal) -> Ideal:
        if other.ring != self.ring:
            raise InputError("ideals belong to different rings")
        return Ideal(self.ring, self.generators + other.generators)

    def __contains__(self, f: Polynomial) -> bool:
        return ideal_membership(f, self)

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.generators)})"


def buchberger(ideal: Ideal) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` under its ring's order."""
    ring = ideal.ring
    okey = _ideal_key(ring.order)
    vecs = groebner_kernel((_vec(g) for g in ideal.generators), okey, ring.field,
                           rank_one=True)
    return GroebnerBasis(ring, tuple(_poly(v, ring) for v in vecs))


def groebner_basis(generators: Sequence[Polynomial], ring: PolyRing = None) -> GroebnerBasis:
    ring = ring or generators[0].ring
    return buchberger(Ideal(ring, generators))


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Remainder of ``f`` modulo ``G``: no term divisible by a leading monomial of ``G``."""
    if f.ring != G.ring:
        if f.ring.variables == G.ring.variables and f.ring.field == G.ring.field:
            raise InputError("normal_form: monomial order mismatch")
        raise InputError("normal_form: polynomial and basis live in different rings")
    okey = _ideal_key(G.ring.order)
    basis = [((0, g.lm), _vec(g)) for g in G.elements]
    return _poly(reduce_vector(_vec(f), basis, okey, G.ring.field), f.ring)


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    fm, gm = f.monic(), g.monic()
    v = s_vector(_vec(fm), _vec(gm), (0, fm.lm), (0, gm.lm), f.ring.field)
    return _poly(v, f.ring)


def is_groebner_basis(G: GroebnerBasis) -> bool:
    """Post-hoc certificate: every S-polynomial reduces to zero."""
    els = G.elements
    for i in range(len(els)):
        for j in range(i + 1, len(els)):
            if normal_form(s_polynomial(els[i], els[j]), G):
                return False
    return True


def is_reduced(G: GroebnerBasis) -> bool:
    lms = [g.lm for g in G.elements]
    for i, g in enumerate(G.elements):
        if g.lc != 1:
            return False
        for j, m in enumerate(lms):
            if i != j and any(all(a <= b for a, b in zip(m, e)) for e in g.coeffs):
                return False
    return True


def ideal_membership(f: Polynomial, ideal: Ideal) -> bool:
    if f.ring != ideal.ring:
        raise InputError("ideal_membership: polynomial and ideal live in different rings")
    return not normal_form(f, ideal.groebner_basis())


def eliminate(ideal: Ideal, keep: Sequence[str]) -> Ideal:
    """Generators of ``ideal`` intersected with ``K[keep]``; ``keep`` must be a final segment."""
    ring = ideal.ring
    keep = tuple(keep)
    n, m = ring.nvars, len(keep)
    if ring.variables[n - m:] != keep:
        raise InputError("eliminate: kept variables must be a final segment of the ring")
    k = n - m
    big = ring.with_order(MonomialOrder.block(k))
    G = buchberger(ideal.in_ring(big))
    small = ring.subring(keep)
    gens = [g.restrict(small) for g in G.elements if not any(g.lm[:k])]
    for g in G.elements:
        if not any(g.lm[:k]) and g.support() & set(range(k)):
            raise InvariantViolation("block order failed to eliminate")
    return Ideal(small, gens)
