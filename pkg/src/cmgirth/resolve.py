"""Syzygies and graded minimal free resolutions over a polynomial ring.

Submodules of a graded free module ``F = (+) S(-w_i)`` are lists of vectors
in the kernel representation of :mod:`cmgirth.groebner`.  Syzygies of
``h_1..h_m`` are read off a Groebner basis of ``<h_j + e_j>`` in ``F (+) S^m``
under an order that eliminates ``F``.  Each step keeps only a minimal
generating set (graded Nakayama), so the resolution is minimal by
construction and its length is at most the number of variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError, InvariantViolation, PreconditionError, ResourceError
from .groebner import Ideal, groebner_kernel, lead, reduce_vector
from .hilbert import (HilbertSeries, QuotientPresentation, dimension, free_module_series,
                      module_hilbert_series, tpoly_add, tpoly_shift, tpoly_sub)
from .poly import DEGREVLEX, PolyRing, Polynomial

DEFAULT_MAX_RANK = 200


@dataclass(frozen=True)
class GradedFreeModule:
    twists: tuple

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(self.twists))

    @property
    def rank(self) -> int:
        return len(self.twists)

    def dual(self) -> GradedFreeModule:
        return GradedFreeModule(tuple(-t for t in self.twists))


def top_key(twists: Sequence[int]):
    """Degree-compatible term-over-position order on ``(+) S(-w_i)``."""
    drl = DEGREVLEX.key
    tw = tuple(twists)
    return lambda m: (sum(m[1]) + tw[m[0]],) + drl(m[1]) + (-m[0],)


def _degree_fn(twists):
    tw = tuple(twists)
    return lambda m: sum(m[1]) + tw[m[0]]


def vector_degree(v: dict, twists) -> int:
    degs = {sum(e) + twists[pos] for pos, e in v}
    if len(degs) != 1:
        raise InputError("vector is not homogeneous")
    return degs.pop()


class HomogeneousMatrix:
    """Map ``source -> target`` of graded free modules, stored by columns."""

    def __init__(self, ring: PolyRing, target: GradedFreeModule, source: GradedFreeModule,
                 columns: Sequence[dict], check: bool = True):
        self.ring = ring
        self.target = target
        self.source = source
        self.columns = [dict(c) for c in columns]
        if len(self.columns) != source.rank:
            raise InputError("column count does not match the source rank")
        if check:
            for j, col in enumerate(self.columns):
                for (pos, e), c in col.items():
                    if not 0 <= pos < target.rank:
                        raise InputError("entry row index out of range")
                    if sum(e) != source.twists[j] - target.twists[pos]:
                        raise InputError(f"entry ({pos},{j}) has the wrong degree")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ring: PolyRing = None,
                  target_twists=None, source_twists=None) -> HomogeneousMatrix:
        """Build from a row-major table of polynomials (or strings).

        Missing twists are inferred: target twists default to 0 and source
        twists come from the first nonzero entry of each column.
        """
        if ring is None:
            ring = next(e.ring for row in rows for e in row if isinstance(e, Polynomial))
        table = [[ring.parse(e) if isinstance(e, str) else
                  (e if isinstance(e, Polynomial) else ring.constant(e)) for e in row]
                 for row in rows]
        nrows = len(table)
        ncols = len(table[0]) if table else 0
        tt = tuple(target_twists) if target_twists is not None else (0,) * nrows
        if source_twists is None:
            st = []
            for j in range(ncols):
                deg = None
                for i in range(nrows):
                    if table[i][j]:
                        deg = table[i][j].degree() + tt[i]
                        break
                st.append(0 if deg is None else deg)
            source_twists = st
        cols = []
        for j in range(ncols):
            col = {}
            for i in range(nrows):
                for e, c in table[i][j].coeffs.items():
                    col[(i, e)] = c
            cols.append(col)
        return cls(ring, GradedFreeModule(tt), GradedFreeModule(source_twists), cols)

    @property
    def shape(self) -> tuple:
        return self.target.rank, self.source.rank

    def entry(self, i: int, j: int) -> Polynomial:
        return Polynomial(self.ring, {e: c for (pos, e), c in self.columns[j].items() if pos == i})

    def rows(self) -> list:
        return [[self.entry(i, j) for j in range(self.source.rank)] for i in range(self.target.rank)]

    def has_unit_entry(self) -> bool:
        return any(not any(e) for col in self.columns for (_, e) in col)

    def is_zero(self) -> bool:
        return not any(self.columns)

    def transpose(self) -> HomogeneousMatrix:
        cols = [{} for _ in range(self.target.rank)]
        for j, col in enumerate(self.columns):
            for (pos, e), c in col.items():
                cols[pos][(j, e)] = c
        return HomogeneousMatrix(self.ring, self.source.dual(), self.target.dual(), cols)

    def apply(self, v: dict) -> dict:
        """Image of a source vector."""
        field = self.ring.field
        out = {}
        for (j, e), c in v.items():
            for (pos, e2), c2 in self.columns[j].items():
                t = (pos, tuple(a + b for a, b in zip(e, e2)))
                out[t] = field.normalize(out.get(t, 0) + c * c2)
        return {m: c for m, c in out.items() if c}

    def compose(self, other: HomogeneousMatrix) -> HomogeneousMatrix:
        """``self o other``."""
        if other.target != self.source:
            raise InputError("matrices are not composable")
        return HomogeneousMatrix(self.ring, self.target, other.source,
                                 [self.apply(c) for c in other.columns], check=False)

    def __str__(self):
        return "\n".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.rows())


# ------------------------------------------------------------ minimalization

def _echelon_insert(pivots: dict, v: dict, key, field) -> bool:
    """Reduce ``v`` against row-echelon ``pivots``; insert and return True if independent."""
    v = dict(v)
    norm = field.normalize
    while v:
        m = max(v, key=key)
        if m not in pivots:
            inv = field.inv(v[m])
            pivots[m] = {k: norm(c * inv) for k, c in v.items()}
            return True
        c = v[m]
        for k, pc in pivots[m].items():
            x = norm(v.get(k, 0) - c * pc)
            if x:
                v[k] = x
            else:
                v.pop(k, None)
    return False


def minimal_subset(candidates: Sequence[dict], twists: Sequence[int], field,
                   relations: Sequence[dict] = ()) -> list:
    """Indices of a minimal generating subset of ``candidates`` modulo ``relations``.

    Works degree by degree: a candidate of degree ``d`` is kept iff its normal
    form modulo ``relations + kept lower-degree candidates`` is linearly
    independent of those of the kept degree-``d`` candidates.
    """
    okey = top_key(twists)
    deg = _degree_fn(twists)
    indexed = [(vector_degree(v, twists), i) for i, v in enumerate(candidates) if v]
    kept = []
    for d in sorted({d for d, _ in indexed}):
        gens = list(relations) + [candidates[i] for i in kept]
        basis = groebner_kernel(gens, okey, field, rank_one=False, degree=deg)
        basis = [(lead(g, okey), g) for g in basis]
        pivots = {}
        for dd, i in indexed:
            if dd != d:
                continue
            r = reduce_vector(candidates[i], basis, okey, field)
            if r and _echelon_insert(pivots, r, okey, field):
                kept.append(i)
    return sorted(kept)


def minimal_generators(vectors: Sequence[dict], twists: Sequence[int], field,
                       relations: Sequence[dict] = ()) -> list:
    vectors = [v for v in vectors if v]
    return [vectors[i] for i in minimal_subset(vectors, twists, field, relations)]


def syzygies(columns: Sequence[dict], target_twists: Sequence[int],
             source_twists: Sequence[int], field) -> list:
    """Generators (not necessarily minimal) of the kernel of ``e_j -> columns[j]``."""
    r = len(target_twists)
    tw = tuple(target_twists) + tuple(source_twists)
    drl = DEGREVLEX.key

    def okey(m):
        return (int(m[0] < r), sum(m[1]) + tw[m[0]]) + drl(m[1]) + (-m[0],)

    zero = (0,) * _nvars_of(columns, source_twists)
    ext = []
    for j, col in enumerate(columns):
        v = dict(col)
        v[(r + j, zero)] = field.one()
        ext.append(v)
    G = groebner_kernel(ext, okey, field, rank_one=False, degree=_degree_fn(tw))
    out = []
    for g in G:
        if lead(g, okey)[0] >= r:
            if any(pos < r for pos, _ in g):
                raise InvariantViolation("elimination order leaked into the target")
            out.append({(pos - r, e): c for (pos, e), c in g.items()})
    return out


def _nvars_of(columns, source_twists):
    for col in columns:
        for _, e in col:
            return len(e)
    raise InputError("cannot infer the number of variables from an all-zero matrix")


def syzygy_matrix(M: HomogeneousMatrix) -> HomogeneousMatrix:
    """Matrix whose columns minimally generate ``ker M``."""
    field = M.ring.field
    if M.source.rank == 0:
        return HomogeneousMatrix(M.ring, M.source, GradedFreeModule(()), [])
    if any(M.columns):
        syz = syzygies(M.columns, M.target.twists, M.source.twists, field)
    else:
        zero = (0,) * M.ring.nvars
        syz = [{(j, zero): field.one()} for j in range(M.source.rank)]
    gens = minimal_generators(syz, M.source.twists, field)
    gens.sort(key=lambda v: (vector_degree(v, M.source.twists),
                             top_key(M.source.twists)(lead(v, top_key(M.source.twists)))))
    twists = tuple(vector_degree(v, M.source.twists) for v in gens)
    return HomogeneousMatrix(M.ring, M.source, GradedFreeModule(twists), gens)


# ---------------------------------------------------------------- resolutions

@dataclass
class GradedResolution:
    """``F_0 <- F_1 <- ... <- F_c`` with ``maps[i] : F_{i+1} -> F_i``."""

    ring: PolyRing
    modules: list
    maps: list

    @property
    def betti(self) -> list:
        return [F.rank for F in self.modules]

    @property
    def length(self) -> int:
        return len(self.maps)

    @property
    def minimal(self) -> bool:
        return not any(M.has_unit_entry() for M in self.maps)

    def graded_betti(self) -> dict:
        """``{(i, j): beta_ij}`` with ``j`` the twist."""
        out = {}
        for i, F in enumerate(self.modules):
            for t in F.twists:
                out[(i, t)] = out.get((i, t), 0) + 1
        return out

    def tail(self) -> GradedResolution:
        """Resolution of the image of the first map (drop ``F_0``)."""
        return GradedResolution(self.ring, self.modules[1:], self.maps[1:])

    def compositions_vanish(self) -> bool:
        return all(self.maps[i].compose(self.maps[i + 1]).is_zero()
                   for i in range(len(self.maps) - 1))

    def euler_numerator(self) -> list:
        num = []
        for i, F in enumerate(self.modules):
            part = []
            for t in F.twists:
                part = tpoly_add(part, tpoly_shift([1], t))
            num = tpoly_add(num, part) if i % 2 == 0 else tpoly_sub(num, part)
        return num

    def euler_series(self) -> HilbertSeries:
        return HilbertSeries(tuple(self.euler_numerator()), self.ring.nvars)

    def betti_table(self) -> str:
        """Macaulay2-style table: rows are ``twist - i``, columns homological degree."""
        gb = self.graded_betti()
        if not gb:
            return "(empty)"
        rows = sorted({t - i for i, t in gb})
        ncols = len(self.modules)
        width = max(len(str(v)) for v in list(gb.values()) + self.betti) + 1
        lines = ["total:" + "".join(str(b).rjust(width) for b in self.betti)]
        for r in rows:
            cells = [gb.get((i, r + i), 0) for i in range(ncols)]
            lines.append(f"{r:>5}:" + "".join((str(c) if c else ".").rjust(width) for c in cells))
        return "\n".join(lines)


def resolve_submodule(ring: PolyRing, generators: Sequence[dict], twists: Sequence[int],
                      relations: Sequence[dict] = (), max_rank: int = DEFAULT_MAX_RANK
                      ) -> GradedResolution:
    """Minimal resolution of ``F / <generators>`` where ``F = (+) S(-twists)``.

    ``maps[0]`` lists minimal generators of the submodule; it may contain unit
    entries when the submodule is not inside ``m F``.  ``tail()`` is always the
    minimal resolution of the submodule itself.
    """
    field = ring.field
    F0 = GradedFreeModule(twists)
    modules, maps = [F0], []
    current = minimal_generators(generators, F0.twists, field)
    target = F0
    while current:
        if len(current) > max_rank:
            raise ResourceError(f"free module rank {len(current)} exceeds the cap {max_rank}")
        key = top_key(target.twists)
        current.sort(key=lambda v: (vector_degree(v, target.twists), key(lead(v, key))))
        source = GradedFreeModule(tuple(vector_degree(v, target.twists) for v in current))
        maps.append(HomogeneousMatrix(ring, target, source, current))
        modules.append(source)
        if len(maps) > ring.nvars + 1:
            raise InvariantViolation("resolution longer than the Hilbert syzygy bound")
        syz = syzygies(current, target.twists, source.twists, field)
        current = minimal_generators(syz, source.twists, field)
        target = source
    return GradedResolution(ring, modules, maps)


def _as_vectors(gens) -> list:
    return [{(0, e): c for e, c in g.coeffs.items()} for g in gens if g]


def _dr(ring: PolyRing) -> PolyRing:
    return ring if ring.order == DEGREVLEX else ring.with_order(DEGREVLEX)


def free_resolution(obj, max_rank: int = DEFAULT_MAX_RANK) -> GradedResolution:
    """Minimal graded resolution.

    Accepts a :class:`QuotientPresentation` ``S/I`` (resolved as a cyclic
    module), an :class:`Ideal` (resolution of ``S/I``), or a
    :class:`HomogeneousMatrix` (resolution of its cokernel).
    """
    if isinstance(obj, QuotientPresentation):
        cache = obj.__dict__.setdefault("_resolutions", {})
        if max_rank not in cache:
            cache[max_rank] = free_resolution(obj.ideal, max_rank)
        return cache[max_rank]
    if isinstance(obj, Ideal):
        if not obj.is_homogeneous():
            raise InputError("free_resolution: ideal must be homogeneous")
        ring = _dr(obj.ring)
        gens = [g.in_ring(ring) for g in obj.generators]
        return resolve_submodule(ring, _as_vectors(gens), (0,), max_rank=max_rank)
    if isinstance(obj, HomogeneousMatrix):
        return resolve_submodule(obj.ring, obj.columns, obj.target.twists, max_rank=max_rank)
    raise InputError(f"cannot resolve {type(obj).__name__}")


def depth_and_pd(Q: QuotientPresentation, max_rank: int = DEFAULT_MAX_RANK) -> tuple:
    """``(pd, depth)`` of ``S/I`` over the ambient ring (Auslander-Buchsbaum)."""
    if Q.is_zero_ring():
        raise InputError("depth of the zero module is undefined")
    res = free_resolution(Q, max_rank)
    pd = res.length
    return pd, Q.ring.nvars - pd


def is_cohen_macaulay(Q: QuotientPresentation, max_rank: int = DEFAULT_MAX_RANK) -> bool:
    _, depth = depth_and_pd(Q, max_rank)
    return depth == dimension(Q)


def cm_type(Q: QuotientPresentation, max_rank: int = DEFAULT_MAX_RANK) -> int:
    """Cohen-Macaulay type: last total Betti number of the minimal resolution."""
    if Q.is_zero_ring():
        raise PreconditionError("cm_type of the zero ring is undefined")
    res = free_resolution(Q, max_rank)
    if Q.ring.nvars - res.length != dimension(Q):
        raise PreconditionError("cm_type is only defined for Cohen-Macaulay quotients")
    return res.betti[-1]


def minimal_generator_count(generators: Sequence[Polynomial], modulo=None) -> int:
    """Minimal number of generators of the ideal they generate in ``S/modulo``.

    Generators must be homogeneous.  ``modulo`` is an :class:`Ideal`, a
    :class:`QuotientPresentation` or ``None`` for the polynomial ring itself.
    """
    gens = [g for g in generators if g]
    if not gens:
        return 0
    if any(not g.is_homogeneous() for g in gens):
        raise InputError("minimal_generator_count: generators must be homogeneous")
    ring = _dr(gens[0].ring)
    rel = []
    if modulo is not None:
        ideal = modulo.ideal if isinstance(modulo, QuotientPresentation) else modulo
        rel = _as_vectors(g.in_ring(ring) for g in ideal.generators)
    return len(minimal_subset(_as_vectors(g.in_ring(ring) for g in gens), (0,), ring.field, rel))


def cokernel_generator_count(M: HomogeneousMatrix) -> int:
    """``mu(coker M)`` by graded Nakayama on the images of the target basis."""
    zero = (0,) * M.ring.nvars
    field = M.ring.field
    units = [{(i, zero): field.one()} for i in range(M.target.rank)]
    return len(minimal_subset(units, M.target.twists, field, [c for c in M.columns if c]))


def transpose_ext1_generators(f: HomogeneousMatrix) -> tuple:
    """For a minimal presentation ``f : S^p -> S^q`` of ``W`` return ``(p, f^T)``.

    ``coker(f^T) = Ext^1(W, S)`` is minimally generated by ``p`` elements; the
    count is recomputed from the transpose and checked.
    """
    if f.has_unit_entry():
        raise PreconditionError("presentation matrix has a unit entry; minimalize it first")
    ft = f.transpose()
    p = f.source.rank
    mu = cokernel_generator_count(ft)
    if mu != p:
        raise InvariantViolation(f"coker of the transpose needs {mu} generators, expected {p}")
    return p, ft


def submodule_quotient_series(ring: PolyRing, generators: Sequence[dict],
                              twists: Sequence[int]) -> HilbertSeries:
    """Hilbert series of ``F / <generators>`` from the leading terms of a Groebner basis."""
    okey = top_key(twists)
    G = groebner_kernel([g for g in generators if g], okey, ring.field, rank_one=False,
                        degree=_degree_fn(twists))
    leading = [[] for _ in twists]
    for g in G:
        pos, e = lead(g, okey)
        leading[pos].append(e)
    return module_hilbert_series(leading, twists, ring.nvars)


def euler_characteristic_holds(res: GradedResolution, series: HilbertSeries = None) -> bool:
    """Alternating sum of the free modules equals the series of the resolved module."""
    if series is None:
        F0 = res.modules[0]
        gens = res.maps[0].columns if res.maps else []
        series = submodule_quotient_series(res.ring, gens, F0.twists)
    return res.euler_series().same_function(series)


def free_series(F: GradedFreeModule, nvars: int) -> HilbertSeries:
    return free_module_series(F.twists, nvars)
