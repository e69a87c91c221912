"""Submodules of free modules over a quotient ring, and finitely presented modules.

Module Groebner bases use a position-over-term order induced from the ring
order, with earlier coordinates dominating.  Syzygies and membership
certificates come from one augmented-cover computation: generators are tagged
with unit vectors in extra trailing coordinates, and the position-dominant
order eliminates the original block.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from heapq import heappush, heappop
from typing import Iterable, Optional, Sequence

from .rings import (
    Polynomial,
    QuotientRing,
    buchberger,
    mon_div,
    mon_divides,
    mon_lcm,
    mon_mul,
)

Vector = tuple  # tuple[Polynomial, ...] over the base polynomial ring


class FreeElem:
    """Element of R^t; coordinates stored in normal form mod the defining ideal."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: QuotientRing, coords: Sequence[Polynomial]):
        self.ring = ring
        self.coords = tuple(ring.nf(c) for c in coords)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, FreeElem)
            and self.ring == other.ring
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.ring, self.coords))

    def __add__(self, other: "FreeElem") -> "FreeElem":
        if self.ring != other.ring or self.rank != other.rank:
            raise ValueError("free-module elements are incompatible")
        return FreeElem(self.ring, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "FreeElem") -> "FreeElem":
        return self + (-other)

    def __neg__(self) -> "FreeElem":
        return FreeElem(self.ring, tuple(-a for a in self.coords))

    def scale(self, r: Polynomial) -> "FreeElem":
        return FreeElem(self.ring, tuple(r * a for a in self.coords))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def __repr__(self):
        return f"FreeElem{self}"


def basis_vector(ring: QuotientRing, rank: int, i: int) -> FreeElem:
    coords = [ring.zero] * rank
    coords[i] = ring.one
    return FreeElem(ring, coords)


def free_elem(ring: QuotientRing, polys: Sequence[Polynomial]) -> FreeElem:
    return FreeElem(ring, polys)


# --- vector-level Groebner machinery (over the base polynomial ring) -----


def _vec_is_zero(v: Vector) -> bool:
    return all(c.is_zero() for c in v)


def _vec_sub_scaled(v: Vector, w: Vector, m, c: int) -> Vector:
    """v - c*x^m*w, coordinatewise."""
    return tuple(a - b.mul_term(m, c) for a, b in zip(v, w))


def _vec_lead(v: Vector):
    """(position, monomial, coefficient) of the POT-leading term, or None."""
    for j, poly in enumerate(v):
        if poly.terms:
            return j, poly.leading_monomial(), poly.leading_coefficient()
    return None


def _vec_monic(v: Vector, ring) -> Vector:
    lead = _vec_lead(v)
    if lead is None:
        return v
    inv = ring.inv(lead[2])
    if inv == 1:
        return v
    return tuple(c * inv for c in v)


def _vec_normal_form(v: Vector, reducers_by_pos: dict, base) -> Vector:
    """Full normal form of a vector against reducers grouped by lead position."""
    rank = len(v)
    p = base.p
    hkey = base.order.heap_key
    work: dict = {}
    heap: list = []
    for j, poly in enumerate(v):
        for m, c in poly.terms:
            work[(j, m)] = c
            heap.append(((j, hkey(m)), (j, m)))
    heap.sort()
    out: dict = {}
    while heap:
        _, key = heappop(heap)
        c = work.pop(key, 0)
        if c == 0:
            continue
        j, m = key
        for lm, lcinv, gvec in reducers_by_pos.get(j, ()):
            if mon_divides(lm, m):
                q = mon_div(m, lm)
                mult = (c * lcinv) % p
                for gj, gpoly in enumerate(gvec):
                    for gm, gc in gpoly.terms:
                        if gj == j and gm == lm:
                            continue
                        m2 = mon_mul(q, gm)
                        k2 = (gj, m2)
                        val = (work.get(k2, 0) - mult * gc) % p
                        if val:
                            if k2 not in work:
                                heappush(heap, ((gj, hkey(m2)), k2))
                            work[k2] = val
                        else:
                            work.pop(k2, None)
                break
        else:
            out[key] = c
    coords = [dict() for _ in range(rank)]
    for (j, m), c in out.items():
        coords[j][m] = c
    return tuple(base.from_dict(d) for d in coords)


def _group_reducers(vectors: Sequence[Vector], base) -> dict:
    by_pos: dict = {}
    for v in vectors:
        lead = _vec_lead(v)
        if lead is None:
            continue
        j, lm, lc = lead
        by_pos.setdefault(j, []).append((lm, base.inv(lc), v))
    return by_pos


def _module_buchberger(vectors: Sequence[Vector], base) -> list[Vector]:
    """Reduced module Groebner basis under the position-over-term order.

    The coprimality shortcut is not valid for vectors, so only the chain
    criterion prunes pairs; S-pairs exist only for equal lead positions.
    """
    G = [_vec_monic(v, base) for v in vectors if not _vec_is_zero(v)]
    okey = base.order.key
    leads = [_vec_lead(v) for v in G]
    pairs = {
        (i, j)
        for i in range(len(G))
        for j in range(i + 1, len(G))
        if leads[i][0] == leads[j][0]
    }
    done: set = set()

    def pair_key(ij):
        i, j = ij
        return (leads[i][0], okey(mon_lcm(leads[i][1], leads[j][1])), i, j)

    while pairs:
        i, j = min(pairs, key=pair_key)
        pairs.discard((i, j))
        done.add((i, j))
        pos, lm_i = leads[i][0], leads[i][1]
        lm_j = leads[j][1]
        lcm = mon_lcm(lm_i, lm_j)
        if any(
            k != i
            and k != j
            and leads[k][0] == pos
            and mon_divides(leads[k][1], lcm)
            and (min(i, k), max(i, k)) in done
            and (min(j, k), max(j, k)) in done
            for k in range(len(G))
        ):
            continue
        s = _vec_sub_scaled(
            tuple(c.mul_term(mon_div(lcm, lm_i), 1) for c in G[i]),
            G[j],
            mon_div(lcm, lm_j),
            1,
        )
        r = _vec_normal_form(s, _group_reducers(G, base), base)
        if not _vec_is_zero(r):
            G.append(_vec_monic(r, base))
            leads.append(_vec_lead(G[-1]))
            n = len(G) - 1
            pairs.update((k, n) for k in range(n) if leads[k][0] == leads[n][0])
    return _module_interreduce(G, base)


def _vec_sort_key(v: Vector, base):
    lead = _vec_lead(v)
    return (lead[0], base.order.key(lead[1]))


def _module_interreduce(G: list[Vector], base) -> list[Vector]:
    minimal: list[Vector] = []
    for v in sorted((g for g in G if not _vec_is_zero(g)), key=lambda g: _vec_sort_key(g, base)):
        j, lm, _ = _vec_lead(v)
        if not any(
            lead[0] == j and mon_divides(lead[1], lm)
            for lead in (_vec_lead(w) for w in minimal)
        ):
            minimal.append(v)
    reduced: list[Vector] = []
    for idx, v in enumerate(minimal):
        others = reduced + minimal[idx + 1 :]
        r = _vec_normal_form(v, _group_reducers(others, base), base)
        reduced.append(_vec_monic(r, base))
    reduced.sort(key=lambda g: _vec_sort_key(g, base))
    return reduced


def _ideal_padding(ring: QuotientRing, rank: int) -> list[Vector]:
    pads = []
    zero = ring.zero
    for f in ring.groebner:
        for j in range(rank):
            v = [zero] * rank
            v[j] = f
            pads.append(tuple(v))
    return pads


class FreeSubmodule:
    """Submodule of R^t given by generators, with a cached canonical basis.

    The cached basis lives over the base polynomial ring and includes the
    defining-ideal multiples of each coordinate, so membership is membership
    over the quotient ring.
    """

    __slots__ = ("ring", "rank", "gens", "_gb", "_reducers")

    def __init__(self, ring: QuotientRing, rank: int, gens: Iterable[FreeElem]):
        self.ring = ring
        self.rank = rank
        cleaned = []
        for g in gens:
            if not isinstance(g, FreeElem):
                g = FreeElem(ring, g)
            if g.ring != ring or g.rank != rank:
                raise ValueError("generator does not live in the ambient free module")
            if not g.is_zero():
                cleaned.append(g)
        self.gens = tuple(cleaned)
        vectors = [g.coords for g in self.gens] + _ideal_padding(ring, rank)
        self._gb = tuple(_module_buchberger(vectors, ring.base))
        self._reducers = _group_reducers(self._gb, ring.base)

    def __eq__(self, other):
        return (
            isinstance(other, FreeSubmodule)
            and self.ring == other.ring
            and self.rank == other.rank
            and self._gb == other._gb
        )

    def __hash__(self):
        return hash((self.ring, self.rank, self._gb))

    def __repr__(self):
        return f"<submodule of R^{self.rank} with {len(self.gens)} generators>"

    def is_zero(self) -> bool:
        return not self.gens

    def reduce(self, u: FreeElem) -> FreeElem:
        if u.ring != self.ring or u.rank != self.rank:
            raise ValueError("element does not live in the ambient free module")
        nf = _vec_normal_form(u.coords, self._reducers, self.ring.base)
        return FreeElem(self.ring, nf)

    def contains(self, u: FreeElem) -> bool:
        return self.reduce(u).is_zero()

    def plus_elems(self, elems: Iterable[FreeElem]) -> "FreeSubmodule":
        return FreeSubmodule(self.ring, self.rank, list(self.gens) + list(elems))

    def plus(self, other: "FreeSubmodule") -> "FreeSubmodule":
        if other.ring != self.ring or other.rank != self.rank:
            raise ValueError("submodules of different ambient modules")
        return self.plus_elems(other.gens)

    def contains_submodule(self, other: "FreeSubmodule") -> bool:
        return all(self.contains(g) for g in other.gens)

    def coefficients_of(self, u: FreeElem) -> Optional[tuple[Polynomial, ...]]:
        """Coefficients expressing u over the generators (mod the ideal), or None."""
        if u.ring != self.ring or u.rank != self.rank:
            raise ValueError("element does not live in the ambient free module")
        coeff_rows = _lift_through(list(self.gens), [u], self.ring)
        return coeff_rows[0]


def module_member(u: FreeElem, N: FreeSubmodule) -> bool:
    """Is u in the span of N's generators over the quotient ring?"""
    return N.contains(u)


def zero_submodule(ring: QuotientRing, rank: int) -> FreeSubmodule:
    return FreeSubmodule(ring, rank, ())


# --- syzygies and lifts via the augmented cover --------------------------


def _augment(vectors: list[Vector], rank: int, n_tracked: int, base) -> list[Vector]:
    zero = base.zero
    out = []
    for i, v in enumerate(vectors):
        tail = [zero] * n_tracked
        if i < n_tracked:
            tail[i] = base.constant(1)
        out.append(tuple(v) + tuple(tail))
    return out


def syzygies(elems: Sequence[FreeElem]) -> list[FreeElem]:
    """Generators of the syzygy module of elems over the quotient ring.

    Coefficient vectors (a_1..a_n) with sum a_i * v_i = 0 in R^t; relations
    coming from the defining ideal are included.
    """
    if not elems:
        return []
    ring = elems[0].ring
    rank = elems[0].rank
    for e in elems:
        if e.ring != ring or e.rank != rank:
            raise ValueError("elements from different free modules")
    base = ring.base
    n = len(elems)
    vectors = [e.coords for e in elems] + _ideal_padding(ring, rank)
    aug = _augment(vectors, rank, n, base)
    gb = _module_buchberger(aug, base)
    out = []
    for v in gb:
        lead = _vec_lead(v)
        if lead is not None and lead[0] >= rank:
            coeffs = FreeElem(ring, v[rank : rank + n])
            if not coeffs.is_zero():
                out.append(coeffs)
    return out


def _lift_through(
    gens: list[FreeElem], targets: list[FreeElem], ring: QuotientRing
) -> list[Optional[tuple[Polynomial, ...]]]:
    """For each target u, coefficients c with u = sum c_i g_i over R, or None."""
    base = ring.base
    if not gens:
        return [tuple() if t.is_zero() else None for t in targets]
    rank = gens[0].rank
    n = len(gens)
    vectors = [g.coords for g in gens] + _ideal_padding(ring, rank)
    aug = _augment(vectors, rank, n, base)
    gb = _module_buchberger(aug, base)
    reducers = _group_reducers(gb, base)
    zero = base.zero
    results = []
    for u in targets:
        padded = tuple(u.coords) + (zero,) * n
        nf = _vec_normal_form(padded, reducers, base)
        if any(c.terms for c in nf[:rank]):
            results.append(None)
        else:
            results.append(tuple((-c for c in nf[rank:])))
    return [
        None if r is None else tuple(ring.nf(c) for c in r) for r in results
    ]


def kernel_of_matrix(B: "PolyMatrix") -> FreeSubmodule:
    """{v in R^a : Bv = 0} for B with b rows and a columns."""
    ring = B.ring
    cols = [FreeElem(ring, [B.rows[i][j] for i in range(B.nrows)]) for j in range(B.ncols)]
    if not cols:
        return zero_submodule(ring, 0)
    return FreeSubmodule(ring, B.ncols, syzygies(cols))


def colon_into(N: FreeSubmodule, a: FreeElem) -> list[Polynomial]:
    """Generators of {r in R : r*a in N}; canonical (a reduced Groebner basis)."""
    if a.ring != N.ring or a.rank != N.rank:
        raise ValueError("element does not live in the ambient free module")
    syz = syzygies([a] + list(N.gens))
    firsts = [s.coords[0] for s in syz if s.coords[0].terms]
    gb = buchberger(firsts)
    return [N.ring.nf(g) for g in gb if N.ring.nf(g).terms]


# --- matrices and finitely presented modules ------------------------------


class PolyMatrix:
    """Immutable matrix over a quotient ring, stored by rows, entries normal-formed."""

    __slots__ = ("ring", "rows", "nrows", "ncols")

    def __init__(self, ring: QuotientRing, rows: Sequence[Sequence[Polynomial]], ncols: Optional[int] = None):
        self.ring = ring
        norm = tuple(tuple(ring.nf(e) for e in row) for row in rows)
        if norm:
            widths = {len(r) for r in norm}
            if len(widths) != 1:
                raise ValueError("ragged matrix")
            self.ncols = widths.pop()
        else:
            self.ncols = 0 if ncols is None else ncols
        self.nrows = len(norm)
        self.rows = norm

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.ring == other.ring
            and self.rows == other.rows
            and self.ncols == other.ncols
        )

    def __hash__(self):
        return hash((self.ring, self.rows, self.ncols))

    def __repr__(self):
        return f"<{self.nrows}x{self.ncols} matrix over {self.ring!r}>"

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(
            self.ring,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            ncols=self.nrows,
        )

    def column(self, j: int) -> FreeElem:
        return FreeElem(self.ring, [self.rows[i][j] for i in range(self.nrows)])

    def columns(self) -> list[FreeElem]:
        return [self.column(j) for j in range(self.ncols)]

    def apply(self, u: FreeElem) -> FreeElem:
        if u.rank != self.ncols:
            raise ValueError("matrix/vector shape mismatch")
        coords = []
        for i in range(self.nrows):
            acc = self.ring.zero
            for j in range(self.ncols):
                acc = acc + self.rows[i][j] * u.coords[j]
            coords.append(acc)
        return FreeElem(self.ring, coords)

    def mul(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.nrows:
            raise ValueError("matrix shape mismatch")
        rows = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = self.ring.zero
                for k in range(self.ncols):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            rows.append(row)
        return PolyMatrix(self.ring, rows, ncols=other.ncols)

    @staticmethod
    def identity(ring: QuotientRing, n: int) -> "PolyMatrix":
        return PolyMatrix(
            ring,
            [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)],
            ncols=n,
        )

    @staticmethod
    def from_columns(ring: QuotientRing, cols: Sequence[FreeElem], nrows: int) -> "PolyMatrix":
        return PolyMatrix(
            ring,
            [[c.coords[i] for c in cols] for i in range(nrows)],
            ncols=len(cols),
        )


class FPModule:
    """Finitely presented module: cokernel of a t x s presentation matrix.

    Elements are FreeElem of length t; two representatives are equal when
    their difference lies in the column span of the presentation (plus the
    defining-ideal relations, which the span computation includes).
    """

    __slots__ = ("ring", "rank", "presentation", "relations")

    def __init__(self, ring: QuotientRing, presentation: PolyMatrix):
        if presentation.ring != ring:
            raise ValueError("presentation over the wrong ring")
        self.ring = ring
        self.rank = presentation.nrows
        self.presentation = presentation
        self.relations = FreeSubmodule(ring, self.rank, presentation.columns())

    @staticmethod
    def free(ring: QuotientRing, rank: int) -> "FPModule":
        return FPModule(ring, PolyMatrix(ring, [[] for _ in range(rank)], ncols=0))

    def __eq__(self, other):
        return (
            isinstance(other, FPModule)
            and self.ring == other.ring
            and self.presentation == other.presentation
        )

    def __hash__(self):
        return hash((self.ring, self.presentation))

    def __repr__(self):
        return f"<coker of {self.presentation.nrows}x{self.presentation.ncols} matrix>"

    def element(self, polys: Sequence[Polynomial]) -> FreeElem:
        return FreeElem(self.ring, polys)

    def is_zero_element(self, u: FreeElem) -> bool:
        return self.relations.contains(u)

    def elements_equal(self, u: FreeElem, v: FreeElem) -> bool:
        return self.relations.contains(u - v)


class ModuleMap:
    """Map between finitely presented modules, given on free covers.

    The matrix has target.rank rows and source.rank columns; construction
    verifies that every presentation column of the source lands in the
    target's relation submodule.
    """

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FPModule, target: FPModule, matrix: PolyMatrix):
        if source.ring != target.ring or matrix.ring != source.ring:
            raise ValueError("map pieces over different rings")
        if matrix.nrows != target.rank or matrix.ncols != source.rank:
            raise ValueError(
                f"matrix must be {target.rank}x{source.rank}, got {matrix.nrows}x{matrix.ncols}"
            )
        for col in source.presentation.columns():
            if not target.relations.contains(matrix.apply(col)):
                raise ValueError(
                    f"not a well-defined map: source relation {col} maps outside target relations"
                )
        self.source = source
        self.target = target
        self.matrix = matrix

    def apply(self, u: FreeElem) -> FreeElem:
        return self.matrix.apply(u)

    def compose(self, inner: "ModuleMap") -> "ModuleMap":
        """self after inner (inner.target must be self.source)."""
        if inner.target != self.source:
            raise ValueError("maps do not compose")
        return ModuleMap(inner.source, self.target, self.matrix.mul(inner.matrix))


@dataclass(frozen=True)
class DirectSum:
    module: FPModule
    include_left: ModuleMap
    include_right: ModuleMap
    project_left: ModuleMap
    project_right: ModuleMap


def direct_sum(M1: FPModule, M2: FPModule) -> DirectSum:
    """Block-diagonal presentation with certified inclusions and projections."""
    if M1.ring != M2.ring:
        raise ValueError("summands over different rings")
    ring = M1.ring
    t1, t2 = M1.rank, M2.rank
    s1, s2 = M1.presentation.ncols, M2.presentation.ncols
    zero = ring.zero
    rows = []
    for i in range(t1):
        rows.append(list(M1.presentation.rows[i]) + [zero] * s2)
    for i in range(t2):
        rows.append([zero] * s1 + list(M2.presentation.rows[i]))
    M = FPModule(ring, PolyMatrix(ring, rows, ncols=s1 + s2))
    inc1 = ModuleMap(
        M1,
        M,
        PolyMatrix(
            ring,
            [[ring.one if i == j else zero for j in range(t1)] for i in range(t1)]
            + [[zero] * t1 for _ in range(t2)],
            ncols=t1,
        ),
    )
    inc2 = ModuleMap(
        M2,
        M,
        PolyMatrix(
            ring,
            [[zero] * t2 for _ in range(t1)]
            + [[ring.one if i == j else zero for j in range(t2)] for i in range(t2)],
            ncols=t2,
        ),
    )
    pr1 = ModuleMap(
        M,
        M1,
        PolyMatrix(
            ring,
            [
                [ring.one if i == j else zero for j in range(t1)] + [zero] * t2
                for i in range(t1)
            ],
            ncols=t1 + t2,
        ),
    )
    pr2 = ModuleMap(
        M,
        M2,
        PolyMatrix(
            ring,
            [
                [zero] * t1 + [ring.one if i == j else zero for j in range(t2)]
                for i in range(t2)
            ],
            ncols=t1 + t2,
        ),
    )
    return DirectSum(M, inc1, inc2, pr1, pr2)


def hom_into_ring(M: FPModule) -> FreeSubmodule:
    """Hom(M, R) as the kernel of the transposed presentation, inside R^t."""
    A = M.presentation
    if A.ncols == 0:
        return FreeSubmodule(
            M.ring, M.rank, [basis_vector(M.ring, M.rank, i) for i in range(M.rank)]
        )
    return kernel_of_matrix(A.transpose())


def _det(entries: list[list[Polynomial]], ring: QuotientRing) -> Polynomial:
    n = len(entries)
    if n == 0:
        return ring.one
    if n == 1:
        return entries[0][0]
    acc = ring.zero
    sign = 1
    for j in range(n):
        pivot = entries[0][j]
        if pivot.terms:
            minor = [
                [entries[i][k] for k in range(n) if k != j] for i in range(1, n)
            ]
            term = pivot * _det(minor, ring)
            acc = acc + (term if sign > 0 else -term)
        sign = -sign
    return ring.nf(acc)


def rank_over_fractions(A: PolyMatrix) -> int:
    """Rank over the fraction field: largest size of a minor with nonzero
    normal form.  Requires the ring's domain assertion."""
    ring = A.ring
    if not ring.is_domain:
        raise ValueError("rank requires a domain")
    top = min(A.nrows, A.ncols)
    for size in range(top, 0, -1):
        for rows in itertools.combinations(range(A.nrows), size):
            for cols in itertools.combinations(range(A.ncols), size):
                entries = [[A.rows[i][j] for j in cols] for i in rows]
                if _det(entries, ring).terms:
                    return size
    return 0


@dataclass(frozen=True)
class PartialSOP:
    """Parameters x_1..x_k together with their dimension-drop certificate."""

    elements: tuple[Polynomial, ...]
    certificate: "object"


def certify_sop(ring: QuotientRing, xs: Sequence[Polynomial]) -> PartialSOP:
    from .rings import is_partial_sop

    cert = is_partial_sop(list(xs), ring)
    if not cert.ok:
        raise ValueError(f"not a partial system of parameters: {cert.detail}")
    return PartialSOP(tuple(ring.nf(x) for x in xs), cert)
