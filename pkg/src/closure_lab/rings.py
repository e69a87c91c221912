"""Exact multivariate polynomial arithmetic over F_p and Groebner machinery.

Coefficients are plain integers reduced into [0, p); monomials are exponent
tuples. Polynomials are immutable with terms kept sorted strictly descending
in the ring's monomial order, so structural equality is mathematical equality
and every computed object is canonical.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from heapq import heappush, heappop
from typing import Iterable, Sequence

Monomial = tuple  # exponent tuple, one entry per ring variable


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def mon_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mon_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mon_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mon_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mon_degree(a: Monomial) -> int:
    return sum(a)


class MonomialOrder:
    """Total multiplicative well-order on monomials.

    ``key`` sorts ascending (largest monomial has the largest key) and
    ``heap_key`` is its negation, suitable for a min-heap popped largest-first.
    """

    name: str

    def key(self, m: Monomial):
        raise NotImplementedError

    def heap_key(self, m: Monomial):
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.name


class _Grevlex(MonomialOrder):
    name = "grevlex"

    def key(self, m):
        return (sum(m), tuple(-e for e in reversed(m)))

    def heap_key(self, m):
        return (-sum(m), tuple(reversed(m)))


class _Lex(MonomialOrder):
    name = "lex"

    def key(self, m):
        return m

    def heap_key(self, m):
        return tuple(-e for e in m)


GREVLEX = _Grevlex()
LEX = _Lex()

_ORDERS = {"grevlex": GREVLEX, "lex": LEX}


def order_by_name(name: str) -> MonomialOrder:
    try:
        return _ORDERS[name]
    except KeyError:
        raise ValueError(f"unknown monomial order {name!r}") from None


class PolyRing:
    """F_p[x_1, ..., x_n] with a fixed monomial order.

    The first declared variable is the largest in both supported orders.
    """

    __slots__ = ("p", "names", "order", "_gens")

    def __init__(self, p: int, names: Sequence[str], order: MonomialOrder = GREVLEX):
        if not (2 <= p < 2 ** 16) or not _is_prime(p):
            raise ValueError(f"characteristic must be a prime in [2, 2^16); got {p}")
        names = tuple(names)
        if len(set(names)) != len(names) or not names:
            raise ValueError("variable names must be nonempty and distinct")
        self.p = p
        self.names = names
        self.order = order
        self._gens = None

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.p == other.p
            and self.names == other.names
            and self.order.name == other.order.name
        )

    def __hash__(self):
        return hash((self.p, self.names, self.order.name))

    def __repr__(self):
        return f"F{self.p}[{', '.join(self.names)}; {self.order.name}]"

    # --- element constructors -------------------------------------------

    def from_dict(self, coeffs: dict) -> "Polynomial":
        p = self.p
        terms = []
        for m, c in coeffs.items():
            c %= p
            if c:
                terms.append((tuple(m), c))
        terms.sort(key=lambda t: self.order.key(t[0]), reverse=True)
        return Polynomial(self, tuple(terms))

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    @property
    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        if c == 0:
            return self.zero
        return Polynomial(self, (((0,) * self.nvars, c),))

    def monomial(self, exps: Sequence[int], c: int = 1) -> "Polynomial":
        return self.from_dict({tuple(exps): c})

    def gen(self, i: int) -> "Polynomial":
        exps = [0] * self.nvars
        exps[i] = 1
        return self.monomial(exps)

    def gens(self) -> tuple["Polynomial", ...]:
        if self._gens is None:
            self._gens = tuple(self.gen(i) for i in range(self.nvars))
        return self._gens

    def inv(self, c: int) -> int:
        c %= self.p
        if c == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(c, self.p - 2, self.p)

    def poly(self, text: str) -> "Polynomial":
        from .session import parse_poly_text

        return parse_poly_text(self, text)


class Polynomial:
    """Immutable element of a PolyRing; ``terms`` sorted descending, no zeros."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: tuple):
        self.ring = ring
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def leading_monomial(self) -> Monomial:
        return self.terms[0][0]

    def leading_coefficient(self) -> int:
        return self.terms[0][1]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(mon_degree(m) for m, _ in self.terms)

    def constant_term(self) -> int:
        zero = (0,) * self.ring.nvars
        for m, c in self.terms:
            if m == zero:
                return c
        return 0

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        inv = self.ring.inv(self.leading_coefficient())
        if inv == 1:
            return self
        p = self.ring.p
        return Polynomial(self.ring, tuple((m, (c * inv) % p) for m, c in self.terms))

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, self.terms))

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise ValueError("polynomials from different rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        self._check(other)
        d = dict(self.terms)
        p = self.ring.p
        for m, c in other.terms:
            d[m] = (d.get(m, 0) + c) % p
        return self.ring.from_dict(d)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        return self + (-other)

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, tuple((m, p - c) for m, c in self.terms))

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.ring.p
            if c == 0:
                return self.ring.zero
            p = self.ring.p
            return Polynomial(self.ring, tuple((m, (a * c) % p) for m, a in self.terms))
        self._check(other)
        d: dict = {}
        p = self.ring.p
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = mon_mul(m1, m2)
                d[m] = (d.get(m, 0) + c1 * c2) % p
        return self.ring.from_dict(d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def mul_term(self, m: Monomial, c: int) -> "Polynomial":
        """Multiply by c*x^m; preserves term order, so no re-sort needed."""
        c %= self.ring.p
        if c == 0:
            return self.ring.zero
        p = self.ring.p
        return Polynomial(
            self.ring, tuple((mon_mul(t, m), (a * c) % p) for t, a in self.terms)
        )

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        parts = []
        for m, c in self.terms:
            factors = []
            if c != 1 or not any(m):
                factors.append(str(c))
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self} over {self.ring!r}>"


# --- normal forms and Groebner bases ------------------------------------


def normal_form(f: Polynomial, basis: Iterable[Polynomial]) -> Polynomial:
    """Fully reduce f modulo basis; deterministic for fixed inputs.

    Every monomial of the result is divisible by no leading monomial of the
    basis, and f minus the result lies in the ideal generated by the basis.
    """
    ring = f.ring
    reducers = [
        (g.leading_monomial(), ring.inv(g.leading_coefficient()), g.terms)
        for g in basis
        if g.terms
    ]
    if not reducers or not f.terms:
        return f
    p = ring.p
    heap_key = ring.order.heap_key
    work = dict(f.terms)
    out: dict = {}
    heap = [(heap_key(m), m) for m in work]
    heap.sort()
    while heap:
        _, m = heappop(heap)
        c = work.pop(m, 0)
        if c == 0:
            continue
        for lm, lcinv, gterms in reducers:
            if mon_divides(lm, m):
                q = mon_div(m, lm)
                mult = (c * lcinv) % p
                for gm, gc in gterms[1:]:
                    m2 = mon_mul(q, gm)
                    v = (work.get(m2, 0) - mult * gc) % p
                    if v:
                        if m2 not in work:
                            heappush(heap, (heap_key(m2), m2))
                        work[m2] = v
                    else:
                        work.pop(m2, None)
                break
        else:
            out[m] = c
    return ring.from_dict(out)


def spolynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    lm_f, lm_g = f.leading_monomial(), g.leading_monomial()
    lcm = mon_lcm(lm_f, lm_g)
    ring = f.ring
    a = f.mul_term(mon_div(lcm, lm_f), ring.inv(f.leading_coefficient()))
    b = g.mul_term(mon_div(lcm, lm_g), ring.inv(g.leading_coefficient()))
    return a - b


def buchberger(gens: Sequence[Polynomial]) -> list[Polynomial]:
    """Reduced Groebner basis, canonical: independent of generator order.

    Normal pair-selection strategy with the coprimality and chain criteria,
    full inter-reduction and monic normalization at the end.
    """
    G = [g.monic() for g in gens if g.terms]
    if not G:
        return []
    ring = G[0].ring
    okey = ring.order.key
    pairs = {(i, j) for i in range(len(G)) for j in range(i + 1, len(G))}
    done: set = set()

    def lcm_of(i, j):
        return mon_lcm(G[i].leading_monomial(), G[j].leading_monomial())

    while pairs:
        i, j = min(pairs, key=lambda ij: (okey(lcm_of(*ij)), ij))
        pairs.discard((i, j))
        done.add((i, j))
        lm_i, lm_j = G[i].leading_monomial(), G[j].leading_monomial()
        lcm = mon_lcm(lm_i, lm_j)
        if lcm == mon_mul(lm_i, lm_j):  # coprime leading monomials
            continue
        if any(
            k != i
            and k != j
            and mon_divides(G[k].leading_monomial(), lcm)
            and (min(i, k), max(i, k)) in done
            and (min(j, k), max(j, k)) in done
            for k in range(len(G))
        ):
            continue
        r = normal_form(spolynomial(G[i], G[j]), G)
        if r.terms:
            G.append(r.monic())
            n = len(G) - 1
            pairs.update((k, n) for k in range(n))
    return _interreduce(G)


def _interreduce(G: list[Polynomial]) -> list[Polynomial]:
    if not G:
        return []
    ring = G[0].ring
    okey = ring.order.key
    minimal = []
    for g in sorted(G, key=lambda h: okey(h.leading_monomial())):
        if not any(mon_divides(h.leading_monomial(), g.leading_monomial()) for h in minimal):
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = reduced + minimal[idx + 1 :]
        reduced.append(normal_form(g, others).monic())
    reduced.sort(key=lambda h: okey(h.leading_monomial()))
    return reduced


def ideal_member(f: Polynomial, gens: Sequence[Polynomial]) -> bool:
    return not normal_form(f, buchberger(gens)).terms


def is_unit_ideal(groebner_basis: Sequence[Polynomial]) -> bool:
    return any(g.terms and not any(g.leading_monomial()) for g in groebner_basis)


def krull_dimension(ring: PolyRing, gens: Sequence[Polynomial]) -> int:
    """Dimension of F_p[x]/(gens), via independent variable sets mod LT(I).

    A variable subset S is independent when no leading monomial of the
    reduced basis has support inside S; dim is the largest such |S|.
    """
    gb = buchberger(list(gens))
    if is_unit_ideal(gb):
        raise ValueError("not a proper ideal")
    supports = [frozenset(i for i, e in enumerate(g.leading_monomial()) if e) for g in gb]
    n = ring.nvars
    for size in range(n, 0, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


class QuotientRing:
    """F_p[x_1..x_n]/I with a cached reduced Groebner basis of I.

    The maximal ideal is the one generated by all the variables; whether the
    quotient is a domain is a user assertion recorded in ``is_domain``.
    """

    __slots__ = ("base", "ideal_gens", "groebner", "is_domain", "_dim", "_mgb")

    def __init__(
        self,
        base: PolyRing,
        ideal_gens: Sequence[Polynomial] = (),
        *,
        domain: bool = False,
        verify: bool = True,
    ):
        self.base = base
        self.ideal_gens = tuple(ideal_gens)
        gb = buchberger(list(ideal_gens))
        if is_unit_ideal(gb):
            raise ValueError("defining ideal is the unit ideal")
        if verify:
            for f, g in itertools.combinations(gb, 2):
                if normal_form(spolynomial(f, g), gb).terms:
                    raise AssertionError("computed basis fails the S-pair test")
        self.groebner = tuple(gb)
        self.is_domain = domain
        self._dim = None
        self._mgb = None

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def names(self):
        return self.base.names

    @property
    def nvars(self) -> int:
        return self.base.nvars

    @property
    def order(self) -> MonomialOrder:
        return self.base.order

    def __eq__(self, other):
        return (
            isinstance(other, QuotientRing)
            and self.base == other.base
            and self.groebner == other.groebner
            and self.is_domain == other.is_domain
        )

    def __hash__(self):
        return hash((self.base, self.groebner, self.is_domain))

    def __repr__(self):
        if not self.groebner:
            return repr(self.base)
        return f"{self.base!r}/({', '.join(str(g) for g in self.groebner)})"

    def nf(self, f: Polynomial) -> Polynomial:
        if f.ring != self.base:
            raise ValueError("polynomial not in the base ring")
        if not self.groebner:
            return f
        return normal_form(f, self.groebner)

    def poly(self, text: str) -> Polynomial:
        return self.nf(self.base.poly(text))

    @property
    def zero(self) -> Polynomial:
        return self.base.zero

    @property
    def one(self) -> Polynomial:
        return self.base.one

    def gens(self):
        return tuple(self.nf(g) for g in self.base.gens())

    def maximal_ideal_gens(self) -> tuple[Polynomial, ...]:
        return self.base.gens()

    def dimension(self) -> int:
        if self._dim is None:
            self._dim = krull_dimension(self.base, self.groebner)
        return self._dim

    def maximal_ideal_groebner(self) -> tuple[Polynomial, ...]:
        if self._mgb is None:
            self._mgb = tuple(buchberger(list(self.base.gens()) + list(self.groebner)))
        return self._mgb

    def in_maximal_ideal(self, f: Polynomial) -> bool:
        return not normal_form(f, self.maximal_ideal_groebner()).terms

    def is_regular(self) -> bool:
        return not self.groebner


def polynomial_ring(p: int, names: Sequence[str], order: MonomialOrder = GREVLEX, *, domain: bool = True) -> QuotientRing:
    """Convenience: the regular ring F_p[names] as a QuotientRing."""
    return QuotientRing(PolyRing(p, names, order), (), domain=domain)


@dataclass(frozen=True)
class SOPCertificate:
    ok: bool
    ring_dim: int
    quotient_dim: int
    count: int
    detail: str


def is_partial_sop(xs: Sequence[Polynomial], ring: QuotientRing) -> SOPCertificate:
    """Do x_1..x_k cut the dimension by exactly k?  Records both dimensions."""
    xs = list(xs)
    if not xs:
        raise ValueError("empty parameter list")
    for x in xs:
        if not ring.in_maximal_ideal(x):
            raise ValueError(f"parameter {x} is not in the maximal ideal")
    d = ring.dimension()
    k = len(xs)
    dq = krull_dimension(ring.base, list(ring.groebner) + xs)
    if k > d:
        return SOPCertificate(False, d, dq, k, f"{k} parameters exceed dim {d}")
    ok = dq == d - k
    detail = f"dim drops {d} -> {dq} with {k} parameters"
    return SOPCertificate(ok, d, dq, k, detail)
