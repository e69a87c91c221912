"""Frobenius functor on presentations and bracket powers of submodules.

Over F_p the q-th power map is additive, so raising a polynomial to the
q = p^e power just scales every exponent vector by q; coefficients are fixed
by Fermat's little theorem.  This keeps every bracket-power computation exact.
"""
from __future__ import annotations

from dataclasses import dataclass

from .modules import FPModule, FreeElem, FreeSubmodule, PolyMatrix
from .rings import Polynomial, QuotientRing

E_HARD_CAP = 6


@dataclass(frozen=True)
class FrobeniusPower:
    """e-fold Frobenius; q = p^e exactly."""

    p: int
    e: int

    def __post_init__(self):
        if self.e < 0:
            raise ValueError("Frobenius exponent must be nonnegative")
        if self.e > E_HARD_CAP:
            raise ValueError(f"Frobenius exponent capped at {E_HARD_CAP}")

    @property
    def q(self) -> int:
        return self.p ** self.e


def poly_power_q(f: Polynomial, e: int) -> Polynomial:
    """f^(p^e), computed by scaling exponents; valid in characteristic p."""
    q = FrobeniusPower(f.ring.p, e).q
    if q == 1:
        return f
    return Polynomial(f.ring, tuple((tuple(x * q for x in m), c) for m, c in f.terms))


def elem_power_q(u: FreeElem, e: int) -> FreeElem:
    """Entrywise q-th power of an element of R^t."""
    return FreeElem(u.ring, tuple(poly_power_q(u.ring.nf(c), e) for c in u.coords))


def bracket_power(N: FreeSubmodule, e: int) -> FreeSubmodule:
    """Submodule generated by the entrywise q-th powers of N's generators.

    This is the image of the e-th Frobenius functor applied to N inside the
    free ambient, where the functor is the identity on the ambient.
    """
    if e == 0:
        return N
    return FreeSubmodule(N.ring, N.rank, [elem_power_q(g, e) for g in N.gens])


def frobenius_presentation(M: FPModule, e: int) -> FPModule:
    """Base change of a cokernel along Frobenius: entries to the q-th power."""
    if e == 0:
        return M
    ring = M.ring
    rows = [[poly_power_q(entry, e) for entry in row] for row in M.presentation.rows]
    return FPModule(ring, PolyMatrix(ring, rows, ncols=M.presentation.ncols))


def tight_test_one_q(u: FreeElem, N: FreeSubmodule, c: Polynomial, e: int) -> bool:
    """Does c * u^[q] lie in the bracket power N^[q]?"""
    if not c.terms:
        raise ValueError("multiplier must be nonzero")
    scaled = elem_power_q(u, e).scale(c)
    return bracket_power(N, e).contains(scaled)
