"""The algebra as a group under symmetric difference, with length ``φ``."""

from __future__ import annotations

from fractions import Fraction

from ..algebra import Elem, FiniteAlgebra
from ..errors import AlgebraMismatch, CapacityError, InvalidInput, PreconditionError
from ..submeasure import SetFunc, classify
from .core import PUFunc
from .groups import Cyclic, Group

MAX_SYMM_DIFF_ATOMS = 12


class SymmDiffGroup(Group):
    """``(𝒜, △)`` on masks; every element is its own inverse.

    The multiplication is computed by xor rather than stored as a
    ``2^n × 2^n`` table.
    """

    kind = "symm-diff"
    finite = True
    has_length = True

    def __init__(self, algebra: FiniteAlgebra, phi: SetFunc):
        self.algebra, self.phi = algebra, phi
        self.identity = 0

    def mul(self, g, h):
        return g ^ h

    def inv(self, g):
        return g

    def contains(self, g) -> bool:
        return isinstance(g, int) and 0 <= g <= self.algebra.full

    def elements(self) -> list:
        return list(range(self.algebra.size))

    def length(self, g) -> Fraction:
        return self.phi.value(g)

    def order_of(self, g, cap=None):
        return 1 if g == 0 else 2

    def format(self, g) -> str:
        return repr(Elem(self.algebra, g))

    def __eq__(self, other):
        return isinstance(other, SymmDiffGroup) and (self.algebra, self.phi) == (other.algebra, other.phi)

    def __hash__(self):
        return hash(("symm-diff", self.algebra))

    def __repr__(self):
        return f"SymmDiffGroup(n={self.algebra.n})"


def to_symm_diff_group(algebra: FiniteAlgebra, phi: SetFunc, seed: int | None = None) -> SymmDiffGroup:
    if phi.algebra != algebra:
        raise AlgebraMismatch("φ lives on another algebra")
    if algebra.n > MAX_SYMM_DIFF_ATOMS:
        raise CapacityError(f"symmetric-difference groups are capped at n={MAX_SYMM_DIFF_ATOMS}")
    report = classify(phi, seed=seed)
    if not report.is_submeasure:
        flag = "monotone" if not report.monotone else "subadditive"
        c = report.counterexamples[flag]
        raise PreconditionError(f"φ is not a submeasure ({flag} fails: {c})", witness=c)
    return SymmDiffGroup(algebra, phi)


def to_pu(algebra: FiniteAlgebra, A: int) -> PUFunc:
    """``A ↦ {1 ↦ A, 0 ↦ ¬A}`` into ``S(𝒜, ℤ₂)``."""
    if not 0 <= A <= algebra.full:
        raise InvalidInput("mask out of range")
    return PUFunc(algebra, Cyclic(2), {1: A, 0: algebra.full & ~A})


def from_pu(a: PUFunc) -> int:
    if a.group != Cyclic(2):
        raise InvalidInput("expected an element of S(𝒜, ℤ₂)")
    return a.mask(1)
