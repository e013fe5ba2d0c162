"""Identity neighborhoods, ``(1/n)U``, ``trap(U)`` and escape functions.

For a finite group the sets ``(1/n)U = {g : g, g², …, gⁿ ∈ U}`` decrease
in ``n`` and reach ``trap(U)`` once ``n`` passes the largest element order,
so every question here is decided exactly.  On ``ℤ`` with ``U`` a ball of
radius ``r`` the sets have the closed form ``Ball(⌊r/n⌋)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from ..algebra import Elem, PartitionOfUnity
from ..errors import InvalidInput, PreconditionError, VerificationError
from ..submeasure import SetFunc, as_rational
from .core import PUFunc, PUGroup, gamma_contains, identity, multiply, power
from .groups import Group, Integers, RationalsAdditive

POWER_CHECK_CAP = 64


class Neighborhood:
    group: object

    def __contains__(self, g) -> bool:
        raise NotImplementedError


class FiniteSubset(Neighborhood):
    """A symmetric subset of a finite group containing the identity."""

    def __init__(self, group, elements: Iterable, check: bool = True):
        self.group = group
        self.elements = frozenset(elements)
        if check:
            if group.identity not in self.elements:
                raise InvalidInput("a neighborhood must contain the identity")
            for g in self.elements:
                if group.inv(g) not in self.elements:
                    raise InvalidInput(f"not symmetric: {group.format(g)} is in U but its inverse is not")

    def __contains__(self, g) -> bool:
        return g in self.elements

    def __eq__(self, other):
        return isinstance(other, FiniteSubset) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return "{" + ", ".join(sorted(self.group.format(g) for g in self.elements)) + "}"


class Ball(Neighborhood):
    """``{g : length(g) ≤ r}`` in ℤ or ℚ."""

    def __init__(self, group: Group, radius):
        if not isinstance(group, (Integers, RationalsAdditive)):
            raise InvalidInput("balls are defined on the integers and the rationals")
        self.group = group
        self.radius = as_rational(radius)
        if self.radius < 0:
            raise InvalidInput("ball radius must be nonnegative")

    def __contains__(self, g) -> bool:
        return self.group.length(g) <= self.radius

    def __eq__(self, other):
        return isinstance(other, Ball) and self.group == other.group and self.radius == other.radius

    def __hash__(self):
        return hash(("ball", self.radius))

    def __repr__(self):
        return f"Ball({self.radius})"

    def integer_points(self) -> list[int]:
        if not isinstance(self.group, Integers):
            raise InvalidInput("only integer balls have a finite point list")
        r = int(self.radius)
        return [g for g in range(-r - 1, r + 2) if g in self]


class PUNbhd(Neighborhood):
    """``N_φ(U, ε) = {a : φ(a[G ∖ U]) ≤ ε}`` inside ``S(φ, G)``."""

    def __init__(self, phi: SetFunc, U: Neighborhood, eps):
        self.phi, self.U, self.eps = phi, U, as_rational(eps)
        if self.eps < 0:
            raise InvalidInput("ε must be nonnegative")
        if U.group.identity not in U:
            raise InvalidInput("the label neighborhood must contain the identity")

    def __contains__(self, a: PUFunc) -> bool:
        return in_nbhd(self.phi, a, self)

    def __repr__(self):
        return f"N_φ({self.U!r}, {self.eps})"


def in_nbhd(phi: SetFunc, a: PUFunc, N: PUNbhd) -> bool:
    """``φ(a[G ∖ U]) ≤ ε``: the join of images at labels outside ``U``."""
    outside = 0
    for g, m in a.items():
        if g not in N.U:
            outside |= m
    return phi.value(outside) <= N.eps


def pu_nbhd_subset(group: PUGroup, N: PUNbhd) -> FiniteSubset:
    """Materialize ``N_φ(U, ε)`` as a subset of the finite group ``S(𝒜, G)``."""
    if not group.finite:
        raise InvalidInput("only finite models can be materialized")
    return FiniteSubset(group, [a for a in group.elements() if in_nbhd(N.phi, a, N)])


# -- (1/n)U and trap ---------------------------------------------------------


def _powers_in(group, g, U, n: int) -> bool:
    x = g
    for _ in range(n):
        if x not in U:
            return False
        x = group.mul(x, g)
    return True


def _integer_ball(U: Neighborhood) -> bool:
    return isinstance(U, Ball) and isinstance(U.group, Integers) and U.group.length_fn is None


def one_over_n(U: Neighborhood, n: int) -> Neighborhood:
    if n < 1:
        raise InvalidInput("n must be a positive integer")
    if _integer_ball(U):
        return Ball(U.group, Fraction(int(U.radius) // n))
    if isinstance(U, FiniteSubset) and U.group.finite:
        G = U.group
        return FiniteSubset(G, [g for g in U.elements if _powers_in(G, g, U, n)], check=False)
    raise PreconditionError("(1/n)U is computed for finite groups and integer balls only")


def one_over_n_replay(U: Ball, n: int) -> Ball:
    """Definition replay on ℤ: enumerate the ball and test every power."""
    if not _integer_ball(U):
        raise InvalidInput("replay is for integer balls")
    keep = [g for g in U.integer_points() if all(k * g in U for k in range(1, n + 1))]
    r = max(keep)
    if sorted(keep) != list(range(-r, r + 1)):
        raise VerificationError("(1/n)U on ℤ is not a ball")
    return Ball(U.group, r)


def trap(U: Neighborhood) -> Neighborhood:
    """Union of all subgroups inside ``U``: the ``g`` whose cyclic group fits."""
    if _integer_ball(U):
        return Ball(U.group, 0)
    if isinstance(U, FiniteSubset) and U.group.finite:
        G = U.group
        return FiniteSubset(G, [g for g in U.elements if _powers_in(G, g, U, G.order_of(g))], check=False)
    raise PreconditionError("trap(U) is computed for finite groups and integer balls only")


def stabilization_index(U: FiniteSubset) -> int:
    """Least ``n`` with ``(1/n)U = trap(U)``."""
    t = trap(U).elements
    n = 1
    while one_over_n(U, n).elements != t:
        n += 1
    return n


@dataclass(frozen=True)
class EscapeVerdict:
    is_escape: bool
    per_epsilon: tuple[tuple[Fraction, int | None], ...]
    n_stab: int | None
    witness: object = None


def is_escape_function(f: Callable, U: Neighborhood, eps_grid: Sequence = (), n_max: int | None = None) -> EscapeVerdict:
    """Decide whether some ``(1/n)U`` lies in ``f⁻¹([0, ε))`` for every ε > 0.

    ``per_epsilon`` lists, for each grid value, the least such ``n`` (None
    if there is none).  The overall verdict quantifies over all ε > 0: on
    a finite group it holds iff ``f`` vanishes on ``trap(U)``; on ℤ with a
    finite ball it holds iff ``f(0) = 0``, since ``(1/n)U = {0}`` for
    ``n`` beyond the radius.
    """
    grid = [as_rational(e) for e in eps_grid]
    if any(e <= 0 for e in grid):
        raise InvalidInput("ε grid values must be positive")
    G = U.group
    if isinstance(G, RationalsAdditive) or (isinstance(U, Ball) and not _integer_ball(U)):
        raise PreconditionError("(1/n)U does not stabilize here; escape is undecidable by this method")
    if _integer_ball(U):
        r = int(U.radius)
        n_stab = r + 1
        sets = {n: one_over_n(U, n).integer_points() for n in range(1, n_stab + 1)}
        vals = {n: max(as_rational(f(g)) for g in pts) for n, pts in sets.items()}
    elif isinstance(U, FiniteSubset) and G.finite:
        n_stab = stabilization_index(U)
        sets = {n: list(one_over_n(U, n).elements) for n in range(1, n_stab + 1)}
        vals = {n: max(as_rational(f(g)) for g in pts) for n, pts in sets.items()}
    else:
        raise PreconditionError("escape functions are decided on finite groups and integer balls")
    per = []
    for e in grid:
        hit = next((n for n in range(1, n_stab + 1) if vals[n] < e), None)
        if hit is not None and n_max is not None and hit > n_max:
            hit = None
        per.append((e, hit))
    limit = sets[n_stab]
    bad = next((g for g in limit if as_rational(f(g)) != 0), None)
    return EscapeVerdict(bad is None, tuple(per), n_stab, bad)


# -- power-bounded decomposition ---------------------------------------------


def trap_decompose(phi: SetFunc, a: PUFunc, V: Neighborhood, eps) -> list[PUFunc]:
    """Factors ``a_Q`` over the atom partition with ``a = ∏ a_Q``.

    ``a_Q(e) = a(e) ∨ ¬Q`` and ``a_Q(g) = a(g) ∧ Q`` otherwise, so each
    ``a_Q`` lies in ``Γ(Q)`` and every power of it stays in ``N_φ(V, ε)``.
    """
    eps = as_rational(eps)
    algebra, G = a.algebra, a.group
    if phi.algebra != algebra:
        raise InvalidInput("φ lives on another algebra")
    if G.identity not in V:
        raise InvalidInput("V must contain the identity")
    for i in range(algebra.n):
        if phi.value(1 << i) > eps:
            raise PreconditionError(
                f"atom {algebra.atoms[i]} has φ-value {phi.value(1 << i)} > ε = {eps}; no qualifying partition",
                witness=algebra.atoms[i],
            )
    q = PartitionOfUnity.atoms(algebra)
    e, full = G.identity, algebra.full
    factors = []
    for Q in q.masks():
        labels = {e: a.mask(e) | (full & ~Q)}
        for g, m in a.items():
            if g != e and m & Q:
                labels[g] = m & Q
        factors.append(PUFunc(algebra, G, labels))
    prod = identity(algebra, G)
    for fQ, Q in zip(factors, q.masks()):
        if not gamma_contains(Elem(algebra, Q), fQ):
            raise VerificationError(f"factor for cell {Elem(algebra, Q)} escapes Γ(Q)")
        prod = multiply(prod, fQ)
    if prod != a:
        raise VerificationError("ordered product of factors differs from a")
    N = PUNbhd(phi, V, eps)
    # powers up to the element's order, or a fixed cap for infinite order
    for fQ in factors:
        for k in range(1, POWER_CHECK_CAP + 1):
            p = power(fQ, k)
            if not in_nbhd(phi, p, N):
                raise VerificationError(f"power {k} of a factor leaves N_φ(V, ε)")
            if p.is_identity():
                break
    return factors


# -- Følner counting ---------------------------------------------------------


@dataclass(frozen=True)
class FolnerResult:
    symm_ratio: Fraction
    outside_ratio: Fraction
    epsilon: Fraction
    bound: Fraction
    premise: bool
    holds: bool


def folner_check(group: Group, F: Iterable, A, g, eps) -> FolnerResult:
    """``|F △ gF|/|F| ≤ ε ⟹ |F ∖ A|/|F| ≥ (1 − ε)/2`` for ``A ∩ gA = ∅``.

    ``A`` is a finite set or any membership-testable subset.  Disjointness
    of ``A`` and ``gA`` is checked on every point the counting argument
    touches: all of ``A`` when it is finite, otherwise ``F ∪ gF``.
    """
    eps = as_rational(eps)
    F = set(F)
    if not F:
        raise InvalidInput("F must be nonempty")
    gF = {group.mul(g, x) for x in F}
    pts = A if isinstance(A, (set, frozenset, list, tuple)) else F | gF
    for x in pts:
        if x in A and group.mul(g, x) in A:
            raise PreconditionError(
                f"A ∩ gA ≠ ∅: {group.format(group.mul(g, x))} lies in both", witness=group.mul(g, x)
            )
    n = len(F)
    symm = Fraction(len(F ^ gF), n)
    out = Fraction(sum(1 for x in F if x not in A), n)
    bound = (1 - eps) / 2
    premise = symm <= eps
    holds = (not premise) or out >= bound
    if not holds:
        raise VerificationError(f"Følner implication fails: {symm} ≤ {eps} but {out} < {bound}")
    return FolnerResult(symm, out, eps, bound, premise, holds)

