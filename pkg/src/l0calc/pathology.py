"""Dominated measures, Kelley greedy measures and covering witnesses.

``M(φ)`` is the largest total mass of an additive ``μ ≤ φ``; it is the value
of the linear program

    max Σ_a x_a   s.t.  Σ_{a ∈ A} x_a ≤ φ(A)  for every A ≠ 0,  x ≥ 0,

whose dual is a fractional cover of the atoms by elements weighted by φ.
Every answer returned here carries a certificate that has been replayed
exactly before the function returns.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, lcm
from typing import Sequence

from .algebra import Elem, FiniteAlgebra, PartitionOfUnity
from .errors import CapacityError, InvalidInput, PreconditionError, VerificationError
from .lp import maximize
from .submeasure import (
    AtomMeasure,
    CoverCount,
    SetFunc,
    Table,
    _scan_monotone,
    _scan_submodular,
    as_rational,
    classify,
    concave_cardinality,
)

MAX_LP_ATOMS = 12
MAX_GENERATED_ATOMS = 16


def _require_submeasure(phi: SetFunc) -> None:
    """Monotonicity is checked exactly at every size; subadditivity where the
    pair scan is exhaustive.  The LP itself is sound for any nonnegative φ."""
    n = phi.algebra.n
    if n > MAX_LP_ATOMS:
        raise CapacityError(f"LP constraints are materialized up to n={MAX_LP_ATOMS}, got n={n}")
    c = _scan_monotone(phi.values, phi.algebra)
    if c:
        raise PreconditionError(f"not monotone: {c}", witness=c)
    if n <= 8:
        report = classify(phi)
        if not report.subadditive:
            c = report.counterexamples["subadditive"]
            raise PreconditionError(f"not subadditive: {c}", witness=c)


@dataclass(frozen=True)
class DominationCertificate:
    value: Fraction
    primal: AtomMeasure
    dual: dict[int, Fraction]
    dual_cost: Fraction

    @property
    def M(self) -> Fraction:
        return self.value

    def verify(self, phi: SetFunc) -> bool:
        """Replay ``μ* ≤ φ``, the atom cover by the dual and strong duality."""
        if phi.algebra != self.primal.algebra:
            raise VerificationError("certificate and set function live on different algebras")
        mu, v = self.primal.values, phi.values
        for m in range(phi.algebra.size):
            if mu[m] > v[m]:
                raise VerificationError(f"μ* exceeds φ at {Elem(phi.algebra, m)}: {mu[m]} > {v[m]}")
        for i in range(phi.algebra.n):
            cover = sum((y for A, y in self.dual.items() if (A >> i) & 1), Fraction(0))
            if cover < 1:
                raise VerificationError(f"dual covers atom {phi.algebra.atoms[i]} with weight {cover} < 1")
        if any(y < 0 for y in self.dual.values()):
            raise VerificationError("negative dual weight")
        cost = sum((y * v[A] for A, y in self.dual.items()), Fraction(0))
        if not (mu[phi.algebra.full] == self.value == self.dual_cost == cost):
            raise VerificationError(
                f"strong duality fails: μ*(1)={mu[phi.algebra.full]}, M={self.value}, dual cost={cost}"
            )
        return True


def max_dominated_measure(phi: SetFunc) -> DominationCertificate:
    _require_submeasure(phi)
    algebra = phi.algebra
    n = algebra.n
    v = phi.values
    masks = range(1, algebra.size)
    A = [[(m >> i) & 1 for i in range(n)] for m in masks]
    b = [v[m] for m in masks]
    sol = maximize([1] * n, A, b)
    dual = {m: y for m, y in zip(masks, sol.y) if y}
    cert = DominationCertificate(sol.value, AtomMeasure(algebra, sol.x), dual, sol.value)
    cert.verify(phi)
    return cert


def kappa(phi: SetFunc, certificate: DominationCertificate | None = None) -> Fraction:
    """``M(φ)/φ(1)``, a number in ``[0, 1]``; 1 exactly for measures."""
    total = phi.total()
    if total == 0:
        raise PreconditionError("κ is undefined when φ(1) = 0")
    cert = certificate or max_dominated_measure(phi)
    return cert.value / total


@dataclass(frozen=True)
class KelleyMeasure:
    order: tuple[int, ...]
    nu: AtomMeasure

    def verify(self, phi: SetFunc) -> bool:
        nu, v = self.nu.values, phi.values
        for m in range(phi.algebra.size):
            if nu[m] > v[m]:
                raise VerificationError(f"ν exceeds φ at {Elem(phi.algebra, m)}: {nu[m]} > {v[m]}")
        full = phi.algebra.full
        if nu[full] != v[full]:
            raise VerificationError(f"ν(1) = {nu[full]} ≠ φ(1) = {v[full]}")
        return True


def _check_order(order: Sequence[int], n: int) -> tuple[int, ...]:
    order = tuple(int(i) for i in order)
    if sorted(order) != list(range(n)):
        raise InvalidInput(f"order must be a permutation of 0..{n - 1}, got {list(order)}")
    return order


def kelley_greedy(phi: SetFunc, order: Sequence[int] | None = None) -> KelleyMeasure:
    """Telescoping increments of φ along ``order`` (default: atom order)."""
    algebra = phi.algebra
    order = _check_order(range(algebra.n) if order is None else order, algebra.n)
    for flag, scan in (("monotone", _scan_monotone), ("submodular", _scan_submodular)):
        c = scan(phi.values, algebra)
        if c:
            raise PreconditionError(f"not {flag}: {c}", witness=c)
    weights = [Fraction(0)] * algebra.n
    prefix = 0
    for i in order:
        weights[i] = phi.value(prefix | 1 << i) - phi.value(prefix)
        prefix |= 1 << i
    km = KelleyMeasure(order, AtomMeasure(algebra, weights))
    km.verify(phi)
    return km


@dataclass(frozen=True)
class ChristensenWitness:
    epsilon: Fraction
    m: int
    sets: tuple[Elem, ...]
    partition: PartitionOfUnity
    min_coverage: int

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.sets:
            out[c.mask] = out.get(c.mask, 0) + 1
        return out

    def verify(self, phi: SetFunc) -> bool:
        eps = self.epsilon
        if not 0 < eps <= 1:
            raise VerificationError(f"ε = {eps} outside (0, 1]")
        if self.m != len(self.sets) or self.m <= 0:
            raise VerificationError("multiset size does not match m")
        for c in self.sets:
            if phi.value(c.mask) > eps:
                raise VerificationError(f"φ({c}) = {phi.value(c.mask)} > ε = {eps}")
        coverage = [sum(1 for c in self.sets if q.mask & ~c.mask == 0) for q in self.partition]
        if min(coverage) != self.min_coverage:
            raise VerificationError(f"recorded coverage {self.min_coverage} ≠ replayed {min(coverage)}")
        if self.min_coverage < (1 - eps) * self.m:
            raise VerificationError(f"coverage {self.min_coverage} < (1−ε)·m = {(1 - eps) * self.m}")
        return True


def _check_epsilon(eps) -> Fraction:
    eps = as_rational(eps)
    if not 0 < eps < 1:
        raise InvalidInput(f"ε must lie in (0, 1), got {eps}")
    return eps


def christensen_witness(phi: SetFunc, eps) -> ChristensenWitness | None:
    """Covering witness at level ε on the atom partition, or None.

    Solves ``max t`` over probability weights ``y`` on the small elements
    ``𝒞_ε = {A ≠ 0 : φ(A) ≤ ε}`` with every atom covered by weight ≥ t.
    """
    eps = _check_epsilon(eps)
    _require_submeasure(phi)
    algebra = phi.algebra
    n = algebra.n
    v = phi.values
    small = [m for m in range(1, algebra.size) if v[m] <= eps]
    if not small:
        return None
    # variables: t, then one y per small element
    A = [[1] + [-((m >> a) & 1) for m in small] for a in range(n)]
    A.append([0] + [1] * len(small))
    b = [0] * n + [1]
    sol = maximize([1] + [0] * len(small), A, b)
    t = sol.value
    if t < 1 - eps:
        return None
    y = sol.x[1:]
    total = sum(y)
    weights = [w / total for w in y]
    scale = lcm(*(w.denominator for w in weights))
    sets: list[Elem] = []
    for mask, w in zip(small, weights):
        sets.extend([Elem(algebra, mask)] * int(w * scale))
    partition = PartitionOfUnity.atoms(algebra)
    coverage = min(sum(1 for c in sets if (c.mask >> a) & 1) for a in range(n))
    w = ChristensenWitness(eps, len(sets), tuple(sets), partition, coverage)
    w.verify(phi)
    return w


@dataclass(frozen=True)
class MassBound:
    M: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.M <= self.bound


def witness_mass_bound(w: ChristensenWitness, phi: SetFunc) -> MassBound:
    """Recompute ``M(φ)`` and check ``M(φ) ≤ ε/(1−ε)`` for a verified witness."""
    w.verify(phi)
    if w.epsilon >= 1:
        raise PreconditionError("the mass bound needs ε < 1")
    mb = MassBound(max_dominated_measure(phi).value, w.epsilon / (1 - w.epsilon))
    if not mb.holds:
        raise VerificationError(f"M(φ) = {mb.M} > ε/(1−ε) = {mb.bound}")
    return mb


# -- benchmark families ------------------------------------------------------


def copoints(N: int) -> CoverCount:
    """Cover count by the ``N`` sets ``X ∖ {i}``."""
    if not 2 <= N <= MAX_GENERATED_ATOMS:
        raise CapacityError(f"copoints needs 2 ≤ N ≤ {MAX_GENERATED_ATOMS}, got {N}")
    algebra = FiniteAlgebra.of_size(N)
    return CoverCount(algebra, tuple(algebra.full ^ (1 << i) for i in range(N)))


def ell_subsets_cover(N: int, ell: int) -> CoverCount:
    """Cover count by every ``ℓ``-element subset."""
    if not 1 <= N <= MAX_GENERATED_ATOMS or not 1 <= ell <= N:
        raise CapacityError(f"ell_subsets_cover needs 1 ≤ ℓ ≤ N ≤ {MAX_GENERATED_ATOMS}")
    if comb(N, ell) > 24:
        raise CapacityError(f"C({N},{ell}) = {comb(N, ell)} family sets exceeds the cap of 24")
    algebra = FiniteAlgebra.of_size(N)
    family = tuple(sum(1 << i for i in c) for c in combinations(range(N), ell))
    return CoverCount(algebra, family)


def random_cover(N: int, m: int, density, seed: int) -> CoverCount:
    """``m`` random sets, each atom included with probability ``density``.

    Atoms left uncovered are added to set ``atom mod m`` so the family joins
    to 1.  Deterministic in ``seed``.
    """
    density = as_rational(density)
    if not 1 <= N <= MAX_GENERATED_ATOMS or not 1 <= m <= 24:
        raise CapacityError(f"random_cover needs 1 ≤ N ≤ {MAX_GENERATED_ATOMS} and 1 ≤ m ≤ 24")
    if not 0 <= density <= 1:
        raise InvalidInput("density must lie in [0, 1]")
    if seed is None:
        raise InvalidInput("random_cover requires an explicit seed")
    rng = random.Random(seed)
    family = []
    for _ in range(m):
        s = 0
        for i in range(N):
            # exact Bernoulli trial on the rational density
            if rng.randrange(density.denominator) < density.numerator:
                s |= 1 << i
        family.append(s)
    covered = 0
    for s in family:
        covered |= s
    for i in range(N):
        if not (covered >> i) & 1:
            family[i % m] |= 1 << i
    return CoverCount(FiniteAlgebra.of_size(N), tuple(family))


def concave_cardinality_family(N: int, breakpoints: Sequence) -> Table:
    if not 1 <= N <= MAX_GENERATED_ATOMS:
        raise CapacityError(f"concave_cardinality needs 1 ≤ N ≤ {MAX_GENERATED_ATOMS}")
    return concave_cardinality(FiniteAlgebra.of_size(N), breakpoints)


GENERATOR_KINDS = ("copoints", "ell_subsets_cover", "random_cover", "concave_cardinality")


def generate(kind: str, params: Sequence, seed: int | None = None) -> SetFunc:
    """Dispatch by family name; ``params`` are positional as in the signatures."""
    params = list(params)
    try:
        if kind == "copoints":
            (N,) = params
            return copoints(int(N))
        if kind == "ell_subsets_cover":
            N, ell = params
            return ell_subsets_cover(int(N), int(ell))
        if kind == "random_cover":
            N, m, density = params
            return random_cover(int(N), int(m), density, seed)
        if kind == "concave_cardinality":
            N, *profile = params
            if len(profile) == 1 and isinstance(profile[0], (list, tuple)):
                profile = list(profile[0])
            return concave_cardinality_family(int(N), profile)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (InvalidInput, CapacityError)):
            raise
        raise InvalidInput(f"bad parameters for {kind}: {params} ({exc})") from None
    raise InvalidInput(f"unknown family kind {kind!r}; expected one of {', '.join(GENERATOR_KINDS)}")


def all_concave_profiles(N: int, top: int | None = None):
    """Every nondecreasing concave integer profile ``f(0..N)`` with ``f(N) ≤ top``.

    Small exhaustive family used by the test and self-test suites.
    """
    top = N if top is None else top

    def extend(prefix, last_step):
        if len(prefix) == N + 1:
            yield tuple(prefix)
            return
        for step in range(min(last_step, top - prefix[-1]), -1, -1):
            yield from extend(prefix + [prefix[-1] + step], step)

    yield from extend([0], top)

