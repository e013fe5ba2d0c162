"""Exact set functions on finite powerset algebras and their classification.

Every set function maps masks to nonnegative :class:`fractions.Fraction`
values with ``φ(0) = 0``.  Five representations share one evaluator:

* :class:`Table` -- explicit values for all ``2^n`` elements;
* :class:`CoverCount` -- ``unit_cost`` times the minimum number of family
  sets needed to cover an element;
* :class:`AtomMeasure` -- additive, given by per-atom weights;
* :class:`MaxOf` -- pointwise maximum of atom measures;
* :class:`Pullback` -- ``outer ∘ θ`` for a ⋁-monoid homomorphism ``θ``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .algebra import (
    MAX_EXHAUSTIVE_PAIRS,
    MAX_PARTITION_ATOMS,
    Elem,
    FiniteAlgebra,
    PartitionOfUnity,
    VeeMonoidHom,
    bits,
    enumerate_partitions,
    popcount,
    sample_pairs,
)
from .errors import AlgebraMismatch, CapacityError, InvalidInput, PreconditionError

MAX_COVER_FAMILY = 24
SAMPLED_PAIRS = 50_000


def as_rational(x) -> Fraction:
    """Exact rational from an int, a Fraction or a ``"p/q"`` string.

    Floats are refused: they would smuggle binary rounding into values that
    certificates must replay bit-exactly.
    """
    if isinstance(x, bool):
        raise InvalidInput(f"not a rational: {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"not a rational: {x!r}") from None
    raise InvalidInput(f"not an exact rational: {x!r} ({type(x).__name__})")


def rational_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class SetFunc:
    """Common evaluator interface.  Subclasses implement :meth:`value`."""

    algebra: FiniteAlgebra

    def value(self, mask: int) -> Fraction:
        raise NotImplementedError

    def __call__(self, a: Elem) -> Fraction:
        return self.eval(a)

    def eval(self, a: Elem) -> Fraction:
        if a.algebra != self.algebra:
            raise AlgebraMismatch("element not in the set function's algebra")
        return self.value(a.mask)

    @cached_property
    def values(self) -> tuple[Fraction, ...]:
        """All ``2^n`` values indexed by mask, computed once."""
        return tuple(self.value(m) for m in range(self.algebra.size))

    def materialize(self) -> Table:
        return Table(self.algebra, self.values)

    def total(self) -> Fraction:
        return self.value(self.algebra.full)

    def is_zero(self) -> bool:
        return not any(self.values)


@dataclass(frozen=True, eq=False)
class Table(SetFunc):
    algebra: FiniteAlgebra
    entries: tuple[Fraction, ...]

    def __init__(self, algebra: FiniteAlgebra, values: Sequence | Mapping):
        object.__setattr__(self, "algebra", algebra)
        if isinstance(values, Mapping):
            missing = [m for m in range(algebra.size) if m not in values]
            if missing:
                raise InvalidInput(f"table is not total: no value for mask {missing[0]}")
            values = [values[m] for m in range(algebra.size)]
        values = tuple(as_rational(v) for v in values)
        if len(values) != algebra.size:
            raise InvalidInput(f"table needs {algebra.size} values, got {len(values)}")
        if values[0] != 0:
            raise InvalidInput("φ(0) ≠ 0")
        for m, v in enumerate(values):
            if v < 0:
                raise InvalidInput(f"negative value {v} at mask {m}")
        object.__setattr__(self, "entries", values)

    def value(self, mask: int) -> Fraction:
        return self.entries[mask]

    @cached_property
    def values(self) -> tuple[Fraction, ...]:
        return self.entries

    def __eq__(self, other):
        return isinstance(other, Table) and self.algebra == other.algebra and self.entries == other.entries

    def __hash__(self):
        return hash((self.algebra, self.entries))


def min_cover_size(target: int, family: Sequence[int]) -> int:
    """Minimum number of family sets whose union contains ``target``.

    Branch and bound: greedy incumbent, cardinality lower bound
    ``⌈|uncovered| / largest remaining coverage⌉``, branching on the
    uncovered atom with the fewest candidate sets.  Raises when ``target``
    cannot be covered at all.
    """
    if target == 0:
        return 0
    sets = sorted({s & target for s in family} - {0}, key=popcount, reverse=True)
    reach = 0
    for s in sets:
        reach |= s
    if reach != target:
        raise PreconditionError("element not coverable by the family", witness=target & ~reach)
    kept: list[int] = []
    for s in sets:
        if not any(s | k == k for k in kept):
            kept.append(s)
    sets = kept

    uncovered, best = target, 0
    while uncovered:
        s = max(sets, key=lambda s: popcount(s & uncovered))
        uncovered &= ~s
        best += 1

    containing = {i: [s for s in sets if (s >> i) & 1] for i in bits(target)}

    def search(uncovered: int, used: int) -> None:
        nonlocal best
        if uncovered == 0:
            best = min(best, used)
            return
        widest = max(popcount(s & uncovered) for s in sets)
        if used + -(-popcount(uncovered) // widest) >= best:
            return
        pivot = min(bits(uncovered), key=lambda i: len(containing[i]))
        for s in sorted(containing[pivot], key=lambda s: popcount(s & uncovered), reverse=True):
            search(uncovered & ~s, used + 1)

    search(target, 0)
    return best


def cover_table(n: int, family: Sequence[int]) -> list[int]:
    """Minimum cover sizes for every mask at once (dynamic programming).

    Breadth-first search over unions of family sets gives the fewest sets
    reaching each union; a superset-minimum transform then assigns each mask
    the cheapest union containing it.  Independent of :func:`min_cover_size`.
    """
    size = 1 << n
    inf = len(family) + 1
    dist = [inf] * size
    dist[0] = 0
    frontier = [0]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for s in family:
                v = u | s
                if dist[v] == inf:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    for i in range(n):
        bit = 1 << i
        for m in range(size):
            if not m & bit and dist[m | bit] < dist[m]:
                dist[m] = dist[m | bit]
    return dist


@dataclass(frozen=True, eq=False)
class CoverCount(SetFunc):
    algebra: FiniteAlgebra
    family: tuple[int, ...]
    unit_cost: Fraction = Fraction(1)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        family = tuple(self.family)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "unit_cost", as_rational(self.unit_cost))
        if not family:
            raise InvalidInput("cover family must be nonempty")
        if len(family) > MAX_COVER_FAMILY:
            raise CapacityError(f"cover family capped at {MAX_COVER_FAMILY} sets, got {len(family)}")
        reach = 0
        for s in family:
            if not 0 <= s <= self.algebra.full:
                raise InvalidInput(f"family set {s} out of range")
            reach |= s
        if reach != self.algebra.full:
            missing = self.algebra.names(self.algebra.full & ~reach)
            raise InvalidInput(f"cover family does not join to 1; uncovered atoms {missing}")
        if self.unit_cost <= 0:
            raise InvalidInput("unit_cost must be positive")

    def value(self, mask: int) -> Fraction:
        # one mask always maps to one value, so racing writers agree
        v = self._cache.get(mask)
        if v is None:
            v = self.unit_cost * min_cover_size(mask, self.family)
            self._cache[mask] = v
        return v

    @cached_property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(self.unit_cost * k for k in cover_table(self.algebra.n, self.family))

    def __eq__(self, other):
        return (isinstance(other, CoverCount) and self.algebra == other.algebra
                and self.family == other.family and self.unit_cost == other.unit_cost)

    def __hash__(self):
        return hash((self.algebra, self.family, self.unit_cost))


@dataclass(frozen=True)
class AtomMeasure(SetFunc):
    algebra: FiniteAlgebra
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(as_rational(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) != self.algebra.n:
            raise InvalidInput(f"need {self.algebra.n} weights, got {len(weights)}")
        if any(w < 0 for w in weights):
            raise InvalidInput("measure weights must be nonnegative")

    def value(self, mask: int) -> Fraction:
        return sum((self.weights[i] for i in bits(mask)), Fraction(0))

    @cached_property
    def values(self) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.algebra.size
        for m in range(1, self.algebra.size):
            low = m & -m
            out[m] = out[m ^ low] + self.weights[low.bit_length() - 1]
        return tuple(out)

    @classmethod
    def uniform(cls, algebra: FiniteAlgebra, weight=None) -> AtomMeasure:
        w = Fraction(1, algebra.n) if weight is None else as_rational(weight)
        return cls(algebra, (w,) * algebra.n)


@dataclass(frozen=True)
class MaxOf(SetFunc):
    algebra: FiniteAlgebra
    measures: tuple[AtomMeasure, ...]

    def __post_init__(self):
        measures = tuple(self.measures)
        object.__setattr__(self, "measures", measures)
        if not measures:
            raise InvalidInput("MaxOf needs at least one measure")
        for mu in measures:
            if not isinstance(mu, AtomMeasure):
                raise InvalidInput("MaxOf components must be atom measures")
            if mu.algebra != self.algebra:
                raise AlgebraMismatch("MaxOf component on a different algebra")

    def value(self, mask: int) -> Fraction:
        return max(mu.value(mask) for mu in self.measures)

    @cached_property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(max(col) for col in zip(*(mu.values for mu in self.measures)))


@dataclass(frozen=True)
class Pullback(SetFunc):
    outer: SetFunc
    hom: VeeMonoidHom
    algebra: FiniteAlgebra = field(init=False)

    def __post_init__(self):
        if self.hom.target != self.outer.algebra:
            raise AlgebraMismatch("hom target must be the outer function's algebra")
        object.__setattr__(self, "algebra", self.hom.source)

    def value(self, mask: int) -> Fraction:
        return self.outer.value(self.hom.table[mask])

    @cached_property
    def values(self) -> tuple[Fraction, ...]:
        outer = self.outer.values
        return tuple(outer[t] for t in self.hom.table)


def pullback(phi: SetFunc, theta: VeeMonoidHom) -> Pullback:
    """``φ ∘ θ`` as a set function on θ's source algebra."""
    return Pullback(phi, theta)


# -- classification ----------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    a: Elem
    b: Elem
    lhs: Fraction
    rhs: Fraction

    def __repr__(self) -> str:
        return f"(A={self.a}, B={self.b}: {self.lhs} vs {self.rhs})"


@dataclass(frozen=True)
class PropertyReport:
    monotone: bool
    subadditive: bool
    submodular: bool
    additive: bool
    strictly_positive: bool
    counterexamples: dict[str, Counterexample]
    sampled: bool = False
    seed: int | None = None

    @property
    def is_submeasure(self) -> bool:
        return self.monotone and self.subadditive

    @property
    def is_measure(self) -> bool:
        return self.monotone and self.additive

    @property
    def verdict(self) -> str:
        if self.is_measure:
            return "measure"
        if self.is_submeasure:
            return "submodular submeasure" if self.submodular else "submeasure"
        return "not a submeasure"

    def flags(self) -> dict[str, bool]:
        return {
            "monotone": self.monotone,
            "subadditive": self.subadditive,
            "submodular": self.submodular,
            "additive": self.additive,
            "strictly_positive": self.strictly_positive,
        }


def _scan_monotone(v, algebra):
    for m in range(algebra.size):
        for i in range(algebra.n):
            bit = 1 << i
            if not m & bit and v[m] > v[m | bit]:
                a, b = Elem(algebra, m), Elem(algebra, m | bit)
                return Counterexample(a, b, v[m], v[m | bit])
    return None


def _scan_additive(v, algebra):
    for m in range(1, algebra.size):
        low = m & -m
        if v[m] != v[low] + v[m ^ low]:
            return Counterexample(Elem(algebra, m ^ low), Elem(algebra, low), v[m], v[low] + v[m ^ low])
    return None


def _scan_submodular(v, algebra):
    # local exchange form: φ(S+i)+φ(S+j) ≥ φ(S+i+j)+φ(S) is equivalent to
    # submodularity on a powerset, and is exact in O(n^2 2^n)
    n = algebra.n
    for m in range(algebra.size):
        for i in range(n):
            bi = 1 << i
            if m & bi:
                continue
            for j in range(i + 1, n):
                bj = 1 << j
                if m & bj:
                    continue
                a, b = m | bi, m | bj
                lhs, rhs = v[a | b] + v[m], v[a] + v[b]
                if lhs > rhs:
                    return Counterexample(Elem(algebra, a), Elem(algebra, b), lhs, rhs)
    return None


def _pairs(algebra, seed, max_exhaustive):
    if algebra.n <= max_exhaustive:
        return ((a, b) for a in range(algebra.size) for b in range(algebra.size)), False
    if seed is None:
        raise InvalidInput(f"n={algebra.n} exceeds the exhaustive cap {max_exhaustive}; an explicit seed is required")
    return sample_pairs(algebra.size, SAMPLED_PAIRS, seed), True


def classify(phi: SetFunc, seed: int | None = None, max_exhaustive: int = MAX_EXHAUSTIVE_PAIRS) -> PropertyReport:
    """Decide the defining inequalities of a set function.

    Monotonicity, additivity, submodularity and strict positivity have exact
    local characterizations on a powerset and are always decided exactly.
    Subadditivity needs the full pair scan; above ``max_exhaustive`` atoms
    it is sampled with the mandatory ``seed`` and the report is marked
    ``sampled``.
    """
    algebra = phi.algebra
    v = phi.values
    found: dict[str, Counterexample] = {}

    c = _scan_monotone(v, algebra)
    if c:
        found["monotone"] = c
    c = _scan_additive(v, algebra)
    if c:
        found["additive"] = c
    c = _scan_submodular(v, algebra)
    if c:
        found["submodular"] = c
    for m in range(1, algebra.size):
        if v[m] <= 0:
            found["strictly_positive"] = Counterexample(Elem(algebra, m), Elem(algebra, m), v[m], Fraction(0))
            break

    pairs, sampled = _pairs(algebra, seed, max_exhaustive)
    for a, b in pairs:
        if v[a | b] > v[a] + v[b]:
            found["subadditive"] = Counterexample(Elem(algebra, a), Elem(algebra, b), v[a | b], v[a] + v[b])
            break

    return PropertyReport(
        monotone="monotone" not in found,
        subadditive="subadditive" not in found,
        submodular="submodular" not in found,
        additive="additive" not in found,
        strictly_positive="strictly_positive" not in found,
        counterexamples=found,
        sampled=sampled,
        seed=seed if sampled else None,
    )


def replay_counterexample(phi: SetFunc, flag: str, c: Counterexample) -> bool:
    """True iff ``c`` really violates the inequality named by ``flag``."""
    v = phi.value
    a, b = c.a.mask, c.b.mask
    if flag == "monotone":
        return a & ~b == 0 and v(a) > v(b)
    if flag == "subadditive":
        return v(a | b) > v(a) + v(b)
    if flag == "submodular":
        return v(a | b) + v(a & b) > v(a) + v(b)
    if flag == "additive":
        return a & b == 0 and v(a | b) != v(a) + v(b)
    if flag == "strictly_positive":
        return a != 0 and v(a) <= 0
    raise ValueError(f"unknown flag {flag!r}")


def _require_monotone(phi: SetFunc) -> None:
    c = _scan_monotone(phi.values, phi.algebra)
    if c:
        raise PreconditionError(f"set function is not monotone: {c}", witness=c)


@dataclass(frozen=True)
class Diffuseness:
    value: Fraction
    atom_max: Fraction
    partition: PartitionOfUnity
    exhaustive: bool


def diffuseness(phi: SetFunc) -> Diffuseness:
    """Least achievable maximum cell value over all partitions of unity.

    The search is exhaustive over Π(𝒜) up to the enumeration cap; the
    result must agree with the atom maximum, since for monotone φ the atom
    partition is optimal.  Above the cap only the atom partition is used and
    ``exhaustive`` is False.
    """
    _require_monotone(phi)
    v = phi.values
    algebra = phi.algebra
    atom_max = max(v[1 << i] for i in range(algebra.n))
    if algebra.n > MAX_PARTITION_ATOMS:
        return Diffuseness(atom_max, atom_max, PartitionOfUnity.atoms(algebra), False)
    best, best_q = None, None
    for q in enumerate_partitions(algebra):
        worst = max(v[m] for m in q.masks())
        if best is None or worst < best:
            best, best_q = worst, q
    if best != atom_max:
        raise AssertionError(f"partition optimum {best} ≠ atom maximum {atom_max} for a monotone function")
    return Diffuseness(best, atom_max, best_q, True)


def two_valued_domination(phi: SetFunc) -> Fraction:
    """Largest ``r ≥ 0`` such that ``r·χ ≤ φ`` for some two-valued hom ``χ``.

    Computed directly as ``max_a min_{A ∋ a} φ(A)``, not via monotonicity.
    """
    _require_monotone(phi)
    v = phi.values
    algebra = phi.algebra
    best = Fraction(0)
    for i in range(algebra.n):
        bit = 1 << i
        r = min(v[m] for m in range(algebra.size) if m & bit)
        best = max(best, r)
    return best


@dataclass(frozen=True)
class ContinuityModulus:
    """Step function ``δ ↦ sup{μ(θ(A)) : φ(A) ≤ δ}``.

    ``steps`` lists ``(threshold, sup)`` with thresholds the distinct
    φ-values in increasing order and sups cumulative.
    """

    steps: tuple[tuple[Fraction, Fraction], ...]

    def __call__(self, delta) -> Fraction:
        delta = as_rational(delta)
        out = Fraction(0)
        for t, s in self.steps:
            if t > delta:
                break
            out = s
        return out

    def continuous_at(self, eps, delta) -> bool:
        return self(delta) <= as_rational(eps)


def continuity_modulus(theta: VeeMonoidHom, phi: SetFunc, mu: SetFunc) -> ContinuityModulus:
    if phi.algebra != theta.source:
        raise AlgebraMismatch("φ must live on θ's source algebra")
    if mu.algebra != theta.target:
        raise AlgebraMismatch("μ must live on θ's target algebra")
    pv, mv = phi.values, mu.values
    best: dict[Fraction, Fraction] = {}
    for m in range(theta.source.size):
        x, y = pv[m], mv[theta.table[m]]
        if y > best.get(x, Fraction(-1)):
            best[x] = y
    steps, running = [], Fraction(0)
    for t in sorted(best):
        running = max(running, best[t])
        steps.append((t, running))
    return ContinuityModulus(tuple(steps))


def concave_cardinality(algebra: FiniteAlgebra, profile: Iterable) -> Table:
    """``φ(A) = f(|A|)`` for a profile ``f(0..n)``; checked nondecreasing and concave."""
    f = [as_rational(x) for x in profile]
    if len(f) != algebra.n + 1:
        raise InvalidInput(f"profile needs {algebra.n + 1} values, got {len(f)}")
    if f[0] != 0:
        raise InvalidInput("φ(0) ≠ 0")
    steps = [f[k + 1] - f[k] for k in range(algebra.n)]
    if any(s < 0 for s in steps):
        raise InvalidInput("profile must be nondecreasing")
    if any(steps[k + 1] > steps[k] for k in range(len(steps) - 1)):
        raise InvalidInput("profile must be concave (nonincreasing increments)")
    return Table(algebra, [f[popcount(m)] for m in range(algebra.size)])


__all__ = [
    "AtomMeasure", "ContinuityModulus", "Counterexample", "CoverCount", "Diffuseness", "MaxOf",
    "PropertyReport", "Pullback", "SetFunc", "Table", "as_rational", "classify", "concave_cardinality",
    "continuity_modulus", "cover_table", "diffuseness", "min_cover_size", "pullback", "rational_str",
    "replay_counterexample", "two_valued_domination",
]
