"""Liftings of maps on label groups to maps on ``S(𝒜, ·)``.

* ``π_#`` lifts a homomorphism ``π: G → S(𝒜, H)`` to ``S(𝒜, G) → S(𝒜, H)``;
* ``f_•`` pushes labels forward along an arbitrary map ``f: G → H``.

ℚ-labeled elements carry the partial order ``a ≤ b`` iff
``a[[r, ∞)] ≤ b[[r, ∞)]`` for every rational ``r``.
"""

from __future__ import annotations

import threading
from math import gcd
from typing import Callable, Iterable, Mapping

from ..algebra import FiniteAlgebra, PartitionOfUnity
from ..errors import AlgebraMismatch, InvalidInput, NotAHomomorphism, PreconditionError
from ..submeasure import as_rational
from .core import PUFunc, identity, multiply, sigma
from .groups import Cyclic, Group, Integers, RationalsAdditive


class PiTable:
    """A map ``G → S(𝒜, H)`` given on finitely many labels.

    Homomorphy is checked lazily, pair by pair, whenever a product of two
    tabulated labels is itself tabulated.  Verdicts are memoized under a
    lock so concurrent callers always see one answer per pair.
    """

    def __init__(self, algebra: FiniteAlgebra, source: Group, target: Group, table: Mapping):
        self.algebra, self.source, self.target = algebra, source, target
        self._table = {}
        for g, v in table.items():
            if not source.contains(g):
                raise InvalidInput(f"{g!r} is not in the source group")
            if not isinstance(v, PUFunc) or v.algebra != algebra or v.group != target:
                raise InvalidInput(f"π({g!r}) must be an element of S(𝒜, H)")
            self._table[g] = v
        self._verdicts: dict = {}
        self._lock = threading.Lock()

    def __call__(self, g) -> PUFunc:
        try:
            return self._table[g]
        except KeyError:
            raise PreconditionError(f"π is not tabulated at {self.source.format(g)}", witness=g) from None

    def __contains__(self, g) -> bool:
        return g in self._table

    @property
    def labels(self) -> list:
        return list(self._table)

    def check_pair(self, g, h) -> bool:
        """``π(g)π(h) = π(gh)`` when ``gh`` is tabulated; True otherwise."""
        key = (g, h)
        with self._lock:
            if key in self._verdicts:
                return self._verdicts[key]
        gh = self.source.mul(g, h)
        ok = True
        if gh in self._table:
            ok = multiply(self._table[g], self._table[h]) == self._table[gh]
        with self._lock:
            return self._verdicts.setdefault(key, ok)

    def check_on(self, labels: Iterable) -> None:
        labels = list(labels)
        e = self.source.identity
        if e in self._table and not self._table[e].is_identity():
            raise NotAHomomorphism("π(e) is not the identity", witness=(e,))
        for g in labels:
            self(g)
        for g in labels:
            for h in labels:
                if not self.check_pair(g, h):
                    raise NotAHomomorphism(
                        f"π({self.source.format(g)})π({self.source.format(h)}) ≠ π of the product",
                        witness=(g, h),
                    )

    @classmethod
    def from_function(cls, algebra, source, target, fn: Callable, labels: Iterable) -> PiTable:
        return cls(algebra, source, target, {g: fn(g) for g in labels})


def pi_sharp(pi: PiTable, a: PUFunc) -> PUFunc:
    """``π_#(a)(h) = ⋁_g a(g) ∧ π(g)(h)``."""
    if a.algebra != pi.algebra:
        raise AlgebraMismatch("a and π live on different algebras")
    if a.group != pi.source:
        raise AlgebraMismatch("a is not labeled by π's source group")
    pi.check_on(a.support)
    out: dict = {}
    for g, A in a.items():
        for h, B in pi(g).items():
            C = A & B
            if C:
                out[h] = out.get(h, 0) | C
    return PUFunc(a.algebra, pi.target, out, _trusted=True)


# -- random homomorphisms for test volume ------------------------------------


def random_hom(G: Group, H: Group, rng) -> Callable:
    """A random homomorphism ``G → H`` between built-in kinds.

    Cyclic and integer sources map a generator to a suitable element;
    other pairs fall back to the identity (``H = G``) or the trivial map.
    """
    if isinstance(G, Integers):
        if isinstance(H, Integers):
            t = rng.randint(-3, 3)
            return lambda g: g * t
        if isinstance(H, Cyclic):
            t = rng.randrange(H.order)
            return lambda g: g * t % H.order
        if H.finite:
            els = H.elements()
            t = els[rng.randrange(len(els))]
            return lambda g: H.power(t, g % H.order_of(t)) if g >= 0 else H.inv(H.power(t, -g % H.order_of(t)))
    if isinstance(G, Cyclic):
        if isinstance(H, Cyclic):
            step = H.order // gcd(G.order, H.order)
            t = step * rng.randrange(H.order // step)
            return lambda g: g * t % H.order
        if H.finite:
            els = [h for h in H.elements() if G.order % H.order_of(h) == 0]
            t = els[rng.randrange(len(els))]
            return lambda g: H.power(t, g)
    if G == H:
        return lambda g: g
    return lambda g: H.identity


def random_pi(algebra: FiniteAlgebra, G: Group, H: Group, labels: Iterable, rng) -> PiTable:
    """``π(g) = σ_𝒬(Q ↦ ρ_Q(g))`` for a random partition 𝒬 and random
    homomorphisms ``ρ_Q: G → H``; such π is always a homomorphism."""
    cell_of = [rng.randrange(algebra.n) for _ in range(algebra.n)]
    cells: dict[int, int] = {}
    for i, c in enumerate(cell_of):
        cells[c] = cells.get(c, 0) | 1 << i
    q = PartitionOfUnity._trusted(algebra, cells.values())
    rhos = {m: random_hom(G, H, rng) for m in q.masks()}
    return PiTable.from_function(
        algebra, G, H, lambda g: sigma(q, H, {m: rho(g) for m, rho in rhos.items()}), labels
    )


def eta_pi(algebra: FiniteAlgebra, G: Group, H: Group, rho: Callable, labels: Iterable) -> PiTable:
    """``π = η ∘ ρ`` for a homomorphism ``ρ: G → H``."""
    return PiTable.from_function(
        algebra, G, H, lambda g: PUFunc(algebra, H, {rho(g): algebra.full}, _trusted=True), labels
    )


# -- pushforward along arbitrary maps ----------------------------------------


def f_bullet(f, a: PUFunc, target: Group | None = None) -> PUFunc:
    """``f_•(a)(h) = a[f⁻¹(h)]``; ``f`` is a callable or a mapping.

    The default target is ``(ℚ, +)``, the home of length functions.
    """
    target = target or RationalsAdditive()
    fn = f.__getitem__ if isinstance(f, Mapping) else f
    out: dict = {}
    for g, A in a.items():
        h = fn(g)
        if isinstance(target, RationalsAdditive):
            h = as_rational(h)
        if not target.contains(h):
            raise InvalidInput(f"f({a.group.format(g)}) = {h!r} is not in the target group")
        out[h] = out.get(h, 0) | A
    return PUFunc(a.algebra, target, out, _trusted=True)


def length_bullet(a: PUFunc) -> PUFunc:
    """``f_•`` for the label group's declared length function."""
    return f_bullet(a.group.length, a)


def _require_rational(a: PUFunc) -> None:
    if not isinstance(a.group, RationalsAdditive):
        raise InvalidInput(f"expected ℚ-labeled elements, got labels in {a.group!r}")


def upper_set(a: PUFunc, r) -> int:
    """``a[[r, ∞)]`` as a mask."""
    r = as_rational(r)
    out = 0
    for g, m in a.items():
        if g >= r:
            out |= m
    return out


def pu_leq(a: PUFunc, b: PUFunc) -> bool:
    """Checking ``r`` at the labels of ``a`` suffices: between consecutive
    labels the left side is constant while the right side only grows."""
    _require_rational(a)
    _require_rational(b)
    if a.algebra != b.algebra:
        raise AlgebraMismatch("elements over different algebras")
    return all(upper_set(a, r) & ~upper_set(b, r) == 0 for r in a.support)


def pu_add(a: PUFunc, b: PUFunc) -> PUFunc:
    _require_rational(a)
    _require_rational(b)
    return multiply(a, b)


def zero_labeled(algebra: FiniteAlgebra) -> PUFunc:
    return identity(algebra, RationalsAdditive())

