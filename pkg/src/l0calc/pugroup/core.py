"""Finite G-labeled partitions of unity and their group structure.

A :class:`PUFunc` ``a`` assigns to finitely many group elements pairwise
disjoint nonzero algebra elements whose join is 1.  Products are computed
by convolution, ``(ab)(g) = ⋁_{xy = g} a(x) ∧ b(y)``, which only ever
touches the two finite supports, so infinite label groups cost nothing
extra.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping

from ..algebra import Elem, FiniteAlgebra, PartitionOfUnity
from ..errors import AlgebraMismatch, InvalidInput, PreconditionError, VerificationError
from ..submeasure import SetFunc
from .groups import Group


class PUFunc:
    """Immutable element of ``S(𝒜, G)``; zero labels are never stored."""

    __slots__ = ("algebra", "group", "_labels", "_hash")

    def __init__(self, algebra: FiniteAlgebra, group: Group, labels: Mapping, _trusted: bool = False):
        self.algebra = algebra
        self.group = group
        if _trusted:
            clean = labels
        else:
            clean = {}
            for g, v in labels.items():
                if not group.contains(g):
                    raise InvalidInput(f"label {g!r} is not an element of {group!r}")
                mask = v.mask if isinstance(v, Elem) else v
                if isinstance(v, Elem) and v.algebra != algebra:
                    raise AlgebraMismatch("label image from another algebra")
                if not isinstance(mask, int) or not 0 <= mask <= algebra.full:
                    raise InvalidInput(f"bad image for label {g!r}: {v!r}")
                if mask:
                    if g in clean:
                        raise InvalidInput(f"label {g!r} given twice")
                    clean[g] = mask
            seen = 0
            for g, m in clean.items():
                if seen & m:
                    raise InvalidInput(f"images overlap at label {group.format(g)}")
                seen |= m
            if seen != algebra.full:
                raise InvalidInput(f"images join to {Elem(algebra, seen)}, not 1")
        object.__setattr__(self, "_labels", dict(sorted(clean.items(), key=lambda kv: group.sort_key(kv[0]))))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        if name in ("algebra", "group") and not hasattr(self, name):
            object.__setattr__(self, name, value)
            return
        raise AttributeError("PUFunc is immutable")

    # -- access --------------------------------------------------------------

    def __call__(self, g) -> Elem:
        return Elem(self.algebra, self._labels.get(g, 0))

    def mask(self, g) -> int:
        return self._labels.get(g, 0)

    def items(self) -> Iterator[tuple[object, int]]:
        return iter(self._labels.items())

    @property
    def labels(self) -> dict:
        return dict(self._labels)

    @property
    def support(self) -> list:
        return list(self._labels)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PUFunc) and self.algebra == other.algebra
                and self.group == other.group and self._labels == other._labels)

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.algebra, frozenset(self._labels.items()))))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{self.group.format(g)}↦{Elem(self.algebra, m)}" for g, m in self._labels.items())
        return "{" + body + "}"

    def __mul__(self, other: PUFunc) -> PUFunc:
        return multiply(self, other)

    def __invert__(self) -> PUFunc:
        return inverse(self)

    def is_identity(self) -> bool:
        return self._labels == {self.group.identity: self.algebra.full}


def _same_space(a: PUFunc, b: PUFunc) -> None:
    if a.algebra != b.algebra:
        raise AlgebraMismatch("PUFuncs over different algebras")
    if a.group != b.group:
        raise AlgebraMismatch("PUFuncs over different label groups")


def identity(algebra: FiniteAlgebra, group: Group) -> PUFunc:
    return PUFunc(algebra, group, {group.identity: algebra.full}, _trusted=True)


def multiply(a: PUFunc, b: PUFunc) -> PUFunc:
    _same_space(a, b)
    G = a.group
    out: dict = {}
    for x, A in a.items():
        for y, B in b.items():
            C = A & B
            if C:
                g = G.mul(x, y)
                out[g] = out.get(g, 0) | C
    return PUFunc(a.algebra, G, out, _trusted=True)


def inverse(a: PUFunc) -> PUFunc:
    G = a.group
    return PUFunc(a.algebra, G, {G.inv(g): m for g, m in a.items()}, _trusted=True)


def product_of(factors: Iterable[PUFunc], algebra: FiniteAlgebra, group: Group) -> PUFunc:
    out = identity(algebra, group)
    for f in factors:
        out = multiply(out, f)
    return out


def power(a: PUFunc, k: int) -> PUFunc:
    if k < 0:
        return power(inverse(a), -k)
    out = identity(a.algebra, a.group)
    base = a
    while k:
        if k & 1:
            out = multiply(out, base)
        base = multiply(base, base)
        k >>= 1
    return out


class Complement:
    """The set ``G ∖ U`` for a membership-testable ``U``."""

    def __init__(self, inner):
        self.inner = inner

    def __contains__(self, g) -> bool:
        return g not in self.inner


class Predicate:
    """A subset of ``G`` given by a membership function."""

    def __init__(self, fn: Callable[[object], bool]):
        self.fn = fn

    def __contains__(self, g) -> bool:
        return bool(self.fn(g))


def support_mask(a: PUFunc, T) -> int:
    """``a[T]`` as a mask; ``T`` is anything supporting ``in``."""
    out = 0
    for g, m in a.items():
        if g in T:
            out |= m
    return out


def support(a: PUFunc, T) -> Elem:
    return Elem(a.algebra, support_mask(a, T))


def off_identity_mask(a: PUFunc) -> int:
    """``a[G ∖ {e}]``."""
    return a.algebra.full & ~a.mask(a.group.identity)


def d_phi(phi: SetFunc, a: PUFunc, b: PUFunc) -> Fraction:
    """``φ(ab⁻¹[G ∖ {e}])``."""
    _same_space(a, b)
    if phi.algebra != a.algebra:
        raise AlgebraMismatch("φ lives on another algebra")
    return phi.value(off_identity_mask(multiply(a, inverse(b))))


def eta(algebra: FiniteAlgebra, group: Group, g) -> PUFunc:
    if not group.contains(g):
        raise InvalidInput(f"{g!r} is not an element of {group!r}")
    return PUFunc(algebra, group, {g: algebra.full}, _trusted=True)


def sigma(q: PartitionOfUnity, group: Group, labels: Mapping) -> PUFunc:
    """``σ_𝒬``: the element taking the value ``labels[Q]`` on each cell ``Q``.

    ``labels`` is keyed by cells (Elems or masks) and must be total on 𝒬.
    """
    keyed = {}
    for k, g in labels.items():
        keyed[k.mask if isinstance(k, Elem) else k] = g
    out: dict = {}
    for m in q.masks():
        if m not in keyed:
            raise InvalidInput(f"no label for cell {Elem(q.algebra, m)}")
        g = keyed[m]
        if not group.contains(g):
            raise InvalidInput(f"{g!r} is not an element of {group!r}")
        out[g] = out.get(g, 0) | m
    extra = set(keyed) - set(q.masks())
    if extra:
        raise InvalidInput(f"label given for a non-cell {Elem(q.algebra, min(extra))}")
    return PUFunc(q.algebra, group, out, _trusted=True)


# -- supported subgroups -----------------------------------------------------


def gamma_contains(A: Elem, a: PUFunc) -> bool:
    """``a ∈ Γ(A)``, i.e. ``a[G ∖ {e}] ≤ A``."""
    if A.algebra != a.algebra:
        raise AlgebraMismatch("A and a live on different algebras")
    return off_identity_mask(a) & ~A.mask == 0


def gamma_decompose(c: PUFunc, A: Elem, B: Elem) -> tuple[PUFunc, PUFunc]:
    """Split ``c ∈ Γ(A ∨ B)`` as ``ab`` with ``a ∈ Γ(A)`` and ``b ∈ Γ(B)``."""
    if A.algebra != c.algebra or B.algebra != c.algebra:
        raise AlgebraMismatch("A, B and c must share one algebra")
    G, full = c.group, c.algebra.full
    e = G.identity
    AB = A.mask | B.mask
    for g, m in c.items():
        if g != e and m & ~AB:
            raise PreconditionError(
                f"c ∉ Γ(A∨B): c({G.format(g)}) = {Elem(c.algebra, m)} is not below {Elem(c.algebra, AB)}",
                witness=g,
            )
    ce = c.mask(e)
    la = {e: ce | (full & ~A.mask)}
    lb = {e: ce | A.mask}
    for g, m in c.items():
        if g == e:
            continue
        if m & A.mask:
            la[g] = m & A.mask
        if m & ~A.mask:
            lb[g] = m & ~A.mask
    a = PUFunc(c.algebra, G, la)
    b = PUFunc(c.algebra, G, lb)
    if not gamma_contains(A, a):
        raise VerificationError("first factor escapes Γ(A)")
    if not gamma_contains(B, b):
        raise VerificationError("second factor escapes Γ(B)")
    if multiply(a, b) != c:
        raise VerificationError("factors do not recombine to c")
    return a, b


# -- enumeration of finite models --------------------------------------------


def all_pufuncs(algebra: FiniteAlgebra, group: Group) -> list[PUFunc]:
    """Every element of ``S(𝒜, G)`` for finite ``G``: one label per atom."""
    if not group.finite:
        raise InvalidInput("only finite label groups can be enumerated")
    els = group.elements()
    if len(els) ** algebra.n > 1 << 16:
        raise InvalidInput("S(𝒜, G) too large to enumerate")
    out = []
    for choice in product(els, repeat=algebra.n):
        labels: dict = {}
        for i, g in enumerate(choice):
            labels[g] = labels.get(g, 0) | 1 << i
        out.append(PUFunc(algebra, group, labels, _trusted=True))
    return out


def random_pufunc(algebra: FiniteAlgebra, group: Group, rng, window: int = 6) -> PUFunc:
    """Random element: each atom gets a random label (integers from a window)."""
    if group.finite:
        els = group.elements()
        pick = lambda: els[rng.randrange(len(els))]  # noqa: E731
    elif group.kind == "int":
        pick = lambda: rng.randint(-window, window)  # noqa: E731
    else:
        pick = lambda: Fraction(rng.randint(-window * 4, window * 4), rng.randint(1, 4))  # noqa: E731
    labels: dict = {}
    for i in range(algebra.n):
        g = pick()
        labels[g] = labels.get(g, 0) | 1 << i
    return PUFunc(algebra, group, labels, _trusted=True)


class PUGroup:
    """``S(𝒜, G)`` itself as a group oracle, finite whenever ``G`` is.

    The optional ``phi`` installs the length ``a ↦ d_φ(a, e)``.
    """

    kind = "pu"

    def __init__(self, algebra: FiniteAlgebra, group: Group, phi: SetFunc | None = None):
        self.algebra, self.group, self.phi = algebra, group, phi
        self.identity = identity(algebra, group)
        self.finite = group.finite
        self.has_length = phi is not None
        self._elements = None

    def mul(self, a, b):
        return multiply(a, b)

    def inv(self, a):
        return inverse(a)

    def contains(self, a) -> bool:
        return isinstance(a, PUFunc) and a.algebra == self.algebra and a.group == self.group

    def elements(self) -> list:
        if self._elements is None:
            self._elements = all_pufuncs(self.algebra, self.group)
        return list(self._elements)

    def length(self, a) -> Fraction:
        if self.phi is None:
            raise InvalidInput("no φ given, so no length on S(𝒜, G)")
        return self.phi.value(off_identity_mask(a))

    def power(self, a, k):
        return power(a, k)

    def order_of(self, a, cap=None):
        x, k = a, 1
        limit = cap if cap is not None else (len(self.elements()) if self.finite else 64)
        while k <= limit:
            if x.is_identity():
                return k
            x = multiply(x, a)
            k += 1
        return None

    def sort_key(self, a):
        return repr(a)

    def format(self, a) -> str:
        return repr(a)

    def __eq__(self, other):
        return isinstance(other, PUGroup) and (self.algebra, self.group) == (other.algebra, other.group)

    def __hash__(self):
        return hash(("pu", self.algebra, self.group))
