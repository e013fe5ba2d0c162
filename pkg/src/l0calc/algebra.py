"""Finite powerset Boolean algebras.

An algebra is fixed by an ordered tuple of atom names.  Its elements are
subsets of the atom index set, stored as integer bitmasks (bit ``i`` set
means atom ``i`` belongs to the element), so every lattice operation is a
single bitwise instruction and equality is exact.

Most hot loops elsewhere in the package work on raw masks; :class:`Elem`
is the checked public face that refuses to mix algebras.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .errors import AlgebraMismatch, CapacityError, InvalidInput, PreconditionError

MAX_ATOMS = 16
MAX_PARTITION_ATOMS = 10
MAX_EXHAUSTIVE_PAIRS = 8


def popcount(mask: int) -> int:
    return mask.bit_count()


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class FiniteAlgebra:
    """The powerset algebra on ``atoms``."""

    atoms: tuple[str, ...]

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not 1 <= len(atoms) <= MAX_ATOMS:
            raise CapacityError(f"atom count must be in [1, {MAX_ATOMS}], got {len(atoms)}")
        for a in atoms:
            if not isinstance(a, str) or not a:
                raise InvalidInput(f"atom names must be nonempty strings, got {a!r}")
        if len(set(atoms)) != len(atoms):
            raise InvalidInput(f"duplicate atom names in {list(atoms)}")

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def size(self) -> int:
        return 1 << len(self.atoms)

    @property
    def full(self) -> int:
        return (1 << len(self.atoms)) - 1

    def index(self, name: str) -> int:
        try:
            return self.atoms.index(name)
        except ValueError:
            raise InvalidInput(f"unknown atom {name!r}; atoms are {list(self.atoms)}") from None

    def zero(self) -> Elem:
        return Elem(self, 0)

    def one(self) -> Elem:
        return Elem(self, self.full)

    def atom(self, i: int) -> Elem:
        return Elem(self, 1 << i)

    def elem(self, names: Iterable[str] = ()) -> Elem:
        """Element made of the named atoms."""
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return Elem(self, mask)

    def from_mask(self, mask: int) -> Elem:
        return Elem(self, mask)

    def elements(self) -> Iterator[Elem]:
        for mask in range(self.size):
            yield Elem(self, mask)

    def names(self, mask: int) -> list[str]:
        return [self.atoms[i] for i in bits(mask)]

    @classmethod
    def of_size(cls, n: int, prefix: str = "") -> FiniteAlgebra:
        """Algebra with atoms named ``prefix0 .. prefix{n-1}``."""
        return cls(tuple(f"{prefix}{i}" for i in range(n)))


@dataclass(frozen=True)
class Elem:
    """An element of a :class:`FiniteAlgebra`, i.e. a subset of its atoms."""

    algebra: FiniteAlgebra
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask <= self.algebra.full:
            raise InvalidInput(f"mask {self.mask} out of range for {self.algebra.n} atoms")

    def _check(self, other: Elem) -> None:
        if not isinstance(other, Elem):
            raise TypeError(f"expected Elem, got {type(other).__name__}")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraMismatch(
                f"elements from different algebras: {list(self.algebra.atoms)} vs {list(other.algebra.atoms)}"
            )

    def meet(self, other: Elem) -> Elem:
        self._check(other)
        return Elem(self.algebra, self.mask & other.mask)

    def join(self, other: Elem) -> Elem:
        self._check(other)
        return Elem(self.algebra, self.mask | other.mask)

    def complement(self) -> Elem:
        return Elem(self.algebra, self.algebra.full & ~self.mask)

    def symm_diff(self, other: Elem) -> Elem:
        self._check(other)
        return Elem(self.algebra, self.mask ^ other.mask)

    def leq(self, other: Elem) -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    __and__ = meet
    __or__ = join
    __xor__ = symm_diff
    __invert__ = complement

    def __le__(self, other: Elem) -> bool:
        return self.leq(other)

    def __ge__(self, other: Elem) -> bool:
        return other.leq(self)

    def is_zero(self) -> bool:
        return self.mask == 0

    def is_one(self) -> bool:
        return self.mask == self.algebra.full

    def names(self) -> list[str]:
        return self.algebra.names(self.mask)

    def __len__(self) -> int:
        return popcount(self.mask)

    def __repr__(self) -> str:
        return "{" + ",".join(self.names()) + "}"


def meet(a: Elem, b: Elem) -> Elem:
    return a.meet(b)


def join(a: Elem, b: Elem) -> Elem:
    return a.join(b)


def complement(a: Elem) -> Elem:
    return a.complement()


def symm_diff(a: Elem, b: Elem) -> Elem:
    return a.symm_diff(b)


def leq(a: Elem, b: Elem) -> bool:
    return a.leq(b)


# -- partitions of unity -----------------------------------------------------


class PartitionCheck(NamedTuple):
    ok: bool
    clause: str | None = None
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok

    @property
    def report(self) -> str:
        if self.ok:
            return "partition of unity"
        return f"{self.clause}: {self.witness}"


def _common_algebra(elems: Iterable[Elem]) -> FiniteAlgebra | None:
    algebra = None
    for e in elems:
        if not isinstance(e, Elem):
            raise TypeError(f"expected Elem, got {type(e).__name__}")
        if algebra is None:
            algebra = e.algebra
        elif e.algebra != algebra:
            raise AlgebraMismatch("cells come from different algebras")
    return algebra


def is_partition_of_unity(cells: Iterable[Elem]) -> PartitionCheck:
    """Check nonzero cells, pairwise disjointness and join = 1, in that order."""
    cells = sorted(set(cells), key=lambda e: e.mask)
    algebra = _common_algebra(cells)
    if algebra is None:
        return PartitionCheck(False, "join ≠ 1", ())
    for c in cells:
        if c.mask == 0:
            return PartitionCheck(False, "zero cell", (c,))
    for i, p in enumerate(cells):
        for q in cells[i + 1:]:
            if p.mask & q.mask:
                return PartitionCheck(False, "disjointness", (p, q))
    total = 0
    for c in cells:
        total |= c.mask
    if total != algebra.full:
        return PartitionCheck(False, "join ≠ 1", (Elem(algebra, total),))
    return PartitionCheck(True)


@dataclass(frozen=True)
class PartitionOfUnity:
    """Finitely many nonzero, pairwise disjoint elements joining to 1."""

    cells: frozenset[Elem]
    algebra: FiniteAlgebra = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        cells = frozenset(self.cells)
        object.__setattr__(self, "cells", cells)
        check = is_partition_of_unity(cells)
        if not check:
            raise InvalidInput(f"not a partition of unity ({check.report})")
        object.__setattr__(self, "algebra", next(iter(cells)).algebra)

    @classmethod
    def _trusted(cls, algebra: FiniteAlgebra, masks: Iterable[int]) -> PartitionOfUnity:
        obj = object.__new__(cls)
        object.__setattr__(obj, "cells", frozenset(Elem(algebra, m) for m in masks))
        object.__setattr__(obj, "algebra", algebra)
        return obj

    @classmethod
    def atoms(cls, algebra: FiniteAlgebra) -> PartitionOfUnity:
        return cls._trusted(algebra, (1 << i for i in range(algebra.n)))

    @classmethod
    def trivial(cls, algebra: FiniteAlgebra) -> PartitionOfUnity:
        return cls._trusted(algebra, (algebra.full,))

    def __iter__(self) -> Iterator[Elem]:
        return iter(sorted(self.cells, key=lambda e: e.mask))

    def __len__(self) -> int:
        return len(self.cells)

    def masks(self) -> list[int]:
        return sorted(c.mask for c in self.cells)

    def __repr__(self) -> str:
        return "Partition[" + " ".join(repr(c) for c in self) + "]"


def refines(q: PartitionOfUnity, q2: PartitionOfUnity) -> bool:
    """``q ⪯ q2``: every cell of ``q2`` lies below some cell of ``q``.

    Note the direction: the right-hand argument is the finer partition.
    """
    if q.algebra != q2.algebra:
        raise AlgebraMismatch("partitions from different algebras")
    coarse = q.masks()
    return all(any(c & ~d == 0 for d in coarse) for c in q2.masks())


def common_refinement(q: PartitionOfUnity, q2: PartitionOfUnity) -> PartitionOfUnity:
    if q.algebra != q2.algebra:
        raise AlgebraMismatch("partitions from different algebras")
    meets = {c & d for c in q.masks() for d in q2.masks()}
    meets.discard(0)
    return PartitionOfUnity._trusted(q.algebra, meets)


def enumerate_partitions(algebra: FiniteAlgebra, max_n: int = MAX_PARTITION_ATOMS) -> Iterator[PartitionOfUnity]:
    """Every partition of unity exactly once (Bell(n) of them).

    Cells of a partition in a powerset algebra are unions of atoms, so this
    is set-partition enumeration by restricted growth strings.
    """
    n = algebra.n
    if n > min(max_n, MAX_PARTITION_ATOMS):
        raise CapacityError(f"partition enumeration capped at n={min(max_n, MAX_PARTITION_ATOMS)}, got n={n}")
    growth = [0] * n
    while True:
        cells = [0] * (max(growth) + 1)
        for i, b in enumerate(growth):
            cells[b] |= 1 << i
        yield PartitionOfUnity._trusted(algebra, cells)
        # advance the restricted growth string: growth[i] <= 1 + max(growth[:i])
        i = n - 1
        while i > 0:
            if growth[i] <= max(growth[:i]):
                growth[i] += 1
                for j in range(i + 1, n):
                    growth[j] = 0
                break
            i -= 1
        else:
            return


# -- homomorphisms -----------------------------------------------------------


@dataclass(frozen=True)
class TwoValuedHom:
    """The homomorphism to {0, 1} given by the principal ultrafilter at ``atom``."""

    algebra: FiniteAlgebra
    atom: int

    def __post_init__(self):
        if not 0 <= self.atom < self.algebra.n:
            raise InvalidInput(f"atom index {self.atom} out of range")

    def value(self, mask: int) -> int:
        return (mask >> self.atom) & 1

    def __call__(self, a: Elem) -> int:
        if a.algebra != self.algebra:
            raise AlgebraMismatch("element from a different algebra")
        return self.value(a.mask)


def two_valued_homs(algebra: FiniteAlgebra) -> list[TwoValuedHom]:
    """All homomorphisms onto {0, 1}; in a finite powerset they are principal."""
    return [TwoValuedHom(algebra, i) for i in range(algebra.n)]


@dataclass(frozen=True)
class VeeMonoidHom:
    """A map preserving 0 and binary joins, stored as a full table of masks.

    ``table[m]`` is the target mask of the source element with mask ``m``.
    Such maps need not preserve meets or complements.
    """

    source: FiniteAlgebra
    target: FiniteAlgebra
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.source.size:
            raise InvalidInput(f"hom table needs {self.source.size} entries, got {len(table)}")
        for m in table:
            if not 0 <= m <= self.target.full:
                raise InvalidInput(f"hom table entry {m} out of range for target")
        self.verify()

    def verify(self) -> bool:
        """Exact check of θ(0) = 0 and θ(A ∨ B) = θ(A) ∨ θ(B).

        On a finite powerset this is equivalent to ``θ(A) = ⋁ θ(atom)`` over
        the atoms of ``A``, which is an O(n·2^n) scan, so no sampling is
        ever needed.  Raises :class:`PreconditionError` with a violating pair.
        """
        t = self.table
        if t[0] != 0:
            raise PreconditionError("θ(0) ≠ 0", witness=(0, t[0]))
        for m in range(1, len(t)):
            low = m & -m
            rest = m ^ low
            if t[m] != t[low] | t[rest]:
                a, b = Elem(self.source, low), Elem(self.source, rest)
                raise PreconditionError(f"θ({a}∨{b}) ≠ θ({a})∨θ({b})", witness=(a, b))
        return True

    def image(self, mask: int) -> int:
        return self.table[mask]

    def __call__(self, a: Elem) -> Elem:
        if a.algebra != self.source:
            raise AlgebraMismatch("element not in the hom's source algebra")
        return Elem(self.target, self.table[a.mask])

    def is_boolean_hom(self) -> bool:
        full = self.target.full
        return self.table[self.source.full] == full and all(
            self.table[self.source.full ^ m] == full ^ self.table[m] for m in range(len(self.table))
        ) and all(
            self.table[1 << i] & self.table[1 << j] == 0
            for i in range(self.source.n) for j in range(i + 1, self.source.n)
        )

    def compose(self, inner: VeeMonoidHom) -> VeeMonoidHom:
        """``self ∘ inner``."""
        if inner.target != self.source:
            raise AlgebraMismatch("cannot compose: inner target ≠ outer source")
        return VeeMonoidHom(inner.source, self.target, tuple(self.table[m] for m in inner.table))

    @classmethod
    def from_atom_images(cls, source: FiniteAlgebra, target: FiniteAlgebra, images: Iterable[int]) -> VeeMonoidHom:
        images = list(images)
        if len(images) != source.n:
            raise InvalidInput(f"need {source.n} atom images, got {len(images)}")
        table = [0] * source.size
        for m in range(1, source.size):
            low = m & -m
            table[m] = table[m ^ low] | images[low.bit_length() - 1]
        return cls(source, target, tuple(table))

    @classmethod
    def identity(cls, algebra: FiniteAlgebra) -> VeeMonoidHom:
        return cls(algebra, algebra, tuple(range(algebra.size)))

    @classmethod
    def zero(cls, source: FiniteAlgebra, target: FiniteAlgebra) -> VeeMonoidHom:
        return cls(source, target, (0,) * source.size)

    @classmethod
    def random(cls, source: FiniteAlgebra, target: FiniteAlgebra, rng: random.Random) -> VeeMonoidHom:
        images = [rng.randrange(target.size) for _ in range(source.n)]
        return cls.from_atom_images(source, target, images)


# -- ideals and quotients ----------------------------------------------------


@dataclass(frozen=True)
class Ideal:
    """The ideal of all elements below ``generator``.

    Every ideal of a finite powerset algebra is principal, so this is the
    general case.
    """

    algebra: FiniteAlgebra
    generator: int

    def __post_init__(self):
        if not 0 <= self.generator <= self.algebra.full:
            raise InvalidInput("ideal generator out of range")

    def __contains__(self, a: Elem) -> bool:
        return a.mask & ~self.generator == 0

    def members(self) -> list[Elem]:
        return [Elem(self.algebra, m) for m in sorted(submasks(self.generator))]

    @classmethod
    def trivial(cls, algebra: FiniteAlgebra) -> Ideal:
        return cls(algebra, 0)

    @classmethod
    def generated_by(cls, elems: Iterable[Elem]) -> Ideal:
        elems = list(elems)
        algebra = _common_algebra(elems)
        if algebra is None:
            raise InvalidInput("need at least one element to name the algebra")
        g = 0
        for e in elems:
            g |= e.mask
        return cls(algebra, g)

    @classmethod
    def from_members(cls, algebra: FiniteAlgebra, members: Iterable[Elem]) -> Ideal:
        """Validate downward and join closure of an explicit member set."""
        masks = {e.mask for e in members}
        if 0 not in masks:
            raise InvalidInput("an ideal must contain 0")
        for m in masks:
            for s in submasks(m):
                if s not in masks:
                    raise InvalidInput(f"not downward closed: {Elem(algebra, s)} ≤ {Elem(algebra, m)}")
        for m in masks:
            for k in masks:
                if m | k not in masks:
                    raise InvalidInput(f"not join closed at {Elem(algebra, m)}, {Elem(algebra, k)}")
        g = 0
        for m in masks:
            g |= m
        return cls(algebra, g)


def quotient_by_ideal(algebra: FiniteAlgebra, ideal: Ideal) -> tuple[FiniteAlgebra, VeeMonoidHom]:
    """Quotient algebra (surviving atoms) and the projection ``A ↦ A ∖ S``."""
    if ideal.algebra != algebra:
        raise AlgebraMismatch("ideal lives in another algebra")
    keep = [i for i in range(algebra.n) if not (ideal.generator >> i) & 1]
    if not keep:
        raise PreconditionError("ideal is the whole algebra; the quotient would be degenerate")
    quotient = FiniteAlgebra(tuple(algebra.atoms[i] for i in keep))
    images = [0] * algebra.n
    for j, i in enumerate(keep):
        images[i] = 1 << j
    return quotient, VeeMonoidHom.from_atom_images(algebra, quotient, images)


def sample_pairs(size: int, count: int, seed: int) -> Iterator[tuple[int, int]]:
    """Seeded pairs of masks for checks above the exhaustive caps."""
    rng = random.Random(seed)
    for _ in range(count):
        yield rng.randrange(size), rng.randrange(size)
