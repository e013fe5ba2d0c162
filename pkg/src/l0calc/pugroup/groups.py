"""Group oracles: identity, multiplication, inverse, optional length.

Finite groups are either Cayley tables over named elements or cyclic groups
``ℤ_k`` on ``0..k-1``.  The integers and the additive rationals are built in
and handled through finite supports only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from ..errors import CapacityError, InvalidInput
from ..submeasure import as_rational

MAX_TABLE_ORDER = 64
LENGTH_WINDOW = 12


class Group:
    """Interface shared by every group kind."""

    kind: str = "abstract"
    finite: bool = False
    identity: Hashable

    def mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def contains(self, g) -> bool:
        raise NotImplementedError

    def elements(self) -> list:
        raise InvalidInput(f"{self.kind} is infinite; it has no element list")

    def length(self, g) -> Fraction:
        raise InvalidInput(f"no length function declared on {self.kind}")

    has_length: bool = False

    def power(self, g, k: int):
        """``g^k`` for ``k ≥ 0`` by repeated squaring."""
        out, base = self.identity, g
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def order_of(self, g, cap: int | None = None) -> int | None:
        """Least ``k ≥ 1`` with ``g^k = e``; None if not reached within ``cap``."""
        cap = cap if cap is not None else (len(self.elements()) if self.finite else 0)
        x = g
        for k in range(1, cap + 1):
            if x == self.identity:
                return k
            x = self.mul(x, g)
        return None

    def sort_key(self, g):
        return g

    def parse(self, token: str):
        raise NotImplementedError

    def format(self, g) -> str:
        return str(g)

    def record(self) -> dict:
        raise NotImplementedError

    def check_length(self) -> None:
        """Validate the three length-function laws (exhaustive or on a window)."""
        if not self.has_length:
            return
        pts = self.elements() if self.finite else self.window()
        if self.length(self.identity) != 0:
            raise InvalidInput("length(e) ≠ 0")
        for g in pts:
            lg = self.length(g)
            if lg < 0:
                raise InvalidInput(f"negative length at {self.format(g)}")
            if self.length(self.inv(g)) != lg:
                raise InvalidInput(f"length(g⁻¹) ≠ length(g) at g = {self.format(g)}")
            for h in pts:
                if self.length(self.mul(g, h)) > lg + self.length(h):
                    raise InvalidInput(
                        f"length(gh) > length(g) + length(h) at g = {self.format(g)}, h = {self.format(h)}"
                    )

    def window(self) -> list:
        raise NotImplementedError


class CayleyTable(Group):
    kind = "table"
    finite = True

    def __init__(self, elements: Sequence[str], mul: Sequence[Sequence], inv: Sequence | None = None,
                 length: Mapping | None = None):
        elements = tuple(str(e) for e in elements)
        k = len(elements)
        if k == 0:
            raise InvalidInput("a group needs at least one element")
        if k > MAX_TABLE_ORDER:
            raise CapacityError(f"Cayley tables are capped at order {MAX_TABLE_ORDER}, got {k}")
        if len(set(elements)) != k:
            raise InvalidInput("group element names must be distinct")
        index = {e: i for i, e in enumerate(elements)}

        def idx(v) -> int:
            if isinstance(v, bool):
                raise InvalidInput(f"bad table entry {v!r}")
            if isinstance(v, int):
                if not 0 <= v < k:
                    raise InvalidInput(f"table index {v} out of range")
                return v
            if str(v) in index:
                return index[str(v)]
            raise InvalidInput(f"unknown group element {v!r} in table")

        if len(mul) != k or any(len(row) != k for row in mul):
            raise InvalidInput(f"multiplication table must be {k}×{k}")
        table = [[idx(v) for v in row] for row in mul]
        ids = [i for i in range(k) if all(table[i][j] == j and table[j][i] == j for j in range(k))]
        if not ids:
            raise InvalidInput("multiplication table has no two-sided identity")
        e = ids[0]
        for x, y, z in product(range(k), repeat=3):
            if table[table[x][y]][z] != table[x][table[y][z]]:
                raise InvalidInput(
                    f"not associative at ({elements[x]}, {elements[y]}, {elements[z]})"
                )
        invs = []
        for x in range(k):
            cands = [y for y in range(k) if table[x][y] == e]
            if not cands:
                raise InvalidInput(f"{elements[x]} has no inverse")
            invs.append(cands[0])
        if inv is not None:
            given = [idx(v) for v in inv]
            if given != invs:
                raise InvalidInput("declared inverse table disagrees with the multiplication table")
        self.elements_ = elements
        self._index = index
        self._mul = table
        self._inv = invs
        self.identity = elements[e]
        self._length = None
        if length is not None:
            self._length = {}
            for name, v in length.items():
                if str(name) not in index:
                    raise InvalidInput(f"length given for unknown element {name!r}")
                self._length[str(name)] = as_rational(v)
            missing = [x for x in elements if x not in self._length]
            if missing:
                raise InvalidInput(f"length is not total; missing {missing[0]}")
            self.has_length = True
            self.check_length()

    def mul(self, g, h):
        i, j = self._index[g], self._index[h]
        return self.elements_[self._mul[i][j]]

    def inv(self, g):
        return self.elements_[self._inv[self._index[g]]]

    def contains(self, g) -> bool:
        return g in self._index

    def elements(self) -> list:
        return list(self.elements_)

    def length(self, g) -> Fraction:
        if self._length is None:
            return super().length(g)
        return self._length[g]

    def sort_key(self, g):
        return self._index[g]

    def parse(self, token: str):
        token = str(token).strip()
        if token not in self._index:
            raise InvalidInput(f"unknown group element {token!r}")
        return token

    def record(self) -> dict:
        rec = {
            "kind": "table",
            "elements": list(self.elements_),
            "mul": [[self.elements_[v] for v in row] for row in self._mul],
            "inv": [self.elements_[v] for v in self._inv],
        }
        if self._length is not None:
            rec["length"] = {g: _rat(v) for g, v in self._length.items()}
        return rec

    def __eq__(self, other):
        return (isinstance(other, CayleyTable) and self.elements_ == other.elements_
                and self._mul == other._mul and self._length == other._length)

    def __hash__(self):
        return hash(("table", self.elements_))

    def __repr__(self):
        return f"CayleyTable(order={len(self.elements_)})"


def _rat(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, eq=True)
class Cyclic(Group):
    """``ℤ_k`` on ``0..k-1`` with the circular word length ``min(g, k−g)``."""

    order: int
    length_table: tuple | None = field(default=None, compare=True)

    kind = "cyclic"
    finite = True
    has_length = True

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise InvalidInput(f"cyclic order must be a positive integer, got {self.order!r}")
        if self.order > 4096:
            raise CapacityError("cyclic groups are capped at order 4096")
        if self.length_table is not None:
            lt = tuple(as_rational(v) for v in self.length_table)
            if len(lt) != self.order:
                raise InvalidInput("length table must list one value per element")
            object.__setattr__(self, "length_table", lt)
            self.check_length()

    @property
    def identity(self):
        return 0

    def mul(self, g, h):
        return (g + h) % self.order

    def inv(self, g):
        return -g % self.order

    def contains(self, g) -> bool:
        return isinstance(g, int) and not isinstance(g, bool) and 0 <= g < self.order

    def elements(self) -> list:
        return list(range(self.order))

    def length(self, g) -> Fraction:
        if self.length_table is not None:
            return self.length_table[g]
        return Fraction(min(g, self.order - g))

    def order_of(self, g, cap=None):
        from math import gcd
        return self.order // gcd(g, self.order)

    def parse(self, token: str):
        try:
            g = int(str(token).strip())
        except ValueError:
            raise InvalidInput(f"not an element of ℤ_{self.order}: {token!r}") from None
        if not 0 <= g < self.order:
            raise InvalidInput(f"not an element of ℤ_{self.order}: {token!r}")
        return g

    def record(self) -> dict:
        return {"kind": "cyclic", "order": self.order}

    def __repr__(self):
        return f"Cyclic({self.order})"


@dataclass(frozen=True)
class Integers(Group):
    """``ℤ`` with length ``|n|`` unless a custom length callable is supplied."""

    length_fn: Callable | None = field(default=None, compare=False)

    kind = "int"
    finite = False
    has_length = True

    def __post_init__(self):
        if self.length_fn is not None:
            self.check_length()

    @property
    def identity(self):
        return 0

    def mul(self, g, h):
        return g + h

    def inv(self, g):
        return -g

    def contains(self, g) -> bool:
        return isinstance(g, int) and not isinstance(g, bool)

    def length(self, g) -> Fraction:
        if self.length_fn is not None:
            return as_rational(self.length_fn(g))
        return Fraction(abs(g))

    def order_of(self, g, cap=None):
        return 1 if g == 0 else None

    def window(self) -> list:
        return list(range(-LENGTH_WINDOW, LENGTH_WINDOW + 1))

    def parse(self, token: str):
        try:
            return int(str(token).strip())
        except ValueError:
            raise InvalidInput(f"not an integer: {token!r}") from None

    def record(self) -> dict:
        return {"kind": "int"}

    def __repr__(self):
        return "Integers()"


@dataclass(frozen=True)
class RationalsAdditive(Group):
    """``(ℚ, +)`` with length ``|q|``; labels of ℚ-valued liftings live here."""

    kind = "rational-add"
    finite = False
    has_length = True

    @property
    def identity(self):
        return Fraction(0)

    def mul(self, g, h):
        return g + h

    def inv(self, g):
        return -g

    def contains(self, g) -> bool:
        return isinstance(g, Fraction)

    def length(self, g) -> Fraction:
        return abs(g)

    def order_of(self, g, cap=None):
        return 1 if g == 0 else None

    def window(self) -> list:
        return sorted({Fraction(p, q) for p in range(-6, 7) for q in range(1, 5)})

    def parse(self, token: str):
        return as_rational(str(token))

    def format(self, g) -> str:
        return _rat(g)

    def record(self) -> dict:
        return {"kind": "rational-add"}

    def __repr__(self):
        return "RationalsAdditive()"


def symmetric_group(k: int = 3) -> CayleyTable:
    """``S_k`` as a Cayley table; elements are one-line permutation strings."""
    perms = list(permutations(range(k)))
    names = ["".join(map(str, p)) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    # (p∘q)(i) = p(q(i))
    mul = [[index[tuple(p[q[i]] for i in range(k))] for q in perms] for p in perms]
    return CayleyTable(names, mul)


def group_from_record(rec: Mapping) -> Group:
    if not isinstance(rec, Mapping) or "kind" not in rec:
        raise InvalidInput("group record needs a 'kind' field")
    kind = rec["kind"]
    if kind == "cyclic":
        order = rec.get("order")
        if isinstance(order, str) and order.isdigit():
            order = int(order)
        return Cyclic(order)
    if kind == "int":
        return Integers()
    if kind == "rational-add":
        return RationalsAdditive()
    if kind == "table":
        for key in ("elements", "mul"):
            if key not in rec:
                raise InvalidInput(f"table group record needs {key!r}")
        return CayleyTable(rec["elements"], rec["mul"], rec.get("inv"), rec.get("length"))
    raise InvalidInput(f"unknown group kind {kind!r}")


def check_group_axioms(group: Group, triples: Iterable[tuple] | None = None) -> None:
    """Exhaustive for finite groups, otherwise over the supplied triples."""
    e = group.identity
    if triples is None:
        els = group.elements()
        triples = product(els, repeat=3)
    for x, y, z in triples:
        if group.mul(group.mul(x, y), z) != group.mul(x, group.mul(y, z)):
            raise InvalidInput(f"associativity fails at {x}, {y}, {z}")
        if group.mul(e, x) != x or group.mul(x, e) != x:
            raise InvalidInput(f"identity fails at {x}")
        if group.mul(x, group.inv(x)) != e:
            raise InvalidInput(f"inverse fails at {x}")
