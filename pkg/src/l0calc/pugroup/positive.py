"""Functions of positive type with Gaussian-rational values.

A function ``f`` on a finite group is of positive type when every Gram
matrix ``[f(g_j⁻¹ g_i)]`` is Hermitian positive semidefinite; on a finite
group it suffices to test the Gram matrix over all elements.  PSD is
decided by a pivoted LDL* factorization in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import InvalidInput, PreconditionError, VerificationError
from ..submeasure import SetFunc, _scan_additive, as_rational
from .core import PUFunc, eta, inverse, multiply
from .groups import Cyclic, Group


@dataclass(frozen=True)
class GaussQ:
    """Exact complex number ``re + im·i`` with rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, x) -> GaussQ:
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, (tuple, list)) and len(x) == 2:
            return cls(as_rational(x[0]), as_rational(x[1]))
        if isinstance(x, str):
            return cls.parse(x)
        return cls(as_rational(x))

    @classmethod
    def parse(cls, text: str) -> GaussQ:
        """``"p/q"``, ``"i"``, ``"-1/2i"``, ``"1/2+3/4i"`` and similar."""
        t = text.replace(" ", "")
        if not t:
            raise InvalidInput("empty complex literal")
        if not t.endswith("i"):
            return cls(as_rational(t))
        body = t[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        re_part, im_part = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return cls(as_rational(re_part), as_rational(im_part))

    def __add__(self, o):
        o = GaussQ.of(o)
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GaussQ.of(o)
        return GaussQ(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __mul__(self, o):
        o = GaussQ.of(o)
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussQ.of(o)
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("division by 0")
        return self * o.conj() * GaussQ(1 / d)

    def conj(self) -> GaussQ:
        return GaussQ(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __eq__(self, o):
        try:
            o = GaussQ.of(o)
        except (InvalidInput, TypeError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        def r(x):
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        if self.im == 0:
            return r(self.re)
        im = "" if abs(self.im) == 1 else r(abs(self.im))
        sign = "-" if self.im < 0 else "+"
        if self.re == 0:
            return f"{'-' if self.im < 0 else ''}{im}i"
        return f"{r(self.re)}{sign}{im}i"

    __repr__ = __str__


def hermitian_psd(M: Sequence[Sequence]) -> bool:
    """Exact PSD test for a Hermitian matrix by pivoted LDL*.

    At each step the largest remaining diagonal entry is the pivot.  A
    negative pivot refutes PSD; a zero pivot means every remaining diagonal
    is 0, and then PSD forces the whole remaining block to vanish.
    """
    A = [[GaussQ.of(x) for x in row] for row in M]
    n = len(A)
    if any(len(row) != n for row in A):
        raise InvalidInput("Gram matrix must be square")
    for i in range(n):
        for j in range(i, n):
            if A[i][j] != A[j][i].conj():
                return False
    idx = list(range(n))
    while idx:
        p = max(idx, key=lambda i: A[i][i].re)
        d = A[p][p].re
        if d < 0:
            return False
        if d == 0:
            return all(A[i][j] == GaussQ(0) for i in idx for j in idx)
        idx.remove(p)
        col = {i: A[i][p] for i in idx}
        for i in idx:
            if col[i] == GaussQ(0):
                continue
            for j in idx:
                A[i][j] = A[i][j] - col[i] * col[j].conj() * GaussQ(1 / d)
    return True


def gram(f, points: Sequence, mul, inv) -> list[list[GaussQ]]:
    """``[f(x_j⁻¹ x_i)]_{i,j}``."""
    return [[GaussQ.of(f(mul(inv(xj), xi))) for xj in points] for xi in points]


class PosTypeFn:
    """A function of positive type on a finite group; checked at construction."""

    def __init__(self, group: Group, values: Mapping):
        if not group.finite:
            raise InvalidInput("positive-type functions are represented on finite groups")
        vals = {}
        for g in group.elements():
            key = g if g in values else group.format(g)
            if key not in values:
                raise InvalidInput(f"no value at {group.format(g)}")
            vals[g] = GaussQ.of(values[key])
        self.group, self.values = group, vals
        if not pos_type_check(group, vals):
            raise PreconditionError("not of positive type: the Gram matrix is not Hermitian PSD")

    def __call__(self, g) -> GaussQ:
        return self.values[g]

    def __repr__(self):
        return "PosTypeFn(" + ", ".join(str(self.values[g]) for g in self.group.elements()) + ")"


def pos_type_check(group_or_fn, values: Mapping | None = None) -> bool:
    """Exact positive-type test over the Gram matrix of the whole group."""
    if isinstance(group_or_fn, PosTypeFn):
        group, values = group_or_fn.group, group_or_fn.values
    else:
        group = group_or_fn
        values = {g: GaussQ.of(values[g]) for g in group.elements()}
    els = group.elements()
    return hermitian_psd(gram(values.__getitem__, els, group.mul, group.inv))


def characters(k: int) -> list[dict]:
    """All characters of ``ℤ_k`` with Gaussian-rational values (``k | 4``).

    A character sends 1 to a ``k``-th root of unity; only ``±1, ±i`` are
    Gaussian rationals, so for other ``k`` only the real ones are exact.
    """
    roots = [GaussQ(1), GaussQ(0, 1), GaussQ(-1), GaussQ(0, -1)]
    out = []
    for j in range(4):
        if (j * k) % 4 == 0:
            z, vals = roots[j], {}
            acc = GaussQ(1)
            for g in range(k):
                vals[g] = acc
                acc = acc * z
            out.append(vals)
    return out


def _require_measure(mu: SetFunc) -> None:
    c = _scan_additive(mu.values, mu.algebra)
    if c:
        raise PreconditionError(f"μ is not additive: {c}", witness=c)
    if mu.total() <= 0:
        raise PreconditionError("μ(1) must be positive")


def lift_value(f: PosTypeFn, mu: SetFunc, a: PUFunc) -> GaussQ:
    total = mu.total()
    acc = GaussQ(0)
    for g, m in a.items():
        acc = acc + f(g) * GaussQ(mu.value(m))
    return acc * GaussQ(1 / total)


def pos_type_lift(f: PosTypeFn, mu: SetFunc, a: PUFunc) -> GaussQ:
    """``f′(a) = (1/μ(1)) Σ_g f(g) μ(a(g))``, with both postconditions replayed."""
    _require_measure(mu)
    if a.group != f.group:
        raise InvalidInput("a is not labeled by f's group")
    if a.algebra != mu.algebra:
        raise InvalidInput("μ lives on another algebra")
    value = lift_value(f, mu, a)
    fe = f(f.group.identity)
    if value.abs2() > fe.abs2():
        raise VerificationError(f"|f′(a)|² = {value.abs2()} exceeds f′(e)² = {fe.abs2()}")
    for g in f.group.elements():
        if lift_value(f, mu, eta(a.algebra, f.group, g)) != f(g):
            raise VerificationError(f"f′∘η differs from f at {f.group.format(g)}")
    return value


def lifted_gram(f: PosTypeFn, mu: SetFunc, samples: Sequence[PUFunc]) -> list[list[GaussQ]]:
    """Gram matrix of ``f′`` over ``samples``: entries ``f′(b⁻¹a)``."""
    _require_measure(mu)
    return [[lift_value(f, mu, multiply(inverse(b), a)) for b in samples] for a in samples]


def cyclic_function(k: int, values: Sequence) -> PosTypeFn:
    return PosTypeFn(Cyclic(k), {g: v for g, v in enumerate(values)})
