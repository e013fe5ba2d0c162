"""A small line-oriented language for driving the group calculus.

A script sets up its context with directives, then binds values and checks
assertions, top to bottom::

    atoms p q
    group cyclic 2
    phi cardinality 1/2          # φ(A) = |A|/2
    a = pu {1:[p], 0:[q]}
    assert dphi(a, id) == 1/2
    assert mul(a, inv(a)) == id
    d = gamma_decompose(a, [p], [q])
    assert mul(d.0, d.1) == a

Statements may also be separated by ``;``.  There are no loops.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from .algebra import Elem, FiniteAlgebra, PartitionOfUnity
from .errors import InvalidInput, L0Error
from .pugroup import core, lifting
from .pugroup.escape import FiniteSubset, PUNbhd, in_nbhd, trap_decompose
from .pugroup.groups import Cyclic, Group, Integers, RationalsAdditive, group_from_record, symmetric_group
from .pugroup.positive import GaussQ, PosTypeFn, pos_type_lift
from .submeasure import AtomMeasure, SetFunc, Table, as_rational

TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_\-]*)|(?P<op>==|!=|<=|>=|[()\[\]{},:.<>=~\-]))"
)


class ScriptError(InvalidInput):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class AssertionFailed(L0Error):
    def __init__(self, line: int, text: str, lhs, rhs):
        super().__init__(f"line {line}: assertion failed: {text}\n  left:  {show(lhs)}\n  right: {show(rhs)}")
        self.line, self.text, self.lhs, self.rhs = line, text, lhs, rhs


@dataclass(frozen=True)
class Lit:
    """A numeric literal remembered with its source text (group element names
    such as ``012`` must not lose their leading zeros)."""

    text: str
    value: Fraction


@dataclass(frozen=True)
class PiSpec:
    """A homomorphism of label groups ``ρ``, used as ``η ∘ ρ`` or as ``f``."""

    name: str
    target: Group
    fn: Callable


def show(v) -> str:
    if isinstance(v, Lit):
        return str(v.value) if v.value.denominator != 1 else str(v.value.numerator)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple):
        return "(" + ", ".join(show(x) for x in v) + ")"
    if isinstance(v, PiSpec):
        return v.name
    return repr(v)


def _tokens(text: str, line: int) -> list[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ScriptError(line, f"cannot read {text[pos:].strip()!r}")
        out.append(m.group(m.lastgroup))
        pos = m.end()
    return out


class Interpreter:
    def __init__(self, base_dir: Path | None = None, out: Callable[[str], None] = print):
        self.base_dir = base_dir or Path(".")
        self.out = out
        self.algebra: FiniteAlgebra | None = None
        self.group: Group | None = None
        self.phi: SetFunc | None = None
        self.env: dict[str, Any] = {}
        self.transcript: list[str] = []
        self.asserts = 0

    # -- driver ---------------------------------------------------------------

    def run(self, source: str) -> list[str]:
        for lineno, raw in enumerate(source.splitlines(), start=1):
            body = raw.split("#", 1)[0]
            for stmt in body.split(";"):
                if stmt.strip():
                    self.statement(stmt.strip(), lineno)
        return self.transcript

    def emit(self, text: str) -> None:
        self.transcript.append(text)
        self.out(text)

    def statement(self, stmt: str, line: int) -> None:
        head, _, rest = stmt.partition(" ")
        if head in ("atoms", "group", "phi"):
            getattr(self, f"directive_{head}")(rest.split(), line)
            return
        toks = _tokens(stmt, line)
        if head == "assert":
            self.assertion(toks[1:], stmt[len("assert"):].strip(), line)
            return
        if len(toks) >= 2 and toks[1] == "=" and re.fullmatch(r"[A-Za-z_]\w*", toks[0]):
            value = self.parse_all(toks[2:], line)
            self.env[toks[0]] = value
            self.emit(f"{toks[0]} = {show(value)}")
            return
        self.emit(show(self.parse_all(toks, line)))

    # -- directives -------------------------------------------------------------

    def directive_atoms(self, args, line):
        try:
            self.algebra = FiniteAlgebra(tuple(args))
        except ValueError as exc:
            raise ScriptError(line, str(exc)) from None
        self.emit(f"atoms {' '.join(args)}")

    def directive_group(self, args, line):
        if not args:
            raise ScriptError(line, "group needs a kind")
        kind = args[0]
        try:
            if kind == "cyclic" and len(args) == 2:
                self.group = Cyclic(int(args[1]))
            elif kind == "int":
                self.group = Integers()
            elif kind == "rational-add":
                self.group = RationalsAdditive()
            elif kind == "s3":
                self.group = symmetric_group(3)
            elif kind == "file" and len(args) == 2:
                from .records import loads
                self.group = group_from_record(loads((self.base_dir / args[1]).read_text(), args[1]))
            else:
                raise ScriptError(line, f"unknown group directive {' '.join(args)!r}")
        except (ValueError, OSError) as exc:
            raise ScriptError(line, str(exc)) from None
        self.emit(f"group {self.group!r}")

    def directive_phi(self, args, line):
        A = self._need_algebra(line)
        if not args:
            raise ScriptError(line, "phi needs a kind")
        kind = args[0]
        try:
            if kind == "measure":
                self.phi = AtomMeasure(A, tuple(as_rational(w) for w in args[1:]))
            elif kind == "cardinality" and len(args) == 2:
                c = as_rational(args[1])
                self.phi = Table(A, [c * bin(m).count("1") for m in range(A.size)])
            elif kind == "file" and len(args) == 2:
                from .records import loads, setfunc_from_record
                rec = loads((self.base_dir / args[1]).read_text(), args[1])
                self.phi = setfunc_from_record(rec, A)
                if self.phi.algebra != A:
                    raise ScriptError(line, "φ file uses different atoms")
            else:
                raise ScriptError(line, f"unknown phi directive {' '.join(args)!r}")
        except OSError as exc:
            raise ScriptError(line, str(exc)) from None
        except InvalidInput as exc:
            if isinstance(exc, ScriptError):
                raise
            raise ScriptError(line, str(exc)) from None
        self.emit(f"phi {' '.join(args)}")

    def _need_algebra(self, line) -> FiniteAlgebra:
        if self.algebra is None:
            raise ScriptError(line, "no 'atoms' directive yet")
        return self.algebra

    def _need_group(self, line) -> Group:
        if self.group is None:
            raise ScriptError(line, "no 'group' directive yet")
        return self.group

    def _need_phi(self, line) -> SetFunc:
        if self.phi is None:
            raise ScriptError(line, "no 'phi' directive yet")
        return self.phi

    # -- assertions -------------------------------------------------------------

    def assertion(self, toks, text, line):
        p = Parser(self, toks, line)
        lhs = p.expr()
        if p.at_end():
            ok, rhs = lhs is True, True
            if not isinstance(lhs, bool):
                raise ScriptError(line, "assert needs a comparison or a boolean")
        else:
            op = p.next()
            if op not in ("==", "!=", "<=", ">=", "<", ">"):
                raise ScriptError(line, f"expected a comparison, got {op!r}")
            rhs = p.expr()
            p.finish()
            ok = self.compare(op, lhs, rhs, line)
        self.asserts += 1
        if not ok:
            raise AssertionFailed(line, text, lhs, rhs)
        self.emit(f"ok: {text}")

    def compare(self, op, lhs, rhs, line) -> bool:
        lhs, rhs = self.coerce_pair(lhs, rhs, line)
        if op == "==":
            return lhs == rhs
        if op == "!=":
            return lhs != rhs
        if isinstance(lhs, core.PUFunc) and isinstance(rhs, core.PUFunc):
            if op == "<=":
                return lifting.pu_leq(lhs, rhs)
            if op == ">=":
                return lifting.pu_leq(rhs, lhs)
            raise ScriptError(line, "strict order is not defined on labeled elements")
        if isinstance(lhs, Elem) and isinstance(rhs, Elem):
            return {"<=": lhs <= rhs, ">=": lhs >= rhs, "<": lhs <= rhs and lhs != rhs,
                    ">": lhs >= rhs and lhs != rhs}[op]
        if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
            return {"<=": lhs <= rhs, ">=": lhs >= rhs, "<": lhs < rhs, ">": lhs > rhs}[op]
        raise ScriptError(line, f"cannot order {show(lhs)} and {show(rhs)}")

    def coerce_pair(self, lhs, rhs, line):
        def num(v):
            return v.value if isinstance(v, Lit) else v
        lhs, rhs = num(lhs), num(rhs)
        if isinstance(lhs, GaussQ) or isinstance(rhs, GaussQ):
            return GaussQ.of(lhs), GaussQ.of(rhs)
        return lhs, rhs

    # -- values -----------------------------------------------------------------

    def gelem(self, v, line):
        G = self._need_group(line)
        if isinstance(v, Lit):
            text = v.text
        elif isinstance(v, Fraction):
            text = str(v)
        elif isinstance(v, str):
            text = v
        else:
            if G.contains(v):
                return v
            raise ScriptError(line, f"{show(v)} is not a group element")
        try:
            return G.parse(text)
        except InvalidInput as exc:
            raise ScriptError(line, str(exc)) from None

    def parse_all(self, toks, line):
        p = Parser(self, toks, line)
        v = p.expr()
        p.finish()
        return v

    def call(self, name: str, args: list, line: int):
        fn = BUILTINS.get(name)
        if fn is None:
            raise ScriptError(line, f"undefined function {name!r}")
        try:
            return fn(self, line, *args)
        except TypeError as exc:
            raise ScriptError(line, f"{name}: {exc}") from None


class Parser:
    def __init__(self, interp: Interpreter, toks: list[str], line: int):
        self.i, self.toks, self.line, self.interp = 0, toks, line, interp

    def at_end(self) -> bool:
        return self.i >= len(self.toks)

    def peek(self):
        return None if self.at_end() else self.toks[self.i]

    def next(self):
        if self.at_end():
            raise ScriptError(self.line, "unexpected end of statement")
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, t):
        got = self.next()
        if got != t:
            raise ScriptError(self.line, f"expected {t!r}, got {got!r}")

    def finish(self):
        if not self.at_end():
            raise ScriptError(self.line, f"unexpected {self.peek()!r}")

    def expr(self):
        v = self.primary()
        while self.peek() == ".":
            self.next()
            idx = self.next()
            if not idx.isdigit():
                raise ScriptError(self.line, f"bad index {idx!r}")
            if not isinstance(v, tuple) or int(idx) >= len(v):
                raise ScriptError(self.line, f"cannot index {show(v)} with .{idx}")
            v = v[int(idx)]
        return v

    def number(self, neg=False) -> Lit:
        t = self.next()
        if not re.fullmatch(r"\d+(/\d+)?", t):
            raise ScriptError(self.line, f"expected a number, got {t!r}")
        value = Fraction(t)
        return Lit(("-" if neg else "") + t, -value if neg else value)

    def gtoken(self) -> str:
        t = self.next()
        if t == "-":
            return "-" + self.next()
        return t

    def element(self) -> Elem:
        A = self.interp._need_algebra(self.line)
        self.expect("[")
        names = []
        while self.peek() != "]":
            names.append(self.next())
            if self.peek() == ",":
                self.next()
        self.expect("]")
        try:
            return A.elem(names)
        except (KeyError, ValueError) as exc:
            raise ScriptError(self.line, str(exc)) from None

    def gset(self):
        self.expect("{")
        items = set()
        while self.peek() != "}":
            items.add(self.interp.gelem(self.gtoken(), self.line))
            if self.peek() == ",":
                self.next()
        self.expect("}")
        return frozenset(items)

    def primary(self):
        t = self.peek()
        if t is None:
            raise ScriptError(self.line, "missing expression")
        if t == "-":
            self.next()
            return self.number(neg=True)
        if re.fullmatch(r"\d+(/\d+)?", t):
            return self.number()
        if t == "[":
            return self.element()
        if t == "{":
            return self.gset()
        if t == "~":
            self.next()
            return core.Complement(self.gset())
        if t == "pu":
            self.next()
            return self.pu_literal()
        if re.fullmatch(r"[A-Za-z_][\w\-]*", t):
            self.next()
            if self.peek() == "(":
                return self.interp.call(t, self.arguments(), self.line)
            return self.variable(t)
        raise ScriptError(self.line, f"unexpected {t!r}")

    def arguments(self) -> list:
        self.expect("(")
        args = []
        while self.peek() != ")":
            v = self.expr()
            if self.peek() == ":":
                self.next()
                v = (v, self.gtoken())
                v = ("pair",) + v
            args.append(v)
            if self.peek() == ",":
                self.next()
            elif self.peek() != ")":
                raise ScriptError(self.line, f"expected ',' or ')', got {self.peek()!r}")
        self.expect(")")
        return args

    def pu_literal(self) -> core.PUFunc:
        A = self.interp._need_algebra(self.line)
        G = self.interp._need_group(self.line)
        self.expect("{")
        labels = {}
        while self.peek() != "}":
            g = self.interp.gelem(self.gtoken(), self.line)
            self.expect(":")
            e = self.element()
            if g in labels:
                raise ScriptError(self.line, f"label {G.format(g)} given twice")
            labels[g] = e.mask
            if self.peek() == ",":
                self.next()
        self.expect("}")
        try:
            return core.PUFunc(A, G, labels)
        except InvalidInput as exc:
            raise ScriptError(self.line, str(exc)) from None

    def variable(self, name):
        interp = self.interp
        if name in interp.env:
            return interp.env[name]
        if name == "id":
            return core.identity(interp._need_algebra(self.line), interp._need_group(self.line))
        if name == "one":
            return interp._need_algebra(self.line).one()
        if name == "zero":
            return interp._need_algebra(self.line).zero()
        if name == "true":
            return True
        if name == "false":
            return False
        if name == "etahom":
            G = interp._need_group(self.line)
            return PiSpec("etahom", G, lambda g: g)
        if name == "length":
            G = interp._need_group(self.line)
            return PiSpec("length", RationalsAdditive(), G.length)
        raise ScriptError(self.line, f"undefined identifier {name!r}")


# -- built-in functions -------------------------------------------------------


def _pu(v, line, what="argument"):
    if not isinstance(v, core.PUFunc):
        raise ScriptError(line, f"{what} must be a labeled partition, got {show(v)}")
    return v


def _elem(v, line):
    if not isinstance(v, Elem):
        raise ScriptError(line, f"expected an algebra element, got {show(v)}")
    return v


def _num(v, line) -> Fraction:
    if isinstance(v, Lit):
        return v.value
    if isinstance(v, Fraction):
        return v
    raise ScriptError(line, f"expected a number, got {show(v)}")


def _mul(it, line, *args):
    if not args:
        raise ScriptError(line, "mul needs at least one argument")
    out = _pu(args[0], line)
    for b in args[1:]:
        out = core.multiply(out, _pu(b, line))
    return out


def _sigma(it, line, *pairs):
    A = it._need_algebra(line)
    G = it._need_group(line)
    labels = {}
    for p in pairs:
        if not (isinstance(p, tuple) and p and p[0] == "pair"):
            raise ScriptError(line, "sigma takes cell:label pairs")
        labels[_elem(p[1], line).mask] = it.gelem(p[2], line)
    try:
        q = PartitionOfUnity(frozenset(Elem(A, m) for m in labels))
        return core.sigma(q, G, labels)
    except InvalidInput as exc:
        raise ScriptError(line, str(exc)) from None


def _support(it, line, a, T):
    a = _pu(a, line)
    if isinstance(T, frozenset) or isinstance(T, core.Complement):
        return core.support(a, T)
    raise ScriptError(line, "support takes a set {…} or a complement ~{…}")


def _reduce(it, line, k):
    k = int(_num(k, line))
    G = it._need_group(line)
    if not isinstance(G, (Integers, Cyclic)) or (isinstance(G, Cyclic) and G.order % k):
        raise ScriptError(line, f"reduction mod {k} is not a homomorphism on {G!r}")
    return PiSpec(f"reduce({k})", Cyclic(k), lambda g: g % k)


def _pisharp(it, line, spec, a):
    a = _pu(a, line)
    if not isinstance(spec, PiSpec):
        raise ScriptError(line, "pisharp takes etahom or reduce(k)")
    pi = lifting.eta_pi(a.algebra, a.group, spec.target, spec.fn, a.support)
    return lifting.pi_sharp(pi, a)


def _fbullet(it, line, spec, a):
    a = _pu(a, line)
    if not isinstance(spec, PiSpec):
        raise ScriptError(line, "fbullet takes length, etahom or reduce(k)")
    return lifting.f_bullet(spec.fn, a, spec.target)


def _trap_decompose(it, line, a, eps):
    a = _pu(a, line)
    phi = it._need_phi(line)
    G = a.group
    V = FiniteSubset(G, [G.identity], check=False)
    return tuple(trap_decompose(phi, a, V, _num(eps, line)))


def _prod(it, line, seq):
    if not isinstance(seq, tuple) or not seq:
        raise ScriptError(line, "prod takes a nonempty tuple")
    return _mul(it, line, *seq)


def _postype(it, line, *values):
    G = it._need_group(line)
    if not G.finite:
        raise ScriptError(line, "positive-type functions need a finite group")
    els = G.elements()
    if len(values) != len(els):
        raise ScriptError(line, f"postype needs {len(els)} values in element order")
    return PosTypeFn(G, {g: GaussQ(_num(v, line)) for g, v in zip(els, values)})


def _lift(it, line, f, a):
    if not isinstance(f, PosTypeFn):
        raise ScriptError(line, "lift takes a postype function")
    return pos_type_lift(f, it._need_phi(line), _pu(a, line))


def _in_nbhd(it, line, a, U, eps):
    a = _pu(a, line)
    if not isinstance(U, frozenset):
        raise ScriptError(line, "in_nbhd takes a set {…} of labels")
    return in_nbhd(it._need_phi(line), a, PUNbhd(it._need_phi(line), FiniteSubset(a.group, U), _num(eps, line)))


BUILTINS: dict[str, Callable] = {
    "mul": _mul,
    "inv": lambda it, line, a: core.inverse(_pu(a, line)),
    "power": lambda it, line, a, k: core.power(_pu(a, line), int(_num(k, line))),
    "eta": lambda it, line, g: core.eta(it._need_algebra(line), it._need_group(line), it.gelem(g, line)),
    "sigma": _sigma,
    "support": _support,
    "offe": lambda it, line, a: Elem(_pu(a, line).algebra, core.off_identity_mask(_pu(a, line))),
    "dphi": lambda it, line, a, b: core.d_phi(it._need_phi(line), _pu(a, line), _pu(b, line)),
    "phi": lambda it, line, A: it._need_phi(line)(_elem(A, line)),
    "gamma_contains": lambda it, line, A, a: core.gamma_contains(_elem(A, line), _pu(a, line)),
    "gamma_decompose": lambda it, line, c, A, B: core.gamma_decompose(_pu(c, line), _elem(A, line), _elem(B, line)),
    "trap_decompose": _trap_decompose,
    "prod": _prod,
    "len": lambda it, line, seq: Fraction(len(seq)) if isinstance(seq, tuple) else _elem_len(seq, line),
    "reduce": _reduce,
    "pisharp": _pisharp,
    "fbullet": _fbullet,
    "leq": lambda it, line, a, b: lifting.pu_leq(_pu(a, line), _pu(b, line)),
    "add": lambda it, line, a, b: lifting.pu_add(_pu(a, line), _pu(b, line)),
    "postype": _postype,
    "lift": _lift,
    "in_nbhd": _in_nbhd,
    "meet": lambda it, line, A, B: _elem(A, line) & _elem(B, line),
    "join": lambda it, line, A, B: _elem(A, line) | _elem(B, line),
    "compl": lambda it, line, A: ~_elem(A, line),
}


def _elem_len(v, line):
    raise ScriptError(line, f"len takes a tuple, got {show(v)}")


def run_script(source: str, base_dir: Path | None = None, out: Callable[[str], None] = print) -> Interpreter:
    it = Interpreter(base_dir, out)
    it.run(source)
    return it



