"""Structured text records shared by the command line and the library.

All records are JSON objects whose scalars are strings (rationals are
``"p/q"`` or integer strings).  Output is canonical: sorted keys, fixed
indentation, trailing newline, so equal inputs give byte-identical files.
Elements serialize as arrays of atom names in atom order.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any, Mapping

from .algebra import Elem, FiniteAlgebra, PartitionOfUnity, VeeMonoidHom
from .errors import InvalidInput
from .pathology import ChristensenWitness, DominationCertificate, KelleyMeasure, MassBound
from .pugroup.core import PUFunc
from .pugroup.groups import Group, group_from_record
from .submeasure import AtomMeasure, CoverCount, MaxOf, Pullback, SetFunc, Table, as_rational, rational_str


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _field(rec: Mapping, key: str, path: str):
    if not isinstance(rec, Mapping):
        raise InvalidInput(f"{path}: expected an object")
    if key not in rec:
        raise InvalidInput(f"{path}: missing field {key!r}")
    return rec[key]


def _rational(x, path: str) -> Fraction:
    try:
        return as_rational(x)
    except InvalidInput as exc:
        raise InvalidInput(f"{path}: {exc}") from None


# -- algebra ------------------------------------------------------------------


def algebra_from_record(rec: Mapping, path: str = "record") -> FiniteAlgebra:
    atoms = _field(rec, "atoms", path)
    if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
        raise InvalidInput(f"{path}.atoms: expected an array of strings")
    try:
        return FiniteAlgebra(tuple(atoms))
    except ValueError as exc:
        raise InvalidInput(f"{path}.atoms: {exc}") from None


def algebra_to_record(algebra: FiniteAlgebra) -> dict:
    return {"atoms": list(algebra.atoms)}


def elem_to_record(e: Elem) -> list[str]:
    return e.names()


def mask_to_record(algebra: FiniteAlgebra, mask: int) -> list[str]:
    return algebra.names(mask)


def elem_from_record(algebra: FiniteAlgebra, names, path: str = "element") -> Elem:
    if not isinstance(names, list) or not all(isinstance(a, str) for a in names):
        raise InvalidInput(f"{path}: expected an array of atom names")
    try:
        return algebra.elem(names)
    except (KeyError, ValueError) as exc:
        raise InvalidInput(f"{path}: {exc}") from None


def partition_to_record(q: PartitionOfUnity) -> list[list[str]]:
    return [c.names() for c in q]


# -- set functions ------------------------------------------------------------


def setfunc_from_record(rec: Mapping, algebra: FiniteAlgebra | None = None, path: str = "record") -> SetFunc:
    if algebra is None or "atoms" in rec:
        algebra = algebra_from_record(rec, path)
    kind = _field(rec, "kind", path)
    if kind == "table":
        values = _field(rec, "values", path)
        if not isinstance(values, Mapping):
            raise InvalidInput(f"{path}.values: expected an object")
        table = {}
        for key, v in values.items():
            try:
                m = int(key)
            except ValueError:
                raise InvalidInput(f"{path}.values: key {key!r} is not a decimal mask") from None
            if not 0 <= m < algebra.size:
                raise InvalidInput(f"{path}.values: mask {m} out of range")
            table[m] = _rational(v, f"{path}.values[{key}]")
        return Table(algebra, table)
    if kind == "cover":
        fam = _field(rec, "family", path)
        if not isinstance(fam, list):
            raise InvalidInput(f"{path}.family: expected an array")
        family = tuple(elem_from_record(algebra, s, f"{path}.family[{i}]").mask for i, s in enumerate(fam))
        cost = _rational(rec.get("unit_cost", "1"), f"{path}.unit_cost")
        return CoverCount(algebra, family, cost)
    if kind == "measure":
        w = _field(rec, "weights", path)
        if not isinstance(w, Mapping):
            raise InvalidInput(f"{path}.weights: expected an object keyed by atom")
        unknown = set(w) - set(algebra.atoms)
        if unknown:
            raise InvalidInput(f"{path}.weights: unknown atom {sorted(unknown)[0]!r}")
        return AtomMeasure(algebra, tuple(_rational(w.get(a, "0"), f"{path}.weights.{a}") for a in algebra.atoms))
    if kind == "max":
        parts = _field(rec, "of", path)
        if not isinstance(parts, list) or not parts:
            raise InvalidInput(f"{path}.of: expected a nonempty array")
        return MaxOf(algebra, tuple(setfunc_from_record(p, algebra, f"{path}.of[{i}]") for i, p in enumerate(parts)))
    if kind == "pullback":
        outer = setfunc_from_record(_field(rec, "outer", path), algebra, f"{path}.outer")
        hom = _field(rec, "hom", path)
        table = _field(hom, "table", f"{path}.hom")
        if not isinstance(table, Mapping):
            raise InvalidInput(f"{path}.hom.table: expected an object")
        entries = [0] * algebra.size
        seen = set()
        for key, names in table.items():
            try:
                m = int(key)
            except ValueError:
                raise InvalidInput(f"{path}.hom.table: key {key!r} is not a decimal mask") from None
            if not 0 <= m < algebra.size:
                raise InvalidInput(f"{path}.hom.table: mask {m} out of range")
            entries[m] = elem_from_record(outer.algebra, names, f"{path}.hom.table[{key}]").mask
            seen.add(m)
        missing = [m for m in range(algebra.size) if m not in seen]
        if missing:
            raise InvalidInput(f"{path}.hom.table: no image for mask {missing[0]}")
        return Pullback(outer, VeeMonoidHom(algebra, outer.algebra, tuple(entries)))
    raise InvalidInput(f"{path}.kind: unknown set-function kind {kind!r}")


def setfunc_to_record(phi: SetFunc, with_atoms: bool = True) -> dict:
    algebra = phi.algebra
    rec: dict
    if isinstance(phi, Table):
        rec = {"kind": "table", "values": {str(m): rational_str(v) for m, v in enumerate(phi.entries)}}
    elif isinstance(phi, CoverCount):
        rec = {"kind": "cover", "family": [algebra.names(s) for s in phi.family],
               "unit_cost": rational_str(phi.unit_cost)}
    elif isinstance(phi, AtomMeasure):
        rec = {"kind": "measure", "weights": {a: rational_str(w) for a, w in zip(algebra.atoms, phi.weights)}}
    elif isinstance(phi, MaxOf):
        rec = {"kind": "max", "of": [setfunc_to_record(mu, False) for mu in phi.measures]}
    elif isinstance(phi, Pullback):
        rec = {"kind": "pullback", "outer": setfunc_to_record(phi.outer, True),
               "hom": {"table": {str(m): phi.outer.algebra.names(t) for m, t in enumerate(phi.hom.table)}}}
    else:
        rec = {"kind": "table", "values": {str(m): rational_str(v) for m, v in enumerate(phi.values)}}
    if with_atoms:
        rec = {"atoms": list(algebra.atoms), **rec}
    return rec


# -- groups and labeled partitions --------------------------------------------


def pufunc_from_record(rec: Mapping, algebra: FiniteAlgebra | None = None, group: Group | None = None,
                       path: str = "record") -> PUFunc:
    if algebra is None or "atoms" in rec:
        algebra = algebra_from_record(rec, path)
    if group is None or "group" in rec:
        try:
            group = group_from_record(_field(rec, "group", path))
        except InvalidInput as exc:
            raise InvalidInput(f"{path}.group: {exc}") from None
    labels = _field(rec, "labels", path)
    if not isinstance(labels, Mapping):
        raise InvalidInput(f"{path}.labels: expected an object")
    parsed = {}
    for key, names in labels.items():
        try:
            g = group.parse(key)
        except InvalidInput as exc:
            raise InvalidInput(f"{path}.labels: {exc}") from None
        parsed[g] = elem_from_record(algebra, names, f"{path}.labels[{key}]").mask
    try:
        return PUFunc(algebra, group, parsed)
    except InvalidInput as exc:
        raise InvalidInput(f"{path}.labels: {exc}") from None


def pufunc_to_record(a: PUFunc) -> dict:
    return {
        "atoms": list(a.algebra.atoms),
        "group": a.group.record(),
        "labels": {a.group.format(g): a.algebra.names(m) for g, m in a.items()},
    }


# -- certificates -------------------------------------------------------------


def domination_to_record(phi: SetFunc, cert: DominationCertificate, kappa: Fraction | None) -> dict:
    algebra = phi.algebra
    return {
        "M": rational_str(cert.value),
        "kappa": None if kappa is None else rational_str(kappa),
        "primal": {a: rational_str(w) for a, w in zip(algebra.atoms, cert.primal.weights)},
        "dual": [{"set": algebra.names(m), "y": rational_str(y)} for m, y in sorted(cert.dual.items())],
        "dual_cost": rational_str(cert.dual_cost),
        "verified": True,
        "submeasure": setfunc_to_record(phi),
    }


def domination_from_record(rec: Mapping, path: str = "certificate") -> tuple[SetFunc, DominationCertificate]:
    phi = setfunc_from_record(_field(rec, "submeasure", path), path=f"{path}.submeasure")
    algebra = phi.algebra
    primal = _field(rec, "primal", path)
    weights = tuple(_rational(_field(primal, a, f"{path}.primal"), f"{path}.primal.{a}") for a in algebra.atoms)
    dual = {}
    for i, item in enumerate(_field(rec, "dual", path)):
        m = elem_from_record(algebra, _field(item, "set", f"{path}.dual[{i}]"), f"{path}.dual[{i}].set").mask
        dual[m] = dual.get(m, Fraction(0)) + _rational(_field(item, "y", f"{path}.dual[{i}]"), f"{path}.dual[{i}].y")
    value = _rational(_field(rec, "M", path), f"{path}.M")
    cost = _rational(rec.get("dual_cost", _field(rec, "M", path)), f"{path}.dual_cost")
    return phi, DominationCertificate(value, AtomMeasure(algebra, weights), dual, cost)


def kelley_to_record(phi: SetFunc, km: KelleyMeasure) -> dict:
    algebra = phi.algebra
    return {
        "order": [algebra.atoms[i] for i in km.order],
        "nu": {a: rational_str(w) for a, w in zip(algebra.atoms, km.nu.weights)},
        "phi_total": rational_str(phi.total()),
        "verified": True,
        "submeasure": setfunc_to_record(phi),
    }


def kelley_from_record(rec: Mapping, path: str = "certificate") -> tuple[SetFunc, KelleyMeasure]:
    phi = setfunc_from_record(_field(rec, "submeasure", path), path=f"{path}.submeasure")
    algebra = phi.algebra
    order = _field(rec, "order", path)
    try:
        order = tuple(algebra.index(a) for a in order)
    except (KeyError, ValueError) as exc:
        raise InvalidInput(f"{path}.order: {exc}") from None
    nu = _field(rec, "nu", path)
    weights = tuple(_rational(_field(nu, a, f"{path}.nu"), f"{path}.nu.{a}") for a in algebra.atoms)
    return phi, KelleyMeasure(order, AtomMeasure(algebra, weights))


def witness_to_record(phi: SetFunc, eps: Fraction, w: ChristensenWitness | None, mb: MassBound | None) -> dict:
    algebra = phi.algebra
    rec: dict = {"epsilon": rational_str(eps), "submeasure": setfunc_to_record(phi), "verified": True}
    if w is None:
        rec["witness"] = None
        return rec
    rec["witness"] = {
        "epsilon": rational_str(w.epsilon),
        "m": str(w.m),
        "sets": [{"set": algebra.names(m), "multiplicity": str(k)} for m, k in sorted(w.multiplicities().items())],
        "partition": partition_to_record(w.partition),
        "min_coverage": str(w.min_coverage),
    }
    if mb is not None:
        rec["mass_bound"] = {"M": rational_str(mb.M), "bound": rational_str(mb.bound)}
    return rec


def witness_from_record(rec: Mapping, path: str = "certificate") -> tuple[SetFunc, Fraction, ChristensenWitness | None]:
    phi = setfunc_from_record(_field(rec, "submeasure", path), path=f"{path}.submeasure")
    algebra = phi.algebra
    eps = _rational(_field(rec, "epsilon", path), f"{path}.epsilon")
    w = _field(rec, "witness", path)
    if w is None:
        return phi, eps, None
    wp = f"{path}.witness"
    sets: list[Elem] = []
    for i, item in enumerate(_field(w, "sets", wp)):
        e = elem_from_record(algebra, _field(item, "set", f"{wp}.sets[{i}]"), f"{wp}.sets[{i}].set")
        try:
            k = int(_field(item, "multiplicity", f"{wp}.sets[{i}]"))
        except ValueError:
            raise InvalidInput(f"{wp}.sets[{i}].multiplicity: not an integer") from None
        sets.extend([e] * k)
    cells = [elem_from_record(algebra, c, f"{wp}.partition[{i}]") for i, c in enumerate(_field(w, "partition", wp))]
    try:
        part = PartitionOfUnity(frozenset(cells))
        m = int(_field(w, "m", wp))
        cov = int(_field(w, "min_coverage", wp))
    except ValueError as exc:
        raise InvalidInput(f"{wp}: {exc}") from None
    return phi, eps, ChristensenWitness(_rational(_field(w, "epsilon", wp), f"{wp}.epsilon"), m, tuple(sets), part, cov)


def report_to_record(report) -> dict:
    out = {k: v for k, v in report.flags().items()}
    out["counterexamples"] = {
        flag: {"A": c.a.names(), "B": c.b.names(), "lhs": rational_str(c.lhs), "rhs": rational_str(c.rhs)}
        for flag, c in sorted(report.counterexamples.items())
    }
    out["sampled"] = report.sampled
    if report.sampled:
        out["seed"] = str(report.seed)
    out["verdict"] = report.verdict
    return out
