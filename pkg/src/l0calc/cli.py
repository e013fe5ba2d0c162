"""Command-line front end: ``l0calc <subcommand> [flags]``.

Exit codes: 0 success, 2 input error, 3 precondition failure, 4 script
assertion failure, 5 internal verification failure.  Structured output goes
to stdout and is byte-identical for identical inputs; the wall time of a
run is reported on stderr so that it never perturbs stdout.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping

from . import pathology, records, selftest, submeasure
from .algebra import MAX_ATOMS
from .errors import (
    AlgebraMismatch,
    CapacityError,
    InvalidInput,
    L0Error,
    PreconditionError,
    VerificationError,
)
from .pugroup.positive import GaussQ, PosTypeFn, pos_type_lift
from .script import AssertionFailed, run_script
from .submeasure import AtomMeasure, SetFunc, as_rational, rational_str

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_ASSERT, EXIT_VERIFY = 0, 2, 3, 4, 5

SUBCOMMANDS = ("analyze", "kappa", "kelley", "christensen", "group", "lift", "generate", "selftest")

# Largest n each subcommand accepts; --max-n may only lower these.
CAPS = {
    "analyze": MAX_ATOMS,
    "kappa": pathology.MAX_LP_ATOMS,
    "kelley": MAX_ATOMS,
    "christensen": pathology.MAX_LP_ATOMS,
    "lift": MAX_ATOMS,
    "generate": pathology.MAX_GENERATED_ATOMS,
}


class Job:
    """Parsed invocation: subcommand, input bytes and the shared flags."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.subcommand: str = args.subcommand
        self.structured = args.output == "structured"
        self.seed: int | None = args.seed
        self.path: str | None = args.input or getattr(args, "path", None)
        self.data: bytes | None = None
        cap = CAPS.get(self.subcommand)
        if args.max_n is not None:
            if args.max_n < 1:
                raise InvalidInput("--max-n must be positive")
            if cap is not None and args.max_n > cap:
                raise CapacityError(f"--max-n {args.max_n} exceeds the {self.subcommand} maximum of {cap}")
        self.max_n = args.max_n if args.max_n is not None else cap

    def read(self) -> bytes:
        if self.path is None:
            raise InvalidInput(f"{self.subcommand} needs an input file (--input PATH)")
        try:
            self.data = Path(self.path).read_bytes() if self.path != "-" else sys.stdin.buffer.read()
        except OSError as exc:
            raise InvalidInput(f"cannot read {self.path}: {exc.strerror}") from None
        return self.data

    def record(self):
        data = self.read()
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError:
            raise InvalidInput(f"{self.path}: not UTF-8 text") from None
        return records.loads(text, self.path)

    def check_size(self, n: int) -> None:
        if self.max_n is not None and n > self.max_n:
            raise CapacityError(f"{n} atoms exceed the cap of {self.max_n} for {self.subcommand}")

    def epsilon(self) -> Fraction:
        if self.args.epsilon is None:
            raise InvalidInput("--epsilon P/Q is required")
        return as_rational(self.args.epsilon)


# -- helpers ------------------------------------------------------------------


def _setfunc(job: Job, rec) -> SetFunc:
    where = job.path or "input"
    try:
        phi = records.setfunc_from_record(rec, path=where)
    except InvalidInput as exc:
        msg = str(exc)
        raise InvalidInput(msg if msg.startswith(where) else f"{where}: {msg}") from None
    job.check_size(phi.algebra.n)
    return phi


def _parse_order(text: str, phi: SetFunc) -> tuple[int, ...]:
    algebra = phi.algebra
    out = []
    for tok in (t.strip() for t in text.split(",")):
        if tok in algebra.atoms:
            out.append(algebra.index(tok))
        elif tok.isdigit() and int(tok) < algebra.n:
            out.append(int(tok))
        else:
            raise InvalidInput(f"--order: unknown atom {tok!r}")
    return tuple(out)


# -- subcommands ----------------------------------------------------------------


def cmd_analyze(job: Job) -> dict:
    phi = _setfunc(job, job.record())
    report = submeasure.classify(phi, seed=job.seed)
    for flag, c in report.counterexamples.items():
        if not submeasure.replay_counterexample(phi, flag, c):
            raise VerificationError(f"counterexample for {flag} does not replay")
    out = {"report": records.report_to_record(report), "n": str(phi.algebra.n)}
    out["diffuseness"] = out["two_valued_domination"] = out["kappa_preview"] = None
    if report.monotone:
        d = submeasure.diffuseness(phi)
        out["diffuseness"] = rational_str(d.value)
        out["diffuseness_exhaustive"] = d.exhaustive
        out["two_valued_domination"] = rational_str(submeasure.two_valued_domination(phi))
    if report.is_submeasure and phi.total() > 0 and phi.algebra.n <= pathology.MAX_LP_ATOMS:
        out["kappa_preview"] = rational_str(pathology.kappa(phi))
    out["verified"] = True
    return out


def _text_analyze(res: Mapping) -> list[str]:
    rep = res["report"]
    mark = {True: "✓", False: "✗"}
    lines = [f"atoms: {res['n']}"]
    for flag in ("monotone", "subadditive", "submodular", "additive", "strictly_positive"):
        lines.append(f"  {flag:<18} {mark[rep[flag]]}")
        if flag in rep["counterexamples"]:
            c = rep["counterexamples"][flag]
            lines.append(f"    witness A={{{','.join(c['A'])}}} B={{{','.join(c['B'])}}}: {c['lhs']} vs {c['rhs']}")
    if rep["sampled"]:
        lines.append(f"  (subadditivity sampled with seed {rep['seed']})")
    lines.append(f"verdict: {rep['verdict']}")
    for key in ("diffuseness", "two_valued_domination", "kappa_preview"):
        lines.append(f"{key}: {res[key] if res[key] is not None else 'n/a'}")
    return lines


def cmd_kappa(job: Job) -> dict:
    rec = job.record()
    if job.args.verify:
        phi, cert = records.domination_from_record(rec, job.path)
        job.check_size(phi.algebra.n)
        cert.verify(phi)
        if rec.get("kappa") is not None and as_rational(rec["kappa"]) != pathology.kappa(phi, cert):
            raise VerificationError("recorded κ differs from M/φ(1)")
        return {"M": rational_str(cert.value), "kappa": rec.get("kappa"), "verified": True}
    phi = _setfunc(job, rec)
    cert = pathology.max_dominated_measure(phi)
    cert.verify(phi)
    k = pathology.kappa(phi, cert) if phi.total() > 0 else None
    return records.domination_to_record(phi, cert, k)


def cmd_kelley(job: Job) -> dict:
    rec = job.record()
    if job.args.verify:
        phi, km = records.kelley_from_record(rec, job.path)
        job.check_size(phi.algebra.n)
        km.verify(phi)
        replay = pathology.kelley_greedy(phi, km.order)
        if replay.nu.weights != km.nu.weights:
            raise VerificationError("recorded ν differs from the greedy replay")
        return {"nu": rec["nu"], "order": rec["order"], "verified": True}
    phi = _setfunc(job, rec)
    order = _parse_order(job.args.order, phi) if job.args.order else None
    km = pathology.kelley_greedy(phi, order)
    return records.kelley_to_record(phi, km)


def cmd_christensen(job: Job) -> dict:
    rec = job.record()
    if job.args.verify:
        phi, eps, w = records.witness_from_record(rec, job.path)
        job.check_size(phi.algebra.n)
        if w is None:
            if pathology.christensen_witness(phi, eps) is not None:
                raise VerificationError("a witness exists although the record claims none")
        else:
            w.verify(phi)
            pathology.witness_mass_bound(w, phi)
        return {"epsilon": rational_str(eps), "witness_present": w is not None, "verified": True}
    phi = _setfunc(job, rec)
    eps = job.epsilon()
    w = pathology.christensen_witness(phi, eps)
    mb = None
    if w is not None:
        w.verify(phi)
        mb = pathology.witness_mass_bound(w, phi)
    return records.witness_to_record(phi, eps, w, mb)


def cmd_group(job: Job) -> dict:
    data = job.read()
    try:
        source = data.decode("utf-8")
    except UnicodeDecodeError:
        raise InvalidInput(f"{job.path}: not UTF-8 text") from None
    lines: list[str] = []
    emit: Callable[[str], None] = lines.append if job.structured else print
    base = Path(job.path).parent if job.path != "-" else Path(".")
    try:
        it = run_script(source, base, emit)
    except AssertionFailed:
        if job.structured:
            for line in lines:
                print(line, file=sys.stderr)
        raise
    return {"transcript": it.transcript, "asserts": str(it.asserts), "verified": True}


def cmd_lift(job: Job) -> dict:
    rec = job.record()
    path = job.path
    if not isinstance(rec, Mapping):
        raise InvalidInput(f"{path}: expected an object")
    a = records.pufunc_from_record(rec, path=path)
    job.check_size(a.algebra.n)
    for key in ("f", "measure"):
        if key not in rec:
            raise InvalidInput(f"{path}: missing field {key!r}")
    fvals = {}
    for key, val in rec["f"].items():
        fvals[a.group.parse(key)] = GaussQ.of(val)
    f = PosTypeFn(a.group, fvals)
    weights = rec["measure"]
    try:
        mu = AtomMeasure(a.algebra, tuple(as_rational(weights[x]) for x in a.algebra.atoms))
    except KeyError as exc:
        raise InvalidInput(f"{path}.measure: no weight for atom {exc.args[0]}") from None
    value = pos_type_lift(f, mu, a)
    return {
        "value": str(value),
        "f_identity": str(f(a.group.identity)),
        "pufunc": records.pufunc_to_record(a),
        "verified": True,
    }


def cmd_generate(job: Job) -> dict:
    kind = job.args.kind
    if kind == "random_cover" and job.seed is None:
        raise InvalidInput("random_cover needs --seed")
    phi = pathology.generate(kind, job.args.params, seed=job.seed)
    job.check_size(phi.algebra.n)
    return records.setfunc_to_record(phi)


def cmd_selftest(job: Job) -> dict:
    if job.args.level >= 2 and job.seed is None:
        raise InvalidInput("selftest --level 2 needs --seed")
    results = selftest.run(job.args.level, job.seed)
    suites = [{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results]
    failed = [r.name for r in results if not r.ok]
    return {"level": str(job.args.level), "suites": suites, "count": str(len(results)),
            "failed": failed, "verified": not failed}


HANDLERS = {
    "analyze": cmd_analyze,
    "kappa": cmd_kappa,
    "kelley": cmd_kelley,
    "christensen": cmd_christensen,
    "group": cmd_group,
    "lift": cmd_lift,
    "generate": cmd_generate,
    "selftest": cmd_selftest,
}


# -- text rendering ----------------------------------------------------------------


def render_text(sub: str, res: Mapping) -> list[str]:
    if sub == "analyze":
        return _text_analyze(res)
    if sub == "selftest":
        lines = [f"{'PASS' if s['ok'] else 'FAIL'}  {s['name']}  ({s['detail']})" for s in res["suites"]]
        lines.append(f"{res['count']} suites, {len(res['failed'])} failed")
        return lines
    if sub == "group":
        return [f"{res['asserts']} assertions passed"]
    if sub in ("kappa", "kelley", "christensen", "lift") and "submeasure" in res:
        res = {k: v for k, v in res.items() if k != "submeasure"}
    return [f"{k}: {_flat(v)}" for k, v in sorted(res.items())]


def _flat(v) -> str:
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_flat(x)}" for k, x in sorted(v.items())) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_flat(x) for x in v) + "]"
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


# -- argument parsing ----------------------------------------------------------------


def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--input", metavar="PATH", help="input record or script ('-' for stdin)", **d)
    p.add_argument("--output", choices=("text", "structured"), help="output mode (default text)", **d)
    p.add_argument("--seed", type=_u64, metavar="U64", help="seed for sampled checks", **d)
    p.add_argument("--epsilon", metavar="P/Q", help="exact rational level", **d)
    p.add_argument("--max-n", type=int, metavar="K", dest="max_n", help="lower the atom cap", **d)
    p.add_argument("--verify", action="store_true", help="replay a certificate record instead of computing one", **d)
    p.add_argument("--order", metavar="ATOMS", help="comma-separated atom order for kelley", **d)


def _u64(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an unsigned 64-bit integer: {text!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed out of range: {text}")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="l0calc", description="Exact computations with submeasures and labeled partitions of unity.")
    _common(p, suppress=True)
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    helps = {
        "analyze": "classify a set function and report diffuseness",
        "kappa": "largest dominated measure M(φ) and κ(φ) with an LP certificate",
        "kelley": "greedy measure ν ≤ φ with ν(1) = φ(1) for submodular φ",
        "christensen": "covering witness at level --epsilon",
        "group": "run a group-calculus script",
        "lift": "lift a positive-type function along a measure",
        "generate": "emit a generated set-function record",
        "selftest": "run the built-in verification suites",
    }
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        _common(sp, suppress=True)
        if name == "generate":
            sp.add_argument("kind", help="copoints | ell_subsets_cover | random_cover | concave_cardinality")
            sp.add_argument("params", nargs="*")
        elif name == "selftest":
            sp.add_argument("--level", type=int, choices=(1, 2), default=1)
        else:
            sp.add_argument("path", nargs="?", help="input file (alternative to --input)")
    return p


def _finish_defaults(args: argparse.Namespace) -> argparse.Namespace:
    for key, val in (("input", None), ("output", "text"), ("seed", None), ("epsilon", None),
                     ("max_n", None), ("verify", False), ("order", None)):
        if not hasattr(args, key):
            setattr(args, key, val)
    return args


def main(argv: list[str] | None = None) -> int:
    args = _finish_defaults(build_parser().parse_args(argv))
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        job = Job(args)
        res = HANDLERS[job.subcommand](job)
        if job.subcommand == "generate":
            # the generated record itself, so it can be fed straight back in
            sys.stdout.write(records.dumps(res))
        elif job.structured:
            out = {"subcommand": job.subcommand, **res}
            if job.data is not None:
                out["input_sha256"] = records.digest(job.data)
            sys.stdout.write(records.dumps(out))
        else:
            for line in render_text(job.subcommand, res):
                print(line)
        if res.get("verified") is False:
            code = EXIT_VERIFY if job.subcommand != "selftest" else 1
    except AssertionFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_ASSERT
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        code = EXIT_VERIFY
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness: {exc.witness}", file=sys.stderr)
        code = EXIT_PRECONDITION
    except (InvalidInput, CapacityError, AlgebraMismatch) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        code = EXIT_INPUT
    except L0Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_VERIFY
    print(f"wall time: {time.perf_counter() - t0:.3f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
