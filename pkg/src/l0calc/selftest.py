"""Built-in verification suites run by ``l0calc selftest``.

Level 1 runs small exhaustive checks only and needs no seed.  Level 2 adds
seeded volume checks; the seed is mandatory there.  Every suite raises on
the first violation and returns a short summary string otherwise.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

from . import algebra as alg
from . import pathology as pa
from . import submeasure as sm
from .algebra import Elem, FiniteAlgebra, PartitionOfUnity, VeeMonoidHom
from .pugroup import core, escape, lifting, positive
from .pugroup.boolean_group import to_pu, to_symm_diff_group
from .pugroup.groups import Cyclic, Integers, check_group_axioms, symmetric_group

BELL = [1, 1, 2, 5, 15, 52, 203, 877]

SUITES: list[tuple[int, str, Callable]] = []


def suite(level: int, name: str):
    def deco(fn):
        SUITES.append((level, name, fn))
        return fn
    return deco


class SuiteFailure(AssertionError):
    pass


def check(cond: bool, msg: str) -> None:
    if not cond:
        raise SuiteFailure(msg)


def _alg(n: int) -> FiniteAlgebra:
    return FiniteAlgebra.of_size(n)


def _min2(n=3) -> sm.Table:
    return sm.concave_cardinality(_alg(n), [min(k, 2) for k in range(n + 1)])


# -- algebra -------------------------------------------------------------------


@suite(1, "algebra.lattice_laws_n4")
def _lattice(seed=None):
    A = _alg(4)
    els = list(A.elements())
    for a, b, c in product(els, repeat=3):
        check((a & (b | c)) == ((a & b) | (a & c)), "distributivity")
        check((a | (a & b)) == a, "absorption")
        check(~(a & b) == (~a | ~b), "De Morgan")
        check(((a & b) & c) == (a & (b & c)), "associativity")
    return f"{len(els) ** 3} triples"


@suite(1, "algebra.symm_diff_law")
def _symm(seed=None):
    A = _alg(4)
    for a, b in product(A.elements(), repeat=2):
        check((a ^ b) == ((a | b) & ~(a & b)), "A △ B definition")
    return "256 pairs"


@suite(1, "algebra.partition_of_unity_examples")
def _pou(seed=None):
    A = FiniteAlgebra(("p", "q", "r"))
    check(bool(alg.is_partition_of_unity([A.elem("p"), A.elem("q"), A.elem("r")])), "atoms")
    r = alg.is_partition_of_unity([A.elem("p"), A.elem(["p", "q"])])
    check(not r and r.clause == "disjointness", "disjointness clause")
    r = alg.is_partition_of_unity([A.elem(["p", "q"])])
    check(not r and r.clause == "join ≠ 1", "join clause")
    check(alg.is_partition_of_unity([]).clause == "join ≠ 1", "empty cell set")
    return "4 cases"


@suite(1, "algebra.bell_numbers")
def _bell(seed=None):
    for n in range(1, 8):
        parts = list(alg.enumerate_partitions(_alg(n)))
        check(len(parts) == BELL[n], f"B({n})")
        check(len(set(parts)) == len(parts), "duplicates")
    return "n ≤ 7"


@suite(1, "algebra.refinement_directed")
def _directed(seed=None):
    parts = list(alg.enumerate_partitions(_alg(4)))
    for q in parts:
        for q2 in parts:
            r = alg.common_refinement(q, q2)
            check(alg.refines(q, r) and alg.refines(q2, r), "upper bound")
            for s in parts:
                if alg.refines(q, s) and alg.refines(q2, s):
                    check(alg.refines(r, s), "least upper bound")
    return f"{len(parts) ** 2} pairs"


@suite(1, "algebra.two_valued_homs")
def _twovalued(seed=None):
    A = _alg(6)
    for chi in alg.two_valued_homs(A):
        for a in range(A.size):
            check(chi.value(A.full ^ a) == 1 - chi.value(a), "complement")
        for a, b in product(range(0, A.size, 3), range(A.size)):
            check(chi.value(a & b) == chi.value(a) * chi.value(b), "meet")
    return "n = 6"


@suite(1, "algebra.quotient_projection")
def _quot(seed=None):
    A = FiniteAlgebra(("p", "q", "r"))
    Q, th = alg.quotient_by_ideal(A, alg.Ideal.generated_by([A.elem("r")]))
    check(Q.atoms == ("p", "q"), "atoms")
    check(th(A.elem(["p", "r"])) == Q.elem("p"), "θ({p,r})")
    check(th.is_boolean_hom(), "boolean hom")
    _, idm = alg.quotient_by_ideal(A, alg.Ideal.trivial(A))
    check(idm.table == tuple(range(8)), "trivial ideal")
    return "3 atoms"


@suite(1, "algebra.vee_hom_random_exhaustive")
def _veehom(seed=None):
    rng = random.Random(1)
    A, B = _alg(4), _alg(3)
    for _ in range(20):
        th = VeeMonoidHom.random(A, B, rng)
        for a, b in product(range(A.size), repeat=2):
            check(th.table[a | b] == th.table[a] | th.table[b], "join law")
    return "20 maps"


# -- submeasure ------------------------------------------------------------------


@suite(1, "submeasure.copoints3_values")
def _cp3(seed=None):
    phi = pa.copoints(3)
    check(phi.value(7) == 2, "φ(X) = 2")
    check(all(phi.value(1 << i) == 1 for i in range(3)), "singletons")
    return "ok"


@suite(1, "submeasure.materialize_agrees")
def _mat(seed=None):
    rng = random.Random(2)
    for _ in range(10):
        phi = pa.random_cover(6, 5, Fraction(1, 3), rng.randrange(1 << 30))
        dp = phi.values
        check(all(sm.min_cover_size(m, phi.family) * phi.unit_cost == dp[m] for m in range(64)), "B&B vs DP")
    return "10 covers, n = 6"


@suite(1, "submeasure.classify_min2")
def _cls(seed=None):
    r = sm.classify(_min2())
    check(r.monotone and r.subadditive and r.submodular and not r.additive, "flags")
    return r.verdict


@suite(1, "submeasure.classify_copoints3")
def _cls2(seed=None):
    phi = pa.copoints(3)
    r = sm.classify(phi)
    check(r.monotone and r.subadditive and not r.submodular, "flags")
    for flag, c in r.counterexamples.items():
        check(sm.replay_counterexample(phi, flag, c), f"{flag} replay")
    return r.verdict


@suite(1, "submeasure.measures_additive")
def _meas(seed=None):
    A = _alg(3)
    mu = sm.AtomMeasure(A, (Fraction(1, 2), Fraction(1, 3), 0))
    r = sm.classify(mu)
    check(r.is_measure and not r.strictly_positive, "flags")
    return r.verdict


@suite(1, "submeasure.maxof_not_additive")
def _maxof(seed=None):
    A = _alg(3)
    m1 = sm.AtomMeasure(A, (1, 0, 0))
    m2 = sm.AtomMeasure(A, (0, 1, 1))
    r = sm.classify(sm.MaxOf(A, (m1, m2)))
    check(r.is_submeasure and not r.additive, "flags")
    return r.verdict


@suite(1, "submeasure.cover_always_submeasure")
def _cov(seed=None):
    for N in range(2, 6):
        for ell in range(1, N + 1):
            r = sm.classify(pa.ell_subsets_cover(N, ell))
            check(r.is_submeasure, f"ℓ-cover {N},{ell}")
    return "N ≤ 5"


@suite(1, "submeasure.diffuse_equals_two_valued")
def _diff(seed=None):
    for prof in pa.all_concave_profiles(4):
        phi = sm.concave_cardinality(_alg(4), prof)
        d = sm.diffuseness(phi)
        check(d.value == sm.two_valued_domination(phi) == d.atom_max, "equality")
        check((d.value == 0) == phi.is_zero(), "zero iff")
    return "all concave profiles, n = 4"


@suite(1, "submeasure.pullback_preserves")
def _pb(seed=None):
    rng = random.Random(3)
    A = _alg(3)
    phi = _min2(3)
    for _ in range(30):
        th = VeeMonoidHom.random(A, A, rng)
        r = sm.classify(sm.pullback(phi, th))
        check(r.is_submeasure and r.submodular, "pullback")
    return "30 maps"


@suite(1, "submeasure.quotient_pullback")
def _qpb(seed=None):
    A = FiniteAlgebra(("p", "q", "r"))
    Q, th = alg.quotient_by_ideal(A, alg.Ideal.generated_by([A.elem("r")]))
    pb = sm.pullback(sm.AtomMeasure.uniform(Q, Fraction(1, 3)), th)
    check(pb(A.elem("r")) == 0 and pb(A.elem(["p", "r"])) == Fraction(1, 3), "values")
    return "ok"


@suite(1, "submeasure.continuity_modulus")
def _cm(seed=None):
    A = FiniteAlgebra(("p", "q", "r"))
    Q, th = alg.quotient_by_ideal(A, alg.Ideal.generated_by([A.elem("r")]))
    mod = sm.continuity_modulus(th, sm.AtomMeasure.uniform(A), sm.AtomMeasure.uniform(Q))
    check(sm.AtomMeasure.uniform(Q).value(1) == Fraction(1, 2), "uniform weight")
    check(mod(Fraction(1, 3)) == Fraction(1, 2), "modulus(1/3)")
    B = _alg(3)
    z = sm.continuity_modulus(VeeMonoidHom.zero(B, B), _min2(), _min2())
    check(all(v == 0 for _, v in z.steps), "zero map")
    return "ok"


# -- pathology --------------------------------------------------------------------


@suite(1, "pathology.copoints3_M")
def _m3(seed=None):
    phi = pa.copoints(3)
    cert = pa.max_dominated_measure(phi)
    check(cert.value == Fraction(3, 2) and pa.kappa(phi) == Fraction(3, 4), "M, κ")
    check(cert.primal.weights == (Fraction(1, 2),) * 3, "μ*")
    return "M = 3/2"


@suite(1, "pathology.measures_M")
def _mm(seed=None):
    A = _alg(3)
    mu = sm.AtomMeasure(A, (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))
    check(pa.max_dominated_measure(mu).value == 1, "M = 1")
    check(pa.kappa(mu) == 1, "κ = 1")
    return "ok"


@suite(1, "pathology.zero_M")
def _mz(seed=None):
    z = sm.Table(_alg(3), [0] * 8)
    check(pa.max_dominated_measure(z).value == 0, "M = 0")
    return "ok"


@suite(1, "pathology.duality_copoints")
def _dual_cp(seed=None):
    for N in range(2, 6):
        pa.max_dominated_measure(pa.copoints(N)).verify(pa.copoints(N))
    return "N ≤ 5"


@suite(1, "pathology.duality_ell_covers")
def _dual_ell(seed=None):
    count = 0
    for N in range(1, 6):
        for ell in range(1, N + 1):
            phi = pa.ell_subsets_cover(N, ell)
            pa.max_dominated_measure(phi).verify(phi)
            count += 1
    return f"{count} instances"


@suite(1, "pathology.duality_concave")
def _dual_cc(seed=None):
    count = 0
    for n in range(1, 5):
        for prof in pa.all_concave_profiles(n):
            phi = sm.concave_cardinality(_alg(n), prof)
            cert = pa.max_dominated_measure(phi)
            check(cert.value == phi.total(), "submodular M = φ(1)")
            count += 1
    return f"{count} instances"


@suite(1, "pathology.kelley_min2")
def _kel(seed=None):
    km = pa.kelley_greedy(_min2(), (0, 1, 2))
    check(km.nu.weights == (1, 1, 0), "ν = (1,1,0)")
    return "ok"


@suite(1, "pathology.kelley_all_orders")
def _kel2(seed=None):
    from itertools import permutations
    for prof in pa.all_concave_profiles(4):
        phi = sm.concave_cardinality(_alg(4), prof)
        for order in permutations(range(4)):
            pa.kelley_greedy(phi, order)
    return "n = 4, 24 orders"


@suite(1, "pathology.kelley_measure_identity")
def _kel3(seed=None):
    A = _alg(3)
    mu = sm.AtomMeasure(A, (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))
    for order in ((0, 1, 2), (2, 1, 0), (1, 0, 2)):
        check(pa.kelley_greedy(mu, order).nu.weights == mu.weights, "telescoping")
    return "ok"


@suite(1, "pathology.christensen_copoints3")
def _chr(seed=None):
    phi = pa.copoints(3)
    for k in range(1, 12):
        check(pa.christensen_witness(phi, Fraction(k, 20)) is None, f"ε = {k}/20")
    return "grid k/20"


@suite(1, "pathology.christensen_zero")
def _chrz(seed=None):
    z = sm.Table(_alg(3), [0] * 8)
    for k in range(1, 10):
        w = pa.christensen_witness(z, Fraction(k, 10))
        check(w is not None, "witness exists")
        pa.witness_mass_bound(w, z)
    return "ok"


@suite(1, "pathology.christensen_uniform4")
def _chru(seed=None):
    phi = sm.AtomMeasure.uniform(_alg(4), Fraction(1, 4))
    check(pa.christensen_witness(phi, Fraction(1, 4)) is None, "t* = 1/4")
    return "ok"


@suite(1, "pathology.generate_determinism")
def _gen(seed=None):
    a = pa.random_cover(4, 6, Fraction(1, 2), 7)
    b = pa.random_cover(4, 6, Fraction(1, 2), 7)
    check(a.family == b.family, "same seed")
    return "ok"


# -- group calculus ----------------------------------------------------------------


def _model(n=2, k=2):
    A = _alg(n)
    G = Cyclic(k)
    return A, G, core.all_pufuncs(A, G)


@suite(1, "pugroup.group_laws_16")
def _gl(seed=None):
    A, G, els = _model(2, 4)
    e = core.identity(A, G)
    for a, b, c in product(els, repeat=3):
        check(core.multiply(core.multiply(a, b), c) == core.multiply(a, core.multiply(b, c)), "assoc")
    for a in els:
        check(core.multiply(e, a) == a == core.multiply(a, e), "identity")
        check(core.multiply(a, core.inverse(a)) == e, "inverse")
    return f"{len(els)} elements"


@suite(1, "pugroup.s3_axioms")
def _s3(seed=None):
    check_group_axioms(symmetric_group(3))
    return "216 triples"


@suite(1, "pugroup.support_identities_16")
def _sup(seed=None):
    A, G, els = _model()
    subsets = [frozenset(s) for s in ([], [0], [1], [0, 1])]
    for a in els:
        for S in subsets:
            Sinv = frozenset(G.inv(g) for g in S)
            check(core.support(core.inverse(a), S) == core.support(a, Sinv), "a⁻¹[T] = a[T⁻¹]")
            for T in subsets:
                check(core.support(a, S) & core.support(a, T) == core.support(a, S & T), "meet hom")
                check(core.support(a, S) | core.support(a, T) == core.support(a, S | T), "join hom")
                for b in els:
                    ST = frozenset(G.mul(s, t) for s in S for t in T)
                    check(core.support(a, S) & core.support(b, T) <= core.support(core.multiply(a, b), ST), "a[S]∧b[T]")
    return "exhaustive"


@suite(1, "pugroup.dphi_pseudometric_16")
def _dp(seed=None):
    A, G, els = _model()
    phi = sm.Table(A, [Fraction(bin(m).count("1"), 2) for m in range(4)])
    for a, b, c in product(els, repeat=3):
        d = core.d_phi(phi, a, b)
        check(d == core.d_phi(phi, b, a), "symmetry")
        check(d <= core.d_phi(phi, a, c) + core.d_phi(phi, c, b), "triangle")
        check(d == core.d_phi(phi, core.multiply(a, c), core.multiply(b, c)), "right invariance")
        check(d == core.d_phi(phi, core.multiply(c, a), core.multiply(c, b)), "left invariance")
    return "exhaustive"


@suite(1, "pugroup.gamma_decompose_n3")
def _gd(seed=None):
    A, G, els = _model(3, 2)
    count = 0
    for Am, Bm in product(range(8), repeat=2):
        AE, BE = Elem(A, Am), Elem(A, Bm)
        for c in els:
            if core.gamma_contains(AE | BE, c):
                a, b = core.gamma_decompose(c, AE, BE)
                check(core.multiply(a, b) == c, "recombination")
                count += 1
    return f"{count} cases"


@suite(1, "pugroup.gamma_extremes")
def _ge(seed=None):
    A, G, els = _model()
    e = core.identity(A, G)
    check([c for c in els if core.gamma_contains(A.zero(), c)] == [e], "Γ(0) = {e}")
    check(all(core.gamma_contains(A.one(), c) for c in els), "Γ(1) = all")
    return "ok"


@suite(1, "pugroup.eta_sigma_homs")
def _es(seed=None):
    A = _alg(3)
    G = Cyclic(4)
    q = PartitionOfUnity.atoms(A)
    for g, h in product(range(4), repeat=2):
        check(core.multiply(core.eta(A, G, g), core.eta(A, G, h)) == core.eta(A, G, G.mul(g, h)), "η hom")
    for u in product(range(4), repeat=3):
        for v in product(range(4), repeat=3):
            lhs = core.multiply(core.sigma(q, G, dict(zip(q.masks(), u))), core.sigma(q, G, dict(zip(q.masks(), v))))
            rhs = core.sigma(q, G, {m: G.mul(x, y) for m, x, y in zip(q.masks(), u, v)})
            check(lhs == rhs, "σ hom")
    return "ℤ₄, n = 3"


@suite(1, "pugroup.symm_diff_iso")
def _sd(seed=None):
    A = _alg(3)
    phi = _min2(3)
    D = to_symm_diff_group(A, phi)
    e = core.identity(A, Cyclic(2))
    for a, b in product(range(8), repeat=2):
        check(to_pu(A, D.mul(a, b)) == core.multiply(to_pu(A, a), to_pu(A, b)), "△ ↦ product")
        check(D.length(D.mul(a, b)) <= D.length(a) + D.length(b), "length triangle")
    for a in range(8):
        check(D.length(a) == core.d_phi(phi, to_pu(A, a), e), "ℓ = d_φ(·, e)")
    return "n = 3"


@suite(1, "pugroup.one_over_n_integers")
def _oon(seed=None):
    Z = Integers()
    for k in range(21):
        for n in range(1, 21):
            U = escape.Ball(Z, k)
            check(escape.one_over_n(U, n) == escape.one_over_n_replay(U, n) == escape.Ball(Z, k // n), f"{k},{n}")
        check(escape.trap(escape.Ball(Z, k)) == escape.Ball(Z, 0), "trap")
    return "k, n ≤ 20"


@suite(1, "pugroup.escape_abs_on_Z")
def _esc(seed=None):
    v = escape.is_escape_function(abs, escape.Ball(Integers(), 5), [Fraction(1, k) for k in range(1, 6)])
    check(v.is_escape, "|n| escapes")
    return "ok"


@suite(1, "pugroup.power_bounded_rejects")
def _pbd(seed=None):
    for n in (2, 3):
        A = _alg(n)
        phi = sm.AtomMeasure(A, tuple(Fraction(i + 1, 2 * n) for i in range(n)))
        P = core.PUGroup(A, Cyclic(2), phi)
        top = max(phi.value(1 << i) for i in range(n))
        for eps in (top, top + Fraction(1, 7), Fraction(1)):
            N = escape.PUNbhd(phi, escape.FiniteSubset(Cyclic(2), [0]), eps)
            U = escape.pu_nbhd_subset(P, N)
            check(not escape.is_escape_function(P.length, U, [Fraction(1, 100)]).is_escape, "rejected")
        for a in P.elements():
            fs = escape.trap_decompose(phi, a, escape.FiniteSubset(Cyclic(2), [0]), top)
            check(len(fs) <= n, "factor count")
    return "n = 2, 3"


@suite(1, "pugroup.folner_Z6")
def _fol(seed=None):
    G = Cyclic(6)
    count = 0
    for Fm in range(1, 64):
        F = [x for x in range(6) if Fm >> x & 1]
        for Am in range(64):
            Aset = {x for x in range(6) if Am >> x & 1}
            for g in range(6):
                if any((x + g) % 6 in Aset for x in Aset):
                    continue
                for k in range(0, 13):
                    escape.folner_check(G, F, Aset, g, Fraction(k, 6))
                    count += 1
    return f"{count} cases"


@suite(1, "pugroup.positive_type_characters")
def _pt(seed=None):
    for k in (1, 2, 4):
        for chi in positive.characters(k):
            check(positive.pos_type_check(Cyclic(k), chi), f"character of ℤ_{k}")
    check(not positive.pos_type_check(Cyclic(2), {0: 1, 1: 2}), "(1, 2) rejected")
    return "ok"


@suite(1, "pugroup.positive_type_lift_value")
def _ptl(seed=None):
    A = FiniteAlgebra(("p", "q"))
    f = positive.PosTypeFn(Cyclic(2), {0: 1, 1: -1})
    a = core.PUFunc(A, Cyclic(2), {1: 1, 0: 2})
    check(positive.pos_type_lift(f, sm.AtomMeasure.uniform(A), a) == 0, "f′(a) = 0")
    return "ok"


@suite(1, "pugroup.lifting_length_n2")
def _lift(seed=None):
    A, G, els = _model(2, 4)
    for a, b in product(els, repeat=2):
        fa = lifting.length_bullet(a)
        check(lifting.length_bullet(core.inverse(a)) == fa, "f_•(a⁻¹) = f_•(a)")
        check(lifting.pu_leq(lifting.length_bullet(core.multiply(a, b)), lifting.pu_add(fa, lifting.length_bullet(b))), "subadditive")
    return "ℤ₄, exhaustive"


@suite(1, "pugroup.pisharp_unit")
def _pis(seed=None):
    A, G, els = _model(2, 4)
    pi = lifting.eta_pi(A, G, G, lambda g: g, G.elements())
    for a in els:
        check(lifting.pi_sharp(pi, a) == a, "π_# of η is the identity")
    return "ℤ₄"


# -- level 2: seeded volume ---------------------------------------------------------


@suite(2, "volume.group_laws_seeded")
def _v_gl(seed):
    rng = random.Random(seed)
    for G in (Cyclic(2), Cyclic(4), symmetric_group(3), Integers()):
        A = _alg(4)
        for _ in range(400):
            a, b, c = (core.random_pufunc(A, G, rng) for _ in range(3))
            check(core.multiply(core.multiply(a, b), c) == core.multiply(a, core.multiply(b, c)), f"assoc {G!r}")
            check(core.multiply(a, core.inverse(a)) == core.identity(A, G), "inverse")
    return "1600 triples"


@suite(2, "volume.pisharp_seeded")
def _v_pi(seed):
    rng = random.Random(seed)
    A = _alg(4)
    phi = sm.AtomMeasure(A, (1, 2, 3, 4))
    Z, Z2 = Integers(), Cyclic(2)
    for _ in range(200):
        a, b = core.random_pufunc(A, Z, rng), core.random_pufunc(A, Z, rng)
        labels = set(a.support) | set(b.support) | set(core.multiply(a, b).support)
        pi = lifting.random_pi(A, Z, Z2, labels | {0}, rng)
        pa_, pb_ = lifting.pi_sharp(pi, a), lifting.pi_sharp(pi, b)
        check(lifting.pi_sharp(pi, core.multiply(a, b)) == core.multiply(pa_, pb_), "homomorphy")
        check(core.d_phi(phi, pa_, pb_) <= core.d_phi(phi, a, b), "1-Lipschitz")
    return "200 instances"


@suite(2, "volume.diffuseness_seeded")
def _v_diff(seed):
    rng = random.Random(seed)
    for _ in range(100):
        n = rng.randint(1, 4)
        vals = [Fraction(0)] * (1 << n)
        for m in range(1, 1 << n):
            base = max((vals[m ^ (1 << i)] for i in range(n) if m >> i & 1), default=Fraction(0))
            vals[m] = base + Fraction(rng.randint(0, 3), rng.randint(1, 3))
        phi = sm.Table(_alg(n), vals)
        check(sm.diffuseness(phi).value == sm.two_valued_domination(phi), "diffuse = two-valued")
    return "100 instances"


@suite(2, "volume.random_cover_duality")
def _v_lp(seed):
    rng = random.Random(seed)
    for _ in range(50):
        N = rng.randint(2, 6)
        phi = pa.random_cover(N, rng.randint(1, 6), Fraction(1, 2), rng.randrange(1 << 32))
        pa.max_dominated_measure(phi).verify(phi)
    return "50 covers"


@dataclass
class SuiteResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def run(level: int = 1, seed: int | None = None, only: str | None = None) -> list[SuiteResult]:
    if level >= 2 and seed is None:
        raise ValueError("selftest level 2 needs an explicit seed")
    out = []
    for lvl, name, fn in SUITES:
        if lvl > level or (only and only not in name):
            continue
        t0 = time.perf_counter()
        try:
            detail, ok = fn(seed), True
        except Exception as exc:  # a suite failure of any kind is reported, not raised
            detail, ok = f"{type(exc).__name__}: {exc}", False
        out.append(SuiteResult(name, ok, str(detail), time.perf_counter() - t0))
    return out
