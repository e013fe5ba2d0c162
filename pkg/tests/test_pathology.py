import random
from fractions import Fraction
from itertools import product

import pytest

from l0calc import pathology as pa
from l0calc import submeasure as sm
from l0calc.algebra import FiniteAlgebra
from l0calc.errors import CapacityError, InvalidInput, PreconditionError, VerificationError
from l0calc.pathology import DominationCertificate

from test_lp import vertex_optimum


def alg(n):
    return FiniteAlgebra.of_size(n)


def lp_oracle(phi):
    n = phi.algebra.n
    rows = [[(m >> i) & 1 for i in range(n)] for m in range(1, 1 << n)]
    return vertex_optimum([1] * n, rows, [phi.value(m) for m in range(1, 1 << n)])


def test_copoints3_reference_values():
    phi = pa.copoints(3)
    cert = pa.max_dominated_measure(phi)
    assert cert.M == Fraction(3, 2) == cert.dual_cost
    assert pa.kappa(phi, cert) == Fraction(3, 4)
    assert all(y == Fraction(1, 2) for y in cert.dual.values())


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_copoints_closed_form(N):
    # uniform weight 1/(N−1) is optimal for the cover by co-atoms: M = N/(N−1)
    assert pa.max_dominated_measure(pa.copoints(N)).value == Fraction(N, N - 1)


def test_lp_against_vertex_oracle():
    rng = random.Random(9)
    instances = [pa.copoints(3), pa.ell_subsets_cover(3, 2)]
    instances += [pa.random_cover(3, rng.randint(1, 4), Fraction(1, 2), s) for s in range(12)]
    for phi in instances:
        assert pa.max_dominated_measure(phi).value == lp_oracle(phi)


def test_measures_have_kappa_one():
    mu = sm.AtomMeasure(alg(3), (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))
    assert pa.max_dominated_measure(mu).value == 1
    assert pa.kappa(mu) == 1


def test_kappa_undefined_for_zero():
    z = sm.Table(alg(2), [0, 0, 0, 0])
    assert pa.max_dominated_measure(z).value == 0
    with pytest.raises(PreconditionError):
        pa.kappa(z)


def test_lp_preconditions():
    with pytest.raises(PreconditionError):
        pa.max_dominated_measure(sm.Table(alg(2), [0, 2, 1, 1]))
    with pytest.raises(CapacityError):
        pa.max_dominated_measure(sm.AtomMeasure.uniform(alg(13)))


def test_certificate_tampering_detected():
    phi = pa.copoints(3)
    cert = pa.max_dominated_measure(phi)
    heavier = sm.AtomMeasure(phi.algebra, (1, Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(VerificationError):
        DominationCertificate(cert.value, heavier, cert.dual, cert.dual_cost).verify(phi)
    thin = {m: y / 2 for m, y in cert.dual.items()}
    with pytest.raises(VerificationError):
        DominationCertificate(cert.value, cert.primal, thin, cert.dual_cost).verify(phi)


def test_kelley_reference():
    phi = sm.concave_cardinality(alg(3), [0, 1, 2, 2])
    km = pa.kelley_greedy(phi, (0, 1, 2))
    assert km.nu.weights == (1, 1, 0)
    km = pa.kelley_greedy(phi, (2, 0, 1))
    assert km.nu.weights == (1, 0, 1)


def test_kelley_rejects_non_submodular_with_witness():
    with pytest.raises(PreconditionError) as exc:
        pa.kelley_greedy(pa.copoints(3))
    w = exc.value.witness
    assert sm.replay_counterexample(pa.copoints(3), "submodular", w)
    with pytest.raises(InvalidInput):
        pa.kelley_greedy(sm.AtomMeasure.uniform(alg(3)), (0, 0, 1))


def test_kelley_is_a_vertex_of_the_base_polytope():
    phi = sm.concave_cardinality(alg(4), [0, 2, 3, 4, 4])
    for order in [(0, 1, 2, 3), (3, 2, 1, 0), (1, 3, 0, 2)]:
        km = pa.kelley_greedy(phi, order)
        prefix = 0
        for i in order:
            prefix |= 1 << i
            assert km.nu.value(prefix) == phi.value(prefix)


def test_christensen_copoints_has_no_witness():
    for k in range(1, 20):
        assert pa.christensen_witness(pa.copoints(3), Fraction(k, 20)) is None


@pytest.mark.parametrize("N", [2, 3, 4])
def test_christensen_uniform_threshold(N):
    # 𝒞_ε holds the sets of size ≤ ⌊εN⌋, and t* = ⌊εN⌋/N
    phi = sm.AtomMeasure.uniform(alg(N))
    for j in range(1, 16):
        eps = Fraction(j, 16)
        k = (eps * N).numerator // (eps * N).denominator
        w = pa.christensen_witness(phi, eps)
        exists = k > 0 and Fraction(k, N) >= 1 - eps
        assert (w is not None) == exists
        if w is not None:
            w.verify(phi)
            assert pa.witness_mass_bound(w, phi).holds


def test_christensen_epsilon_validation():
    with pytest.raises(InvalidInput):
        pa.christensen_witness(pa.copoints(3), 0)
    with pytest.raises(InvalidInput):
        pa.christensen_witness(pa.copoints(3), 1)


def test_generators():
    assert pa.generate("copoints", ["3"]).family == pa.copoints(3).family
    assert len(pa.ell_subsets_cover(4, 2).family) == 6
    a = pa.generate("random_cover", [4, 6, "1/2"], seed=7)
    assert a.family == pa.random_cover(4, 6, Fraction(1, 2), 7).family
    cc = pa.generate("concave_cardinality", [3, 0, 2, 3, 3])
    assert cc.value(0b011) == 3
    with pytest.raises(InvalidInput):
        pa.generate("unknown", [3])
    with pytest.raises(InvalidInput):
        pa.generate("random_cover", [4, 6, "1/2"])
    with pytest.raises(CapacityError):
        pa.ell_subsets_cover(8, 4)
    with pytest.raises(CapacityError):
        pa.copoints(1)


def test_random_cover_joins_to_one():
    for s in range(30):
        phi = pa.random_cover(6, 3, Fraction(1, 10), s)
        u = 0
        for f in phi.family:
            u |= f
        assert u == phi.algebra.full


def test_all_concave_profiles_are_concave_and_distinct():
    profiles = list(pa.all_concave_profiles(4))
    assert len(profiles) == len(set(profiles))
    for p in profiles:
        steps = [b - a for a, b in zip(p, p[1:])]
        assert all(s >= 0 for s in steps)
        assert all(x >= y for x, y in zip(steps, steps[1:]))
    brute = [
        (0,) + t for t in product(range(5), repeat=4)
        if all(a <= b for a, b in zip((0,) + t, t))
        and all(t2 - t1 <= t1 - t0 for t0, t1, t2 in zip((0,) + t, t, t[1:]))
    ]
    assert sorted(brute) == sorted(profiles)
