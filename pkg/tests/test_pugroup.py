import random
import threading
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l0calc import submeasure as sm
from l0calc.algebra import FiniteAlgebra, PartitionOfUnity
from l0calc.errors import CapacityError, InvalidInput, NotAHomomorphism, PreconditionError
from l0calc.pugroup import (
    Ball,
    CayleyTable,
    Cyclic,
    FiniteSubset,
    GaussQ,
    Integers,
    PiTable,
    PosTypeFn,
    Predicate,
    PUFunc,
    PUGroup,
    PUNbhd,
    RationalsAdditive,
    Complement,
    all_pufuncs,
    characters,
    check_group_axioms,
    d_phi,
    eta,
    eta_pi,
    f_bullet,
    folner_check,
    from_pu,
    gamma_contains,
    gamma_decompose,
    group_from_record,
    hermitian_psd,
    identity,
    in_nbhd,
    inverse,
    is_escape_function,
    length_bullet,
    multiply,
    one_over_n,
    pi_sharp,
    pos_type_check,
    pos_type_lift,
    power,
    product_of,
    pu_add,
    pu_leq,
    random_pufunc,
    sigma,
    support,
    symmetric_group,
    to_pu,
    to_symm_diff_group,
    trap,
    trap_decompose,
    upper_set,
    zero_labeled,
)

PQ = FiniteAlgebra(("p", "q"))
PQR = FiniteAlgebra(("p", "q", "r"))
Z2, Z4 = Cyclic(2), Cyclic(4)


def pu(algebra, group, labels):
    return PUFunc(algebra, group, {g: algebra.elem(names) for g, names in labels.items()})


# -- groups -------------------------------------------------------------------


def test_builtin_groups():
    for G in (Z2, Z4, Cyclic(6), symmetric_group(3)):
        check_group_axioms(G)
        G.check_length()
    S3 = symmetric_group(3)
    assert S3.identity == "012" and len(S3.elements()) == 6
    assert S3.mul("102", "102") == "012"
    assert Integers().order_of(3) is None and Z4.order_of(2) == 2


def test_cayley_table_validation():
    with pytest.raises(InvalidInput, match="associative"):
        CayleyTable(["a", "b", "c"], [[0, 1, 2], [1, 0, 0], [2, 2, 0]])
    with pytest.raises(InvalidInput):
        CayleyTable(["a", "b"], [[0, 1]])
    with pytest.raises(InvalidInput):
        CayleyTable(["e", "x"], [["e", "x"], ["x", "e"]], length={"e": 0, "x": -1})
    with pytest.raises(CapacityError):
        CayleyTable([str(i) for i in range(65)], [[(i + j) % 65 for j in range(65)] for i in range(65)])
    G = CayleyTable(["e", "x"], [["e", "x"], ["x", "e"]], length={"e": 0, "x": 1})
    assert G.identity == "e" and G.inv("x") == "x" and G.length("x") == 1


def test_group_records_round_trip():
    for G in (Z4, Integers(), RationalsAdditive(), symmetric_group(3)):
        assert group_from_record(G.record()) == G
    with pytest.raises(InvalidInput):
        group_from_record({"kind": "free"})


# -- elements -----------------------------------------------------------------


def test_pufunc_validation():
    with pytest.raises(InvalidInput):
        PUFunc(PQ, Z2, {0: PQ.elem("p"), 1: PQ.elem(["p", "q"])})
    with pytest.raises(InvalidInput):
        PUFunc(PQ, Z2, {0: PQ.elem("p")})
    a = PUFunc(PQ, Z2, {0: PQ.one(), 1: PQ.zero()})
    assert a.support == [0] and a.is_identity()


def test_reference_product_and_inverse():
    a = pu(PQ, Z2, {1: ["p"], 0: ["q"]})
    b = pu(PQ, Z2, {1: ["p", "q"]})
    assert multiply(a, b) == pu(PQ, Z2, {0: ["p"], 1: ["q"]})
    c = pu(PQ, Z4, {1: ["p"], 3: ["q"]})
    assert inverse(c) == pu(PQ, Z4, {3: ["p"], 1: ["q"]})
    assert repr(a) == "{0↦{q}, 1↦{p}}"
    assert identity(PQ, Z2) == pu(PQ, Z2, {0: ["p", "q"]})


def test_power_matches_repeated_product():
    rng = random.Random(2)
    for G in (Z4, symmetric_group(3), Integers()):
        a = random_pufunc(PQR, G, rng)
        acc = identity(PQR, G)
        for k in range(6):
            assert power(a, k) == acc
            acc = multiply(acc, a)
        assert power(a, -2) == inverse(power(a, 2))


def test_reference_metric():
    phi = sm.concave_cardinality(PQ, [0, Fraction(1, 2), 1])
    a = pu(PQ, Z2, {1: ["p"], 0: ["q"]})
    assert d_phi(phi, a, identity(PQ, Z2)) == Fraction(1, 2)
    assert d_phi(phi, a, a) == 0


def test_support_of_identity():
    e = identity(PQ, Z4)
    assert support(e, {0, 2}) == PQ.one()
    assert support(e, {1, 3}) == PQ.zero()
    a = pu(PQ, Z4, {1: ["p"], 3: ["q"]})
    assert support(a, Complement({1})) == PQ.elem("q")
    assert support(a, Predicate(lambda g: g % 2 == 1)) == PQ.one()


def test_neighborhood_membership():
    phi = sm.AtomMeasure.uniform(PQR)
    a = pu(PQR, Z4, {1: ["p"], 0: ["q", "r"]})
    assert in_nbhd(phi, a, PUNbhd(phi, FiniteSubset(Z4, [0]), Fraction(1, 3)))
    assert not in_nbhd(phi, a, PUNbhd(phi, FiniteSubset(Z4, [0]), Fraction(1, 4)))
    assert a in PUNbhd(phi, FiniteSubset(Z4, [0, 1, 3]), 0)
    with pytest.raises(InvalidInput):
        FiniteSubset(Z4, [0, 1])  # not symmetric


# -- embeddings and supported subgroups ---------------------------------------


def test_eta_and_sigma():
    q = PartitionOfUnity.atoms(PQR)
    for g in range(4):
        assert sigma(q, Z4, {m: g for m in q.masks()}) == eta(PQR, Z4, g)
    coarse = PartitionOfUnity(frozenset([PQR.elem(["p", "q"]), PQR.elem("r")]))
    s = sigma(coarse, Z4, {PQR.elem(["p", "q"]): 1, PQR.elem("r"): 3})
    assert s == pu(PQR, Z4, {1: ["p", "q"], 3: ["r"]})
    with pytest.raises(InvalidInput):
        sigma(coarse, Z4, {PQR.elem("r"): 1})


def test_gamma_reference_decomposition():
    c = pu(PQ, Z2, {1: ["p", "q"]})
    a, b = gamma_decompose(c, PQ.elem("p"), PQ.elem("q"))
    assert a == pu(PQ, Z2, {1: ["p"], 0: ["q"]})
    assert b == pu(PQ, Z2, {1: ["q"], 0: ["p"]})
    e = identity(PQ, Z2)
    assert gamma_decompose(e, PQ.elem("p"), PQ.elem("q")) == (e, e)
    with pytest.raises(PreconditionError) as exc:
        gamma_decompose(c, PQ.elem("p"), PQ.zero())
    assert exc.value.witness == 1


def test_gamma_all_of_gamma_one_n2():
    count = 0
    for c in all_pufuncs(PQ, Z2):
        for A, B in product(PQ.elements(), repeat=2):
            if (A | B).is_one():
                a, b = gamma_decompose(c, A, B)
                assert multiply(a, b) == c
                count += 1
    assert count == 4 * 9


def test_gamma_extremes():
    for a in all_pufuncs(PQ, Z4):
        assert gamma_contains(PQ.one(), a)
        assert gamma_contains(PQ.zero(), a) == a.is_identity()


# -- liftings -----------------------------------------------------------------


def test_pi_sharp_unit_and_reduction():
    rng = random.Random(8)
    Z = Integers()
    phi = sm.AtomMeasure(PQR, (1, 2, 3))
    for _ in range(50):
        a, b = random_pufunc(PQR, Z, rng), random_pufunc(PQR, Z, rng)
        labels = set(a.support) | set(b.support) | {0}
        unit = eta_pi(PQR, Z, Z, lambda g: g, labels)
        assert pi_sharp(unit, a) == a
        mod2 = eta_pi(PQR, Z, Z2, lambda g: g % 2, labels)
        red = pi_sharp(mod2, a)
        for g, m in a.items():
            assert red.mask(g % 2) & m == m
        assert d_phi(phi, red, pi_sharp(mod2, b)) <= d_phi(phi, a, b)


def test_pi_sharp_rejects_non_homomorphism():
    bad = PiTable(PQ, Z4, Z2, {g: eta(PQ, Z2, 1 if g == 1 else 0) for g in range(4)})
    a = pu(PQ, Z4, {1: ["p"], 2: ["q"]})
    with pytest.raises(NotAHomomorphism):
        pi_sharp(bad, a)


def test_pi_table_verdicts_are_consistent_across_threads():
    table = {g: eta(PQ, Z2, g % 2) for g in range(4)}
    pi = PiTable(PQ, Z4, Z2, table)
    results = []

    def worker():
        results.append(all(pi.check_pair(g, h) for g in range(4) for h in range(4)))

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results == [True] * 8


def test_f_bullet_reference():
    a = pu(PQ, Z2, {1: ["p"], 0: ["q"]})
    fa = length_bullet(a)
    assert fa.group == RationalsAdditive()
    assert fa == PUFunc(PQ, RationalsAdditive(), {Fraction(1): PQ.elem("p"), Fraction(0): PQ.elem("q")})
    assert f_bullet(lambda g: 0, a, Z2) == identity(PQ, Z2)


def test_partial_order_basics():
    rng = random.Random(3)
    Q = RationalsAdditive()
    z = zero_labeled(PQR)
    for _ in range(40):
        a = length_bullet(random_pufunc(PQR, Integers(), rng))
        assert pu_leq(a, a) and pu_leq(z, a)
        assert upper_set(a, 0) == PQR.full
    with pytest.raises(InvalidInput):
        pu_leq(identity(PQR, Z2), z)
    assert pu_add(z, z) == identity(PQR, Q)


def test_lifting_support_inequality():
    # (f_•(a) f_•(b)⁻¹)[ℚ∖V] ≤ ab⁻¹[G∖U] ∨ a⁻¹b[G∖U] for a length f,
    # with U = {f < δ} and V = (−δ, δ)
    rng = random.Random(12)
    for G in (Z4, Cyclic(6), Integers()):
        for _ in range(150):
            a, b = random_pufunc(PQR, G, rng), random_pufunc(PQR, G, rng)
            delta = Fraction(rng.randint(1, 4), rng.randint(1, 2))
            lhs = support(multiply(length_bullet(a), inverse(length_bullet(b))), Predicate(lambda x: abs(x) >= delta))
            far = Predicate(lambda g: G.length(g) >= delta)
            rhs = support(multiply(a, inverse(b)), far) | support(multiply(inverse(a), b), far)
            assert lhs <= rhs


def test_lifting_part_i():
    rng = random.Random(13)
    mu = sm.AtomMeasure(PQR, (1, 2, 3))
    for _ in range(200):
        a = random_pufunc(PQR, Integers(), rng)
        eps = Fraction(rng.randint(1, 6), 2)
        fa = length_bullet(a)
        if mu.value(upper_set(fa, eps)) <= eps:
            assert mu(support(a, Predicate(lambda g: abs(g) > eps))) <= eps


def test_lifting_part_iv_on_integers():
    # f = |·|, g = |·|/r so that {g ≤ 1} = Ball(r); the closed form gives the
    # least n with ⌊r/n⌋ < ε, and then f_•(c)[[ε,∞)] ≤ ⋁_{i≤n} g_•(cⁱ)[[1,∞)]
    rng = random.Random(14)
    Z = Integers()
    for _ in range(200):
        r = rng.randint(1, 8)
        eps = Fraction(rng.randint(1, 6), rng.randint(1, 2))
        n = next(k for k in range(1, r + 2) if r // k < eps)
        c = random_pufunc(PQR, Z, rng, window=10)
        lhs = upper_set(length_bullet(c), eps)
        rhs = 0
        for i in range(1, n + 1):
            rhs |= upper_set(f_bullet(lambda x: Fraction(abs(x), r), power(c, i)), 1)
        assert lhs & ~rhs == 0


# -- escape dynamics ------------------------------------------------------------


def test_one_over_n_and_trap_references():
    Z = Integers()
    assert one_over_n(Ball(Z, 5), 2) == Ball(Z, 2)
    assert trap(Ball(Z, 5)) == Ball(Z, 0)
    for G in (Z4, symmetric_group(3)):
        whole = FiniteSubset(G, G.elements())
        assert trap(whole) == whole
    U = FiniteSubset(Z4, [0, 1, 3])
    assert one_over_n(U, 1) == U and trap(U) == FiniteSubset(Z4, [0])


def test_escape_on_finite_groups():
    U = FiniteSubset(Z4, [0, 1, 3])
    assert is_escape_function(lambda g: 0 if g == 0 else 1, U).is_escape
    v = is_escape_function(lambda g: 1, U)
    assert not v.is_escape and v.witness == 0
    with pytest.raises(PreconditionError):
        is_escape_function(abs, Ball(RationalsAdditive(), 1))


def test_escape_on_integer_balls():
    Z = Integers()
    v = is_escape_function(abs, Ball(Z, 5), [Fraction(1, 2), 1, 3])
    assert v.is_escape and dict(v.per_epsilon) == {Fraction(1, 2): 6, Fraction(1): 6, Fraction(3): 2}
    assert not is_escape_function(lambda g: 1, Ball(Z, 5)).is_escape


def test_trap_decompose_reference():
    phi = sm.AtomMeasure.uniform(PQR)
    a = pu(PQR, Z2, {1: ["p", "q", "r"]})
    factors = trap_decompose(phi, a, FiniteSubset(Z2, [0]), Fraction(1, 3))
    assert len(factors) == 3 and product_of(factors, PQR, Z2) == a
    e = identity(PQR, Z2)
    assert all(f == e for f in trap_decompose(phi, e, FiniteSubset(Z2, [0]), Fraction(1, 3)))
    with pytest.raises(PreconditionError) as exc:
        trap_decompose(phi, a, FiniteSubset(Z2, [0]), Fraction(1, 4))
    assert exc.value.witness == "p"


def test_trap_decompose_infinite_labels():
    rng = random.Random(5)
    phi = sm.AtomMeasure(PQR, (1, 1, 2))
    for _ in range(30):
        a = random_pufunc(PQR, Integers(), rng)
        factors = trap_decompose(phi, a, Ball(Integers(), 0), 2)
        assert product_of(factors, PQR, Integers()) == a


def test_folner_references():
    Z = Integers()
    res = folner_check(Z, range(10), Predicate(lambda x: x % 2 == 0), 1, Fraction(1, 5))
    assert (res.symm_ratio, res.outside_ratio, res.bound) == (Fraction(1, 5), Fraction(1, 2), Fraction(2, 5))
    assert res.premise and res.holds
    assert folner_check(Z, [0], {5}, 1, 2).holds
    with pytest.raises(PreconditionError):
        folner_check(Z4, [0, 1], {0, 2}, 2, Fraction(1, 2))


# -- positive type --------------------------------------------------------------


def det(M):
    A = [[GaussQ.of(x) for x in row] for row in M]
    n, d = len(A), GaussQ(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != GaussQ(0)), None)
        if p is None:
            return GaussQ(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d = d * A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return d


def psd_by_minors(M):
    n = len(M)
    for i in range(n):
        for j in range(n):
            if GaussQ.of(M[i][j]) != GaussQ.of(M[j][i]).conj():
                return False
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        dm = det([[M[i][j] for j in idx] for i in idx])
        if dm.re < 0:
            return False
    return True


entries = st.tuples(st.integers(-2, 2), st.integers(-1, 1))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.lists(entries, min_size=n * n, max_size=n * n).map(lambda xs: (n, xs))))
def test_hermitian_psd_matches_principal_minors(data):
    n, xs = data
    B = [[GaussQ(*xs[i * n + j]) for j in range(n)] for i in range(n)]
    # B B* is PSD; B + B* is Hermitian and often indefinite
    gramm = [[sum((B[i][k] * B[j][k].conj() for k in range(n)), GaussQ(0)) for j in range(n)] for i in range(n)]
    herm = [[B[i][j] + B[j][i].conj() for j in range(n)] for i in range(n)]
    assert hermitian_psd(gramm)
    assert hermitian_psd(herm) == psd_by_minors(herm)


def test_gauss_parse_and_print():
    assert GaussQ.parse("1/2+3/4i") == GaussQ(Fraction(1, 2), Fraction(3, 4))
    assert GaussQ.parse("-i") == GaussQ(0, -1)
    assert str(GaussQ(1, -1)) == "1-i"
    assert str(GaussQ(0, Fraction(1, 2))) == "1/2i"
    for z in (GaussQ(3), GaussQ(0, 1), GaussQ(Fraction(-2, 3), Fraction(5, 7))):
        assert GaussQ.parse(str(z)) == z


def test_characters_and_rejections():
    for k in (1, 2, 4):
        chars = characters(k)
        assert len(chars) == k
        assert all(pos_type_check(Cyclic(k), chi) for chi in chars)
    assert not pos_type_check(Z2, {0: 1, 1: 2})
    with pytest.raises(PreconditionError):
        PosTypeFn(Z2, {0: 1, 1: 2})


def test_lift_references():
    f = PosTypeFn(Z2, {0: 1, 1: -1})
    a = pu(PQ, Z2, {1: ["p"], 0: ["q"]})
    assert pos_type_lift(f, sm.AtomMeasure.uniform(PQ), a) == 0
    one = PosTypeFn(Z4, {g: 1 for g in range(4)})
    rng = random.Random(1)
    mu = sm.AtomMeasure(PQR, (1, 2, 5))
    for _ in range(20):
        assert pos_type_lift(one, mu, random_pufunc(PQR, Z4, rng)) == 1
    with pytest.raises(PreconditionError):
        pos_type_lift(f, sm.concave_cardinality(PQ, [0, 1, 1]), a)


# -- the symmetric-difference group -----------------------------------------------


def test_symm_diff_group():
    D1 = to_symm_diff_group(FiniteAlgebra(("p",)), sm.AtomMeasure.uniform(FiniteAlgebra(("p",))))
    check_group_axioms(D1)
    assert len(D1.elements()) == 2
    for n in (2, 3, 4):
        A = FiniteAlgebra.of_size(n)
        phi = sm.concave_cardinality(A, [min(k, 2) for k in range(n + 1)])
        D = to_symm_diff_group(A, phi)
        for x, y in product(range(A.size), repeat=2):
            assert D.length(D.mul(x, y)) <= D.length(x) + D.length(y)
            if n <= 3:
                assert to_pu(A, D.mul(x, y)) == multiply(to_pu(A, x), to_pu(A, y))
        for x in range(A.size):
            assert from_pu(to_pu(A, x)) == x
            assert D.length(x) == d_phi(phi, to_pu(A, x), identity(A, Z2))
    with pytest.raises(PreconditionError):
        to_symm_diff_group(PQ, sm.Table(PQ, [0, 2, 1, 1]))


def test_pugroup_oracle():
    phi = sm.AtomMeasure.uniform(PQ)
    P = PUGroup(PQ, Z2, phi)
    els = P.elements()
    assert len(els) == 4
    check_group_axioms(P)
    for a in els:
        assert P.length(a) == d_phi(phi, a, identity(PQ, Z2))
