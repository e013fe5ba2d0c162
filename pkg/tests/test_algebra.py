import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l0calc.algebra import (
    Elem,
    FiniteAlgebra,
    Ideal,
    PartitionOfUnity,
    VeeMonoidHom,
    common_refinement,
    enumerate_partitions,
    is_partition_of_unity,
    quotient_by_ideal,
    refines,
    sample_pairs,
    submasks,
    two_valued_homs,
)
from l0calc.errors import AlgebraMismatch, CapacityError, InvalidInput, PreconditionError

PQR = FiniteAlgebra(("p", "q", "r"))


def bell(n):
    # Bell triangle, independent of the enumeration code
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[-1]


def test_construction_limits():
    with pytest.raises(CapacityError):
        FiniteAlgebra(())
    with pytest.raises(CapacityError):
        FiniteAlgebra.of_size(17)
    with pytest.raises(InvalidInput):
        FiniteAlgebra(("p", "p"))
    with pytest.raises(InvalidInput):
        PQR.elem(["s"])


def test_element_ops_and_repr():
    p, q = PQR.elem("p"), PQR.elem("q")
    assert (p | q).names() == ["p", "q"]
    assert (p & q).is_zero()
    assert (~p).names() == ["q", "r"]
    assert ((p | q) ^ q) == p
    assert p <= p | q and not (p | q) <= p
    assert repr(p | q) == "{p,q}"
    assert len(PQR.one()) == 3


def test_mixed_algebras_rejected():
    other = FiniteAlgebra(("p", "q", "r"))
    assert other == PQR  # equal atom tuples are the same algebra
    B = FiniteAlgebra(("x", "y"))
    with pytest.raises(AlgebraMismatch):
        PQR.elem("p") & B.elem("x")


def test_partition_of_unity_clauses():
    p, q, r = (PQR.elem(x) for x in "pqr")
    assert is_partition_of_unity([p, q, r])
    assert is_partition_of_unity([p | q, r])
    chk = is_partition_of_unity([p, p | q, r])
    assert not chk and chk.clause == "disjointness"
    chk = is_partition_of_unity([p, q])
    assert not chk and chk.clause == "join ≠ 1"
    with pytest.raises(InvalidInput):
        PartitionOfUnity(frozenset([p, q]))


@pytest.mark.parametrize("n", range(1, 8))
def test_bell_counts(n):
    parts = list(enumerate_partitions(FiniteAlgebra.of_size(n)))
    assert len(parts) == bell(n) == len(set(parts))


def test_partition_enumeration_cap():
    with pytest.raises(CapacityError):
        next(enumerate_partitions(FiniteAlgebra.of_size(11)))


def test_refinement_order():
    A = FiniteAlgebra.of_size(4)
    parts = list(enumerate_partitions(A))
    atoms, trivial = PartitionOfUnity.atoms(A), PartitionOfUnity.trivial(A)
    for q in parts:
        assert refines(trivial, q) and refines(q, atoms) and refines(q, q)
        for q2 in parts:
            if refines(q, q2) and refines(q2, q):
                assert q == q2
            r = common_refinement(q, q2)
            assert refines(q, r) and refines(q2, r)


def test_two_valued_homs_are_point_evaluations():
    A = FiniteAlgebra.of_size(4)
    homs = two_valued_homs(A)
    assert len(homs) == 4
    for chi in homs:
        for a, b in product(range(A.size), repeat=2):
            assert chi.value(a | b) == max(chi.value(a), chi.value(b))
            assert chi.value(a & b) == min(chi.value(a), chi.value(b))


def test_vee_hom_verify_and_compose():
    rng = random.Random(5)
    A, B, C = (FiniteAlgebra.of_size(k) for k in (3, 4, 2))
    for _ in range(20):
        f, g = VeeMonoidHom.random(A, B, rng), VeeMonoidHom.random(B, C, rng)
        assert f.verify() and g.verify()
        h = g.compose(f)
        assert all(h.table[m] == g.table[f.table[m]] for m in range(A.size))
    # construction verifies the join law and reports a violating pair
    with pytest.raises(PreconditionError) as exc:
        VeeMonoidHom(A, A, (0, 1, 2, 1, 4, 5, 6, 7))
    assert exc.value.witness is not None
    with pytest.raises(PreconditionError):
        VeeMonoidHom(A, A, (1,) * 8)


def test_boolean_hom_detection():
    A = FiniteAlgebra.of_size(3)
    assert VeeMonoidHom.identity(A).is_boolean_hom()
    assert not VeeMonoidHom.zero(A, A).is_boolean_hom()


def test_quotient_by_ideal_example():
    Q, th = quotient_by_ideal(PQR, Ideal.generated_by([PQR.elem("r")]))
    assert Q.atoms == ("p", "q")
    assert th(PQR.elem(["p", "r"])) == Q.elem("p")
    assert th(PQR.elem("r")).is_zero()
    assert th.is_boolean_hom()
    with pytest.raises(PreconditionError):
        quotient_by_ideal(PQR, Ideal.generated_by([PQR.one()]))


def test_ideal_from_members_validation():
    p, q = PQR.elem("p"), PQR.elem("q")
    ideal = Ideal.from_members(PQR, [PQR.zero(), p, q, p | q])
    assert p | q in ideal and PQR.elem("r") not in ideal
    with pytest.raises(InvalidInput):
        Ideal.from_members(PQR, [PQR.zero(), p | q])
    with pytest.raises(InvalidInput):
        Ideal.from_members(PQR, [PQR.zero(), p, q])


def test_sample_pairs_deterministic():
    a = list(sample_pairs(64, 100, 3))
    assert a == list(sample_pairs(64, 100, 3))
    assert all(0 <= x < 64 and 0 <= y < 64 for x, y in a)


def test_submasks_complete():
    for m in range(32):
        subs = set(submasks(m))
        assert subs == {s for s in range(32) if s & ~m == 0}


masks4 = st.integers(0, 15)


@settings(max_examples=200, deadline=None)
@given(masks4, masks4, masks4)
def test_boolean_laws_property(x, y, z):
    A = FiniteAlgebra.of_size(4)
    a, b, c = Elem(A, x), Elem(A, y), Elem(A, z)
    assert (a | (b & c)) == ((a | b) & (a | c))
    assert ~~a == a
    assert (a ^ b) ^ b == a
    assert (a <= b) == ((a & b) == a)
