"""
Escape functions and Følner checks
==================================

On the integers the absolute value escapes every ball: a point of
length r leaves the ball after a bounded number of multiples.
"""

from fractions import Fraction

from l0calc import AtomMeasure, FiniteAlgebra
from l0calc.pugroup import (Ball, FiniteSubset, Integers, Predicate, PUFunc, Cyclic, folner_check,
                            is_escape_function, one_over_n, product_of, trap, trap_decompose)

Z = Integers()
U = Ball(Z, 5)
print("(1/2)U =", one_over_n(U, 2), "  trap(U) =", trap(U))

v = is_escape_function(abs, U, [Fraction(1, 2), 1, 3])
print("|·| escapes Ball(5):", v.is_escape)
for eps, k in v.per_epsilon:
    print(f"   ε={eps}: index {k}")

res = folner_check(Z, range(10), Predicate(lambda x: x % 2 == 0), 1, Fraction(1, 5))
print("Følner on [0,10) with the evens:", res.symm_ratio, res.outside_ratio, "bound", res.bound, res.holds)

# a labeled element that is far from the identity is a product of small ones
A = FiniteAlgebra(("p", "q", "r"))
Z2 = Cyclic(2)
phi = AtomMeasure.uniform(A)
a = PUFunc(A, Z2, {1: A.one()})
factors = trap_decompose(phi, a, FiniteSubset(Z2, [0]), Fraction(1, 3))
print(len(factors), "factors, product recovers a:", product_of(factors, A, Z2) == a)
