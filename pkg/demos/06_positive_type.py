"""
Positive-type functions and their lifts
=======================================

A character of a cyclic group is positive definite.  Integrating it
against a measure over the pieces of a labeled partition gives a
positive-type function on the larger group; the Gram matrix on a
sample stays positive semidefinite.
"""

import random

from l0calc import AtomMeasure, FiniteAlgebra
from l0calc.pugroup import Cyclic, PosTypeFn, characters, hermitian_psd, lifted_gram, pos_type_lift, random_pufunc

Z4 = Cyclic(4)
for chi in characters(4):
    print({g: str(v) for g, v in chi.items()})

f = PosTypeFn(Z4, characters(4)[1])
A = FiniteAlgebra(("p", "q", "r"))
mu = AtomMeasure(A, (1, 2, 1))
rng = random.Random(3)
sample = [random_pufunc(A, Z4, rng) for _ in range(6)]
for a in sample[:3]:
    print(a, "->", pos_type_lift(f, mu, a))

G = lifted_gram(f, mu, sample)
print("Gram matrix PSD:", hermitian_psd(G))
