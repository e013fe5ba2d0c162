"""
Finite Boolean algebras
=======================

Elements of the powerset algebra on named atoms, partitions of unity,
and a quotient by an ideal.
"""

from l0calc import FiniteAlgebra, Ideal, PartitionOfUnity, enumerate_partitions, quotient_by_ideal, refines

A = FiniteAlgebra(("p", "q", "r"))
p, q, r = (A.elem(x) for x in "pqr")
print("p ∨ q     =", p | q)
print("¬p        =", ~p)
print("(p∨q) △ q =", (p | q) ^ q)

# the five partitions of a three-atom algebra, coarsest first
parts = sorted(enumerate_partitions(A), key=lambda P: len(P.cells))
for P in parts:
    print(len(P.cells), "cells:", sorted(map(repr, P.cells)))

atoms = PartitionOfUnity.atoms(A)
print("every partition is refined by the atoms:", all(refines(P, atoms) for P in parts))

# killing r leaves the algebra on {p, q}
Q, theta = quotient_by_ideal(A, Ideal.generated_by([r]))
print("quotient atoms:", Q.atoms, " θ({p,r}) =", theta(A.elem(["p", "r"])))
