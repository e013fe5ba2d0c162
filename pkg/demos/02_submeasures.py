"""
Classifying set functions
=========================

Three set functions on four atoms, each checked for monotonicity,
subadditivity, submodularity and additivity.  Failed checks come with
a witness pair.
"""

from fractions import Fraction

from l0calc import AtomMeasure, FiniteAlgebra, Table, classify, diffuseness, generate

A = FiniteAlgebra.of_size(4)

mu = AtomMeasure(A, (Fraction(1, 10), Fraction(2, 10), Fraction(3, 10), Fraction(4, 10)))
cover = generate("copoints", ["4"])
concave = generate("concave_cardinality", ["4", "0", "2", "3", "3", "3"])
# not monotone: the value drops on the full set
bumpy = Table(A, [Fraction(1) if 0 < m < A.full else Fraction(m and 1, 2) for m in range(A.size)])

for name, phi in (("measure", mu), ("copoint cover", cover), ("concave profile", concave), ("bumpy table", bumpy)):
    rep = classify(phi)
    print(f"{name:16s} verdict={rep.verdict}")
    for flag, c in sorted(rep.counterexamples.items()):
        print(f"    not {flag}: A={c.a} B={c.b}  {c.lhs} vs {c.rhs}")

# a uniform measure can be cut into pieces of size 1/4, the cover cannot go below 1
print("diffuseness of μ     :", diffuseness(AtomMeasure.uniform(A)).value)
print("diffuseness of cover :", diffuseness(cover).value)
