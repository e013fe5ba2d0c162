"""
Largest dominated measure and covering witnesses
================================================

For the copoint cover on N atoms every dominated measure has mass at most
N/(N-1), while the cover itself has total 2, so κ = N/(2(N-1)) falls
towards 1/2.  A covering witness is a family of small sets that covers
every cell of some partition many times.
"""

from fractions import Fraction

from l0calc import AtomMeasure, FiniteAlgebra, christensen_witness, generate, kappa, kelley_greedy, max_dominated_measure
from l0calc.errors import PreconditionError

for N in range(2, 7):
    phi = generate("copoints", [str(N)])
    cert = max_dominated_measure(phi)
    cert.verify(phi)
    print(f"N={N}  M={cert.M}  κ={kappa(phi, cert)}  dual cost={cert.dual_cost}")

# sets of small value exist for the uniform measure, but not for the cover,
# where every nonzero set already has value 1
for name, phi in (("uniform", AtomMeasure.uniform(FiniteAlgebra.of_size(4))),
                  ("copoints", generate("copoints", ["4"]))):
    for eps in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        w = christensen_witness(phi, eps)
        if w is None:
            print(f"{name} ε={eps}: no witness")
        else:
            w.verify(phi)
            print(f"{name} ε={eps}: {w.m} sets, every cell covered at least {w.min_coverage} times")

# Kelley's greedy measure needs submodularity; the cover is not submodular
phi = generate("copoints", ["4"])
try:
    kelley_greedy(phi)
except PreconditionError as exc:
    print("kelley refused:", exc)

rank2 = generate("concave_cardinality", ["4", "0", "1", "2", "2", "2"])
km = kelley_greedy(rank2)
print("kelley on min(|A|, 2):", [str(w) for w in km.nu.weights], "total", sum(km.nu.weights))
