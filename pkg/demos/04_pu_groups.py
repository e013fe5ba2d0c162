"""
Labeled partitions of unity
===========================

An element of the group assigns disjoint pieces of the algebra to
group elements.  Products are computed cellwise and the metric d_φ is
φ of the set where two elements disagree.
"""

from l0calc import AtomMeasure, FiniteAlgebra
from l0calc.pugroup import (PUFunc, Cyclic, d_phi, gamma_decompose, identity, inverse,
                            multiply, power, symmetric_group)

A = FiniteAlgebra(("p", "q", "r"))
Z3 = Cyclic(3)


def pu(group, labels):
    return PUFunc(A, group, {g: A.elem(names) for g, names in labels.items()})


a = pu(Z3, {1: ["p"], 2: ["q", "r"]})
b = pu(Z3, {1: ["p", "q"], 0: ["r"]})
print("a       =", a)
print("b       =", b)
print("a·b     =", multiply(a, b))
print("a⁻¹     =", inverse(a))
print("a³ = e  :", power(a, 3) == identity(A, Z3))

mu = AtomMeasure.uniform(A)
print("d_μ(a, b) =", d_phi(mu, a, b))
print("d_μ(a, e) =", d_phi(mu, a, identity(A, Z3)))

# splitting an element along a partition of its support
c, d = gamma_decompose(a, A.elem(["p", "q"]), A.elem("r"))
print("pieces:", c, d, " product ok:", multiply(c, d) == a)

# non-abelian labels work the same way
S3 = symmetric_group(3)
g, h = S3.elements()[1], S3.elements()[3]
x = pu(S3, {g: ["p", "q"], h: ["r"]})
y = pu(S3, {h: ["p"], g: ["q", "r"]})
print("S₃: xy == yx ?", multiply(x, y) == multiply(y, x))
