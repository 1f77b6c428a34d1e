# Exact arithmetic in the Euler ring U(G), the value ring of the
# equivariant gradient degree.  Elements are integer combinations of orbit
# classes [G/H]; run this file to see the multiplication rules in action.

from eqdeg import CIRCLE, GroupDescriptor, SubgroupClass, basis_element, unit
from eqdeg.euler_ring import ring_element_from_json, ring_element_to_json

one = unit(CIRCLE)
e = lambda k: basis_element(CIRCLE, SubgroupClass.finite(k))

print("== the circle group ==")
print("unit:", one)

# Products of finite-cyclic classes vanish: the product orbit is a union of
# circles, and every Euler characteristic of a fixed-set quotient is zero.
print("[S1/Z2] * [S1/Z3] =", e(2) * e(3))
print("[S1/Z2] * [S1/Z2] =", e(2) * e(2))

# That nilpotency makes 1 - e_k invertible with inverse 1 + e_k:
x = one - e(3)
print("(1 - [S1/Z3])^-1 =", x.invert())
print("check:", x * x.invert())

# Not everything is invertible; the unit coefficient must be +-1.
print("(2 * unit)^-1 =", (2 * one).invert())

print()
print("== a finite cyclic group ==")
z12 = GroupDescriptor.cyclic(12)
b = lambda d: basis_element(z12, SubgroupClass.divisor(d))
print("unit of U(Z12):", unit(z12))

# Burnside double-coset rule: [G/Z_d][G/Z_e] = (m/lcm) [G/Z_gcd]
print("[Z12/Z4] * [Z12/Z6] =", b(4) * b(6))
print("[Z12/Z2] * [Z12/Z2] =", b(2) * b(2))

# Inverses are solved from the triangular system of fixed-point marks.
y = unit(z12) - b(6)
print("candidate:", y, "-> inverse:", y.invert())
print("not invertible:", unit(z12) - b(4) + b(2), "->", (unit(z12) - b(4) + b(2)).invert())

print()
print("== serialization ==")
elem = 3 * one - 2 * e(1) + e(5)
data = ring_element_to_json(elem)
print("as JSON:", data)
print("round trip equal:", ring_element_from_json(data, CIRCLE) == elem)
