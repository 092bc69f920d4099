"""Tower fields and their orderings.

Build fields from Q by adjoining square roots and infinitesimals, list
their orderings, and decide signs and squares exactly.
"""

from hermstab import FieldTower, harrison_set

Q = FieldTower.rationals()
F = Q.adjoin_sqrt(2)
L = F.adjoin_laurent()

print("field:", L.describe())
print("orderings:")
for i, P in enumerate(L.orderings()):
    print(f"  [{i}] {P.name()}")

r2 = F.generator().lift_to(L)
x = L.generator()

print()
e = (1 - r2) * x + x * x
print("element:", e)
for P in L.orderings():
    print(f"  sign at {P.name()}: {e.sign_at(P):+d}")

print()
t = F.rational(3) + 2 * F.generator()
print(f"{t} is a square: {t.is_square()}, root = {t.sqrt()}")
u = x * x * (1 + x)
print(f"{u} is a square in the ambient series field: {u.is_square()}")

print()
print("positivity set of x:", [P.name() for P in harrison_set(x)])
print("positivity set of -1:", [P.name() for P in harrison_set(L.rational(-1))])
