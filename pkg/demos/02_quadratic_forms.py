"""Quadratic forms: signatures, Pfister forms, the trace transfer, and
the rational Hilbert-symbol machinery.
"""

import math

from hermstab import (
    FieldTower,
    QuadraticForm,
    hilbert_symbol,
    is_division_quaternion,
    is_witt_trivial_q,
    knebusch_check,
    pfister,
    scharlau_transfer,
)

Q = FieldTower.rationals()
F = Q.adjoin_sqrt(2)
r2 = F.generator()

q = QuadraticForm(F, [F.one(), -r2])
print("form:", q)
print("signature vector (sqrt2>0 first):", q.signature_vector().values)

p = pfister(F, [r2])
print("binary Pfister <<sqrt2>>:", p, "->", p.signature_vector().values)

print()
phi = QuadraticForm(F, [F.one()])
tr = scharlau_transfer(F, phi)
print("transfer of <1> down to Q:", tr, "signature:", tr.signature(Q.orderings()[0]))
print("transfer identity holds:", knebusch_check(F, phi))

print()
for a, b, place in [(-1, -1, math.inf), (-1, -1, 2), (2, 3, 5), (3, 3, 3)]:
    where = "oo" if place == math.inf else place
    print(f"Hilbert symbol ({a},{b}) at {where}: {hilbert_symbol(a, b, place):+d}")

print()
print("(-1,-1) over Q is division:", is_division_quaternion(Q.rational(-1), Q.rational(-1), Q))
print("<1,1,-2,-2> hyperbolic over Q:", is_witt_trivial_q(QuadraticForm(Q, [1, 1, -2, -2])))
print("<1,1,-3,-3> hyperbolic over Q:", is_witt_trivial_q(QuadraticForm(Q, [1, 1, -3, -3])))
