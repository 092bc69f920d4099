"""Normalized signatures and the stability invariants.

Runs the four worked examples end to end: nil sets, reference forms,
total signatures, the image lattice of the total signature map, its
cokernel (the stability group), and the index.
"""

from hermstab import (
    FieldTower,
    HermitianForm,
    QuaternionAlgebra,
    nil_set,
    reference_search,
    stability_report,
    total_signature,
)

Q = FieldTower.rationals()
F2 = Q.adjoin_sqrt(2)
LX = Q.adjoin_laurent()

examples = [
    QuaternionAlgebra(Q, -1, -1),
    QuaternionAlgebra(Q, -1, -1, "orthogonal", [0, 1, 0, 0]),
    QuaternionAlgebra(F2, -1, -F2.generator()),
    QuaternionAlgebra(LX, LX.generator(), -1, "orthogonal", [0, 0, 1, 0]),
]

for A in examples:
    print("=" * 60)
    print("algebra:", A.describe())
    nil = nil_set(A)
    print("nil orderings:", [P.name() for P in A.field.orderings() if P in nil])
    ref = reference_search(A)
    h = HermitianForm.diagonal(A, [A.elem(A.one())]) if nil != frozenset(
        A.field.orderings()
    ) else HermitianForm(A, [])
    if h.rank:
        print("total signature of <1>:", total_signature(A, h, ref).values)
    rep = stability_report(A, ref)
    print("image of the total signature map:", rep.image_description())
    print("stability group:", rep.group_description(), "| index:", rep.st)
    print(
        "witnesses: k0 =", rep.k0,
        "(constant signature 2^k0), n0 =", rep.n0,
        "| certified exact:", rep.exact,
    )
