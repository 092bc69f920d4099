import random

import pytest

from hermstab.algebras import (
    ExchangeAlgebra,
    FieldAlgebra,
    HermitianForm,
    MatrixAlgebra,
    QuaternionAlgebra,
    UnitaryQuadraticAlgebra,
    UnitaryQuaternionAlgebra,
    rho_form,
    trace_form,
)
from hermstab.fields import FieldTower, harrison_set
from hermstab.signatures import (
    ReferenceForm,
    going_up_check,
    h_signature,
    local_type,
    nil_set,
    raw_signature,
    reference_search,
    total_signature,
)

from corpus import (
    random_algebra,
    random_element,
    random_hermitian_diagonal,
    random_nonsquare,
    random_quadratic_extension,
    random_quadratic_form,
    random_tower,
    tower_shapes,
)

Q = FieldTower.rationals()
F2 = Q.adjoin_sqrt(2)
LX = Q.adjoin_laurent()
P0 = Q.orderings()[0]

HAM = QuaternionAlgebra(Q, -1, -1)
ORTH_X = QuaternionAlgebra(LX, LX.generator(), -1, "orthogonal", [0, 0, 1, 0])
A3 = QuaternionAlgebra(F2, -1, -F2.generator())


def test_nil_set_case_table():
    assert nil_set(FieldAlgebra(F2)) == frozenset()
    assert nil_set(ExchangeAlgebra(F2)) == frozenset(F2.orderings())
    assert nil_set(HAM) == frozenset()
    orth = QuaternionAlgebra(Q, -1, -1, "orthogonal", [0, 1, 0, 0])
    assert nil_set(orth) == frozenset(Q.orderings())
    assert nil_set(A3) == frozenset({F2.orderings()[1]})
    assert nil_set(ORTH_X) == frozenset({LX.orderings()[1]})
    uq = UnitaryQuadraticAlgebra(Q, -1)
    assert nil_set(uq) == frozenset()
    assert nil_set(MatrixAlgebra(2, A3)) == nil_set(A3)


def test_nil_equals_harrison_set_for_unitary_kinds():
    """For both unitary kinds, nil orderings are exactly where the centre
    discriminant is positive."""
    rng = random.Random(71)
    done = 0
    while done < 20:
        field = rng.choice(tower_shapes()[:6])
        if field.depth - 1 > 2:
            continue
        try:
            alpha = random_nonsquare(rng, field)
        except RuntimeError:
            continue
        if done % 2 == 0:
            A = UnitaryQuadraticAlgebra(field, alpha)
        else:
            a = random_element(rng, field, height=5, nonzero=True, simple=True)
            b = random_element(rng, field, height=5, nonzero=True, simple=True)
            A = UnitaryQuaternionAlgebra(field, a, b, alpha)
        assert nil_set(A) == frozenset(harrison_set(alpha, field))
        done += 1


def test_local_types():
    lt = local_type(HAM, P0)
    assert (lt.n, lt.l, lt.nil, lt.route) == (1, 4, False, "diagonal-sum")
    Pp, Pm = LX.orderings()
    lt2 = local_type(ORTH_X, Pp)
    assert (lt2.n, lt2.l, lt2.nil, lt2.route) == (2, 1, False, "split-certificate")
    lt3 = local_type(ORTH_X, Pm)
    assert (lt3.n, lt3.l, lt3.nil) == (1, 4, True)
    lt4 = local_type(ExchangeAlgebra(Q), P0)
    assert lt4.nil
    ltm = local_type(MatrixAlgebra(3, HAM), P0)
    assert (ltm.n, ltm.l) == (3, 4)
    uh = UnitaryQuaternionAlgebra(Q, -1, -1, -1)
    ltu = local_type(uh, P0)
    assert (ltu.n, ltu.l, ltu.nil, ltu.route) == (2, 2, False, "split-certificate")


def test_reference_search_examples():
    ref = reference_search(HAM)
    assert ref.form.rank == 1
    assert ref.form.diagonal_entries()[0] == HAM.elem(HAM.one())
    assert ref.deltas == {(): 1}
    ref4 = reference_search(ORTH_X)
    assert ref4.form.diagonal_entries()[0] == ORTH_X.elem(ORTH_X.one())
    refu = reference_search(UnitaryQuadraticAlgebra(Q, -1))
    assert refu.form.diagonal_entries()[0].coords()[0] == Q.one()


def test_h_signature_examples():
    ref = reference_search(HAM)
    h = HermitianForm.diagonal(HAM, [1, 1])
    assert h_signature(HAM, h, ref, P0) == 2
    # cross-check by the trace form with lambda = 4
    assert trace_form(h).signature(P0) == 8
    uq = UnitaryQuadraticAlgebra(Q, -1)
    refu = reference_search(uq)
    hu = HermitianForm.diagonal(uq, [1, -2])
    assert h_signature(uq, hu, refu, P0) == 0
    ref4 = reference_search(ORTH_X)
    h1 = HermitianForm.diagonal(ORTH_X, [ORTH_X.elem(ORTH_X.one())])
    assert h_signature(ORTH_X, h1, ref4, LX.orderings()[0]) == 2
    assert total_signature(ORTH_X, h1, ref4).values == (2, 0)


def test_total_signature_examples():
    ref3 = reference_search(A3)
    h3 = HermitianForm.diagonal(A3, [A3.elem(A3.one())])
    assert total_signature(A3, h3, ref3).values == (1, 0)
    E = ExchangeAlgebra(F2)
    one = E.elem(E.one())
    refe = reference_search(E)
    he = HermitianForm.diagonal(E, [one, one])
    assert total_signature(E, he, refe).values == (0, 0)
    v = total_signature(A3, h3.direct_sum(h3), ref3).values
    assert v == (2, 0)


def test_signature_vanishes_on_nil():
    rng = random.Random(72)
    done = 0
    while done < 30:
        field = random_tower(rng, max_depth=1)
        try:
            A = random_algebra(rng, field)
            ref = reference_search(A)
            h = random_hermitian_diagonal(rng, A, rank=2)
        except Exception:
            continue
        vec = total_signature(A, h, ref)
        for P, v in zip(field.orderings(), vec.values):
            if P in nil_set(A):
                assert v == 0
        done += 1


def test_jacobson_identity():
    """dim(D) times the normalized signature equals the signature of the
    diagonal evaluation form, with reference <1>, for the division kinds."""
    rng = random.Random(73)
    done = 0
    while done < 200:
        field = random_tower(rng, max_depth=1)
        try:
            A = random_algebra(
                rng,
                field,
                kinds=("field_id", "unitary_quadratic", "quaternion-conj"),
            )
        except Exception:
            continue
        one_form = HermitianForm.diagonal(A, [A.elem(A.one())])
        nil = nil_set(A)
        deltas = {P.path: 1 for P in field.orderings() if P not in nil}
        ref = ReferenceForm(A, one_form, deltas)
        h = random_hermitian_diagonal(rng, A, rank=rng.randint(1, 3))
        rho = rho_form(h)
        ell = A.dim
        for P in field.orderings():
            if P in nil:
                continue
            assert ell * h_signature(A, h, ref, P) == rho.signature(P)
        done += 1


def test_w_f_linearity():
    rng = random.Random(74)
    done = 0
    while done < 200:
        field = random_tower(rng, max_depth=1)
        try:
            A = random_algebra(
                rng,
                field,
                kinds=(
                    "field_id",
                    "unitary_quadratic",
                    "quaternion-conj",
                    "quaternion-orth",
                ),
            )
            ref = reference_search(A)
            h = random_hermitian_diagonal(rng, A, rank=rng.randint(1, 2))
        except Exception:
            continue
        q = random_quadratic_form(rng, field, dim=rng.randint(1, 2))
        qh = h.module_scale(q)
        for P in field.orderings():
            assert h_signature(A, qh, ref, P) == q.signature(P) * h_signature(
                A, h, ref, P
            )
        done += 1


def test_additivity():
    rng = random.Random(75)
    done = 0
    while done < 60:
        field = random_tower(rng, max_depth=1)
        try:
            A = random_algebra(rng, field)
            ref = reference_search(A)
            h1 = random_hermitian_diagonal(rng, A, rank=1)
            h2 = random_hermitian_diagonal(rng, A, rank=2)
        except Exception:
            continue
        v1 = total_signature(A, h1, ref)
        v2 = total_signature(A, h2, ref)
        v12 = total_signature(A, h1.direct_sum(h2), ref)
        assert v12.values == tuple(a + b for a, b in zip(v1.values, v2.values))
        done += 1


def test_reference_change_law():
    """Two references differ by a sign function recovered from the
    signature of one reference against the other."""
    rng = random.Random(76)
    done = 0
    while done < 40:
        field = random_tower(rng, max_depth=1)
        try:
            A = random_algebra(
                rng,
                field,
                kinds=(
                    "field_id",
                    "unitary_quadratic",
                    "quaternion-conj",
                    "quaternion-orth",
                ),
            )
            ref0 = reference_search(A)
        except Exception:
            continue
        if not ref0.deltas:
            continue
        # a second reference: scale by a unit with varying signs
        c = random_element(rng, field, height=4, nonzero=True, simple=True)
        form1 = ref0.form.scale_field(c)
        nil = nil_set(A)
        deltas1 = {}
        ok = True
        for P in field.orderings():
            if P in nil:
                continue
            r = raw_signature(A, form1, P)
            if r == 0:
                ok = False
                break
            deltas1[P.path] = 1 if r > 0 else -1
        if not ok:
            continue
        ref1 = ReferenceForm(A, form1, deltas1)
        h = random_hermitian_diagonal(rng, A, rank=2)
        for P in field.orderings():
            if P in nil:
                continue
            s0 = h_signature(A, h, ref0, P)
            s1 = h_signature(A, h, ref1, P)
            dd = ref0.delta(P) * ref1.delta(P)
            assert s0 == dd * s1
            s_ref = h_signature(A, ref1.form, ref0, P)
            assert s_ref != 0
            assert dd == (1 if s_ref > 0 else -1)
        done += 1


def test_unit_form_signature_is_unit_on_real_division_kinds():
    """The rank-one unit form has signature +-1 wherever the algebra is
    locally real division (with reference <1> it is exactly +1)."""
    rng = random.Random(77)
    done = 0
    while done < 60:
        field = random_tower(rng, max_depth=1)
        try:
            A = random_algebra(
                rng,
                field,
                kinds=("field_id", "unitary_quadratic", "quaternion-conj"),
            )
            ref = reference_search(A)
        except Exception:
            continue
        one_form = HermitianForm.diagonal(A, [A.elem(A.one())])
        for P in field.orderings():
            if P in nil_set(A):
                continue
            assert h_signature(A, one_form, ref, P) in (-1, 1)
        done += 1


def test_route_independence_diagonal_vs_trace():
    """Where the diagonal route applies, the trace form divided by the
    local scaling gives the same signature."""
    rng = random.Random(78)
    done = 0
    while done < 60:
        field = random_tower(rng, max_depth=1)
        try:
            A = random_algebra(
                rng,
                field,
                kinds=("field_id", "unitary_quadratic", "quaternion-conj"),
            )
            ref = reference_search(A)
            h = random_hermitian_diagonal(rng, A, rank=rng.randint(1, 2))
        except Exception:
            continue
        tf = trace_form(h)
        for P in field.orderings():
            lt = local_type(A, P)
            if lt.nil:
                continue
            assert h_signature(A, h, ref, P) == ref.delta(P) * (
                tf.signature(P) // lt.lam
            )
        done += 1


def test_going_up_examples():
    ref = reference_search(HAM)
    h = HermitianForm.diagonal(HAM, [1, 1])
    for Qo in F2.orderings():
        assert going_up_check(HAM, h, ref, F2, Qo)
    # hyperbolic form: both sides vanish
    s = HAM.from_field(Q.rational(3))
    hyp = HermitianForm.diagonal(HAM, [s, -s])
    assert going_up_check(HAM, hyp, ref, F2, F2.orderings()[0])
    # the reference itself
    assert going_up_check(HAM, ref.form, ref, F2, F2.orderings()[1])


def test_going_up_random():
    rng = random.Random(79)
    done = 0
    while done < 100:
        field = random_tower(rng, max_depth=1)
        try:
            A = random_algebra(
                rng,
                field,
                kinds=(
                    "field_id",
                    "unitary_quadratic",
                    "quaternion-conj",
                    "quaternion-orth",
                ),
            )
            ref = reference_search(A)
            h = random_hermitian_diagonal(rng, A, rank=rng.randint(1, 2))
            L = random_quadratic_extension(rng, field)
        except Exception:
            continue
        ups = [Qo for Qo in L.orderings()]
        if not ups:
            continue
        Qo = rng.choice(ups)
        assert going_up_check(A, h, ref, L, Qo)
        done += 1


def test_piecewise_reference_assembly():
    """(1, sqrt(2)) with the Int(i) involution: every rank-one candidate
    has a vanishing signature at one of the two split orderings, so the
    reference is assembled from one-ordering Pfister pieces."""
    A = QuaternionAlgebra(F2, 1, F2.generator(), "orthogonal", [0, 1, 0, 0])
    targets = [P for P in F2.orderings() if P not in nil_set(A)]
    assert len(targets) == 2
    from hermstab.signatures import _reference_candidates

    for cand in _reference_candidates(A):
        assert any(raw_signature(A, cand, P) == 0 for P in targets)
    ref = reference_search(A)
    assert ref.form.rank == 4
    for P in targets:
        assert raw_signature(A, ref.form, P) != 0
        assert h_signature(A, ref.form, ref, P) > 0


def test_epsilon_minus_one_rejected():
    one, i, j, k = HAM.basis()
    skew = HermitianForm.diagonal(HAM, [i], epsilon=-1)
    ref = reference_search(HAM)
    with pytest.raises(Exception):
        h_signature(HAM, skew, ref, P0)
