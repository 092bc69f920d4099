import random
from fractions import Fraction

import pytest

from hermstab.fields import (
    FieldTower,
    MismatchError,
    Ordering,
    TowerError,
    harrison_set,
)

from corpus import random_element, random_tower, tower_shapes
from oracles import interval_sign

Q = FieldTower.rationals()
F2 = Q.adjoin_sqrt(2)
LX = Q.adjoin_laurent()
F2X = F2.adjoin_laurent()


def test_ordering_counts():
    assert len(Q.orderings()) == 1
    assert len(F2.orderings()) == 2
    assert len(F2X.orderings()) == 4


def test_ordering_canonical_order():
    names = [P.name() for P in F2X.orderings()]
    assert names == [
        "sqrt(2)>0, x->0+",
        "sqrt(2)>0, x->0-",
        "sqrt(2)<0, x->0+",
        "sqrt(2)<0, x->0-",
    ]


def test_negative_radicand_has_no_extensions():
    with pytest.raises(TowerError):
        Q.adjoin_sqrt(-1)


def test_square_radicand_rejected():
    with pytest.raises(TowerError):
        Q.adjoin_sqrt(Fraction(4, 9))


def test_sign_examples():
    r2 = F2.generator()
    plus, minus = F2.orderings()
    assert r2.sign_at(plus) == 1
    assert r2.sign_at(minus) == -1
    assert (1 - r2).sign_at(plus) == -1
    assert (1 - r2).sign_at(minus) == 1
    x = LX.generator()
    xp, xm = LX.orderings()
    e = x - x * x
    assert e.sign_at(xp) == 1
    assert e.sign_at(xm) == -1


def test_sign_multiplicative_and_additive():
    rng = random.Random(11)
    for _ in range(60):
        field = random_tower(rng)
        if not field.orderings():
            continue
        P = rng.choice(field.orderings())
        e = random_element(rng, field, nonzero=True)
        f = random_element(rng, field, nonzero=True)
        assert (e * f).sign_at(P) == e.sign_at(P) * f.sign_at(P)
        if e.sign_at(P) == 1 and f.sign_at(P) == 1:
            assert (e + f).sign_at(P) == 1
        sq = e * e
        assert sq.sign_at(P) == 1


def test_square_examples():
    assert Q.rational(4, 9).is_square()
    assert not Q.rational(2).is_square()
    t = F2.rational(3) + 2 * F2.generator()
    assert t.is_square()
    assert t.sqrt() ** 2 == t
    x = LX.generator()
    assert (x * x * (1 + x)).is_square()
    assert not (x * (1 + x)).is_square()


def test_square_implies_positive():
    rng = random.Random(12)
    for _ in range(50):
        field = random_tower(rng)
        e = random_element(rng, field, nonzero=True)
        sq = e * e
        assert sq.is_square()
        for P in field.orderings():
            assert sq.sign_at(P) == 1


def test_sqrt_round_trip():
    rng = random.Random(13)
    for _ in range(60):
        field = random_tower(rng)
        e = random_element(rng, field, nonzero=True)
        r = (e * e).sqrt()
        assert r is not None
        assert r * r == e * e


def test_harrison_sets():
    assert harrison_set(F2.rational(-1)) == set()
    r2 = F2.generator()
    assert harrison_set(r2) == {F2.orderings()[0]}
    x = LX.generator()
    assert harrison_set(x) == {LX.orderings()[0]}
    with pytest.raises(ValueError):
        harrison_set(LX.zero())


def test_harrison_complement():
    rng = random.Random(14)
    for _ in range(40):
        field = random_tower(rng)
        a = random_element(rng, field, nonzero=True)
        pos = harrison_set(a)
        neg = harrison_set(-a)
        assert pos & neg == set()
        assert pos | neg == set(field.orderings())


def test_qext_extension_structure():
    """Orderings of F(sqrt d) restrict onto the positivity set of d, twice."""
    rng = random.Random(15)
    for _ in range(20):
        field = random_tower(rng, max_depth=1)
        for _ in range(20):
            d = random_element(rng, field, nonzero=True)
            try:
                if d.is_square():
                    continue
            except ValueError:
                continue
            if all(d.sign_at(P) < 0 for P in field.orderings()):
                continue
            ext = field.adjoin_sqrt(d)
            base_of = [P.restrict(field.depth) for P in ext.orderings()]
            positives = [P for P in field.orderings() if d.sign_at(P) > 0]
            assert base_of == [P for P in positives for _ in range(2)]
            break


def test_field_arithmetic_axioms():
    rng = random.Random(16)
    for shape in tower_shapes():
        for _ in range(12):
            a = random_element(rng, shape)
            b = random_element(rng, shape)
            c = random_element(rng, shape)
            assert (a + b) * c == a * c + b * c
            assert a + (b + c) == (a + b) + c
            assert a * (b * c) == (a * b) * c
            if not b.is_zero():
                assert (a / b) * b == a


def test_interval_oracle_agreement():
    """sign_at agrees with outward-rounded interval arithmetic, at random."""
    rng = random.Random(17)
    checked = 0
    while checked < 1000:
        field = random_tower(rng)
        orderings = field.orderings()
        if not orderings:
            continue
        e = random_element(rng, field, nonzero=True)
        P = rng.choice(orderings)
        assert e.sign_at(P) == interval_sign(e, P), (str(e), P.name())
        checked += 1


def test_element_json_round_trip():
    rng = random.Random(18)
    for shape in tower_shapes():
        assert FieldTower.from_json(shape.to_json()) == shape
        for _ in range(10):
            e = random_element(rng, shape)
            assert shape.element_from_json(e.to_json()) == e


def test_ordering_json_round_trip():
    for shape in tower_shapes():
        for P in shape.orderings():
            assert Ordering.from_json(shape, P.to_json()) == P


def test_ordering_json_rejects_bad_path():
    doc = [{"sqrt_sign": "+"}]
    with pytest.raises(MismatchError):
        Ordering.from_json(Q, doc)
    bad = [{"x_sign": "+"}]
    with pytest.raises(MismatchError):
        Ordering.from_json(F2, bad)


def test_lift_and_restrict():
    r2 = F2.generator()
    lifted = r2.lift_to(F2X)
    assert lifted.restrict_to(F2) == r2
    x = F2X.generator()
    with pytest.raises(MismatchError):
        x.restrict_to(F2)


def test_level_mismatch_errors():
    P = Q.orderings()[0]
    with pytest.raises(MismatchError):
        F2.generator().sign_at(P)
