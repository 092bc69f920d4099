"""Algebras with involution over tower fields, and hermitian forms on them.

The catalogue covers the degree <= 2 building blocks: the base field with
the identity, the split double field with the exchange involution,
quadratic extensions with conjugation, quaternion algebras with their
symplectic (conjugation) or orthogonal involutions, quaternion algebras
over a quadratic extension with the tensor-product unitary involution,
and matrix wrappers carrying the adjoint involution of a diagonal
hermitian scaling.

Gram matrices of epsilon-hermitian forms are diagonalized by hermitian
elimination; a nonzero non-invertible pivot is not an error but returns
an explicit zero divisor (the algebra cannot be division), which callers
use to reroute.
"""

from __future__ import annotations

from fractions import Fraction

from .fields import FieldElement, FieldTower, MismatchError
from .quadratic import QuadraticForm, SingularFormError, diagonalize_gram

__all__ = [
    "Algebra",
    "FieldAlgebra",
    "ExchangeAlgebra",
    "UnitaryQuadraticAlgebra",
    "QuaternionAlgebra",
    "UnitaryQuaternionAlgebra",
    "MatrixAlgebra",
    "AlgebraElement",
    "HermitianForm",
    "SplitWitness",
    "ZeroDivisorFound",
    "algebra_from_json",
    "involution_apply",
    "sym_basis",
    "reduced_trace",
    "reduced_norm",
    "diagonalize_hermitian",
    "morita_flatten",
    "twist",
    "rho_form",
    "trace_form",
]


class ZeroDivisorFound(ArithmeticError):
    """Inversion hit a nonzero zero divisor; carries the witness value."""

    def __init__(self, algebra, value):
        super().__init__("nonzero element is not invertible")
        self.algebra = algebra
        self.value = value


class SplitWitness:
    """An explicit zero divisor: proof that the algebra is not division."""

    def __init__(self, algebra: Algebra, element: AlgebraElement):
        self.algebra = algebra
        self.element = element

    def __repr__(self):
        return f"SplitWitness({self.element})"


# ---------------------------------------------------------------------------
# scalar helpers for the two coefficient domains used by quaternion kinds
# ---------------------------------------------------------------------------


class _TowerScalars:
    """Raw tower values as the scalar domain (kind (iv))."""

    def __init__(self, tower: FieldTower):
        self.tower = tower
        self._lvl = tower.depth - 1

    def zero(self):
        return self.tower._from_rat(self._lvl, Fraction(0))

    def one(self):
        return self.tower._from_rat(self._lvl, Fraction(1))

    def from_base(self, v):
        return v

    def add(self, x, y):
        return self.tower._add(self._lvl, x, y)

    def sub(self, x, y):
        return self.tower._sub(self._lvl, x, y)

    def mul(self, x, y):
        return self.tower._mul(self._lvl, x, y)

    def neg(self, x):
        return self.tower._neg(self._lvl, x)

    def inv(self, x):
        return self.tower._inv(self._lvl, x)

    def is_zero(self, x):
        return self.tower._is_zero(self._lvl, x)

    def conj(self, x):
        return x

    def base_coords(self, x):
        return [x]

    def from_base_coords(self, coords):
        return coords[0]


class _QuadExtScalars:
    """Pairs (u, v) = u + v*sqrt(alpha) over the tower (kinds (iii), (v))."""

    def __init__(self, tower: FieldTower, alpha):
        self.tower = tower
        self.alpha = alpha
        self._lvl = tower.depth - 1

    def zero(self):
        z = self.tower._from_rat(self._lvl, Fraction(0))
        return (z, z)

    def one(self):
        return (
            self.tower._from_rat(self._lvl, Fraction(1)),
            self.tower._from_rat(self._lvl, Fraction(0)),
        )

    def root(self):
        return (
            self.tower._from_rat(self._lvl, Fraction(0)),
            self.tower._from_rat(self._lvl, Fraction(1)),
        )

    def from_base(self, v):
        return (v, self.tower._from_rat(self._lvl, Fraction(0)))

    def add(self, x, y):
        t, l = self.tower, self._lvl
        return (t._add(l, x[0], y[0]), t._add(l, x[1], y[1]))

    def sub(self, x, y):
        t, l = self.tower, self._lvl
        return (t._sub(l, x[0], y[0]), t._sub(l, x[1], y[1]))

    def mul(self, x, y):
        t, l = self.tower, self._lvl
        uu = t._mul(l, x[0], y[0])
        vv = t._mul(l, x[1], y[1])
        uv = t._mul(l, x[0], y[1])
        vu = t._mul(l, x[1], y[0])
        return (t._add(l, uu, t._mul(l, self.alpha, vv)), t._add(l, uv, vu))

    def neg(self, x):
        t, l = self.tower, self._lvl
        return (t._neg(l, x[0]), t._neg(l, x[1]))

    def inv(self, x):
        t, l = self.tower, self._lvl
        n = t._sub(
            l, t._mul(l, x[0], x[0]), t._mul(l, self.alpha, t._mul(l, x[1], x[1]))
        )
        ninv = t._inv(l, n)
        return (t._mul(l, x[0], ninv), t._neg(l, t._mul(l, x[1], ninv)))

    def is_zero(self, x):
        t, l = self.tower, self._lvl
        return t._is_zero(l, x[0]) and t._is_zero(l, x[1])

    def conj(self, x):
        return (x[0], self.tower._neg(self._lvl, x[1]))

    def norm(self, x):
        t, l = self.tower, self._lvl
        return t._sub(
            l, t._mul(l, x[0], x[0]), t._mul(l, self.alpha, t._mul(l, x[1], x[1]))
        )

    def trace(self, x):
        return self.tower._add(self._lvl, x[0], x[0])

    def base_coords(self, x):
        return [x[0], x[1]]

    def from_base_coords(self, coords):
        return (coords[0], coords[1])


def _quat_mul(s, a, b, x, y):
    ab = s.mul(a, b)
    z0 = s.add(
        s.add(s.mul(x[0], y[0]), s.mul(a, s.mul(x[1], y[1]))),
        s.sub(s.mul(b, s.mul(x[2], y[2])), s.mul(ab, s.mul(x[3], y[3]))),
    )
    z1 = s.add(
        s.add(s.mul(x[0], y[1]), s.mul(x[1], y[0])),
        s.mul(b, s.sub(s.mul(x[3], y[2]), s.mul(x[2], y[3]))),
    )
    z2 = s.add(
        s.add(s.mul(x[0], y[2]), s.mul(x[2], y[0])),
        s.mul(a, s.sub(s.mul(x[1], y[3]), s.mul(x[3], y[1]))),
    )
    z3 = s.add(
        s.add(s.mul(x[0], y[3]), s.mul(x[3], y[0])),
        s.sub(s.mul(x[1], y[2]), s.mul(x[2], y[1])),
    )
    return (z0, z1, z2, z3)


def _quat_conj(s, x):
    return (x[0], s.neg(x[1]), s.neg(x[2]), s.neg(x[3]))


def _quat_nrd(s, a, b, x):
    ab = s.mul(a, b)
    return s.add(
        s.sub(s.mul(x[0], x[0]), s.mul(a, s.mul(x[1], x[1]))),
        s.sub(s.mul(ab, s.mul(x[3], x[3])), s.mul(b, s.mul(x[2], x[2]))),
    )


# ---------------------------------------------------------------------------
# the algebra catalogue
# ---------------------------------------------------------------------------


class Algebra:
    """Common interface of the catalogue; concrete kinds subclass this."""

    kind: str
    field: FieldTower

    # dimension over the base field
    dim: int

    def one(self):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def add(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def involution(self, x):
        raise NotImplementedError

    def inverse(self, x):
        raise NotImplementedError

    def is_zero(self, x):
        raise NotImplementedError

    def scalar_mul(self, c, x):
        """Multiply by a base-field element."""
        raise NotImplementedError

    def coords(self, x) -> list[FieldElement]:
        raise NotImplementedError

    def from_coords(self, coords) -> object:
        raise NotImplementedError

    def basis_values(self) -> list:
        out = []
        for i in range(self.dim):
            coords = [self.field.zero()] * self.dim
            coords[i] = self.field.one()
            out.append(self.from_coords(coords))
        return out

    def reduced_trace(self, x) -> FieldElement:
        raise NotImplementedError

    def reduced_norm(self, x) -> FieldElement:
        raise NotImplementedError

    def elem(self, value) -> AlgebraElement:
        return AlgebraElement(self, value)

    def from_field(self, c) -> AlgebraElement:
        c = self.field.coerce(c)
        return self.elem(self.scalar_mul(c, self.one()))

    def basis(self) -> list[AlgebraElement]:
        return [self.elem(v) for v in self.basis_values()]

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def equal(self, x, y) -> bool:
        return self.is_zero(self.sub(x, y))

    def lift_to(self, tower: FieldTower) -> Algebra:
        raise NotImplementedError

    def lift_value(self, value, target: Algebra):
        coords = self.coords(value)
        return target.from_coords([c.lift_to(target.field) for c in coords])

    def to_json(self) -> dict:
        raise NotImplementedError

    def value_to_json(self, value):
        raise NotImplementedError

    def value_from_json(self, doc):
        raise NotImplementedError

    def __eq__(self, other):
        return (
            isinstance(other, Algebra)
            and self.kind == other.kind
            and self.to_json() == other.to_json()
        )

    def __hash__(self):
        import json

        return hash(json.dumps(self.to_json(), sort_keys=True))

    def __repr__(self):
        return f"<{self.describe()}>"

    def describe(self) -> str:
        return self.kind


class FieldAlgebra(Algebra):
    """(F, id)."""

    kind = "field_id"

    def __init__(self, field: FieldTower):
        self.field = field
        self.dim = 1
        self._lvl = field.depth - 1

    def one(self):
        return self.field._from_rat(self._lvl, Fraction(1))

    def zero(self):
        return self.field._from_rat(self._lvl, Fraction(0))

    def add(self, x, y):
        return self.field._add(self._lvl, x, y)

    def neg(self, x):
        return self.field._neg(self._lvl, x)

    def mul(self, x, y):
        return self.field._mul(self._lvl, x, y)

    def involution(self, x):
        return x

    def inverse(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero")
        return self.field._inv(self._lvl, x)

    def is_zero(self, x):
        return self.field._is_zero(self._lvl, x)

    def scalar_mul(self, c, x):
        return self.field._mul(self._lvl, c.value, x)

    def coords(self, x):
        return [FieldElement(self.field, x)]

    def from_coords(self, coords):
        return coords[0].value

    def reduced_trace(self, x):
        return FieldElement(self.field, x)

    def reduced_norm(self, x):
        return FieldElement(self.field, x)

    def lift_to(self, tower):
        return FieldAlgebra(tower)

    def to_json(self):
        return {"kind": "field_id", "field": self.field.to_json()}

    def value_to_json(self, value):
        return self.field._value_to_json(self._lvl, value)

    def value_from_json(self, doc):
        return self.field._value_from_json(self._lvl, doc)

    def describe(self):
        return f"({self.field.describe()}, id)"


class ExchangeAlgebra(Algebra):
    """(F x F, exchange)."""

    kind = "exchange"

    def __init__(self, field: FieldTower):
        self.field = field
        self.dim = 2
        self._lvl = field.depth - 1

    def one(self):
        o = self.field._from_rat(self._lvl, Fraction(1))
        return (o, o)

    def zero(self):
        z = self.field._from_rat(self._lvl, Fraction(0))
        return (z, z)

    def add(self, x, y):
        t, l = self.field, self._lvl
        return (t._add(l, x[0], y[0]), t._add(l, x[1], y[1]))

    def neg(self, x):
        t, l = self.field, self._lvl
        return (t._neg(l, x[0]), t._neg(l, x[1]))

    def mul(self, x, y):
        t, l = self.field, self._lvl
        return (t._mul(l, x[0], y[0]), t._mul(l, x[1], y[1]))

    def involution(self, x):
        return (x[1], x[0])

    def inverse(self, x):
        t, l = self.field, self._lvl
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero")
        if t._is_zero(l, x[0]) or t._is_zero(l, x[1]):
            raise ZeroDivisorFound(self, x)
        return (t._inv(l, x[0]), t._inv(l, x[1]))

    def is_zero(self, x):
        t, l = self.field, self._lvl
        return t._is_zero(l, x[0]) and t._is_zero(l, x[1])

    def scalar_mul(self, c, x):
        t, l = self.field, self._lvl
        return (t._mul(l, c.value, x[0]), t._mul(l, c.value, x[1]))

    def coords(self, x):
        return [FieldElement(self.field, x[0]), FieldElement(self.field, x[1])]

    def from_coords(self, coords):
        return (coords[0].value, coords[1].value)

    def reduced_trace(self, x):
        return FieldElement(self.field, self.field._add(self._lvl, x[0], x[1]))

    def reduced_norm(self, x):
        return FieldElement(self.field, self.field._mul(self._lvl, x[0], x[1]))

    def lift_to(self, tower):
        return ExchangeAlgebra(tower)

    def to_json(self):
        return {"kind": "exchange", "field": self.field.to_json()}

    def value_to_json(self, value):
        j = self.field._value_to_json
        return {"left": j(self._lvl, value[0]), "right": j(self._lvl, value[1])}

    def value_from_json(self, doc):
        if not isinstance(doc, dict) or set(doc) != {"left", "right"}:
            raise MismatchError("exchange element takes keys 'left', 'right'")
        f = self.field._value_from_json
        return (f(self._lvl, doc["left"]), f(self._lvl, doc["right"]))

    def describe(self):
        return f"({self.field.describe()} x {self.field.describe()}, exchange)"


class UnitaryQuadraticAlgebra(Algebra):
    """(F(sqrt(alpha)), conjugation) for a non-square alpha."""

    kind = "unitary_quadratic"

    def __init__(self, field: FieldTower, alpha):
        self.field = field
        alpha = field.coerce(alpha)
        if alpha.is_zero() or alpha.is_square():
            raise MismatchError("alpha must be a nonzero non-square")
        self.alpha = alpha
        self.dim = 2
        self._s = _QuadExtScalars(field, alpha.value)

    def one(self):
        return self._s.one()

    def zero(self):
        return self._s.zero()

    def add(self, x, y):
        return self._s.add(x, y)

    def neg(self, x):
        return self._s.neg(x)

    def mul(self, x, y):
        return self._s.mul(x, y)

    def involution(self, x):
        return self._s.conj(x)

    def inverse(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero")
        return self._s.inv(x)

    def is_zero(self, x):
        return self._s.is_zero(x)

    def scalar_mul(self, c, x):
        return self._s.mul(self._s.from_base(c.value), x)

    def coords(self, x):
        return [FieldElement(self.field, x[0]), FieldElement(self.field, x[1])]

    def from_coords(self, coords):
        return (coords[0].value, coords[1].value)

    def reduced_trace(self, x):
        return FieldElement(self.field, self._s.trace(x))

    def reduced_norm(self, x):
        return FieldElement(self.field, self._s.norm(x))

    def lift_to(self, tower):
        return UnitaryQuadraticAlgebra(tower, self.alpha.lift_to(tower))

    def to_json(self):
        return {
            "kind": "unitary_quadratic",
            "field": self.field.to_json(),
            "alpha": self.alpha.to_json(),
        }

    def value_to_json(self, value):
        j = self.field._value_to_json
        lvl = self.field.depth - 1
        return {"u": j(lvl, value[0]), "v": j(lvl, value[1])}

    def value_from_json(self, doc):
        if not isinstance(doc, dict) or set(doc) != {"u", "v"}:
            raise MismatchError("quadratic-extension element takes keys 'u', 'v'")
        f = self.field._value_from_json
        lvl = self.field.depth - 1
        return (f(lvl, doc["u"]), f(lvl, doc["v"]))

    def describe(self):
        return f"({self.field.describe()}(sqrt({self.alpha})), conj)"


class QuaternionAlgebra(Algebra):
    """((a, b)_F, gamma) or ((a, b)_F, Int(u) o gamma) for pure invertible u."""

    kind = "quaternion"

    def __init__(self, field: FieldTower, a, b, involution="conjugation", u=None):
        self.field = field
        self.a = field.coerce(a)
        self.b = field.coerce(b)
        if self.a.is_zero() or self.b.is_zero():
            raise MismatchError("quaternion parameters must be nonzero")
        if involution not in ("conjugation", "orthogonal"):
            raise MismatchError("involution must be conjugation or orthogonal")
        self.involution_type = involution
        self.dim = 4
        self._s = _TowerScalars(field)
        if involution == "orthogonal":
            if u is None:
                raise MismatchError("orthogonal involution needs a pure quaternion u")
            uval = tuple(field.coerce(c).value for c in u)
            if len(uval) != 4 or not self._s.is_zero(uval[0]):
                raise MismatchError("u must be a pure quaternion (zero scalar part)")
            n = _quat_nrd(self._s, self.a.value, self.b.value, uval)
            if self._s.is_zero(n):
                raise MismatchError("u must be invertible (nonzero reduced norm)")
            self.u = uval
            # u pure and invertible: u^-1 = -u / Nrd(u)
            ninv = self._s.inv(n)
            self._u_inv = tuple(
                self._s.neg(self._s.mul(c, ninv)) for c in uval
            )
        else:
            if u is not None:
                raise MismatchError("conjugation takes no twisting element")
            self.u = None
            self._u_inv = None

    def one(self):
        s = self._s
        return (s.one(), s.zero(), s.zero(), s.zero())

    def zero(self):
        z = self._s.zero()
        return (z, z, z, z)

    def add(self, x, y):
        s = self._s
        return tuple(s.add(p, q) for p, q in zip(x, y))

    def neg(self, x):
        s = self._s
        return tuple(s.neg(p) for p in x)

    def mul(self, x, y):
        return _quat_mul(self._s, self.a.value, self.b.value, x, y)

    def involution(self, x):
        g = _quat_conj(self._s, x)
        if self.involution_type == "conjugation":
            return g
        return self.mul(self.u, self.mul(g, self._u_inv))

    def conjugation(self, x):
        return _quat_conj(self._s, x)

    def inverse(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero")
        n = _quat_nrd(self._s, self.a.value, self.b.value, x)
        if self._s.is_zero(n):
            raise ZeroDivisorFound(self, x)
        ninv = self._s.inv(n)
        g = _quat_conj(self._s, x)
        return tuple(self._s.mul(c, ninv) for c in g)

    def is_zero(self, x):
        return all(self._s.is_zero(c) for c in x)

    def scalar_mul(self, c, x):
        return tuple(self._s.mul(c.value, p) for p in x)

    def coords(self, x):
        return [FieldElement(self.field, c) for c in x]

    def from_coords(self, coords):
        return tuple(c.value for c in coords)

    def reduced_trace(self, x):
        return FieldElement(self.field, self._s.add(x[0], x[0]))

    def reduced_norm(self, x):
        return FieldElement(
            self.field, _quat_nrd(self._s, self.a.value, self.b.value, x)
        )

    def lift_to(self, tower):
        u = None
        if self.u is not None:
            u = [FieldElement(self.field, c).lift_to(tower) for c in self.u]
        return QuaternionAlgebra(
            tower,
            self.a.lift_to(tower),
            self.b.lift_to(tower),
            self.involution_type,
            u,
        )

    def to_json(self):
        inv: dict = {"type": self.involution_type}
        if self.u is not None:
            inv["u"] = [
                self.field._value_to_json(self.field.depth - 1, c) for c in self.u
            ]
        return {
            "kind": "quaternion",
            "field": self.field.to_json(),
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "involution": inv,
        }

    def value_to_json(self, value):
        lvl = self.field.depth - 1
        return [self.field._value_to_json(lvl, c) for c in value]

    def value_from_json(self, doc):
        if not isinstance(doc, list) or len(doc) != 4:
            raise MismatchError("quaternion element is a list of 4 coordinates")
        lvl = self.field.depth - 1
        return tuple(self.field._value_from_json(lvl, c) for c in doc)

    def describe(self):
        inv = "conj" if self.involution_type == "conjugation" else "Int(u)conj"
        return f"(({self.a}, {self.b})_{self.field.describe()}, {inv})"


class UnitaryQuaternionAlgebra(Algebra):
    """((a, b) over F(sqrt(alpha)), quaternion conjugation tensor conj).

    a and b stay in F, which keeps the involution of the second kind and
    the arithmetic inside one quaternion layer.
    """

    kind = "unitary_quaternion"

    def __init__(self, field: FieldTower, a, b, alpha):
        self.field = field
        self.a = field.coerce(a)
        self.b = field.coerce(b)
        alpha = field.coerce(alpha)
        if self.a.is_zero() or self.b.is_zero():
            raise MismatchError("quaternion parameters must be nonzero")
        if alpha.is_zero() or alpha.is_square():
            raise MismatchError("alpha must be a nonzero non-square")
        self.alpha = alpha
        self.dim = 8
        self._s = _QuadExtScalars(field, alpha.value)
        self._a = self._s.from_base(self.a.value)
        self._b = self._s.from_base(self.b.value)

    def one(self):
        s = self._s
        return (s.one(), s.zero(), s.zero(), s.zero())

    def zero(self):
        z = self._s.zero()
        return (z, z, z, z)

    def add(self, x, y):
        s = self._s
        return tuple(s.add(p, q) for p, q in zip(x, y))

    def neg(self, x):
        s = self._s
        return tuple(s.neg(p) for p in x)

    def mul(self, x, y):
        return _quat_mul(self._s, self._a, self._b, x, y)

    def involution(self, x):
        g = _quat_conj(self._s, x)
        return tuple(self._s.conj(c) for c in g)

    def inverse(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero")
        n = _quat_nrd(self._s, self._a, self._b, x)
        if self._s.is_zero(n):
            raise ZeroDivisorFound(self, x)
        ninv = self._s.inv(n)
        g = _quat_conj(self._s, x)
        return tuple(self._s.mul(c, ninv) for c in g)

    def is_zero(self, x):
        return all(self._s.is_zero(c) for c in x)

    def scalar_mul(self, c, x):
        cc = self._s.from_base(c.value)
        return tuple(self._s.mul(cc, p) for p in x)

    def coords(self, x):
        out = []
        for c in x:
            out.append(FieldElement(self.field, c[0]))
            out.append(FieldElement(self.field, c[1]))
        return out

    def from_coords(self, coords):
        return tuple(
            (coords[2 * i].value, coords[2 * i + 1].value) for i in range(4)
        )

    def centre_nrd(self, x):
        """Reduced norm over the centre F(sqrt(alpha)), as a pair."""
        return _quat_nrd(self._s, self._a, self._b, x)

    def reduced_trace(self, x):
        """Trace composed down to the base field: Tr_{Z/F}(Trd)."""
        t = self._s.trace(self._s.add(x[0], x[0]))
        return FieldElement(self.field, t)

    def reduced_norm(self, x):
        """Norm composed down to the base field: N_{Z/F}(Nrd)."""
        return FieldElement(self.field, self._s.norm(self.centre_nrd(x)))

    def lift_to(self, tower):
        return UnitaryQuaternionAlgebra(
            tower,
            self.a.lift_to(tower),
            self.b.lift_to(tower),
            self.alpha.lift_to(tower),
        )

    def to_json(self):
        return {
            "kind": "unitary_quaternion",
            "field": self.field.to_json(),
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "alpha": self.alpha.to_json(),
        }

    def value_to_json(self, value):
        lvl = self.field.depth - 1
        j = self.field._value_to_json
        return [{"u": j(lvl, c[0]), "v": j(lvl, c[1])} for c in value]

    def value_from_json(self, doc):
        if not isinstance(doc, list) or len(doc) != 4:
            raise MismatchError("element is a list of 4 centre coordinates")
        lvl = self.field.depth - 1
        f = self.field._value_from_json
        out = []
        for c in doc:
            if not isinstance(c, dict) or set(c) != {"u", "v"}:
                raise MismatchError("centre coordinates take keys 'u', 'v'")
            out.append((f(lvl, c["u"]), f(lvl, c["v"])))
        return tuple(out)

    def describe(self):
        return (
            f"(({self.a}, {self.b}) over {self.field.describe()}"
            f"(sqrt({self.alpha})), unitary)"
        )


class MatrixAlgebra(Algebra):
    """(M_n(D), adjoint involution of a diagonal hermitian scaling g)."""

    kind = "matrix"

    def __init__(self, n: int, inner: Algebra, g=None):
        if n < 1:
            raise MismatchError("matrix size must be at least 1")
        if inner.kind in ("matrix", "exchange"):
            raise MismatchError("matrix wrapper takes a non-matrix division kind")
        self.n = n
        self.inner = inner
        self.field = inner.field
        self.dim = n * n * inner.dim
        if g is None:
            g = [inner.elem(inner.one()) for _ in range(n)]
        gv = []
        for gi in g:
            v = gi.value if isinstance(gi, AlgebraElement) else gi
            if not inner.equal(inner.involution(v), v):
                raise MismatchError("scaling entries must be fixed by the involution")
            inner.inverse(v)  # raises if not invertible
            gv.append(v)
        if len(gv) != n:
            raise MismatchError("scaling needs one entry per row")
        self.g = tuple(gv)
        self._g_inv = tuple(inner.inverse(v) for v in gv)

    def one(self):
        z = self.inner.zero()
        o = self.inner.one()
        return tuple(
            tuple(o if i == j else z for j in range(self.n)) for i in range(self.n)
        )

    def zero(self):
        z = self.inner.zero()
        return tuple(tuple(z for _ in range(self.n)) for _ in range(self.n))

    def add(self, x, y):
        return tuple(
            tuple(self.inner.add(x[i][j], y[i][j]) for j in range(self.n))
            for i in range(self.n)
        )

    def neg(self, x):
        return tuple(
            tuple(self.inner.neg(x[i][j]) for j in range(self.n))
            for i in range(self.n)
        )

    def mul(self, x, y):
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.inner.zero()
                for t in range(n):
                    acc = self.inner.add(acc, self.inner.mul(x[i][t], y[t][j]))
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def involution(self, x):
        # (sigma X)_{ij} = g_i^-1 theta(X_{ji}) g_j
        n = self.n
        return tuple(
            tuple(
                self.inner.mul(
                    self._g_inv[i],
                    self.inner.mul(self.inner.involution(x[j][i]), self.g[j]),
                )
                for j in range(n)
            )
            for i in range(n)
        )

    def inverse(self, x):
        """Row reduction over the inner algebra (a division ring on the
        catalogue); a non-invertible pivot surfaces the inner witness."""
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero")
        n = self.n
        work = [list(row) for row in x]
        aug = [
            [self.inner.one() if i == j else self.inner.zero() for j in range(n)]
            for i in range(n)
        ]
        for col in range(n):
            piv = next(
                (r for r in range(col, n) if not self.inner.is_zero(work[r][col])),
                None,
            )
            if piv is None:
                raise ZeroDivisorFound(self, x)
            work[col], work[piv] = work[piv], work[col]
            aug[col], aug[piv] = aug[piv], aug[col]
            pinv = self.inner.inverse(work[col][col])
            work[col] = [self.inner.mul(pinv, v) for v in work[col]]
            aug[col] = [self.inner.mul(pinv, v) for v in aug[col]]
            for r in range(n):
                if r == col or self.inner.is_zero(work[r][col]):
                    continue
                f = work[r][col]
                work[r] = [
                    self.inner.sub(v, self.inner.mul(f, w))
                    for v, w in zip(work[r], work[col])
                ]
                aug[r] = [
                    self.inner.sub(v, self.inner.mul(f, w))
                    for v, w in zip(aug[r], aug[col])
                ]
        return tuple(tuple(row) for row in aug)

    def is_zero(self, x):
        return all(self.inner.is_zero(v) for row in x for v in row)

    def scalar_mul(self, c, x):
        return tuple(
            tuple(self.inner.scalar_mul(c, v) for v in row) for row in x
        )

    def coords(self, x):
        out = []
        for row in x:
            for v in row:
                out.extend(self.inner.coords(v))
        return out

    def from_coords(self, coords):
        d = self.inner.dim
        rows = []
        idx = 0
        for _ in range(self.n):
            row = []
            for _ in range(self.n):
                row.append(self.inner.from_coords(coords[idx : idx + d]))
                idx += d
            rows.append(tuple(row))
        return tuple(rows)

    def reduced_trace(self, x):
        acc = self.field.zero()
        for i in range(self.n):
            acc = acc + self.inner.reduced_trace(x[i][i])
        return acc

    def reduced_norm(self, x):
        raise MismatchError(
            "reduced norms of matrix wrappers are not supported; invert "
            "or flatten instead"
        )

    def lift_to(self, tower):
        inner = self.inner.lift_to(tower)
        g = [inner.elem(self.inner.lift_value(v, inner)) for v in self.g]
        return MatrixAlgebra(self.n, inner, g)

    def to_json(self):
        return {
            "kind": "matrix",
            "n": self.n,
            "inner": self.inner.to_json(),
            "g": [self.inner.value_to_json(v) for v in self.g],
        }

    def value_to_json(self, value):
        return [[self.inner.value_to_json(v) for v in row] for row in value]

    def value_from_json(self, doc):
        if not isinstance(doc, list) or len(doc) != self.n:
            raise MismatchError("matrix element is an n x n nested list")
        rows = []
        for row in doc:
            if not isinstance(row, list) or len(row) != self.n:
                raise MismatchError("matrix element is an n x n nested list")
            rows.append(tuple(self.inner.value_from_json(v) for v in row))
        return tuple(rows)

    def describe(self):
        return f"M_{self.n}({self.inner.describe()})"


def algebra_from_json(doc: dict) -> Algebra:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise MismatchError("algebra document needs a 'kind'")
    kind = doc["kind"]
    if kind == "field_id":
        if set(doc) != {"kind", "field"}:
            raise MismatchError("field_id takes exactly the key 'field'")
        return FieldAlgebra(FieldTower.from_json(doc["field"]))
    if kind == "exchange":
        if set(doc) != {"kind", "field"}:
            raise MismatchError("exchange takes exactly the key 'field'")
        return ExchangeAlgebra(FieldTower.from_json(doc["field"]))
    if kind == "unitary_quadratic":
        if set(doc) != {"kind", "field", "alpha"}:
            raise MismatchError("unitary_quadratic takes keys 'field', 'alpha'")
        field = FieldTower.from_json(doc["field"])
        return UnitaryQuadraticAlgebra(field, field.element_from_json(doc["alpha"]))
    if kind == "quaternion":
        if set(doc) != {"kind", "field", "a", "b", "involution"}:
            raise MismatchError(
                "quaternion takes keys 'field', 'a', 'b', 'involution'"
            )
        field = FieldTower.from_json(doc["field"])
        inv = doc["involution"]
        if not isinstance(inv, dict) or "type" not in inv:
            raise MismatchError("involution needs a 'type'")
        a = field.element_from_json(doc["a"])
        b = field.element_from_json(doc["b"])
        if inv["type"] == "conjugation":
            if set(inv) != {"type"}:
                raise MismatchError("conjugation takes no extra keys")
            return QuaternionAlgebra(field, a, b, "conjugation")
        if inv["type"] == "orthogonal":
            if set(inv) != {"type", "u"}:
                raise MismatchError("orthogonal takes the key 'u'")
            u = [field.element_from_json(c) for c in inv["u"]]
            return QuaternionAlgebra(field, a, b, "orthogonal", u)
        raise MismatchError(f"unknown involution type {inv['type']!r}")
    if kind == "unitary_quaternion":
        if set(doc) != {"kind", "field", "a", "b", "alpha"}:
            raise MismatchError(
                "unitary_quaternion takes keys 'field', 'a', 'b', 'alpha'"
            )
        field = FieldTower.from_json(doc["field"])
        return UnitaryQuaternionAlgebra(
            field,
            field.element_from_json(doc["a"]),
            field.element_from_json(doc["b"]),
            field.element_from_json(doc["alpha"]),
        )
    if kind == "matrix":
        if set(doc) != {"kind", "n", "inner", "g"}:
            raise MismatchError("matrix takes keys 'n', 'inner', 'g'")
        inner = algebra_from_json(doc["inner"])
        g = [inner.elem(inner.value_from_json(v)) for v in doc["g"]]
        return MatrixAlgebra(int(doc["n"]), inner, g)
    raise MismatchError(f"unknown algebra kind {kind!r}")


class AlgebraElement:
    """An element of a catalogue algebra.  Immutable."""

    __slots__ = ("algebra", "value")

    def __init__(self, algebra: Algebra, value):
        self.algebra = algebra
        self.value = value

    def _coerced(self, other):
        if isinstance(other, AlgebraElement):
            if other.algebra != self.algebra:
                raise MismatchError("elements of different algebras")
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.algebra.from_field(other)
        raise TypeError(f"cannot coerce {other!r}")

    def __add__(self, other):
        o = self._coerced(other)
        return AlgebraElement(self.algebra, self.algebra.add(self.value, o.value))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerced(other)
        return AlgebraElement(self.algebra, self.algebra.sub(self.value, o.value))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return AlgebraElement(self.algebra, self.algebra.neg(self.value))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            c = self.algebra.field.coerce(other)
            return AlgebraElement(
                self.algebra, self.algebra.scalar_mul(c, self.value)
            )
        o = self._coerced(other)
        return AlgebraElement(self.algebra, self.algebra.mul(self.value, o.value))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.__mul__(other)
        o = self._coerced(other)
        return AlgebraElement(self.algebra, self.algebra.mul(o.value, self.value))

    def involution(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.algebra.involution(self.value))

    def inverse(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.algebra.inverse(self.value))

    def is_zero(self) -> bool:
        return self.algebra.is_zero(self.value)

    def is_invertible(self) -> bool:
        if self.is_zero():
            return False
        try:
            self.algebra.inverse(self.value)
            return True
        except ZeroDivisorFound:
            return False

    def reduced_trace(self) -> FieldElement:
        return self.algebra.reduced_trace(self.value)

    def reduced_norm(self) -> FieldElement:
        return self.algebra.reduced_norm(self.value)

    def coords(self) -> list[FieldElement]:
        return self.algebra.coords(self.value)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            try:
                other = self._coerced(other)
            except (TypeError, MismatchError):
                return NotImplemented
        return self.algebra == other.algebra and self.algebra.equal(
            self.value, other.value
        )

    def __hash__(self):
        return hash((self.algebra, str(self.algebra.value_to_json(self.value))))

    def __repr__(self):
        return f"AlgebraElement({self.algebra.value_to_json(self.value)})"

    def __str__(self):
        return str(self.algebra.value_to_json(self.value))

    def to_json(self):
        return self.algebra.value_to_json(self.value)

    def lift_to(self, target: Algebra) -> AlgebraElement:
        return AlgebraElement(target, self.algebra.lift_value(self.value, target))


def involution_apply(A: Algebra, z: AlgebraElement) -> AlgebraElement:
    if z.algebra != A:
        raise MismatchError("element does not belong to the algebra")
    return z.involution()


def reduced_trace(A: Algebra, z: AlgebraElement) -> FieldElement:
    if z.algebra != A:
        raise MismatchError("element does not belong to the algebra")
    return z.reduced_trace()


def reduced_norm(A: Algebra, z: AlgebraElement) -> FieldElement:
    if z.algebra != A:
        raise MismatchError("element does not belong to the algebra")
    return z.reduced_norm()


def sym_basis(A: Algebra) -> list[AlgebraElement]:
    """A base-field basis of the symmetric elements of (A, sigma).

    Computed as the kernel of sigma - id on the algebra, with pivots in
    basis order, so simple kinds return their canonical bases.
    """
    field = A.field
    basis = A.basis_values()
    dim = A.dim
    cols = []
    for v in basis:
        w = A.sub(A.involution(v), v)
        cols.append(A.coords(w))
    # row-reduce the dim x dim system M c = 0 (columns indexed by basis)
    rows = [[cols[j][i] for j in range(dim)] for i in range(dim)]
    pivots = []
    r = 0
    for c in range(dim):
        piv = next((i for i in range(r, dim) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(dim):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(dim) if c not in pivots]
    out = []
    for fcol in free:
        coords = [field.zero()] * dim
        coords[fcol] = field.one()
        for rr, pc in enumerate(pivots):
            coords[pc] = -rows[rr][fcol]
        out.append(A.elem(A.from_coords(coords)))
    return out


class HermitianForm:
    """An epsilon-hermitian form by its Gram matrix over a catalogue algebra."""

    __slots__ = ("algebra", "epsilon", "gram")

    def __init__(self, algebra: Algebra, gram, epsilon: int = 1):
        if epsilon not in (1, -1):
            raise MismatchError("epsilon must be +1 or -1")
        self.algebra = algebra
        self.epsilon = epsilon
        g = []
        for row in gram:
            g.append(
                tuple(
                    x.value if isinstance(x, AlgebraElement) else x for x in row
                )
            )
        self.gram = tuple(g)
        k = len(self.gram)
        for row in self.gram:
            if len(row) != k:
                raise MismatchError("Gram matrix must be square")
        for i in range(k):
            for j in range(k):
                lhs = algebra.involution(self.gram[j][i])
                rhs = algebra.scalar_mul(
                    algebra.field.rational(epsilon), self.gram[i][j]
                )
                if not algebra.equal(lhs, rhs):
                    raise MismatchError("Gram matrix is not epsilon-hermitian")

    @staticmethod
    def diagonal(algebra: Algebra, entries, epsilon: int = 1) -> HermitianForm:
        vals = []
        for e in entries:
            if isinstance(e, AlgebraElement):
                if e.algebra != algebra:
                    raise MismatchError("entry from a different algebra")
                vals.append(e.value)
            elif isinstance(e, (int, Fraction, FieldElement)):
                vals.append(algebra.from_field(e).value)
            else:
                vals.append(e)
        z = algebra.zero()
        gram = [
            [vals[i] if i == j else z for j in range(len(vals))]
            for i in range(len(vals))
        ]
        return HermitianForm(algebra, gram, epsilon)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def entry(self, i: int, j: int) -> AlgebraElement:
        return self.algebra.elem(self.gram[i][j])

    def diagonal_entries(self) -> list[AlgebraElement]:
        if not self.is_diagonal():
            raise MismatchError("form is not diagonal")
        return [self.algebra.elem(self.gram[i][i]) for i in range(self.rank)]

    def is_diagonal(self) -> bool:
        return all(
            self.algebra.is_zero(self.gram[i][j])
            for i in range(self.rank)
            for j in range(self.rank)
            if i != j
        )

    def direct_sum(self, other: HermitianForm) -> HermitianForm:
        if other.algebra != self.algebra or other.epsilon != self.epsilon:
            raise MismatchError("forms are not compatible")
        z = self.algebra.zero()
        k, m = self.rank, other.rank
        gram = []
        for i in range(k):
            gram.append(list(self.gram[i]) + [z] * m)
        for i in range(m):
            gram.append([z] * k + list(other.gram[i]))
        return HermitianForm(self.algebra, gram, self.epsilon)

    def __add__(self, other):
        return self.direct_sum(other)

    def module_scale(self, q: QuadraticForm) -> HermitianForm:
        """The W(F)-module product q . h (block sum of scaled copies)."""
        if q.field != self.algebra.field:
            raise MismatchError("scaling form lives over a different field")
        out = None
        for c in q.entries:
            scaled = HermitianForm(
                self.algebra,
                [
                    [self.algebra.scalar_mul(c, v) for v in row]
                    for row in self.gram
                ],
                self.epsilon,
            )
            out = scaled if out is None else out.direct_sum(scaled)
        if out is None:
            out = HermitianForm(self.algebra, [], self.epsilon)
        return out

    def scale_field(self, c) -> HermitianForm:
        c = self.algebra.field.coerce(c)
        return HermitianForm(
            self.algebra,
            [[self.algebra.scalar_mul(c, v) for v in row] for row in self.gram],
            self.epsilon,
        )

    def __neg__(self) -> HermitianForm:
        return HermitianForm(
            self.algebra,
            [[self.algebra.neg(v) for v in row] for row in self.gram],
            self.epsilon,
        )

    def lift_to(self, target: Algebra) -> HermitianForm:
        return HermitianForm(
            target,
            [
                [self.algebra.lift_value(v, target) for v in row]
                for row in self.gram
            ],
            self.epsilon,
        )

    def __eq__(self, other):
        return (
            isinstance(other, HermitianForm)
            and self.algebra == other.algebra
            and self.epsilon == other.epsilon
            and self.rank == other.rank
            and all(
                self.algebra.equal(self.gram[i][j], other.gram[i][j])
                for i in range(self.rank)
                for j in range(self.rank)
            )
        )

    def __repr__(self):
        if self.is_diagonal():
            inside = ", ".join(str(e) for e in self.diagonal_entries())
            return f"herm<{inside}>"
        return f"HermitianForm(rank={self.rank})"

    def to_json(self) -> dict:
        out = {"algebra": self.algebra.to_json(), "epsilon": self.epsilon}
        if self.is_diagonal():
            out["diag"] = [
                self.algebra.value_to_json(self.gram[i][i])
                for i in range(self.rank)
            ]
        else:
            out["gram"] = [
                [self.algebra.value_to_json(v) for v in row] for row in self.gram
            ]
        return out

    @staticmethod
    def from_json(doc: dict) -> HermitianForm:
        if not isinstance(doc, dict) or "algebra" not in doc:
            raise MismatchError("hermitian form document needs an 'algebra'")
        keys = set(doc)
        if keys not in ({"algebra", "epsilon", "gram"}, {"algebra", "epsilon", "diag"}):
            raise MismatchError(
                "hermitian form takes keys 'algebra', 'epsilon' and 'gram' or 'diag'"
            )
        algebra = algebra_from_json(doc["algebra"])
        eps = int(doc["epsilon"])
        if "diag" in doc:
            entries = [algebra.value_from_json(v) for v in doc["diag"]]
            return HermitianForm.diagonal(algebra, entries, eps)
        gram = [[algebra.value_from_json(v) for v in row] for row in doc["gram"]]
        return HermitianForm(algebra, gram, eps)


def morita_flatten(h: HermitianForm) -> HermitianForm:
    """Reduce a form over a matrix wrapper (M_n(D), ad_g) to the inner
    algebra: the nk x nk Gram over D is the blown-up Gram scaled by g."""
    A = h.algebra
    if A.kind != "matrix":
        return h
    inner = A.inner
    n = A.n
    k = h.rank
    gram = [[inner.zero()] * (n * k) for _ in range(n * k)]
    for r in range(k):
        for s in range(k):
            block = h.gram[r][s]
            for i in range(n):
                for j in range(n):
                    gram[r * n + i][s * n + j] = inner.mul(A.g[i], block[i][j])
    return HermitianForm(inner, gram, h.epsilon)


def diagonalize_hermitian(h: HermitianForm):
    """Hermitian elimination: a diagonal form Witt-equal to ``h``, or a
    SplitWitness when a nonzero non-invertible pivot shows up."""
    A = h.algebra
    if h.epsilon != 1:
        raise MismatchError("diagonalization expects a +1-hermitian form")
    g = [list(row) for row in h.gram]
    entries = []
    while g:
        n = len(g)
        piv = None
        for i in range(n):
            if not A.is_zero(g[i][i]):
                try:
                    A.inverse(g[i][i])
                except ZeroDivisorFound as zd:
                    return SplitWitness(A, A.elem(zd.value))
                piv = i
                break
        if piv is None:
            pair = next(
                (
                    (i, j)
                    for i in range(n)
                    for j in range(i + 1, n)
                    if not A.is_zero(g[i][j])
                ),
                None,
            )
            if pair is None:
                raise SingularFormError("hermitian Gram matrix is singular")
            i, j = pair
            try:
                lam = A.inverse(g[i][j])
            except ZeroDivisorFound as zd:
                return SplitWitness(A, A.elem(zd.value))
            # replace e_i by e_i + e_j * lam; new diagonal entry is 2
            for t in range(n):
                g[i][t] = A.add(g[i][t], A.mul(A.involution(lam), g[j][t]))
            for t in range(n):
                g[t][i] = A.add(g[t][i], A.mul(g[t][j], lam))
            piv = i
        if piv != 0:
            g[0], g[piv] = g[piv], g[0]
            for row in g:
                row[0], row[piv] = row[piv], row[0]
        d = g[0][0]
        dinv = A.inverse(d)
        entries.append(d)
        rest = [
            [
                A.sub(g[r][s], A.mul(g[r][0], A.mul(dinv, g[0][s])))
                for s in range(1, len(g))
            ]
            for r in range(1, len(g))
        ]
        g = rest
    return HermitianForm.diagonal(A, entries, 1)


def twist(h: HermitianForm, u: AlgebraElement) -> HermitianForm:
    """Scale a form by an invertible u with sigma(u) = +/- u.

    The Gram matrix becomes u*G and the involution becomes Int(u^-1) o
    sigma; u^2 must be central for this composition, which holds for all
    catalogue twists (pure quaternions and central scalars).
    """
    A = h.algebra
    if u.algebra != A:
        raise MismatchError("twisting element from a different algebra")
    if not u.is_invertible():
        raise MismatchError("twisting element must be invertible")
    su = u.involution()
    if su == u:
        delta = 1
    elif su == -u:
        delta = -1
    else:
        raise MismatchError("twisting element must satisfy sigma(u) = +/- u")
    new_eps = delta * h.epsilon
    new_alg = _twisted_algebra(A, u)
    gram = [[A.mul(u.value, v) for v in row] for row in h.gram]
    return HermitianForm(new_alg, gram, new_eps)


def _twisted_algebra(A: Algebra, u: AlgebraElement) -> Algebra:
    """The algebra carrying Int(u^-1) o sigma, located in the catalogue."""
    uinv = u.inverse()
    if A.kind == "quaternion":
        # compose Int(u^-1) with gamma or Int(w) gamma; the result is
        # Int(c) gamma with c = u^-1 (conjugation) or c = u^-1 w
        if A.involution_type == "conjugation":
            c = uinv
        else:
            c = uinv * A.elem(A.u)
        cval = c.value
        pure = A._s.is_zero(cval[0])
        scalar = all(A._s.is_zero(cc) for cc in cval[1:])
        if scalar:
            return QuaternionAlgebra(A.field, A.a, A.b, "conjugation")
        if pure:
            cu = [FieldElement(A.field, cc) for cc in cval]
            return QuaternionAlgebra(A.field, A.a, A.b, "orthogonal", cu)
        raise MismatchError("twist leaves the supported involution catalogue")
    # commutative kinds and central twists keep their involution
    centre = _central(A, u.value)
    if centre:
        return A
    raise MismatchError("twist by a non-central element of this kind")


def _central(A: Algebra, value) -> bool:
    for b in A.basis_values():
        if not A.equal(A.mul(value, b), A.mul(b, value)):
            return False
    return True


def rho_form(h: HermitianForm) -> QuadraticForm:
    """The base-field quadratic form x -> h(x, x) of a diagonal form with
    entries in the base field, for the degree <= 2 division kinds."""
    A = h.algebra
    if h.epsilon != 1:
        raise MismatchError("the diagonal evaluation map expects epsilon = +1")
    if not h.is_diagonal():
        raise MismatchError("form must be diagonal")
    field = A.field
    scalars = []
    for e in h.diagonal_entries():
        coords = e.coords()
        if any(not c.is_zero() for c in coords[1:]):
            raise MismatchError("diagonal entries must lie in the base field")
        scalars.append(coords[0])
    if A.kind == "field_id":
        return QuadraticForm(field, scalars)
    if A.kind == "unitary_quadratic":
        entries = []
        for c in scalars:
            entries.extend([c, -c * A.alpha])
        return QuadraticForm(field, entries)
    if A.kind == "quaternion" and A.involution_type == "conjugation":
        entries = []
        for c in scalars:
            entries.extend([c, -c * A.a, -c * A.b, c * A.a * A.b])
        return QuadraticForm(field, entries)
    raise MismatchError(
        "diagonal evaluation is defined for (F, id), quadratic conjugation "
        "and quaternion conjugation kinds"
    )


def trace_form(h: HermitianForm) -> QuadraticForm:
    """The base-field form Trd(sigma(x) G y) on the module's F-basis."""
    if h.epsilon != 1:
        raise MismatchError("trace form expects a +1-hermitian form")
    A = h.algebra
    field = A.field
    basis = A.basis_values()
    k = h.rank
    size = k * len(basis)
    gram = [[field.zero()] * size for _ in range(size)]
    sig_basis = [A.involution(b) for b in basis]
    for r in range(k):
        for t in range(k):
            G = h.gram[r][t]
            if A.is_zero(G):
                continue
            for s, sb in enumerate(sig_basis):
                left = A.mul(sb, G)
                for uix, bu in enumerate(basis):
                    val = A.reduced_trace(A.mul(left, bu))
                    gram[r * len(basis) + s][t * len(basis) + uix] = (
                        gram[r * len(basis) + s][t * len(basis) + uix] + val
                    )
    return diagonalize_gram(field, gram)
