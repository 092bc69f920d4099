"""Diagonal quadratic forms over tower fields.

Witt-level operations (sum, tensor product, Pfister forms), signature
vectors, the Scharlau trace transfer along one square-root step, and the
rational Hilbert-symbol / Hasse-Minkowski machinery used to decide Witt
triviality over Q and division-ness of rational quaternion algebras.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .fields import FieldElement, FieldTower, MismatchError, Ordering

__all__ = [
    "QuadraticForm",
    "SignatureVector",
    "SingularFormError",
    "diagonalize_gram",
    "pfister",
    "scharlau_transfer",
    "knebusch_check",
    "hilbert_symbol",
    "hasse_invariant",
    "relevant_places",
    "is_division_quaternion",
    "is_witt_trivial_q",
]

INF = math.inf


class SingularFormError(ValueError):
    """Raised when a Gram matrix is singular where regularity is required."""


class QuadraticForm:
    """A regular diagonal quadratic form ⟨a1, ..., an⟩ over a tower field."""

    __slots__ = ("field", "entries")

    def __init__(self, field: FieldTower, entries):
        self.field = field
        self.entries = tuple(field.coerce(e) for e in entries)
        for e in self.entries:
            if e.is_zero():
                raise SingularFormError("diagonal entries must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __add__(self, other: QuadraticForm) -> QuadraticForm:
        if other.field != self.field:
            raise MismatchError("forms live over different fields")
        return QuadraticForm(self.field, self.entries + other.entries)

    def __mul__(self, other: QuadraticForm) -> QuadraticForm:
        if other.field != self.field:
            raise MismatchError("forms live over different fields")
        return QuadraticForm(
            self.field, [e * f for e in self.entries for f in other.entries]
        )

    def __neg__(self) -> QuadraticForm:
        return QuadraticForm(self.field, [-e for e in self.entries])

    def scale(self, c) -> QuadraticForm:
        c = self.field.coerce(c)
        return QuadraticForm(self.field, [c * e for e in self.entries])

    def signature(self, P: Ordering) -> int:
        return sum(e.sign_at(P) for e in self.entries)

    def signature_vector(self) -> SignatureVector:
        return SignatureVector(
            self.field, tuple(self.signature(P) for P in self.field.orderings())
        )

    def lift_to(self, tower: FieldTower) -> QuadraticForm:
        return QuadraticForm(tower, [e.lift_to(tower) for e in self.entries])

    def __eq__(self, other):
        return (
            isinstance(other, QuadraticForm)
            and self.field == other.field
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field, self.entries))

    def __repr__(self):
        return "<" + ", ".join(str(e) for e in self.entries) + ">"

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "diag": [e.to_json() for e in self.entries],
        }

    @staticmethod
    def from_json(doc: dict) -> QuadraticForm:
        if not isinstance(doc, dict) or set(doc) != {"field", "diag"}:
            raise MismatchError("quadratic form document takes keys 'field', 'diag'")
        field = FieldTower.from_json(doc["field"])
        return QuadraticForm(
            field, [field.element_from_json(e) for e in doc["diag"]]
        )


class SignatureVector:
    """Integer signatures indexed by the orderings in canonical order."""

    __slots__ = ("field", "values")

    def __init__(self, field: FieldTower, values):
        self.field = field
        self.values = tuple(int(v) for v in values)
        if len(self.values) != len(field.orderings()):
            raise MismatchError("signature vector length must match |orderings|")

    def __add__(self, other: SignatureVector) -> SignatureVector:
        if other.field != self.field:
            raise MismatchError("vectors live over different fields")
        return SignatureVector(
            self.field, tuple(a + b for a, b in zip(self.values, other.values))
        )

    def __eq__(self, other):
        return (
            isinstance(other, SignatureVector)
            and self.field == other.field
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.field, self.values))

    def __repr__(self):
        return f"SignatureVector{self.values}"

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def to_json(self) -> dict:
        return {
            "orderings": [P.to_json() for P in self.field.orderings()],
            "values": list(self.values),
        }


def diagonalize_gram(field: FieldTower, gram) -> QuadraticForm:
    """Diagonalize a symmetric Gram matrix by congruence.

    Uses symmetric pivoting; a block with zero diagonal is repaired by
    adding a row/column, which realizes the usual hyperbolic split.
    """
    g = [[field.coerce(x) for x in row] for row in gram]
    n = len(g)
    for row in g:
        if len(row) != n:
            raise SingularFormError("Gram matrix must be square")
    for i in range(n):
        for j in range(i + 1, n):
            if g[i][j] != g[j][i]:
                raise MismatchError("Gram matrix must be symmetric")
    entries = []
    while g:
        n = len(g)
        piv = next((i for i in range(n) if not g[i][i].is_zero()), None)
        if piv is None:
            pair = next(
                (
                    (i, j)
                    for i in range(n)
                    for j in range(i + 1, n)
                    if not g[i][j].is_zero()
                ),
                None,
            )
            if pair is None:
                raise SingularFormError("Gram matrix is singular")
            i, j = pair
            for t in range(n):
                g[i][t] = g[i][t] + g[j][t]
            for t in range(n):
                g[t][i] = g[t][i] + g[t][j]
            piv = i
        if piv != 0:
            g[0], g[piv] = g[piv], g[0]
            for row in g:
                row[0], row[piv] = row[piv], row[0]
        d = g[0][0]
        entries.append(d)
        rest = [
            [g[r][s] - g[r][0] * g[0][s] / d for s in range(1, len(g))]
            for r in range(1, len(g))
        ]
        g = rest
    return QuadraticForm(field, entries)


def pfister(field: FieldTower, elements) -> QuadraticForm:
    """The 2^r-dimensional form ⟨1, a1⟩ ⊗ ... ⊗ ⟨1, ar⟩."""
    q = QuadraticForm(field, [field.one()])
    for a in elements:
        a = field.coerce(a)
        if a.is_zero():
            raise SingularFormError("Pfister slots must be nonzero")
        q = q * QuadraticForm(field, [field.one(), a])
    return q


def scharlau_transfer(L: FieldTower, phi: QuadraticForm) -> QuadraticForm:
    """Trace transfer of a form along a single square-root step L = F(sqrt(e)).

    Each entry c = u + v*sqrt(e) contributes the Gram [[2u, 2ve], [2ve, 2ue]]
    on the basis {1, sqrt(e)}, which is then diagonalized over F.
    """
    if L.steps[-1][0] != "qext":
        raise MismatchError("transfer needs the top tower step to be a square root")
    if phi.field != L:
        raise MismatchError("form does not live over the extension")
    F = L.prefix(L.depth - 1)
    e = FieldElement(F, L.steps[-1][1])
    two = F.rational(2)
    entries = []
    for c in phi.entries:
        u, v = c.value
        u = FieldElement(F, u)
        v = FieldElement(F, v)
        gram = [
            [two * u, two * v * e],
            [two * v * e, two * u * e],
        ]
        entries.extend(diagonalize_gram(F, gram).entries)
    return QuadraticForm(F, entries)


def knebusch_check(L: FieldTower, phi: QuadraticForm) -> bool:
    """Transfer signature identity: sign_P(tr φ) = Σ_{Q over P} sign_Q(φ)."""
    tr = scharlau_transfer(L, phi)
    F = tr.field
    for P in F.orderings():
        rhs = sum(
            phi.signature(Q) for Q in L.orderings() if Q.path[: len(P.path)] == P.path
        )
        if tr.signature(P) != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# Rational Hilbert symbols and Hasse-Minkowski classification over Q
# ---------------------------------------------------------------------------


def _as_fraction(a) -> Fraction:
    if isinstance(a, FieldElement):
        if a.tower.depth != 1:
            raise MismatchError("rational machinery needs elements of Q")
        return a.value
    return Fraction(a)


def _vp(f: Fraction, p: int) -> int:
    v = 0
    n = f.numerator
    d = f.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _unit_mod(f: Fraction, p: int, modulus: int) -> int:
    """f * p^-v(f) reduced mod ``modulus`` (num and den prime to p)."""
    v = _vp(f, p)
    n = f.numerator
    d = f.denominator
    for _ in range(abs(v)):
        if v > 0 and n % p == 0:
            n //= p
        elif v < 0 and d % p == 0:
            d //= p
    while n % p == 0:
        n //= p
    while d % p == 0:
        d //= p
    return (n * pow(d, -1, modulus)) % modulus


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def hilbert_symbol(a, b, place) -> int:
    """The Hilbert symbol (a, b) at a rational place (a prime or math.inf)."""
    a = _as_fraction(a)
    b = _as_fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if place == INF or place == "inf":
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    if p < 2 or any(p % q == 0 for q in range(2, min(p, int(math.isqrt(p)) + 1))):
        raise ValueError(f"place must be a prime or infinity, got {place!r}")
    if p == 2:
        alpha = _vp(a, 2) % 2
        beta = _vp(b, 2) % 2
        u = _unit_mod(a, 2, 8)
        w = _unit_mod(b, 2, 8)
        eps_u = ((u - 1) // 2) % 2
        eps_w = ((w - 1) // 2) % 2
        om_u = ((u * u - 1) // 8) % 2
        om_w = ((w * w - 1) // 8) % 2
        exp = eps_u * eps_w + alpha * om_w + beta * om_u
        return -1 if exp % 2 else 1
    alpha = _vp(a, p) % 2
    beta = _vp(b, p) % 2
    u = _unit_mod(a, p, p)
    w = _unit_mod(b, p, p)
    eps_p = ((p - 1) // 2) % 2
    sym = 1
    if alpha and beta and eps_p:
        sym = -sym
    if beta:
        sym *= _legendre(u, p)
    if alpha:
        sym *= _legendre(w, p)
    return sym


def _odd_prime_factors(n: int) -> set[int]:
    n = abs(n)
    out = set()
    while n % 2 == 0:
        n //= 2
    f = 3
    while f * f <= n:
        while n % f == 0:
            out.add(f)
            n //= f
        f += 2
    if n > 1:
        out.add(n)
    return out


def relevant_places(fractions) -> list:
    """Infinity, 2, and the odd primes meeting any numerator/denominator."""
    primes = set()
    for f in fractions:
        f = _as_fraction(f)
        primes |= _odd_prime_factors(f.numerator)
        primes |= _odd_prime_factors(f.denominator)
    return [INF, 2] + sorted(primes)


def hasse_invariant(entries, place) -> int:
    """Product over i < j of the Hilbert symbols of the diagonal entries."""
    entries = [_as_fraction(e) for e in entries]
    s = 1
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            s *= hilbert_symbol(entries[i], entries[j], place)
    return s


def is_witt_trivial_q(q: QuadraticForm) -> bool:
    """Whether a form over Q is hyperbolic, by its classifying invariants."""
    if q.field.depth != 1:
        raise MismatchError("Witt triviality test is only available over Q")
    n = q.dim
    if n % 2:
        return False
    if q.signature(q.field.orderings()[0]) != 0:
        return False
    m = n // 2
    entries = [e.value for e in q.entries]
    det = Fraction(1)
    for e in entries:
        det *= e
    # determinant of the hyperbolic form of the same dimension is (-1)^m
    ratio = det * Fraction(-1) ** m
    if ratio < 0:
        return False
    if (
        math.isqrt(ratio.numerator) ** 2 != ratio.numerator
        or math.isqrt(ratio.denominator) ** 2 != ratio.denominator
    ):
        return False
    hyperbolic = [Fraction(1), Fraction(-1)] * m
    for place in relevant_places(entries):
        if hasse_invariant(entries, place) != hasse_invariant(hyperbolic, place):
            return False
    return True


def is_division_quaternion(a: FieldElement, b: FieldElement, field: FieldTower) -> str:
    """Decide whether (a, b) over ``field`` is a division algebra.

    Exact over Q via Hilbert symbols.  Over proper towers: 'yes' when the
    norm form is definite at some ordering, 'no' when a bounded search
    finds an isotropic vector, 'unknown' otherwise.
    """
    a = field.coerce(a)
    b = field.coerce(b)
    if a.is_zero() or b.is_zero():
        raise ValueError("quaternion parameters must be nonzero")
    if field.depth == 1:
        for place in relevant_places([a.value, b.value]):
            if hilbert_symbol(a.value, b.value, place) == -1:
                return "yes"
        return "no"
    for P in field.orderings():
        if a.sign_at(P) < 0 and b.sign_at(P) < 0:
            return "yes"
    one = field.one()
    pool = [field.zero(), one, -one]
    for g in field.generators():
        pool.extend([g, -g, one + g, one - g])
    ab = a * b
    for x0 in pool:
        for x1 in pool:
            for x2 in pool:
                for x3 in pool:
                    if x0.is_zero() and x1.is_zero() and x2.is_zero() and x3.is_zero():
                        continue
                    n = x0 * x0 - a * x1 * x1 - b * x2 * x2 + ab * x3 * x3
                    if n.is_zero():
                        return "no"
    return "unknown"
