"""Constructive real splitting certificates.

Given an algebra with involution from the catalogue and an ordering P at
which signatures do not vanish, this module produces explicit,
re-checkable data: an ordered extension (L, Q) of (F, P) generated
inside the algebra, an idempotent-based isomorphism with a 2 x 2 matrix
model over L (or over L(sqrt(alpha)) for the unitary quaternion kind),
and the matrix datum of the transported involution.  Definite symplectic
and commutative cases carry their own degenerate certificate shapes.
"""

from __future__ import annotations

from .algebras import (
    Algebra,
    AlgebraElement,
    FieldAlgebra,
    HermitianForm,
    UnitaryQuadraticAlgebra,
    morita_flatten,
)
from .fields import FieldElement, FieldTower, MismatchError, Ordering

__all__ = [
    "SplittingCertificate",
    "BudgetExhausted",
    "PreconditionNil",
    "find_certificate",
    "verify_certificate",
    "transport_form",
    "clear_certificate_cache",
]


class BudgetExhausted(RuntimeError):
    """No witness was found within the height budget; retry with more."""

    def __init__(self, algebra, ordering, budget):
        super().__init__(
            f"no splitting witness of height <= {budget} for {algebra.describe()}"
        )
        self.algebra = algebra
        self.ordering = ordering
        self.budget = budget


class PreconditionNil(ValueError):
    """The requested ordering is nil: signatures vanish, nothing to split."""


class SplittingCertificate:
    """Explicit data realizing the split of (A, sigma) at an ordering."""

    FLAVORS = (
        "orthogonal-split",
        "symplectic-definite",
        "unitary-deg1",
        "unitary-quaternion-split",
        "split-trivial",
    )

    def __init__(
        self,
        algebra: Algebra,
        ordering: Ordering,
        flavor: str,
        extension: FieldTower,
        chosen: Ordering,
        witness: AlgebraElement | None = None,
        m: FieldElement | None = None,
        matrices=None,
        g_datum=None,
        definite_pair=None,
    ):
        if flavor not in self.FLAVORS:
            raise MismatchError(f"unknown certificate flavor {flavor!r}")
        self.algebra = algebra
        self.ordering = ordering
        self.flavor = flavor
        self.extension = extension
        self.chosen = chosen
        self.witness = witness
        self.m = m
        self.matrices = matrices
        self.g_datum = g_datum
        # symplectic flavor: (d, c, u, v) with u^2 = -d, v^2 = -c
        self.definite_pair = definite_pair

    def __repr__(self):
        return (
            f"SplittingCertificate({self.flavor} at {self.ordering.name()!r}, "
            f"L = {self.extension.describe()})"
        )

    def centre_algebra(self) -> Algebra:
        """The split model's scalar domain as a catalogue algebra."""
        L = self.extension
        if self.flavor in ("unitary-quaternion-split", "unitary-deg1"):
            alpha = self.algebra.alpha.lift_to(L)
            return UnitaryQuadraticAlgebra(L, alpha)
        return FieldAlgebra(L)

    def to_json(self) -> dict:
        out = {
            "algebra": self.algebra.to_json(),
            "ordering": self.ordering.to_json(),
            "flavor": self.flavor,
            "extension": self.extension.to_json(),
            "chosen": self.chosen.to_json(),
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.m is not None:
            out["m"] = self.m.to_json()
        if self.matrices is not None:
            C = self.centre_algebra()
            out["matrices"] = [
                [[C.value_to_json(e.value) for e in row] for row in M]
                for M in self.matrices
            ]
        if self.g_datum is not None:
            C = self.centre_algebra()
            out["g_datum"] = [
                [C.value_to_json(e.value) for e in row] for row in self.g_datum
            ]
        if self.definite_pair is not None:
            d, c, u, v = self.definite_pair
            out["definite"] = {
                "d": d.to_json(),
                "c": c.to_json(),
                "u": u.to_json(),
                "v": v.to_json(),
            }
        return out

    @staticmethod
    def from_json(doc: dict) -> SplittingCertificate:
        from .algebras import algebra_from_json

        required = {"algebra", "ordering", "flavor", "extension", "chosen"}
        if not isinstance(doc, dict) or not required <= set(doc):
            raise MismatchError("certificate document is missing required keys")
        extra = set(doc) - required - {"witness", "m", "matrices", "g_datum", "definite"}
        if extra:
            raise MismatchError(f"unknown certificate keys {sorted(extra)}")
        algebra = algebra_from_json(doc["algebra"])
        ordering = Ordering.from_json(algebra.field, doc["ordering"])
        extension = FieldTower.from_json(doc["extension"])
        chosen = Ordering.from_json(extension, doc["chosen"])
        cert = SplittingCertificate(
            algebra, ordering, doc["flavor"], extension, chosen
        )
        if "witness" in doc:
            cert.witness = algebra.elem(algebra.value_from_json(doc["witness"]))
        if "m" in doc:
            cert.m = algebra.field.element_from_json(doc["m"])
        C = cert.centre_algebra()
        if "matrices" in doc:
            cert.matrices = [
                tuple(
                    tuple(C.elem(C.value_from_json(e)) for e in row) for row in M
                )
                for M in doc["matrices"]
            ]
        if "g_datum" in doc:
            cert.g_datum = tuple(
                tuple(C.elem(C.value_from_json(e)) for e in row)
                for row in doc["g_datum"]
            )
        if "definite" in doc:
            d = doc["definite"]
            cert.definite_pair = (
                algebra.field.element_from_json(d["d"]),
                algebra.field.element_from_json(d["c"]),
                algebra.elem(algebra.value_from_json(d["u"])),
                algebra.elem(algebra.value_from_json(d["v"])),
            )
        return cert


# ---------------------------------------------------------------------------
# small exact linear algebra over a commutative coefficient algebra
# ---------------------------------------------------------------------------


def _nullspace(rows, zero, one):
    """Right-nullspace basis of a matrix of commutative invertible-capable
    elements, deterministic pivoting, free variables in column order."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next(
            (i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None
        )
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for rr, pc in enumerate(pivots):
            vec[pc] = zero - rows[rr][fc]
        basis.append(vec)
    return basis


class _Span2:
    """Solve coordinates in the span of two independent vectors."""

    def __init__(self, v1, v2):
        self.v1 = v1
        self.v2 = v2
        n = len(v1)
        p1 = next(i for i in range(n) if not v1[i].is_zero())
        self.p1 = p1
        p2 = None
        for i in range(n):
            det = v1[p1] * v2[i] - v1[i] * v2[p1]
            if not det.is_zero():
                p2 = i
                self.det = det
                break
        if p2 is None:
            raise MismatchError("ideal basis vectors are dependent")
        self.p2 = p2

    def solve(self, w):
        a, b = self.v1[self.p1], self.v2[self.p1]
        c, d = self.v1[self.p2], self.v2[self.p2]
        w1, w2 = w[self.p1], w[self.p2]
        dinv = self.det.inverse()
        c1 = (d * w1 - b * w2) * dinv
        c2 = (a * w2 - c * w1) * dinv
        for i in range(len(w)):
            if not (self.v1[i] * c1 + self.v2[i] * c2 - w[i]).is_zero():
                raise MismatchError("vector lies outside the ideal")
        return c1, c2


# ---------------------------------------------------------------------------
# the split model of a quaternion kind over its centre
# ---------------------------------------------------------------------------


def _quat_centre_basis(A):
    """Values of 1, i, j, k over the centre scalar domain."""
    s = A._s
    z, o = s.zero(), s.one()
    return [(o, z, z, z), (z, o, z, z), (z, z, o, z), (z, z, z, o)]


def _centre_coords(cert_centre: Algebra, value):
    """Quaternion value -> list of its 4 coordinates as centre elements."""
    return [cert_centre.elem(c) for c in value]


def _is_unitary_kind(A: Algebra) -> bool:
    return A.kind == "unitary_quaternion"


def _build_split_data(A_L: Algebra, centre: Algebra, witness_value, sqm: FieldElement):
    """Idempotent splitting: matrices of 1, i, j, k acting on (A tensor L) e."""
    L = A_L.field
    half = L.rational(1, 2)
    sq_inv = sqm.inverse()
    w_scaled = A_L.scalar_mul(sq_inv, witness_value)
    e = A_L.scalar_mul(half, A_L.add(A_L.one(), w_scaled))
    if not A_L.equal(A_L.mul(e, e), e):
        raise MismatchError("idempotent construction failed")
    basis = _quat_centre_basis(A_L)
    ideal = [A_L.mul(b, e) for b in basis]
    coords = [_centre_coords(centre, v) for v in ideal]
    # pick the first two independent columns of the ideal
    v1 = coords[0]
    span = None
    for cand in coords[1:]:
        try:
            span = _Span2(v1, cand)
            break
        except MismatchError:
            continue
    if span is None:
        raise MismatchError("ideal is not 2-dimensional over the centre")
    matrices = []
    for b in basis:
        cols = []
        for vs in (span.v1, span.v2):
            prod = A_L.mul(b, _from_centre_coords(A_L, centre, vs))
            c1, c2 = span.solve(_centre_coords(centre, prod))
            cols.append((c1, c2))
        matrices.append(
            (
                (cols[0][0], cols[1][0]),
                (cols[0][1], cols[1][1]),
            )
        )
    return matrices


def _from_centre_coords(A_L: Algebra, centre: Algebra, coords):
    return tuple(c.value for c in coords)


def _phi(cert: SplittingCertificate, value):
    """Image of a quaternion value in the 2 x 2 split model."""
    C = cert.centre_algebra()
    coords = _centre_coords(C, value)
    zero = C.elem(C.zero())
    out = [[zero, zero], [zero, zero]]
    for c, M in zip(coords, cert.matrices):
        for i in range(2):
            for j in range(2):
                out[i][j] = out[i][j] + c * M[i][j]
    return tuple(tuple(row) for row in out)


def _conj_transpose(cert: SplittingCertificate, M):
    C = cert.centre_algebra()
    unitary = cert.flavor == "unitary-quaternion-split"
    def tw(e):
        return e.involution() if unitary else e
    return (
        (tw(M[0][0]), tw(M[1][0])),
        (tw(M[0][1]), tw(M[1][1])),
    )


def _mat2_mul(a, b):
    return tuple(
        tuple(
            a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)
        )
        for i in range(2)
    )


def _mat2_eq(a, b):
    return all((a[i][j] - b[i][j]).is_zero() for i in range(2) for j in range(2))


def _solve_involution_datum(cert: SplittingCertificate, A_L: Algebra):
    """G with Phi(sigma(beta)) = G^-1 * conj-transpose(Phi(beta)) * G."""
    C = cert.centre_algebra()
    zero, one = C.elem(C.zero()), C.elem(C.one())
    basis = _quat_centre_basis(A_L)
    rows = []
    # unknowns: G00, G01, G10, G11; equations G*Phi(sigma b) - ct(Phi b)*G = 0
    for b in basis:
        S = _phi(cert, A_L.involution(b))
        T = _conj_transpose(cert, _phi(cert, b))
        for i in range(2):
            for j in range(2):
                row = [zero, zero, zero, zero]
                # (G S)_{ij} = sum_t G_{it} S_{tj}
                for t in range(2):
                    row[2 * i + t] = row[2 * i + t] + S[t][j]
                # (T G)_{ij} = sum_t T_{it} G_{tj}
                for t in range(2):
                    row[2 * t + j] = row[2 * t + j] - T[i][t]
                rows.append(row)
    sols = _nullspace(rows, zero, one)
    if not sols:
        raise MismatchError("no involution datum exists")
    g = sols[0]
    G = ((g[0], g[1]), (g[2], g[3]))
    ct = _conj_transpose(cert, G)
    if _mat2_eq(ct, G):
        return G
    if cert.flavor != "unitary-quaternion-split":
        raise MismatchError("involution datum came out skew for an orthogonal type")
    # ct(G) = lambda * G with lambda of norm 1; rescale hermitian via
    # c/conj(c) = lambda, taking c = 1 + lambda (or sqrt(alpha) if lambda = -1)
    pivot = next(
        (i, j) for i in range(2) for j in range(2) if not G[i][j].is_zero()
    )
    lam = ct[pivot[0]][pivot[1]] * G[pivot[0]][pivot[1]].inverse()
    if _mat2_eq(ct, tuple(tuple(lam * e for e in row) for row in G)):
        minus_one = C.elem(C.scalar_mul(C.field.rational(-1), C.one()))
        c = C.elem(C._s.root()) if lam == minus_one else one + lam
        H = tuple(tuple(c * e for e in row) for row in G)
        if _mat2_eq(_conj_transpose(cert, H), H):
            return H
    raise MismatchError("involution datum cannot be normalized")


def _det2(G):
    return G[0][0] * G[1][1] - G[0][1] * G[1][0]


# ---------------------------------------------------------------------------
# the search
# ---------------------------------------------------------------------------

_cert_cache: dict = {}


def clear_certificate_cache():
    _cert_cache.clear()


def _spiral(budget: int):
    """Integer triples ordered by increasing height; within one height,
    0 before positive before negative in each coordinate, x outermost."""
    def seq(h):
        out = [0]
        for t in range(1, h + 1):
            out.extend((t, -t))
        return out

    for h in range(1, budget + 1):
        s = seq(h)
        for x in s:
            for y in s:
                for z in s:
                    if max(abs(x), abs(y), abs(z)) == h:
                        yield (x, y, z)


def find_certificate(
    A: Algebra, P: Ordering, budget: int = 50, skip: int = 0
) -> SplittingCertificate:
    """Search for and verify a splitting certificate for (A, sigma) at P.

    Deterministic: the witness minimal in the spiral enumeration wins.
    ``skip`` ignores that many valid witnesses (used to cross-check that
    independent certificates agree)."""
    from .signatures import nil_set

    if P.tower != A.field:
        raise MismatchError("ordering does not belong to the algebra's base field")
    if P in nil_set(A):
        raise PreconditionNil(
            f"{A.describe()} has vanishing signatures at {P.name()}"
        )
    key = None
    if skip == 0:
        import json as _json

        key = (_json.dumps(A.to_json(), sort_keys=True), P.path, budget)
        if key in _cert_cache:
            return _cert_cache[key]
    cert = _find_certificate_impl(A, P, budget, skip)
    if not verify_certificate(cert):
        raise MismatchError("internal error: emitted certificate fails verification")
    if key is not None:
        _cert_cache[key] = cert
    return cert


def _find_certificate_impl(A, P, budget, skip):
    F = A.field
    if A.kind == "matrix":
        return find_certificate(A.inner, P, budget, skip)
    if A.kind == "field_id":
        return SplittingCertificate(A, P, "split-trivial", F, P)
    if A.kind == "unitary_quadratic":
        return SplittingCertificate(A, P, "unitary-deg1", F, P)
    if A.kind == "quaternion" and A.involution_type == "conjugation":
        d = -A.a
        c = -A.b
        basis = A.basis()
        return SplittingCertificate(
            A,
            P,
            "symplectic-definite",
            F,
            P,
            definite_pair=(d, c, basis[1], basis[2]),
        )
    if A.kind == "quaternion":
        return _search_quaternion_split(A, P, budget, skip, unitary=False)
    if A.kind == "unitary_quaternion":
        return _search_quaternion_split(A, P, budget, skip, unitary=True)
    raise PreconditionNil(f"{A.describe()} has no non-nil orderings")


def _search_quaternion_split(A, P, budget, skip, unitary):
    F = A.field
    a, b = A.a, A.b
    seen = 0
    for (x, y, z) in _spiral(budget):
        xe, ye, ze = F.rational(x), F.rational(y), F.rational(z)
        m = a * xe * xe + b * ye * ye - a * b * ze * ze
        if unitary:
            m = A.alpha * m
        if m.is_zero():
            continue
        if m.sign_at(P) != 1:
            continue
        sqm = m.sqrt()
        if sqm is None and m.is_square():
            # a square in the ambient series field without an explicit
            # rational-function root: not usable as a tower step
            continue
        if seen < skip:
            seen += 1
            continue
        return _emit_split_certificate(A, P, (x, y, z), m, sqm, unitary)
    raise BudgetExhausted(A, P, budget)


def _emit_split_certificate(A, P, xyz, m, sqm, unitary):
    F = A.field
    x, y, z = (F.rational(t) for t in xyz)
    if unitary:
        s = A._s
        root = s.root()
        w_value = (
            s.zero(),
            s.mul(root, s.from_base(x.value)),
            s.mul(root, s.from_base(y.value)),
            s.mul(root, s.from_base(z.value)),
        )
    else:
        w_value = (F.zero().value, x.value, y.value, z.value)
    witness = A.elem(w_value)
    if sqm is not None:
        L = F
        Q = P
        sq_elem = sqm
    else:
        L = F.adjoin_sqrt(m)
        Q = Ordering(L, P.path + (1,))
        sq_elem = L.generator()
    A_L = A.lift_to(L)
    flavor = "unitary-quaternion-split" if unitary else "orthogonal-split"
    cert = SplittingCertificate(
        A,
        P,
        flavor,
        L,
        Q,
        witness=witness,
        m=m,
    )
    centre = cert.centre_algebra()
    w_L = A.lift_value(w_value, A_L)
    cert.matrices = [
        tuple(tuple(cols) for cols in M)
        for M in _build_split_data(A_L, centre, w_L, sq_elem)
    ]
    cert.g_datum = _solve_involution_datum(cert, A_L)
    return cert


# ---------------------------------------------------------------------------
# verification and transport
# ---------------------------------------------------------------------------


def verify_certificate(cert: SplittingCertificate) -> bool:
    """Re-check every certificate invariant by exact arithmetic."""
    try:
        return _verify_impl(cert)
    except (MismatchError, ValueError, ZeroDivisionError, ArithmeticError):
        return False


def _verify_impl(cert: SplittingCertificate) -> bool:
    A = cert.algebra
    F = A.field
    P = cert.ordering
    if P not in F.orderings():
        return False
    if cert.flavor == "split-trivial":
        return A.kind == "field_id" and cert.extension == F
    if cert.flavor == "unitary-deg1":
        return (
            A.kind == "unitary_quadratic"
            and cert.extension == F
            and A.alpha.sign_at(P) == -1
        )
    if cert.flavor == "symplectic-definite":
        if A.kind != "quaternion" or A.involution_type != "conjugation":
            return False
        if cert.definite_pair is None:
            return False
        d, c, u, v = cert.definite_pair
        if d.sign_at(P) != 1 or c.sign_at(P) != 1:
            return False
        if not (u * u == A.from_field(-d) and v * v == A.from_field(-c)):
            return False
        if not (u * v == -(v * u)):
            return False
        if not (u.coords()[0].is_zero() and v.coords()[0].is_zero()):
            return False
        return True
    # proper split flavors
    if cert.witness is None or cert.m is None or cert.matrices is None:
        return False
    if cert.g_datum is None:
        return False
    m = cert.m
    if m.sign_at(P) != 1:
        return False
    L = cert.extension
    if L == F:
        if m.sqrt() is None:
            return False
    else:
        if L.steps != F.steps + (("qext", m.value),):
            return False
    if not cert.chosen.extends(P) or cert.chosen.tower != L:
        return False
    w = cert.witness
    if cert.flavor == "orthogonal-split":
        if A.kind != "quaternion" or A.involution_type != "orthogonal":
            return False
        if not w.coords()[0].is_zero():
            return False
        if not (w * w == A.from_field(m)):
            return False
    else:
        if A.kind != "unitary_quaternion":
            return False
        if not (w.involution() == w):
            return False
        if not (w * w == A.from_field(m)):
            return False
        coords = w.coords()
        if any(not c.is_zero() for c in coords[:2]):
            # the scalar centre coordinate must vanish: w is not central
            return False
    A_L = A.lift_to(L)
    C = cert.centre_algebra()
    one = C.elem(C.one())
    zero = C.elem(C.zero())
    ident = ((one, zero), (zero, one))
    a_c = C.elem(C.scalar_mul(A.a.lift_to(L), C.one()))
    b_c = C.elem(C.scalar_mul(A.b.lift_to(L), C.one()))
    M1, Mi, Mj, Mk = [tuple(tuple(r) for r in M) for M in cert.matrices]
    if not _mat2_eq(M1, ident):
        return False
    if not _mat2_eq(_mat2_mul(Mi, Mi), _scale2(a_c, ident)):
        return False
    if not _mat2_eq(_mat2_mul(Mj, Mj), _scale2(b_c, ident)):
        return False
    ij = _mat2_mul(Mi, Mj)
    ji = _mat2_mul(Mj, Mi)
    if not _mat2_eq(ij, _neg2(ji)):
        return False
    if not _mat2_eq(ij, Mk):
        return False
    # full 4-dimensional image: the four matrices are independent over C
    rows = []
    for M in (M1, Mi, Mj, Mk):
        rows.append([M[0][0], M[0][1], M[1][0], M[1][1]])
    cols = [[rows[i][j] for i in range(4)] for j in range(4)]
    if _nullspace(cols, zero, one):
        return False
    # G reproduces the involution on the basis
    G = cert.g_datum
    if _det2(G).is_zero():
        return False
    ct = _conj_transpose(cert, G)
    if not _mat2_eq(ct, G):
        return False
    for bval in _quat_centre_basis(A_L):
        lhs = _mat2_mul(G, _phi(cert, A_L.involution(bval)))
        rhs = _mat2_mul(_conj_transpose(cert, _phi(cert, bval)), G)
        if not _mat2_eq(lhs, rhs):
            return False
    return True


def _scale2(c, M):
    return tuple(tuple(c * e for e in row) for row in M)


def _neg2(M):
    return tuple(tuple((e * (-1)) for e in row) for row in M)


def transport_form(cert: SplittingCertificate, h: HermitianForm):
    """Carry a +1-hermitian form through the certificate's splitting.

    Returns (form over the split target, involution datum): a quadratic
    Gram over L for the orthogonal flavor, a conjugation-hermitian Gram
    over L(sqrt(alpha)) for the unitary flavors, the flattened Gram over
    F for the trivial split of matrix-over-field kinds."""
    if h.epsilon != 1:
        raise MismatchError("transport expects a +1-hermitian form")
    if h.algebra.kind == "matrix":
        if h.algebra.inner != cert.algebra:
            raise MismatchError("certificate does not match the inner algebra")
        h = morita_flatten(h)
    if h.algebra != cert.algebra:
        raise MismatchError("form and certificate algebras differ")
    if cert.flavor == "symplectic-definite":
        raise MismatchError(
            "definite symplectic certificates do not transport; use the "
            "diagonal route"
        )
    if cert.flavor == "split-trivial":
        target = FieldAlgebra(cert.extension)
        gram = [
            [target.elem(v) for v in row] for row in h.gram
        ]
        return HermitianForm(target, gram, 1), None
    if cert.flavor == "unitary-deg1":
        target = cert.centre_algebra()
        gram = [[target.elem(v) for v in row] for row in h.gram]
        return HermitianForm(target, gram, 1), None
    if not verify_certificate(cert):
        raise MismatchError("refusing to transport along an unverified certificate")
    A = cert.algebra
    L = cert.extension
    A_L = A.lift_to(L)
    C = cert.centre_algebra()
    G = cert.g_datum
    k = h.rank
    zero = C.elem(C.zero())
    big = [[zero] * (2 * k) for _ in range(2 * k)]
    for r in range(k):
        for s in range(k):
            val = A.lift_value(h.gram[r][s], A_L)
            block = _mat2_mul(G, _phi(cert, val))
            for i in range(2):
                for j in range(2):
                    big[2 * r + i][2 * s + j] = block[i][j]
    target = C
    return HermitianForm(target, big, 1), G
