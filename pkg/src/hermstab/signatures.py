"""Normalized signatures of hermitian forms at the orderings of the base
field.

At each non-nil ordering the Witt group of the scalar-extended algebra
maps onto the integers; the value is computed by one of three routes and
normalized by the sign of a fixed reference form, so that it is both
well-defined and additive.  Nil orderings (where that Witt group is
torsion) contribute exactly zero.
"""

from __future__ import annotations

from .algebras import (
    Algebra,
    HermitianForm,
    SplitWitness,
    diagonalize_hermitian,
    morita_flatten,
    sym_basis,
)
from .fields import FieldTower, MismatchError, Ordering
from .quadratic import QuadraticForm, SignatureVector, pfister
from .splitting import find_certificate, transport_form

__all__ = [
    "LocalType",
    "ReferenceForm",
    "SearchExhausted",
    "nil_set",
    "local_type",
    "raw_signature",
    "reference_search",
    "h_signature",
    "total_signature",
    "going_up_check",
    "lift_reference",
]


class SearchExhausted(RuntimeError):
    """Diagnostic: no reference candidate had nonzero signature somewhere."""


class LocalType:
    """The Wedderburn shape of the algebra at one ordering and the route
    used to evaluate signatures there."""

    __slots__ = ("ordering", "nil", "n", "l", "route")

    def __init__(self, ordering: Ordering, nil: bool, n: int, l: int, route):
        self.ordering = ordering
        self.nil = nil
        self.n = n
        self.l = l
        self.route = route

    @property
    def lam(self) -> int:
        return self.n * self.l

    def __repr__(self):
        tag = "nil" if self.nil else self.route
        return f"LocalType(n={self.n}, l={self.l}, {tag})"

    def to_json(self) -> dict:
        return {
            "ordering": self.ordering.to_json(),
            "nil": self.nil,
            "n": self.n,
            "l": self.l,
            "route": self.route,
        }


def nil_set(A: Algebra) -> frozenset[Ordering]:
    """The orderings at which every signature of every form vanishes."""
    field = A.field
    orderings = field.orderings()
    if A.kind == "field_id":
        return frozenset()
    if A.kind == "exchange":
        return frozenset(orderings)
    if A.kind in ("unitary_quadratic", "unitary_quaternion"):
        return frozenset(P for P in orderings if A.alpha.sign_at(P) > 0)
    if A.kind == "quaternion":
        if A.involution_type == "conjugation":
            return frozenset(
                P
                for P in orderings
                if A.a.sign_at(P) > 0 or A.b.sign_at(P) > 0
            )
        return frozenset(
            P for P in orderings if A.a.sign_at(P) < 0 and A.b.sign_at(P) < 0
        )
    if A.kind == "matrix":
        return nil_set(A.inner)
    raise MismatchError(f"unknown algebra kind {A.kind!r}")


def local_type(A: Algebra, P: Ordering) -> LocalType:
    nil = P in nil_set(A)
    if A.kind == "matrix":
        inner = local_type(A.inner, P)
        return LocalType(P, nil, A.n * inner.n, inner.l, inner.route)
    if A.kind == "field_id":
        return LocalType(P, False, 1, 1, "trace-form")
    if A.kind == "exchange":
        return LocalType(P, True, 1, 1, None)
    if A.kind == "unitary_quadratic":
        if nil:
            return LocalType(P, True, 1, 1, None)
        return LocalType(P, False, 1, 2, "diagonal-sum")
    if A.kind == "quaternion":
        division_here = A.a.sign_at(P) < 0 and A.b.sign_at(P) < 0
        n, l = (1, 4) if division_here else (2, 1)
        if A.involution_type == "conjugation":
            return LocalType(P, not division_here, n, l, "diagonal-sum" if division_here else None)
        return LocalType(P, division_here, n, l, None if division_here else "split-certificate")
    if A.kind == "unitary_quaternion":
        if nil:
            division_here = A.a.sign_at(P) < 0 and A.b.sign_at(P) < 0
            n, l = (1, 4) if division_here else (2, 1)
            return LocalType(P, True, n, l, None)
        return LocalType(P, False, 2, 2, "split-certificate")
    raise MismatchError(f"unknown algebra kind {A.kind!r}")


def raw_signature(A: Algebra, h: HermitianForm, P: Ordering, budget: int = 50) -> int:
    """The route value at P: the local signature divided by the local
    division-algebra dimension, before the reference normalization."""
    if h.algebra != A:
        raise MismatchError("form does not live over the algebra")
    if h.epsilon != 1:
        raise MismatchError("signatures are defined after twisting to epsilon = +1")
    lt = local_type(A, P)
    if lt.nil:
        return 0
    if A.kind == "matrix":
        return raw_signature(A.inner, morita_flatten(h), P, budget)
    if A.kind == "field_id":
        from .quadratic import diagonalize_gram

        rows = [[_as_field(A, v) for v in row] for row in h.gram]
        return diagonalize_gram(A.field, rows).signature(P)
    if lt.route == "diagonal-sum":
        diag = diagonalize_hermitian(h)
        if isinstance(diag, SplitWitness):
            raise MismatchError(
                "the algebra is split where it must be division; the nil "
                "computation and the form disagree"
            )
        total = 0
        for e in diag.diagonal_entries():
            coords = e.coords()
            if any(not c.is_zero() for c in coords[1:]):
                raise MismatchError("diagonal entry escaped the fixed field")
            total += coords[0].sign_at(P)
        return total
    # split-certificate route
    cert = find_certificate(A, P, budget)
    transported, _ = transport_form(cert, h)
    diag = diagonalize_hermitian(transported)
    if isinstance(diag, SplitWitness):
        raise MismatchError("transported form landed on a zero divisor")
    Q = cert.chosen
    total = 0
    for e in diag.diagonal_entries():
        coords = e.coords()
        if any(not c.is_zero() for c in coords[1:]):
            raise MismatchError("transported entry escaped the target field")
        total += coords[0].sign_at(Q)
    return total


def _as_field(A: Algebra, value):
    from .fields import FieldElement

    return FieldElement(A.field, value)


class ReferenceForm:
    """A form with nonzero raw signature at every non-nil ordering; its
    signs normalize all signature values."""

    __slots__ = ("algebra", "form", "deltas")

    def __init__(self, algebra: Algebra, form: HermitianForm, deltas: dict):
        self.algebra = algebra
        self.form = form
        self.deltas = dict(deltas)

    def delta(self, P: Ordering) -> int:
        return self.deltas[P.path]

    def __repr__(self):
        return f"ReferenceForm({self.form!r}, deltas={self.deltas})"

    def to_json(self) -> dict:
        return {
            "form": self.form.to_json(),
            "deltas": {
                "".join("+" if s > 0 else "-" for s in path): d
                for path, d in self.deltas.items()
            },
        }


def reference_search(A: Algebra, budget: int = 50) -> ReferenceForm:
    """Search diagonal candidates, falling back to a sum of pieces cut out
    by one-ordering Pfister multipliers, until the raw signature is
    nonzero at every non-nil ordering."""
    field = A.field
    nil = nil_set(A)
    targets = [P for P in field.orderings() if P not in nil]
    if not targets:
        empty = HermitianForm(A, [], 1)
        return ReferenceForm(A, empty, {})
    candidates = _reference_candidates(A)
    for cand in candidates:
        raws = [raw_signature(A, cand, P, budget) for P in targets]
        if all(r != 0 for r in raws):
            return ReferenceForm(
                A, cand, {P.path: (1 if r > 0 else -1) for P, r in zip(targets, raws)}
            )
    pieces = None
    for P in targets:
        piece = None
        for cand in candidates:
            if raw_signature(A, cand, P, budget) != 0:
                piece = cand
                break
        if piece is None:
            raise SearchExhausted(
                f"no diagonal candidate has nonzero signature at {P.name()}"
            )
        indicator = _ordering_indicator(field, P)
        local = piece.module_scale(indicator)
        pieces = local if pieces is None else pieces.direct_sum(local)
    raws = [raw_signature(A, pieces, P, budget) for P in targets]
    if any(r == 0 for r in raws):
        raise SearchExhausted("piecewise reference lost a coordinate")
    return ReferenceForm(
        A, pieces, {P.path: (1 if r > 0 else -1) for P, r in zip(targets, raws)}
    )


def _reference_candidates(A: Algebra):
    """Invertible symmetric one-by-one Gram entries: the identity, the
    symmetric basis, and pairwise sums and differences."""
    basis = sym_basis(A)
    raw = [A.elem(A.one())]
    raw.extend(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            raw.append(basis[i] + basis[j])
            raw.append(basis[i] - basis[j])
    out = []
    seen = []
    for s in raw:
        for cand in (s, -s):
            if not cand.is_invertible():
                continue
            if any(cand == t for t in seen):
                continue
            seen.append(cand)
            out.append(HermitianForm.diagonal(A, [cand]))
    return out


def _ordering_indicator(field: FieldTower, P: Ordering) -> QuadraticForm:
    """A Pfister form with signature 2^r exactly at P and 0 elsewhere."""
    slots = []
    for g in field.generators():
        slots.append(g if g.sign_at(P) > 0 else -g)
    return pfister(field, slots)


def h_signature(
    A: Algebra,
    h: HermitianForm,
    ref: ReferenceForm,
    P: Ordering,
    budget: int = 50,
) -> int:
    """The normalized signature of h at P: zero on nil orderings, else the
    reference sign times the raw route value."""
    if ref.algebra != A:
        raise MismatchError("reference form belongs to a different algebra")
    if P in nil_set(A):
        return 0
    return ref.delta(P) * raw_signature(A, h, P, budget)


def total_signature(
    A: Algebra, h: HermitianForm, ref: ReferenceForm, budget: int = 50
) -> SignatureVector:
    values = [
        h_signature(A, h, ref, P, budget) for P in A.field.orderings()
    ]
    return SignatureVector(A.field, values)


def lift_reference(ref: ReferenceForm, A_L: Algebra, budget: int = 50) -> ReferenceForm:
    """The reference tensored up a field extension, with fresh signs."""
    form_L = ref.form.lift_to(A_L)
    nil = nil_set(A_L)
    deltas = {}
    for R in A_L.field.orderings():
        if R in nil:
            continue
        r = raw_signature(A_L, form_L, R, budget)
        if r == 0:
            raise SearchExhausted("lifted form is not a reference upstairs")
        deltas[R.path] = 1 if r > 0 else -1
    return ReferenceForm(A_L, form_L, deltas)


def going_up_check(
    A: Algebra,
    h: HermitianForm,
    ref: ReferenceForm,
    L: FieldTower,
    Q: Ordering,
    budget: int = 50,
) -> bool:
    """Signatures are preserved along ordered field extensions: the value
    of the lifted form at an extension Q equals the value at its
    restriction, both sides computed independently."""
    F = A.field
    if not L.extends(F) or Q.tower != L:
        raise MismatchError("Q must be an ordering of an extension tower of F")
    P = Q.restrict(F.depth)
    A_L = A.lift_to(L)
    h_L = h.lift_to(A_L)
    ref_L = lift_reference(ref, A_L, budget)
    lhs = h_signature(A_L, h_L, ref_L, Q, budget)
    rhs = h_signature(A, h, ref, P, budget)
    return lhs == rhs
