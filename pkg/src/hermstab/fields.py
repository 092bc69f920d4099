"""Exact arithmetic in towers of ordered fields built over the rationals.

A tower starts at Q and grows by two kinds of steps: adjoining a square
root of a previously constructed non-square, or adjoining a variable x
that is an infinitesimal (rational functions viewed inside the formal
Laurent series field, so only the two x -> 0+ / x -> 0- orderings
survive per base ordering).  Every field in the grammar carries finitely
many orderings, each encoded as a path of sign choices, and all sign and
squareness questions are decided exactly, without floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = [
    "FieldTower",
    "FieldElement",
    "Ordering",
    "MismatchError",
    "TowerError",
    "orderings",
    "sign_at",
    "is_square",
    "harrison_set",
]


class TowerError(ValueError):
    """Raised when a tower description is malformed."""


class MismatchError(ValueError):
    """Raised when an element and an ordering belong to different fields."""


# ---------------------------------------------------------------------------
# Internal value representation, indexed by tower level:
#   level 0                : Fraction
#   qext level (d = steps) : (u, v)  meaning  u + v*sqrt(d), u/v one level down
#   laurent level          : (shift, p, q)  meaning  x**shift * p(x)/q(x)
#                            with p, q dense coefficient tuples one level
#                            down, p == () only for zero, p[0] != 0,
#                            q[0] == 1 and gcd(p, q) == 1.
# ---------------------------------------------------------------------------


def _frac_sqrt(f: Fraction):
    if f < 0:
        return None
    pn, pd = f.numerator, f.denominator
    rn, rd = math.isqrt(pn), math.isqrt(pd)
    if rn * rn == pn and rd * rd == pd:
        return Fraction(rn, rd)
    return None


class FieldTower:
    """A field of the tower grammar together with its finite ordering space."""

    def __init__(self, steps, _validated=False):
        self.steps = tuple(steps)
        if not self.steps or self.steps[0][0] != "base":
            raise TowerError("tower must start with the rational base field")
        for step in self.steps[1:]:
            if step[0] not in ("qext", "laurent"):
                raise TowerError(f"unknown tower step {step[0]!r}")
        self._orderings = None
        if not _validated:
            for level, step in enumerate(self.steps):
                if step[0] == "qext":
                    prefix = FieldTower(self.steps[:level], _validated=True)
                    d = step[1]
                    if prefix._is_zero(level - 1, d):
                        raise TowerError("square-root step needs a nonzero element")
                    if prefix._is_square(level - 1, d):
                        raise TowerError("square-root step needs a non-square")
                    if all(
                        prefix._sign(level - 1, d, P.path) < 0
                        for P in prefix.orderings()
                    ):
                        raise TowerError(
                            "square-root step needs an element positive somewhere"
                        )

    # -- construction -------------------------------------------------------

    @staticmethod
    def rationals() -> FieldTower:
        return FieldTower((("base",),), _validated=True)

    def adjoin_sqrt(self, d) -> FieldTower:
        d = self.coerce(d)
        return FieldTower(self.steps + (("qext", d.value),))

    def adjoin_laurent(self) -> FieldTower:
        return FieldTower(self.steps + (("laurent",),), _validated=True)

    @property
    def depth(self) -> int:
        return len(self.steps)

    def prefix(self, depth: int) -> FieldTower:
        return FieldTower(self.steps[:depth], _validated=True)

    def extends(self, other: FieldTower) -> bool:
        return self.steps[: len(other.steps)] == other.steps

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self.steps == other.steps

    def __hash__(self):
        return hash(self.steps)

    def __repr__(self):
        return f"FieldTower({self.describe()})"

    def describe(self) -> str:
        name = "Q"
        for level, step in enumerate(self.steps[1:], start=1):
            if step[0] == "qext":
                name += f"(sqrt({self._str(level - 1, step[1])}))"
            else:
                name += f"(({self._variable_name(level)}))"
        return name

    def _variable_name(self, level: int) -> str:
        n = sum(1 for s in self.steps[1 : level + 1] if s[0] == "laurent")
        total = sum(1 for s in self.steps[1:] if s[0] == "laurent")
        return "x" if total <= 1 else f"x{n}"

    # -- scalars ------------------------------------------------------------

    def zero(self) -> FieldElement:
        return FieldElement(self, self._from_rat(self.depth - 1, Fraction(0)))

    def one(self) -> FieldElement:
        return FieldElement(self, self._from_rat(self.depth - 1, Fraction(1)))

    def rational(self, p, q=1) -> FieldElement:
        return FieldElement(self, self._from_rat(self.depth - 1, Fraction(p, q)))

    def coerce(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.tower == self:
                return x
            if self.extends(x.tower):
                return x.lift_to(self)
            raise MismatchError("element does not live in this tower")
        if isinstance(x, (int, Fraction)):
            return self.rational(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into a field element")

    def generator(self, level: int | None = None) -> FieldElement:
        """The element adjoined at ``level`` (sqrt(d) or x), lifted to the top."""
        if level is None:
            level = self.depth - 1
        if level <= 0 or level >= self.depth:
            raise ValueError("no generator at this level")
        step = self.steps[level]
        lower_zero = self._from_rat(level - 1, Fraction(0))
        lower_one = self._from_rat(level - 1, Fraction(1))
        if step[0] == "qext":
            val = (lower_zero, lower_one)
        else:
            val = (1, (lower_one,), (lower_one,))
        for lvl in range(level + 1, self.depth):
            val = self._embed(lvl, val)
        return FieldElement(self, val)

    def generators(self) -> list[FieldElement]:
        return [self.generator(level) for level in range(1, self.depth)]

    # -- raw arithmetic, indexed by level ------------------------------------

    def _from_rat(self, level, f: Fraction):
        if level == 0:
            return f
        below = self._from_rat(level - 1, f)
        if self.steps[level][0] == "qext":
            return (below, self._from_rat(level - 1, Fraction(0)))
        if f == 0:
            return (0, (), (self._from_rat(level - 1, Fraction(1)),))
        return (0, (below,), (self._from_rat(level - 1, Fraction(1)),))

    def _embed(self, level, lower_value):
        """Wrap a level-1 value as a value at ``level``."""
        if self.steps[level][0] == "qext":
            return (lower_value, self._from_rat(level - 1, Fraction(0)))
        if self._is_zero(level - 1, lower_value):
            return (0, (), (self._from_rat(level - 1, Fraction(1)),))
        return (0, (lower_value,), (self._from_rat(level - 1, Fraction(1)),))

    def _is_zero(self, level, x) -> bool:
        if level == 0:
            return x == 0
        if self.steps[level][0] == "qext":
            return self._is_zero(level - 1, x[0]) and self._is_zero(level - 1, x[1])
        return x[1] == ()

    def _add(self, level, x, y):
        if level == 0:
            return x + y
        if self.steps[level][0] == "qext":
            return (
                self._add(level - 1, x[0], y[0]),
                self._add(level - 1, x[1], y[1]),
            )
        kx, px, qx = x
        ky, py, qy = y
        if px == ():
            return y
        if py == ():
            return x
        k = min(kx, ky)
        num_x = self._p_shift(level, px, kx - k)
        num_y = self._p_shift(level, py, ky - k)
        num = self._p_add(
            level, self._p_mul(level, num_x, qy), self._p_mul(level, num_y, qx)
        )
        den = self._p_mul(level, qx, qy)
        return self._make_laurent(level, k, num, den)

    def _neg(self, level, x):
        if level == 0:
            return -x
        if self.steps[level][0] == "qext":
            return (self._neg(level - 1, x[0]), self._neg(level - 1, x[1]))
        k, p, q = x
        return (k, tuple(self._neg(level - 1, c) for c in p), q)

    def _sub(self, level, x, y):
        return self._add(level, x, self._neg(level, y))

    def _mul(self, level, x, y):
        if level == 0:
            return x * y
        if self.steps[level][0] == "qext":
            d = self.steps[level][1]
            u1, v1 = x
            u2, v2 = y
            uu = self._mul(level - 1, u1, u2)
            vv = self._mul(level - 1, v1, v2)
            uv = self._mul(level - 1, u1, v2)
            vu = self._mul(level - 1, v1, u2)
            return (
                self._add(level - 1, uu, self._mul(level - 1, d, vv)),
                self._add(level - 1, uv, vu),
            )
        kx, px, qx = x
        ky, py, qy = y
        if px == () or py == ():
            return self._from_rat(level, Fraction(0))
        return self._make_laurent(
            level, kx + ky, self._p_mul(level, px, py), self._p_mul(level, qx, qy)
        )

    def _inv(self, level, x):
        if self._is_zero(level, x):
            raise ZeroDivisionError("inverse of zero field element")
        if level == 0:
            return 1 / x
        if self.steps[level][0] == "qext":
            d = self.steps[level][1]
            u, v = x
            n = self._sub(
                level - 1,
                self._mul(level - 1, u, u),
                self._mul(level - 1, d, self._mul(level - 1, v, v)),
            )
            ninv = self._inv(level - 1, n)
            return (
                self._mul(level - 1, u, ninv),
                self._neg(level - 1, self._mul(level - 1, v, ninv)),
            )
        k, p, q = x
        return self._make_laurent(level, -k, q, p)

    def _div(self, level, x, y):
        return self._mul(level, x, self._inv(level, y))

    # -- dense polynomial helpers (coefficients live one level down) ---------

    def _p_add(self, level, p, q):
        lower = level - 1
        n = max(len(p), len(q))
        out = []
        zero = self._from_rat(lower, Fraction(0))
        for i in range(n):
            a = p[i] if i < len(p) else zero
            b = q[i] if i < len(q) else zero
            out.append(self._add(lower, a, b))
        while out and self._is_zero(lower, out[-1]):
            out.pop()
        return tuple(out)

    def _p_mul(self, level, p, q):
        lower = level - 1
        if not p or not q:
            return ()
        zero = self._from_rat(lower, Fraction(0))
        out = [zero] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            if self._is_zero(lower, a):
                continue
            for j, b in enumerate(q):
                out[i + j] = self._add(lower, out[i + j], self._mul(lower, a, b))
        while out and self._is_zero(lower, out[-1]):
            out.pop()
        return tuple(out)

    def _p_scale(self, level, p, c):
        lower = level - 1
        if self._is_zero(lower, c):
            return ()
        return tuple(self._mul(lower, a, c) for a in p)

    def _p_shift(self, level, p, n):
        if not p or n == 0:
            return tuple(p)
        zero = self._from_rat(level - 1, Fraction(0))
        return (zero,) * n + tuple(p)

    def _p_divmod(self, level, p, q):
        lower = level - 1
        if not q:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(p)
        quo = [self._from_rat(lower, Fraction(0))] * max(0, len(p) - len(q) + 1)
        lead_inv = self._inv(lower, q[-1])
        for i in range(len(p) - len(q), -1, -1):
            c = self._mul(lower, rem[i + len(q) - 1], lead_inv)
            if self._is_zero(lower, c):
                continue
            quo[i] = c
            for j, b in enumerate(q):
                rem[i + j] = self._sub(lower, rem[i + j], self._mul(lower, c, b))
        while rem and self._is_zero(lower, rem[-1]):
            rem.pop()
        while quo and self._is_zero(lower, quo[-1]):
            quo.pop()
        return tuple(quo), tuple(rem)

    def _p_gcd(self, level, p, q):
        lower = level - 1
        a, b = tuple(p), tuple(q)
        while b:
            _, r = self._p_divmod(level, a, b)
            a, b = b, r
        if a:
            a = self._p_scale(level, a, self._inv(lower, a[-1]))
        return a

    def _make_laurent(self, level, shift, p, q):
        """Canonical form: strip x-powers, reduce by gcd, normalize q[0] = 1."""
        lower = level - 1
        p = tuple(p)
        q = tuple(q)
        if not q:
            raise ZeroDivisionError("Laurent denominator is zero")
        if not p:
            return (0, (), (self._from_rat(lower, Fraction(1)),))
        i = 0
        while self._is_zero(lower, p[i]):
            i += 1
        j = 0
        while self._is_zero(lower, q[j]):
            j += 1
        shift += i - j
        p = p[i:]
        q = q[j:]
        g = self._p_gcd(level, p, q)
        if len(g) > 1:
            p, _ = self._p_divmod(level, p, g)
            q, _ = self._p_divmod(level, q, g)
        c = self._inv(lower, q[0])
        p = self._p_scale(level, p, c)
        q = self._p_scale(level, q, c)
        return (shift, p, q)

    # -- orderings ------------------------------------------------------------

    def orderings(self) -> tuple[Ordering, ...]:
        """All orderings, depth first, + before - at every choice."""
        if self._orderings is None:
            paths = [()]
            for level, step in enumerate(self.steps[1:], start=1):
                new_paths = []
                for path in paths:
                    if step[0] == "qext":
                        if self._sign(level - 1, step[1], path) > 0:
                            new_paths.append(path + (1,))
                            new_paths.append(path + (-1,))
                    else:
                        new_paths.append(path + (1,))
                        new_paths.append(path + (-1,))
                paths = new_paths
            self._orderings = tuple(Ordering(self, p) for p in paths)
        return self._orderings

    def _sign(self, level, x, path) -> int:
        if level == 0:
            return 0 if x == 0 else (1 if x > 0 else -1)
        step = self.steps[level]
        if step[0] == "qext":
            s = path[level - 1]
            u, v = x
            su = self._sign(level - 1, u, path)
            sv = s * self._sign(level - 1, v, path)
            if su == 0:
                return sv
            if sv == 0 or su == sv:
                return su
            d = step[1]
            disc = self._sub(
                level - 1,
                self._mul(level - 1, u, u),
                self._mul(level - 1, d, self._mul(level - 1, v, v)),
            )
            return su * self._sign(level - 1, disc, path)
        s = path[level - 1]
        k, p, q = x
        if p == ():
            return 0
        low = self._sign(level - 1, p[0], path)
        return low * (s if k % 2 else 1)

    # -- squares ----------------------------------------------------------------

    def _sqrt(self, level, x):
        """An explicit square root at this level, or None."""
        if level == 0:
            return _frac_sqrt(x)
        if self.steps[level][0] == "qext":
            d = self.steps[level][1]
            u, v = x
            zero = self._from_rat(level - 1, Fraction(0))
            if self._is_zero(level - 1, v):
                r = self._sqrt(level - 1, u)
                if r is not None:
                    return (r, zero)
                if not self._is_zero(level - 1, u):
                    r = self._sqrt(level - 1, self._div(level - 1, u, d))
                    if r is not None:
                        return (zero, r)
                return None
            n = self._sub(
                level - 1,
                self._mul(level - 1, u, u),
                self._mul(level - 1, d, self._mul(level - 1, v, v)),
            )
            m = self._sqrt(level - 1, n)
            if m is None:
                return None
            half = self._from_rat(level - 1, Fraction(1, 2))
            for mm in (m, self._neg(level - 1, m)):
                s2 = self._mul(level - 1, self._add(level - 1, u, mm), half)
                s = self._sqrt(level - 1, s2)
                if s is not None and not self._is_zero(level - 1, s):
                    t = self._div(
                        level - 1, v, self._add(level - 1, s, s)
                    )
                    return (s, t)
            return None
        k, p, q = x
        if p == ():
            return x
        if k % 2:
            return None
        pr = self._poly_sqrt(level, p)
        if pr is None:
            return None
        qr = self._poly_sqrt(level, q)
        if qr is None:
            return None
        return (k // 2, pr, qr)

    def _poly_sqrt(self, level, p):
        lower = level - 1
        if not p:
            return ()
        if (len(p) - 1) % 2:
            return None
        r0 = self._sqrt(lower, p[0])
        if r0 is None or self._is_zero(lower, r0):
            return None
        half = len(p) // 2
        r = [r0]
        inv2r0 = self._inv(lower, self._add(lower, r0, r0))
        zero = self._from_rat(lower, Fraction(0))
        for i in range(1, half + 1):
            acc = p[i] if i < len(p) else zero
            for j in range(1, i):
                if j <= half and i - j <= half:
                    acc = self._sub(lower, acc, self._mul(lower, r[j], r[i - j]))
            r.append(self._mul(lower, acc, inv2r0))
        rt = self._p_trim_level(level, tuple(r))
        if self._p_mul(level, rt, rt) == tuple(p):
            return rt
        return None

    def _p_trim_level(self, level, p):
        lower = level - 1
        out = list(p)
        while out and self._is_zero(lower, out[-1]):
            out.pop()
        return tuple(out)

    def _is_square(self, level, x) -> bool:
        if self._is_zero(level, x):
            raise ValueError("squareness of zero is not defined here")
        if level == 0:
            return _frac_sqrt(x) is not None
        if self.steps[level][0] == "qext":
            return self._sqrt(level, x) is not None
        # Laurent level: decided in the ambient formal series field; the
        # unit 1 + x*(...) is always a square there, so only the valuation
        # parity and the lowest coefficient matter.
        k, p, q = x
        return k % 2 == 0 and self._is_square(level - 1, p[0])

    # -- heights and rendering ---------------------------------------------------

    def _height(self, level, x) -> int:
        if level == 0:
            return max(abs(x.numerator), x.denominator)
        if self.steps[level][0] == "qext":
            return max(self._height(level - 1, x[0]), self._height(level - 1, x[1]))
        k, p, q = x
        h = max(1, abs(k))
        for c in p + q:
            h = max(h, self._height(level - 1, c))
        return h

    def _str(self, level, x) -> str:
        if level == 0:
            return str(x)
        if self.steps[level][0] == "qext":
            u, v = x
            d = self.steps[level][1]
            root = f"sqrt({self._str(level - 1, d)})"
            if self._is_zero(level - 1, v):
                return self._str(level - 1, u)
            coeff = self._str(level - 1, v)
            vs = root if coeff == "1" else f"-{root}" if coeff == "-1" else f"{coeff}*{root}"
            if self._is_zero(level - 1, u):
                return vs
            return f"({self._str(level - 1, u)} + {vs})"
        k, p, q = x
        if p == ():
            return "0"
        var = self._variable_name(level)

        def poly_str(coeffs, base):
            terms = []
            for i, c in enumerate(coeffs):
                if self._is_zero(level - 1, c):
                    continue
                e = base + i
                cs = self._str(level - 1, c)
                if e == 0:
                    terms.append(cs)
                else:
                    xs = var if e == 1 else f"{var}^{e}"
                    terms.append(xs if cs == "1" else f"{cs}*{xs}")
            return " + ".join(terms)

        num = poly_str(p, k)
        if len(q) == 1:
            return num if len(p) == 1 else f"({num})"
        return f"({num})/({poly_str(q, 0)})"

    # -- JSON ----------------------------------------------------------------

    def to_json(self) -> dict:
        tower = []
        for level, step in enumerate(self.steps):
            if step[0] == "base":
                tower.append({"kind": "base"})
            elif step[0] == "qext":
                tower.append(
                    {"kind": "qext", "d": self._value_to_json(level - 1, step[1])}
                )
            else:
                tower.append({"kind": "laurent"})
        return {"tower": tower}

    @staticmethod
    def from_json(doc: dict) -> FieldTower:
        if not isinstance(doc, dict) or set(doc) != {"tower"}:
            raise TowerError("field document must be {'tower': [...]}")
        tower = FieldTower.rationals()
        for i, entry in enumerate(doc["tower"]):
            if not isinstance(entry, dict) or "kind" not in entry:
                raise TowerError("tower steps need a 'kind'")
            kind = entry["kind"]
            if i == 0:
                if kind != "base" or set(entry) != {"kind"}:
                    raise TowerError("first tower step must be {'kind': 'base'}")
                continue
            if kind == "qext":
                if set(entry) != {"kind", "d"}:
                    raise TowerError("qext step takes exactly the key 'd'")
                d = tower.element_from_json(entry["d"])
                tower = tower.adjoin_sqrt(d)
            elif kind == "laurent":
                if set(entry) != {"kind"}:
                    raise TowerError("laurent step takes no extra keys")
                tower = tower.adjoin_laurent()
            else:
                raise TowerError(f"unknown tower step kind {kind!r}")
        return tower

    def _value_to_json(self, level, x):
        if level == 0:
            if x.denominator == 1:
                return str(x.numerator)
            return f"{x.numerator}/{x.denominator}"
        if self.steps[level][0] == "qext":
            return {
                "u": self._value_to_json(level - 1, x[0]),
                "v": self._value_to_json(level - 1, x[1]),
            }
        k, p, q = x
        return {
            "num": [
                [k + i, self._value_to_json(level - 1, c)]
                for i, c in enumerate(p)
                if not self._is_zero(level - 1, c)
            ],
            "den": [
                [i, self._value_to_json(level - 1, c)]
                for i, c in enumerate(q)
                if not self._is_zero(level - 1, c)
            ],
        }

    def _value_from_json(self, level, doc):
        if isinstance(doc, (int, str)):
            # rationals are accepted at any level and embedded
            try:
                return self._from_rat(level, Fraction(doc))
            except (ValueError, ZeroDivisionError) as exc:
                raise TowerError(f"invalid rational {doc!r}: {exc}") from exc
        if level == 0:
            raise TowerError(f"rational must be a 'p/q' string, got {doc!r}")
        if self.steps[level][0] == "qext":
            if not isinstance(doc, dict) or set(doc) != {"u", "v"}:
                raise TowerError("square-root level element takes keys 'u', 'v'")
            return (
                self._value_from_json(level - 1, doc["u"]),
                self._value_from_json(level - 1, doc["v"]),
            )
        if not isinstance(doc, dict) or set(doc) != {"num", "den"}:
            raise TowerError("Laurent level element takes keys 'num', 'den'")

        def build(pairs):
            if not pairs:
                return 0, ()
            exps = [int(e) for e, _ in pairs]
            base = min(exps)
            coeffs = [self._from_rat(level - 1, Fraction(0))] * (max(exps) - base + 1)
            for e, c in pairs:
                coeffs[int(e) - base] = self._add(
                    level - 1,
                    coeffs[int(e) - base],
                    self._value_from_json(level - 1, c),
                )
            return base, tuple(coeffs)

        kn, num = build(doc["num"])
        kd, den = build(doc["den"])
        if not self._p_trim_level(level, den):
            raise TowerError("Laurent denominator must be nonzero")
        num = self._p_trim_level(level, num)
        if not num:
            return self._from_rat(level, Fraction(0))
        return self._make_laurent(level, kn - kd, num, self._p_trim_level(level, den))

    def element_from_json(self, doc) -> FieldElement:
        return FieldElement(self, self._value_from_json(self.depth - 1, doc))


class FieldElement:
    """An exact element of a tower field.  Immutable."""

    __slots__ = ("tower", "value")

    def __init__(self, tower: FieldTower, value):
        self.tower = tower
        self.value = value

    def _level(self) -> int:
        return self.tower.depth - 1

    def _coerced(self, other) -> FieldElement:
        return self.tower.coerce(other)

    def __add__(self, other):
        o = self._coerced(other)
        return FieldElement(
            self.tower, self.tower._add(self._level(), self.value, o.value)
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerced(other)
        return FieldElement(
            self.tower, self.tower._sub(self._level(), self.value, o.value)
        )

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElement(self.tower, self.tower._neg(self._level(), self.value))

    def __mul__(self, other):
        o = self._coerced(other)
        return FieldElement(
            self.tower, self.tower._mul(self._level(), self.value, o.value)
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerced(other)
        return FieldElement(
            self.tower, self.tower._div(self._level(), self.value, o.value)
        )

    def __rtruediv__(self, other):
        return self._coerced(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (self.tower.one() / self) ** (-n)
        out = self.tower.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> FieldElement:
        return FieldElement(self.tower, self.tower._inv(self._level(), self.value))

    def is_zero(self) -> bool:
        return self.tower._is_zero(self._level(), self.value)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.tower.coerce(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.tower == other.tower and self.value == other.value

    def __hash__(self):
        return hash((self.tower, self.value))

    def __repr__(self):
        return f"<{self}>"

    def __str__(self):
        return self.tower._str(self._level(), self.value)

    def sign_at(self, ordering: Ordering) -> int:
        if ordering.tower != self.tower:
            raise MismatchError("ordering belongs to a different field")
        return self.tower._sign(self._level(), self.value, ordering.path)

    def is_square(self) -> bool:
        if self.is_zero():
            raise ValueError("squareness of zero is not defined here")
        return self.tower._is_square(self._level(), self.value)

    def sqrt(self) -> FieldElement | None:
        """An explicit square root in the same field, when one exists."""
        if self.is_zero():
            return self.tower.zero()
        r = self.tower._sqrt(self._level(), self.value)
        if r is None:
            return None
        return FieldElement(self.tower, r)

    def height(self) -> int:
        return self.tower._height(self._level(), self.value)

    def lift_to(self, tower: FieldTower) -> FieldElement:
        if not tower.extends(self.tower):
            raise MismatchError("target tower does not extend this one")
        val = self.value
        for level in range(self.tower.depth, tower.depth):
            val = tower._embed(level, val)
        return FieldElement(tower, val)

    def restrict_to(self, tower: FieldTower) -> FieldElement:
        """Inverse of lift_to for elements that actually live lower down."""
        if not self.tower.extends(tower):
            raise MismatchError("target tower is not a prefix of this one")
        val = self.value
        for level in range(self.tower.depth - 1, tower.depth - 1, -1):
            step = self.tower.steps[level]
            if step[0] == "qext":
                u, v = val
                if not self.tower._is_zero(level - 1, v):
                    raise MismatchError("element does not come from the subfield")
                val = u
            else:
                k, p, q = val
                if p == ():
                    val = self.tower._from_rat(level - 1, Fraction(0))
                elif k == 0 and len(p) == 1 and len(q) == 1:
                    val = p[0]
                else:
                    raise MismatchError("element does not come from the subfield")
        return FieldElement(tower, val)

    def to_json(self):
        return self.tower._value_to_json(self._level(), self.value)


class Ordering:
    """One ordering of a tower field: a sign path through the tower."""

    __slots__ = ("tower", "path")

    def __init__(self, tower: FieldTower, path: tuple[int, ...]):
        self.tower = tower
        self.path = tuple(path)
        if len(self.path) != tower.depth - 1:
            raise MismatchError("ordering path length does not match the tower")

    def __eq__(self, other):
        return (
            isinstance(other, Ordering)
            and self.tower == other.tower
            and self.path == other.path
        )

    def __hash__(self):
        return hash((self.tower, self.path))

    def __repr__(self):
        return f"Ordering({self.name()})"

    def name(self) -> str:
        if not self.path:
            return "Q"
        parts = []
        for level, s in enumerate(self.path, start=1):
            step = self.tower.steps[level]
            if step[0] == "qext":
                d = self.tower._str(level - 1, step[1])
                parts.append(f"sqrt({d}){'>' if s > 0 else '<'}0")
            else:
                var = self.tower._variable_name(level)
                parts.append(f"{var}->0{'+' if s > 0 else '-'}")
        return ", ".join(parts)

    def restrict(self, depth: int) -> Ordering:
        return Ordering(self.tower.prefix(depth), self.path[: depth - 1])

    def extends(self, other: Ordering) -> bool:
        return (
            self.tower.extends(other.tower)
            and self.path[: len(other.path)] == other.path
        )

    def to_json(self) -> list:
        out = []
        for level, s in enumerate(self.path, start=1):
            step = self.tower.steps[level]
            key = "sqrt_sign" if step[0] == "qext" else "x_sign"
            out.append({key: "+" if s > 0 else "-"})
        return out

    @staticmethod
    def from_json(tower: FieldTower, doc) -> Ordering:
        if not isinstance(doc, list) or len(doc) != tower.depth - 1:
            raise MismatchError("ordering path length does not match the tower")
        path = []
        for level, entry in enumerate(doc, start=1):
            step = tower.steps[level]
            key = "sqrt_sign" if step[0] == "qext" else "x_sign"
            if not isinstance(entry, dict) or set(entry) != {key}:
                raise MismatchError(f"ordering entry at level {level} needs {key!r}")
            if entry[key] not in ("+", "-"):
                raise MismatchError("ordering signs must be '+' or '-'")
            path.append(1 if entry[key] == "+" else -1)
        ordering = Ordering(tower, tuple(path))
        if ordering not in tower.orderings():
            raise MismatchError("sign path does not denote an ordering of this field")
        return ordering


def orderings(field: FieldTower) -> tuple[Ordering, ...]:
    return field.orderings()


def sign_at(e: FieldElement, P: Ordering) -> int:
    return e.sign_at(P)


def is_square(e: FieldElement) -> bool:
    return e.is_square()


def harrison_set(a: FieldElement, field: FieldTower | None = None) -> set[Ordering]:
    """The orderings at which ``a`` is positive."""
    if field is None:
        field = a.tower
    a = field.coerce(a)
    if a.is_zero():
        raise ValueError("the positivity set of zero is not defined")
    return {P for P in field.orderings() if a.sign_at(P) > 0}
