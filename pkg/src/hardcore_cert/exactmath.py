"""Exact scalars, polynomials and rational functions.

Scalars live in Q(sqrt 15): every value is ``a + b*sqrt(15)`` with rational
``a`` and ``b``.  Rationals are the special case ``b == 0`` and arithmetic on
them never touches the irrational part.  Rationals are ``gmpy2.mpq``.

Polynomials store their rational and irrational coefficient vectors
separately, so a polynomial over Q is just one vector of ``mpq`` and the
common case stays cheap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from gmpy2 import mpq

RADICAND = 15
ZERO = mpq(0)
ONE = mpq(1)


class VariableMismatch(ValueError):
    """Raised when combining polynomials in different variables."""


class NotDivisible(ArithmeticError):
    """Raised by exact division when the remainder is nonzero."""


def _q(x) -> mpq:
    if isinstance(x, type(ZERO)):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return mpq(x)


def parse_rational(s: str) -> mpq:
    s = s.strip()
    if "/" in s:
        p, q = s.split("/")
        if int(q) == 0:
            raise ValueError(f"zero denominator in {s!r}")
        return mpq(int(p), int(q))
    return mpq(int(s))


def _fmt_rational(x: mpq) -> str:
    return f"{int(x.numerator)}/{int(x.denominator)}"


# ---------------------------------------------------------------- scalars


class Scalar:
    """An element ``a + b*sqrt(15)`` of Q(sqrt 15)."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        if isinstance(a, Scalar):
            if b:
                raise TypeError("cannot combine a Scalar with an extra b part")
            self.a, self.b = a.a, a.b
            return
        self.a = _q(a)
        self.b = _q(b)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        return x if isinstance(x, Scalar) else cls(x)

    @property
    def field_tag(self) -> str:
        return "Q" if self.b == 0 else "Q(sqrt15)"

    def is_rational(self) -> bool:
        return self.b == 0

    def sign(self) -> int:
        return scalar_sign(self)

    def conjugate(self) -> "Scalar":
        return Scalar(self.a, -self.b)

    def norm(self) -> mpq:
        return self.a * self.a - RADICAND * self.b * self.b

    def __add__(self, other):
        o = Scalar.coerce(other)
        return Scalar(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.a, -self.b)

    def __sub__(self, other):
        o = Scalar.coerce(other)
        return Scalar(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        o = Scalar.coerce(other)
        if self.b == 0 and o.b == 0:
            return Scalar(self.a * o.a)
        return Scalar(self.a * o.a + RADICAND * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.b == 0:
            if self.a == 0:
                raise ZeroDivisionError("inverse of zero")
            return Scalar(1 / self.a)
        n = self.norm()
        return Scalar(self.a / n, -self.b / n)

    def __truediv__(self, other):
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Scalar(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = Scalar.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        # display only
        return float(self.a) + float(self.b) * RADICAND**0.5

    def serialize(self) -> str:
        if self.b == 0:
            return _fmt_rational(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{_fmt_rational(self.a)}{sign}{_fmt_rational(abs(self.b))}*sqrt15"

    @classmethod
    def parse(cls, s: str) -> "Scalar":
        s = s.strip().replace(" ", "")
        m = re.fullmatch(r"([+-]?\d+(?:/\d+)?)(?:([+-])(\d+(?:/\d+)?)\*sqrt15)?", s)
        if m is None:
            m2 = re.fullmatch(r"([+-]?\d+(?:/\d+)?)\*sqrt15", s)
            if m2 is None:
                raise ValueError(f"cannot parse scalar {s!r}")
            return cls(0, parse_rational(m2.group(1)))
        a = parse_rational(m.group(1))
        if m.group(2) is None:
            return cls(a)
        b = parse_rational(m.group(3))
        return cls(a, b if m.group(2) == "+" else -b)

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        op = "+" if self.b > 0 else "-"
        return f"({self.a} {op} {abs(self.b)}*sqrt15)"


SQRT15 = Scalar(0, 1)


def scalar_sign(x: Scalar) -> int:
    """Exact sign of ``a + b*sqrt(15)`` by comparing ``a**2`` with ``15*b**2``."""
    a, b = x.a, x.b
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    return sa if a * a > RADICAND * b * b else sb


# ---------------------------------------------------------------- polynomials


def _trim(v: list) -> list:
    while v and v[-1] == 0:
        v.pop()
    return v


def _add(u: Sequence, v: Sequence) -> list:
    if len(u) < len(v):
        u, v = v, u
    out = list(u)
    for i, c in enumerate(v):
        out[i] += c
    return out


def _sub(u: Sequence, v: Sequence) -> list:
    out = list(u) + [ZERO] * max(0, len(v) - len(u))
    for i, c in enumerate(v):
        out[i] -= c
    return out


def _mul(u: Sequence, v: Sequence) -> list:
    if not u or not v:
        return []
    out = [ZERO] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                out[i + j] += a * b
    return out


class Poly:
    """Dense univariate polynomial over Q(sqrt 15), ascending coefficients.

    ``ra`` holds the rational parts and ``rb`` the sqrt(15) parts (empty for
    polynomials over Q).  Instances are immutable.
    """

    __slots__ = ("ra", "rb", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "λ"):
        a, b = [], []
        for c in coeffs:
            if isinstance(c, Scalar):
                a.append(c.a)
                b.append(c.b)
            else:
                a.append(_q(c))
                b.append(ZERO)
        self._set(a, b, var)

    def _set(self, a: list, b: list, var: str):
        n = max(len(_trim(a)), len(_trim(b)))
        a = a + [ZERO] * (n - len(a))
        b = b + [ZERO] * (n - len(b)) if any(b) else []
        self.ra = tuple(a)
        self.rb = tuple(b)
        self.var = var

    @classmethod
    def from_parts(cls, a: Sequence, b: Sequence = (), var: str = "λ") -> "Poly":
        p = cls.__new__(cls)
        p._set(list(a), list(b), var)
        return p

    @classmethod
    def from_ints(cls, coeffs: Sequence[int], var: str = "λ") -> "Poly":
        return cls.from_parts([mpq(c) for c in coeffs], (), var)

    @classmethod
    def monomial(cls, k: int, c=1, var: str = "λ") -> "Poly":
        return cls([0] * k + [c], var)

    @classmethod
    def const(cls, c, var: str = "λ") -> "Poly":
        return cls([c], var)

    # basic properties

    @property
    def coeffs(self) -> tuple:
        if not self.rb:
            return tuple(Scalar(a) for a in self.ra)
        return tuple(Scalar(a, b) for a, b in zip(self.ra, self.rb))

    @property
    def variable_name(self) -> str:
        return self.var

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.ra) - 1

    def is_zero(self) -> bool:
        return not self.ra

    def is_rational(self) -> bool:
        return not self.rb

    @property
    def field_tag(self) -> str:
        return "Q" if not self.rb else "Q(sqrt15)"

    def coeff(self, i: int) -> Scalar:
        if i < 0 or i >= len(self.ra):
            return Scalar(0)
        return Scalar(self.ra[i], self.rb[i] if self.rb else 0)

    def leading(self) -> Scalar:
        return self.coeff(self.degree)

    def _b(self) -> list:
        return list(self.rb) if self.rb else [ZERO] * len(self.ra)

    def _check(self, other: "Poly"):
        if self.var != other.var:
            raise VariableMismatch(f"variables differ: {self.var!r} vs {other.var!r}")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly([other], self.var)

    # arithmetic

    def __add__(self, other):
        o = self._lift(other)
        b = _add(self.rb, o.rb) if (self.rb or o.rb) else []
        return Poly.from_parts(_add(self.ra, o.ra), b, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly.from_parts([-c for c in self.ra], [-c for c in self.rb], self.var)

    def __sub__(self, other):
        o = self._lift(other)
        b = _sub(self.rb, o.rb) if (self.rb or o.rb) else []
        return Poly.from_parts(_sub(self.ra, o.ra), b, self.var)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if not self.rb and not o.rb:
            return Poly.from_parts(_mul(self.ra, o.ra), (), self.var)
        a1, b1, a2, b2 = self.ra, self._b(), o.ra, o._b()
        a = _add(_mul(a1, a2), [RADICAND * c for c in _mul(b1, b2)])
        b = _add(_mul(a1, b2), _mul(b1, a2))
        return Poly.from_parts(a, b, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out, base = Poly([1], self.var), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Poly":
        return self * Poly([c], self.var)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if not self.rb and not other.rb:
            r = list(self.ra)
            d = other.ra
            lc = d[-1]
            q = [ZERO] * max(0, len(r) - len(d) + 1)
            for k in range(len(r) - len(d), -1, -1):
                c = r[k + len(d) - 1] / lc
                q[k] = c
                if c:
                    for j, dc in enumerate(d):
                        r[k + j] -= c * dc
            return Poly.from_parts(q, (), self.var), Poly.from_parts(r[: len(d) - 1], (), self.var)
        r = list(self.coeffs)
        d = other.coeffs
        inv = d[-1].inverse()
        q = [Scalar(0)] * max(0, len(r) - len(d) + 1)
        for k in range(len(r) - len(d), -1, -1):
            c = r[k + len(d) - 1] * inv
            q[k] = c
            if c:
                for j, dc in enumerate(d):
                    r[k + j] = r[k + j] - c * dc
        return Poly(q, self.var), Poly(r[: len(d) - 1], self.var)

    def __floordiv__(self, other):
        return poly_div_exact(self, other)

    def __call__(self, x):
        return poly_eval(self, x)

    def derivative(self) -> "Poly":
        return poly_derivative(self)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.leading().inverse())

    def content_integer(self) -> "Poly":
        """Rational polynomial scaled to primitive integer coefficients, positive lead."""
        if self.rb:
            raise ValueError("integer content is only defined over Q")
        if self.is_zero():
            return self
            den = lcm(*(int(c.denominator) for c in self.ra))
        ints = [int(c * den) for c in self.ra]
        g = gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return Poly.from_parts([mpq(c // g) for c in ints], (), self.var)

    def int_coeffs(self) -> list[int]:
        if self.rb or any(c.denominator != 1 for c in self.ra):
            raise ValueError("polynomial does not have integer coefficients")
        return [int(c) for c in self.ra]

    def substitute_var(self, var: str) -> "Poly":
        return Poly.from_parts(self.ra, self.rb, var)

    # comparison / display

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.var == other.var and self.ra == other.ra and self.rb == other.rb
        if isinstance(other, (int, Scalar, Fraction)) or isinstance(other, type(ZERO)):
            return self == Poly([other], self.var)
        return NotImplemented

    def __hash__(self):
        return hash((self.ra, self.rb, self.var))

    def serialize(self) -> str:
        return poly_serialize(self)

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if not c:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if c.is_rational():
                neg = c.a < 0
                mag = abs(c.a)
                cs = "" if (mag == 1 and mono) else str(mag)
                body = f"{cs}*{mono}" if (cs and mono) else (cs or mono)
            else:
                neg = False
                body = f"{c!r}*{mono}" if mono else repr(c)
            terms.append(("- " if neg else "+ ") + body)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"Poly({self})"


def poly_arith(p: Poly, q: Poly, op: str) -> Poly:
    if op not in ("add", "sub", "mul"):
        raise ValueError(f"unknown operation {op!r}")
    p._check(q)
    return {"add": p.__add__, "sub": p.__sub__, "mul": p.__mul__}[op](q)


def poly_div_exact(p: Poly, q: Poly) -> Poly:
    quo, rem = p.divmod(q)
    if not rem.is_zero():
        raise NotDivisible(f"{q} does not divide {p}")
    return quo


def poly_eval(p: Poly, x) -> Scalar:
    """Horner evaluation at an exact scalar."""
    if not isinstance(x, Scalar):
        x = _q(x)
        if not p.rb:
            acc = ZERO
            for c in reversed(p.ra):
                acc = acc * x + c
            return Scalar(acc)
        x = Scalar(x)
    if not p.rb and x.b == 0:
        acc = ZERO
        for c in reversed(p.ra):
            acc = acc * x.a + c
        return Scalar(acc)
    acc = Scalar(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_derivative(p: Poly) -> Poly:
    a = [i * c for i, c in enumerate(p.ra)][1:]
    b = [i * c for i, c in enumerate(p.rb)][1:]
    return Poly.from_parts(a, b, p.var)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd; the gcd of two zero polynomials is zero."""
    p._check(q)
    while not q.is_zero():
        p, q = q, p.divmod(q)[1]
    return p.monic()


def mobius_substitute(p: Poly, a, b, var: str = "t") -> tuple[Poly, int]:
    """Return ``(N, d)`` with ``p((a + b t)/(1 + t)) = N(t) / (1 + t)**d``.

    ``d`` is the degree of ``p``.  Over t in [0, inf) the argument sweeps
    [a, b), so positivity of ``N`` on the half-line is positivity of ``p``
    on that interval.
    """
    a = Scalar.coerce(a)
    b = Scalar.coerce(b)
    d = max(p.degree, 0)
    if p.is_zero():
        return Poly([], var), 0
    lin = Poly([a, b], var)
    one_t = Poly([1, 1], var)
    lin_pows = [Poly([1], var)]
    for _ in range(d):
        lin_pows.append(lin_pows[-1] * lin)
    one_pows = [Poly([1], var)]
    for _ in range(d):
        one_pows.append(one_pows[-1] * one_t)
    out = Poly([], var)
    for k, c in enumerate(p.coeffs):
        if c:
            out = out + (lin_pows[k] * one_pows[d - k]).scale(c)
    return out, d


@dataclass(frozen=True)
class NonnegVerdict:
    """Outcome of a half-line positivity check.

    ``kind`` is one of ``IdenticallyZero``, ``NonnegCoeffs``,
    ``PolyaPositive`` (with ``k`` the multiplier exponent) and
    ``Indeterminate``.
    """

    kind: str
    k: int = 0

    @property
    def certified(self) -> bool:
        return self.kind != "Indeterminate"

    @property
    def strictly_positive(self) -> bool:
        return self.kind in ("NonnegCoeffs", "PolyaPositive")

    def __str__(self):
        return f"PolyaPositive(k={self.k})" if self.kind == "PolyaPositive" else self.kind


def _all_nonneg(a: Sequence, b: Sequence) -> bool:
    if not b:
        return all(c >= 0 for c in a)
    return all(scalar_sign(Scalar(x, y)) >= 0 for x, y in zip(a, b))


def nonneg_on_halfline(p: Poly, max_k: int = 64) -> NonnegVerdict:
    """Certify ``p(t) >= 0`` for all ``t >= 0``.

    Tries the coefficients of ``p`` directly, then those of ``(1 + t)**k * p``
    for ``k = 1..max_k`` (Polya's theorem).  ``Indeterminate`` means no
    certificate was found, not that ``p`` takes a negative value.
    """
    if p.is_zero():
        return NonnegVerdict("IdenticallyZero")
    a = list(p.ra)
    b = list(p.rb)
    if _all_nonneg(a, b):
        return NonnegVerdict("NonnegCoeffs")
    for k in range(1, max_k + 1):
        a = [x + y for x, y in zip(a + [ZERO], [ZERO] + a)]
        if b:
            b = [x + y for x, y in zip(b + [ZERO], [ZERO] + b)]
        if _all_nonneg(a, b):
            return NonnegVerdict("PolyaPositive", k)
    return NonnegVerdict("Indeterminate")


# ---------------------------------------------------------------- rational functions


class RatFunc:
    """Quotient of polynomials, normalised on construction.

    Over Q the normal form has integer coefficients with no common integer
    factor across numerator and denominator and a positive leading
    denominator coefficient; over Q(sqrt 15) the denominator is monic.
    """

    __slots__ = ("num", "den", "reduced")

    def __init__(self, num: Poly, den: Poly | None = None, reduce: bool = True):
        if den is None:
            den = Poly([1], num.var)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            num, den = _normalise(num, den)
        self.num, self.den, self.reduced = num, den, reduce

    @property
    def var(self) -> str:
        return self.num.var

    def __add__(self, other):
        o = _as_ratfunc(other, self.var)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=self.reduced)

    def __sub__(self, other):
        return self + (-_as_ratfunc(other, self.var))

    def __rsub__(self, other):
        return _as_ratfunc(other, self.var) - self

    def __mul__(self, other):
        o = _as_ratfunc(other, self.var)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_ratfunc(other, self.var)
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return _as_ratfunc(other, self.var) / self

    def __call__(self, x) -> Scalar:
        d = poly_eval(self.den, x)
        if not d:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        return poly_eval(self.num, x) / d

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = _as_ratfunc(other, self.var)
            except TypeError:
                return NotImplemented
        a = self if self.reduced else RatFunc(self.num, self.den)
        b = other if other.reduced else RatFunc(other.num, other.den)
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        a = self if self.reduced else RatFunc(self.num, self.den)
        return hash((a.num, a.den))

    def __repr__(self):
        return f"RatFunc(({self.num}) / ({self.den}))"


def _as_ratfunc(x, var: str) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x)
    return RatFunc(Poly([x], var))


def _normalise(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    g = poly_gcd(num, den)
    if g.degree > 0:
        num = poly_div_exact(num, g)
        den = poly_div_exact(den, g)
    if num.rb or den.rb:
        inv = den.leading().inverse()
        return num.scale(inv), den.scale(inv)
    if num.is_zero():
        return num, Poly([1], den.var)
    dens = [int(c.denominator) for c in num.ra + den.ra]
    m = lcm(*dens)
    ni = [int(c * m) for c in num.ra]
    di = [int(c * m) for c in den.ra]
    g = gcd(*ni, *di)
    if di[-1] < 0:
        g = -g
    return (
        Poly.from_parts([mpq(c // g) for c in ni], (), num.var),
        Poly.from_parts([mpq(c // g) for c in di], (), den.var),
    )


def ratfunc_reduce(num: Poly, den: Poly) -> RatFunc:
    return RatFunc(num, den)


# ---------------------------------------------------------------- text format


def poly_serialize(p: Poly) -> str:
    """``deg k: c0 c1 ... ck`` with each coefficient as ``p/q`` or ``p/q+r/s*sqrt15``."""
    return f"deg {p.degree}: " + " ".join(c.serialize() for c in p.coeffs)


def poly_parse(line: str, var: str = "λ") -> Poly:
    m = re.fullmatch(r"\s*deg\s+(-?\d+)\s*:(.*)", line)
    if m is None:
        raise ValueError(f"malformed polynomial line {line!r}")
    deg = int(m.group(1))
    toks = m.group(2).split()
    if len(toks) != deg + 1:
        raise ValueError(f"degree {deg} needs {deg + 1} coefficients, got {len(toks)}")
    p = Poly([Scalar.parse(t) for t in toks], var)
    if p.degree != deg:
        raise ValueError(f"declared degree {deg} but leading coefficient is zero")
    return p
