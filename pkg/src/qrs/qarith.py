"""
Exact arithmetic in the indeterminate q.

Polynomials carry Python integer coefficients; rational functions are kept in
a canonical reduced form so that ``==`` is structural.  On top of that sits a
small weight-scalar layer with three modes (symbolic, exact at a rational q,
float at a real q) so the same combinatorial code can be run symbolically or
by point evaluation.
"""

from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Union

__all__ = [
    "QPolynomial",
    "QRationalFunction",
    "WeightMode",
    "WeightScalar",
    "ModeMismatchError",
    "SYMBOLIC",
    "qpochhammer",
    "qbinomial",
    "parse_q_point",
]


class ModeMismatchError(ValueError):
    """Two weight scalars from different modes (or q-points) were combined."""


# -- raw coefficient-tuple helpers -------------------------------------------

def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def _neg(a):
    return tuple(-x for x in a)


def _mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _scale(a, c):
    if c == 0:
        return ()
    return tuple(x * c for x in a)


def _content(a):
    g = 0
    for x in a:
        g = math.gcd(g, x)
        if g == 1:
            break
    return g


def _primitive(a):
    if not a:
        return a
    g = _content(a)
    if a[-1] < 0:
        g = -g
    if g == 1:
        return a
    return tuple(x // g for x in a)


def _prem(a, b):
    # pseudo-remainder of a by b (b nonzero)
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for i, y in enumerate(b):
            r[i + shift] -= c * y
        while r and r[-1] == 0:
            r.pop()
    return tuple(r)


def _pgcd(a, b):
    """Primitive gcd of two integer polynomials, positive leading coefficient."""
    if not a:
        return _primitive(b)
    if not b:
        return _primitive(a)
    if len(a) == 1 or len(b) == 1:
        return (1,)
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, _primitive(r)
        if len(b) == 1:
            return (1,)
    return _primitive(a)


def _exact_div(a, b):
    """Quotient a / b over Z; raises ValueError if the division leaves a remainder."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(r) - 1 < db:
        if r:
            raise ValueError("inexact polynomial division")
        return ()
    quot = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c, rem = divmod(r[k + db], lb)
        if rem:
            raise ValueError("inexact polynomial division")
        quot[k] = c
        if c:
            for i, y in enumerate(b):
                r[k + i] -= c * y
    if any(r):
        raise ValueError("inexact polynomial division")
    return _trim(quot)


def _horner(c, x):
    acc = 0
    for coeff in reversed(c):
        acc = acc * x + coeff
    return acc


# -- text rendering / parsing --------------------------------------------------

def _render(c):
    if not c:
        return "0"
    parts = []
    for e, coeff in enumerate(c):
        if coeff == 0:
            continue
        mag = abs(coeff)
        if e == 0:
            body = str(mag)
        elif mag == 1:
            body = "q" if e == 1 else f"q^{e}"
        else:
            body = f"{mag}*q" if e == 1 else f"{mag}*q^{e}"
        if not parts:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(("+ " if coeff > 0 else "- ") + body)
    return " ".join(parts)


_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*(\*)?\s*(q(?:\s*\^\s*(\d+))?)?\s*")


def _parse_poly(text):
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial")
    coeffs = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, num, star, qpart, exp = m.groups()
        if m.end() == pos or (num is None and qpart is None):
            raise ValueError(f"cannot parse polynomial {text!r} at {pos}")
        if sign is None and not first:
            raise ValueError(f"missing operator in {text!r} at {pos}")
        if star and (num is None or qpart is None):
            raise ValueError(f"dangling '*' in {text!r}")
        c = int(num) if num is not None else 1
        if sign == "-":
            c = -c
        e = 0 if qpart is None else (int(exp) if exp is not None else 1)
        coeffs[e] = coeffs.get(e, 0) + c
        pos = m.end()
        first = False
    top = max(coeffs)
    return _trim(coeffs.get(i, 0) for i in range(top + 1))


# -- polynomials ----------------------------------------------------------------

class QPolynomial:
    """Integer polynomial in q; ``coeffs[e]`` is the coefficient of q**e."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs = _trim(operator.index(x) for x in coeffs)

    @classmethod
    def _raw(cls, coeffs):
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def constant(cls, c: int) -> "QPolynomial":
        return cls._raw(_trim((operator.index(c),)))

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> "QPolynomial":
        if e < 0:
            raise ValueError("negative exponent")
        return cls._raw(_trim((0,) * e + (c,)))

    @classmethod
    def parse(cls, text: str) -> "QPolynomial":
        return cls._raw(_parse_poly(text))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def content(self) -> int:
        return _content(self.coeffs)

    def __call__(self, x):
        return _horner(self.coeffs, x)

    def _coerce(self, other):
        if isinstance(other, QPolynomial):
            return other.coeffs
        if isinstance(other, int):
            return _trim((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QPolynomial._raw(_add(self.coeffs, o))

    __radd__ = __add__

    def __neg__(self):
        return QPolynomial._raw(_neg(self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QPolynomial._raw(_add(self.coeffs, _neg(o)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QPolynomial._raw(_add(o, _neg(self.coeffs)))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QPolynomial._raw(_mul(self.coeffs, o))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = (1,), self.coeffs
        while n:
            if n & 1:
                out = _mul(out, base)
            base = _mul(base, base)
            n >>= 1
        return QPolynomial._raw(out)

    def exact_div(self, other: "QPolynomial") -> "QPolynomial":
        """Quotient over Z; ValueError when ``other`` does not divide ``self``."""
        o = self._coerce(other)
        return QPolynomial._raw(_exact_div(self.coeffs, o))

    def divides(self, other: "QPolynomial") -> bool:
        try:
            other.exact_div(self)
        except ValueError:
            return False
        return True

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o

    def __hash__(self):
        return hash(("QPolynomial", self.coeffs))

    def __str__(self):
        return _render(self.coeffs)

    def __repr__(self):
        return f"QPolynomial({_render(self.coeffs)!r})"


# -- rational functions -----------------------------------------------------------

class QRationalFunction:
    """
    Reduced quotient of integer polynomials.

    Canonical form: numerator and denominator coprime over Q[q], the joint
    integer content of both is 1, and the denominator has positive leading
    coefficient.  Zero is ``0/1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        n = _as_coeffs(num)
        d = _as_coeffs(den)
        if not d:
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _reduce(n, d)

    @classmethod
    def _raw(cls, num, den):
        r = object.__new__(cls)
        r.num = num
        r.den = den
        return r

    @classmethod
    def parse(cls, text: str) -> "QRationalFunction":
        s = text.strip()
        m = re.fullmatch(r"\(([^()]*)\)\s*/\s*\(([^()]*)\)", s)
        if m:
            return cls(_parse_poly(m.group(1)), _parse_poly(m.group(2)))
        return cls(_parse_poly(s))

    @property
    def numerator(self) -> QPolynomial:
        return QPolynomial._raw(self.num)

    @property
    def denominator(self) -> QPolynomial:
        return QPolynomial._raw(self.den)

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den == (1,)

    def evaluate(self, x):
        """Value at a point; exact for Fractions, float for floats."""
        d = _horner(self.den, x)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at q={x}")
        n = _horner(self.num, x)
        if isinstance(x, float):
            return n / d
        return Fraction(n) / Fraction(d)

    __call__ = evaluate

    def _coerce(self, other):
        if isinstance(other, QRationalFunction):
            return other.num, other.den
        if isinstance(other, QPolynomial):
            return other.coeffs, (1,)
        if isinstance(other, int):
            return _trim((other,)), (1,)
        if isinstance(other, Fraction):
            return _trim((other.numerator,)), (other.denominator,)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n2, d2 = o
        if self.den == d2:
            n, d = _add(self.num, n2), d2
        else:
            n = _add(_mul(self.num, d2), _mul(n2, self.den))
            d = _mul(self.den, d2)
        return QRationalFunction._raw(*_reduce(n, d))

    __radd__ = __add__

    def __neg__(self):
        return QRationalFunction._raw(_neg(self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + QRationalFunction._raw(_neg(o[0]), o[1])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n2, d2 = o
        if not self.num or not n2:
            return QRationalFunction._raw((), (1,))
        # cross-cancel first so the products stay small
        g1 = _pgcd(self.num, d2)
        g2 = _pgcd(n2, self.den)
        a = _exact_div(self.num, g1) if g1 != (1,) else self.num
        d2 = _exact_div(d2, g1) if g1 != (1,) else d2
        b = _exact_div(n2, g2) if g2 != (1,) else n2
        d1 = _exact_div(self.den, g2) if g2 != (1,) else self.den
        return QRationalFunction._raw(*_normalize(_mul(a, b), _mul(d1, d2)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o[0]:
            raise ZeroDivisionError("division by the zero rational function")
        return self * QRationalFunction._raw(*_normalize(o[1], o[0]))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QRationalFunction._raw(*_normalize(*o)) / self

    def __pow__(self, n: int):
        if n < 0:
            return QRationalFunction(1) / (self ** (-n))
        out = QRationalFunction._raw((1,), (1,))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not isinstance(other, QRationalFunction):
            o = _reduce(*o)
        return (self.num, self.den) == o

    def __hash__(self):
        return hash(("QRationalFunction", self.num, self.den))

    def __str__(self):
        if self.den == (1,):
            return _render(self.num)
        return f"({_render(self.num)})/({_render(self.den)})"

    def __repr__(self):
        return f"QRationalFunction({str(self)!r})"


def _as_coeffs(x):
    if isinstance(x, QPolynomial):
        return x.coeffs
    if isinstance(x, int):
        return _trim((x,))
    return _trim(operator.index(c) for c in x)


def _normalize(n, d):
    # integer content + sign only (assumes n, d already coprime as polynomials)
    if not n:
        return (), (1,)
    g = math.gcd(_content(n), _content(d))
    if d[-1] < 0:
        g = -g
    if g != 1:
        n = tuple(x // g for x in n)
        d = tuple(x // g for x in d)
    return n, d


def _reduce(n, d):
    if not n:
        return (), (1,)
    if len(d) > 1:
        g = _pgcd(n, d)
        if g != (1,):
            n = _exact_div(n, g)
            d = _exact_div(d, g)
    return _normalize(n, d)


@lru_cache(maxsize=None)
def qpochhammer(n: int) -> QPolynomial:
    """(n)_q = (1 - q)(1 - q^2)...(1 - q^n); (0)_q = 1."""
    if n < 0:
        raise ValueError("qpochhammer needs n >= 0")
    if n == 0:
        return QPolynomial._raw((1,))
    prev = qpochhammer(n - 1).coeffs
    factor = (1,) + (0,) * (n - 1) + (-1,)
    return QPolynomial._raw(_mul(prev, factor))


@lru_cache(maxsize=None)
def qbinomial(n: int, m: int) -> QPolynomial:
    """Gaussian binomial [n choose m]_q; zero outside 0 <= m <= n."""
    if m < 0 or m > n or n < 0:
        return QPolynomial._raw(())
    den = _mul(qpochhammer(m).coeffs, qpochhammer(n - m).coeffs)
    return QPolynomial._raw(_exact_div(qpochhammer(n).coeffs, den))


# -- weight modes -----------------------------------------------------------------

Number = Union[int, Fraction, float]


def parse_q_point(text: str) -> Fraction:
    """Parse "p/r", an integer or a finite decimal into an exact rational."""
    return Fraction(text.strip())


@dataclass(frozen=True)
class WeightMode:
    """
    How weights are represented: ``symbolic`` (rational functions of q),
    ``exact`` (rationals at a fixed rational q) or ``float`` (doubles at a
    fixed real q).
    """

    kind: str
    q: Union[Fraction, float, None] = None

    def __post_init__(self):
        if self.kind == "symbolic":
            if self.q is not None:
                raise ValueError("symbolic mode takes no q-point")
        elif self.kind == "exact":
            if isinstance(self.q, float) or not isinstance(self.q, Rational):
                raise TypeError("exact mode needs a rational q")
            object.__setattr__(self, "q", Fraction(self.q))
            if self.q in (1, -1):
                raise ValueError("exact mode rejects q = 1 and q = -1")
        elif self.kind == "float":
            q = float(self.q)
            if not math.isfinite(q):
                raise ValueError("float mode needs a finite q")
            object.__setattr__(self, "q", q)
        else:
            raise ValueError(f"unknown weight mode {self.kind!r}")

    @classmethod
    def exact(cls, q) -> "WeightMode":
        if isinstance(q, str):
            q = parse_q_point(q)
        return cls("exact", Fraction(q))

    @classmethod
    def floating(cls, q) -> "WeightMode":
        return cls("float", float(q))

    @classmethod
    def parse(cls, text: str) -> "WeightMode":
        """Accepts ``symbolic``, ``exact:q=1/2`` and ``float:q=0.5``."""
        text = text.strip()
        if text == "symbolic":
            return SYMBOLIC
        m = re.fullmatch(r"(exact|float):q=(.+)", text)
        if not m:
            raise ValueError(f"bad weight mode {text!r}")
        if m.group(1) == "exact":
            return cls.exact(m.group(2))
        return cls.floating(float(m.group(2)))

    def __str__(self):
        if self.kind == "symbolic":
            return "symbolic"
        return f"{self.kind}:q={self.q}"

    # constructors --------------------------------------------------------------

    def wrap(self, value) -> "WeightScalar":
        return WeightScalar(value, self)

    def const(self, x) -> "WeightScalar":
        if isinstance(x, WeightScalar):
            if x.mode != self:
                raise ModeMismatchError(f"{x.mode} vs {self}")
            return x
        if self.kind == "symbolic":
            return WeightScalar(_const_rf(x), self)
        if self.kind == "exact":
            if isinstance(x, float):
                raise TypeError("float constant in exact mode")
            return WeightScalar(Fraction(x), self)
        return WeightScalar(float(x), self)

    @property
    def one(self) -> "WeightScalar":
        return _mode_const(self, 1)

    @property
    def zero(self) -> "WeightScalar":
        return _mode_const(self, 0)

    def qpow(self, e: int) -> "WeightScalar":
        return _mode_qpow(self, e)

    def one_minus_qpow(self, e: int) -> "WeightScalar":
        return _mode_omq(self, e)

    def poch(self, n: int) -> "WeightScalar":
        return _mode_poch(self, n)

    def qbinom(self, n: int, m: int) -> "WeightScalar":
        return self.of(qbinomial(n, m))

    def of(self, x) -> "WeightScalar":
        """Evaluate a polynomial / rational function in this mode."""
        if isinstance(x, QPolynomial):
            x = QRationalFunction._raw(x.coeffs, (1,))
        if isinstance(x, QRationalFunction):
            if self.kind == "symbolic":
                return WeightScalar(x, self)
            return WeightScalar(x.evaluate(self.q), self)
        return self.const(x)


def _const_rf(x):
    if isinstance(x, QRationalFunction):
        return x
    if isinstance(x, QPolynomial):
        return QRationalFunction._raw(x.coeffs, (1,))
    if isinstance(x, int):
        return QRationalFunction._raw(_trim((x,)), (1,))
    if isinstance(x, Fraction):
        return QRationalFunction._raw(_trim((x.numerator,)), (x.denominator,))
    raise TypeError(f"cannot use {type(x).__name__} as a symbolic constant")


@lru_cache(maxsize=None)
def _mode_const(mode, c):
    return mode.const(c)


@lru_cache(maxsize=None)
def _mode_qpow(mode, e):
    if e < 0:
        raise ValueError("negative q-exponent")
    if mode.kind == "symbolic":
        return WeightScalar(QRationalFunction._raw((0,) * e + (1,), (1,)), mode)
    return WeightScalar(mode.q ** e, mode)


@lru_cache(maxsize=None)
def _mode_omq(mode, e):
    if e < 0:
        raise ValueError("negative q-exponent")
    if mode.kind == "symbolic":
        c = _trim((1,) + (0,) * (e - 1) + (-1,)) if e > 0 else ()
        return WeightScalar(QRationalFunction._raw(c, (1,)), mode)
    return WeightScalar(1 - mode.q ** e, mode)


@lru_cache(maxsize=None)
def _mode_poch(mode, n):
    return mode.of(qpochhammer(n))


SYMBOLIC = WeightMode("symbolic")


class WeightScalar:
    """
    A weight in one mode.  Arithmetic with another scalar requires the same
    mode and q-point; plain ints and Fractions are promoted.
    """

    __slots__ = ("value", "mode")

    def __init__(self, value, mode: WeightMode):
        self.value = value
        self.mode = mode

    def _other(self, other):
        if isinstance(other, WeightScalar):
            if other.mode is not self.mode and other.mode != self.mode:
                raise ModeMismatchError(f"cannot combine {self.mode} with {other.mode}")
            return other.value
        if isinstance(other, (int, Fraction)) or (
            isinstance(other, float) and self.mode.kind == "float"
        ):
            return self.mode.const(other).value
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return WeightScalar(self.value + o, self.mode)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return WeightScalar(self.value - o, self.mode)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return WeightScalar(o - self.value, self.mode)

    def __neg__(self):
        return WeightScalar(-self.value, self.mode)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return WeightScalar(self.value * o, self.mode)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("division by a zero weight")
        return WeightScalar(self.value / o, self.mode)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.is_zero():
            raise ZeroDivisionError("division by a zero weight")
        return WeightScalar(o / self.value, self.mode)

    def __pow__(self, n: int):
        return WeightScalar(self.value ** n, self.mode)

    def is_zero(self) -> bool:
        if self.mode.kind == "symbolic":
            return not self.value.num
        return self.value == 0

    def __eq__(self, other):
        try:
            o = self._other(other)
        except ModeMismatchError:
            return False
        if o is None:
            return NotImplemented
        if self.mode.kind == "float":
            return math.isclose(self.value, o, rel_tol=1e-9, abs_tol=1e-12)
        return self.value == o

    __hash__ = None

    def __bool__(self):
        return not self.is_zero()

    # conversions -------------------------------------------------------------

    @property
    def rational(self) -> QRationalFunction:
        if self.mode.kind != "symbolic":
            raise TypeError("not a symbolic weight")
        return self.value

    @property
    def polynomial(self) -> QPolynomial:
        """The value as a QPolynomial; ValueError if it has a denominator."""
        rf = self.rational
        if rf.den != (1,):
            raise ValueError(f"{rf} is not a polynomial")
        return QPolynomial._raw(rf.num)

    def at(self, q) -> "WeightScalar":
        """Evaluate a symbolic weight at a point, returning an exact/float scalar."""
        mode = WeightMode.floating(q) if isinstance(q, float) else WeightMode.exact(q)
        if self.mode.kind == "symbolic":
            return WeightScalar(self.value.evaluate(mode.q), mode)
        if self.mode != mode:
            raise ModeMismatchError(f"{self.mode} evaluated at q={q}")
        return self

    def __float__(self):
        if self.mode.kind == "symbolic":
            raise TypeError("symbolic weight has no float value")
        return float(self.value)

    def to_fraction(self) -> Fraction:
        if self.mode.kind != "exact":
            raise TypeError("only exact weights convert to Fraction")
        return self.value

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"WeightScalar({self.value!s}, {self.mode})"

    def to_json(self):
        if self.mode.kind == "float":
            return self.value
        return str(self.value)


def wsum(items: Iterable[WeightScalar], mode: WeightMode) -> WeightScalar:
    """Sum of scalars, starting from the mode's zero."""
    total = mode.zero
    for x in items:
        total = total + x
    return total


def wprod(items: Iterable[WeightScalar], mode: WeightMode) -> WeightScalar:
    total = mode.one
    for x in items:
        total = total * x
    return total
