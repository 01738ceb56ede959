"""Exact arithmetic substrate: rationals, univariate polynomials and rational
functions in a deformation parameter ``t``, pi-graded scalars, and truncated
power series with rational exponents.

Everything in this module is exact.  Coefficients are
:class:`fractions.Fraction` throughout; no operation ever rounds.  Values are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "Rational",
    "Polynomial",
    "RatFun",
    "PiScalar",
    "Series",
    "series_expand",
    "series_pow",
    "PoleAtZeroError",
    "UnitConstantTermError",
    "rational_sqrt",
    "format_rational",
    "parse_rational",
]

# Exact rationals are stdlib Fractions: arbitrary precision, always in lowest
# terms with positive denominator.
Rational = Fraction

RationalLike = Union[Fraction, int]


class PoleAtZeroError(ZeroDivisionError):
    """Raised when a series expansion is requested around a pole at t=0."""


class UnitConstantTermError(ValueError):
    """Raised when a series operation requires constant term 1."""


def format_rational(x: Fraction) -> str:
    """Render a rational as ``p`` or ``p/q``."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s: str | int) -> Fraction:
    """Parse ``p``, ``p/q`` or a plain int into a Fraction."""
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s).strip())


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a rational, or None if it is not a perfect square."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def _as_fraction_list(coeffs: Iterable[RationalLike]) -> list[Fraction]:
    return [Fraction(c) for c in coeffs]


class Polynomial:
    """Univariate polynomial in ``t`` with exact rational coefficients.

    Coefficients are stored lowest degree first with trailing zeros trimmed;
    the zero polynomial has an empty coefficient list and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = _as_fraction_list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- basic queries ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def trailing(self) -> Fraction:
        """Lowest-degree nonzero coefficient."""
        for c in self.coeffs:
            if c != 0:
                return c
        raise ValueError("zero polynomial has no trailing coefficient")

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial([other])
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = Polynomial._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(
            [self.coefficient(k) + other.coefficient(k) for k in range(n)]
        )

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        other = Polynomial._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = Polynomial._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are RatFuns, not polynomials")
        result = Polynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "Polynomial"):
        other = Polynomial._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = Polynomial()
        r = self
        d, lead = other.degree, other.leading()
        while not r.is_zero() and r.degree >= d:
            shift = r.degree - d
            c = r.leading() / lead
            term = Polynomial([Fraction(0)] * shift + [c])
            q = q + term
            r = r - term * other
        return q, r

    def __eq__(self, other) -> bool:
        other = Polynomial._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # -- calculus and evaluation --------------------------------------------

    def derivative(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, t: RationalLike) -> Fraction:
        t = Fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lead = self.leading()
        return Polynomial([c / lead for c in self.coeffs])

    def sqrt(self) -> "Polynomial | None":
        """Exact polynomial square root, or None if not a perfect square."""
        if self.is_zero():
            return Polynomial()
        if self.degree % 2 or self.leading() < 0:
            return None
        lead = rational_sqrt(self.leading())
        if lead is None:
            return None
        half = self.degree // 2
        root = [Fraction(0)] * (half + 1)
        root[half] = lead
        # Match coefficients from the top: coefficient of t^(half+k) in root^2
        # determines root[k] once root[k+1..half] are known.
        for k in range(half - 1, -1, -1):
            target = self.coefficient(half + k)
            acc = Fraction(0)
            for i in range(k + 1, half):
                j = half + k - i
                if k + 1 <= j <= half:
                    acc += root[i] * root[j]
            root[k] = (target - acc) / (2 * lead)
        candidate = Polynomial(root)
        return candidate if candidate * candidate == self else None

    # -- display --------------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = format_rational(mag)
            else:
                var = "t" if k == 1 else f"t^{k}"
                body = var if mag == 1 else f"{format_rational(mag)} {var}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({[str(c) for c in self.coeffs]})"


def _poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over the rationals by the Euclidean algorithm."""
    while not b.is_zero():
        _, r = divmod(a, b)
        a, b = b, r
    return a.monic() if not a.is_zero() else a


PolyLike = Union[Polynomial, Fraction, int, Sequence[RationalLike]]


def _as_poly(p: PolyLike) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    if isinstance(p, (int, Fraction)):
        return Polynomial([p])
    return Polynomial(p)


class RatFun:
    """Rational function of ``t`` in canonical form.

    Canonical form: numerator and denominator are coprime and the denominator
    is monic, so equality of values is equality of representations.  The zero
    function is 0/1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: PolyLike, den: PolyLike = 1):
        num, den = _as_poly(num), _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Polynomial(), Polynomial([1])
            return
        g = _poly_gcd(num, den)
        if g.degree > 0:
            num, _ = divmod(num, g)
            den, _ = divmod(den, g)
        lead = den.leading()
        self.num = Polynomial([c / lead for c in num.coeffs])
        self.den = Polynomial([c / lead for c in den.coeffs])

    # -- constructors -----------------------------------------------------

    @staticmethod
    def constant(c: RationalLike) -> "RatFun":
        return RatFun(Polynomial([c]))

    @staticmethod
    def t() -> "RatFun":
        return RatFun(Polynomial([0, 1]))

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return Polynomial([c / self.den.coeffs[0] for c in self.num.coeffs])

    def __call__(self, t: RationalLike) -> Fraction:
        d = self.den(t)
        if d == 0:
            raise ZeroDivisionError(f"pole at t={t}")
        return self.num(t) / d

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "RatFun":
        if isinstance(other, RatFun):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFun.constant(other)
        if isinstance(other, Polynomial):
            return RatFun(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = RatFun._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        other = RatFun._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = RatFun._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFun._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFun._coerce(other) / self

    def __pow__(self, k: int) -> "RatFun":
        if k < 0:
            return RatFun(self.den, self.num) ** (-k)
        return RatFun(self.num**k, self.den**k)

    def __eq__(self, other) -> bool:
        other = RatFun._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def derivative(self) -> "RatFun":
        return RatFun(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def sqrt(self) -> "RatFun | None":
        """Exact square root in RatFun, or None if not a perfect square."""
        if self.is_zero():
            return RatFun(0)
        rden = self.den.sqrt()
        if rden is None:
            return None
        rnum = self.num.sqrt()
        if rnum is None:
            rnum = (-self.num).sqrt()
            if rnum is None:
                return None
        return RatFun(rnum, rden)

    # -- display --------------------------------------------------------------

    def natural_parts(self) -> tuple[Polynomial, Polynomial]:
        """Numerator/denominator rescaled for display: integer-primitive
        coefficients with the denominator's lowest-order coefficient positive.

        The rescaling multiplies top and bottom by the same rational, so the
        value is unchanged; 1/(t^6 + ...) monic forms come back out as the
        familiar 1/(1 - t^2 - ...) presentation.
        """
        if self.is_zero():
            return Polynomial(), Polynomial([1])
        lcm = 1
        for c in (*self.num.coeffs, *self.den.coeffs):
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in (*self.num.coeffs, *self.den.coeffs)]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        scale = Fraction(lcm, g)
        den = Polynomial([c * scale for c in self.den.coeffs])
        num = Polynomial([c * scale for c in self.num.coeffs])
        if den.trailing() < 0:
            num, den = -num, -den
        return num, den

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.as_polynomial())
        num, den = self.natural_parts()
        num_s = str(num) if num.degree <= 0 else f"({num})"
        return f"{num_s}/({den})"

    def __repr__(self) -> str:
        return f"RatFun({self})"


class PiScalar:
    """Exact scalar of the form sum of (rational) * pi^k over integer k >= 0.

    Closed-form sphere volumes live here: Vol(S^2) = 4 pi is ``{1: 4}``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, RationalLike] | None = None):
        clean: dict[int, Fraction] = {}
        for k, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                if k < 0 or k != int(k):
                    raise ValueError("pi exponents must be non-negative integers")
                clean[int(k)] = c
        self.terms = dict(sorted(clean.items()))

    @staticmethod
    def rational(c: RationalLike) -> "PiScalar":
        return PiScalar({0: c})

    @staticmethod
    def pi_power(k: int, coeff: RationalLike = 1) -> "PiScalar":
        return PiScalar({k: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    @staticmethod
    def _coerce(other) -> "PiScalar":
        if isinstance(other, PiScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return PiScalar.rational(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = PiScalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return PiScalar(terms)

    __radd__ = __add__

    def __neg__(self):
        return PiScalar({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = PiScalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = PiScalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[int, Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                terms[k] = terms.get(k, Fraction(0)) + c1 * c2
        return PiScalar(terms)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = PiScalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __float__(self) -> float:
        return float(sum(float(c) * math.pi**k for k, c in self.terms.items()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.terms.items():
            if k == 0:
                parts.append(format_rational(c))
            else:
                pi = "pi" if k == 1 else f"pi^{k}"
                coeff = "" if c == 1 else f"{format_rational(c)} "
                coeff = "-" if c == -1 else coeff
                parts.append(f"{coeff}{pi}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"PiScalar({self})"


class Series:
    """Truncated power series in ``t`` with exact coefficients.

    A series of order m stores coefficients of t^0 .. t^m.  Binary operations
    require matching truncation orders so accuracy is never silently lost.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable[RationalLike], order: int | None = None):
        cs = _as_fraction_list(coeffs)
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("series order must be non-negative")
        cs = cs[: order + 1] + [Fraction(0)] * (order + 1 - len(cs))
        self.coeffs = tuple(cs)
        self.order = order

    @staticmethod
    def one(order: int) -> "Series":
        return Series([1], order)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def _check_order(self, other: "Series"):
        if self.order != other.order:
            raise ValueError(
                f"series truncation orders differ: {self.order} vs {other.order}"
            )

    @staticmethod
    def _coerce(other, order: int) -> "Series":
        if isinstance(other, Series):
            return other
        if isinstance(other, (int, Fraction)):
            return Series([other], order)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = Series._coerce(other, self.order)
        if other is NotImplemented:
            return NotImplemented
        self._check_order(other)
        return Series([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return Series([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        other = Series._coerce(other, self.order)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = Series._coerce(other, self.order)
        if other is NotImplemented:
            return NotImplemented
        self._check_order(other)
        out = [Fraction(0)] * (self.order + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(self.order + 1 - i):
                out[i + j] += a * other.coeffs[j]
        return Series(out, self.order)

    __rmul__ = __mul__

    def inverse(self) -> "Series":
        if self.coeffs[0] == 0:
            raise PoleAtZeroError("cannot invert a series with zero constant term")
        b0 = self.coeffs[0]
        out = [Fraction(1) / b0]
        for k in range(1, self.order + 1):
            acc = Fraction(0)
            for j in range(1, k + 1):
                acc += self.coeffs[j] * out[k - j]
            out.append(-acc / b0)
        return Series(out, self.order)

    def __truediv__(self, other):
        other = Series._coerce(other, self.order)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.coeffs, self.order))

    def __call__(self, t: RationalLike) -> Fraction:
        t = Fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __str__(self) -> str:
        body = str(Polynomial(self.coeffs))
        return f"{body} + O(t^{self.order + 1})"

    def __repr__(self) -> str:
        return f"Series({[str(c) for c in self.coeffs]}, order={self.order})"


def series_expand(f: RatFun | Polynomial | RationalLike, order: int) -> Series:
    """Taylor expansion of a rational function at t=0, exactly.

    Long division of the numerator series by the denominator series; requires
    the denominator to be nonzero at t=0.
    """
    f = RatFun._coerce(f)
    if f.den(0) == 0:
        raise PoleAtZeroError("denominator vanishes at t=0")
    num = Series(f.num.coeffs, order)
    den = Series(f.den.coeffs, order)
    return num * den.inverse()


def series_pow(s: Series, q: RationalLike, order: int | None = None) -> Series:
    """Binomial-series power s**q for rational exponent q, exactly.

    Requires constant term 1.  Uses the first-order ODE satisfied by s**q,
    which keeps every coefficient rational:
        (m+1) p_{m+1} = sum_{j=1..m+1} (q j - (m+1-j)) s_j p_{m+1-j}.
    """
    if order is None:
        order = s.order
    q = Fraction(q)
    if s.coeffs[0] != 1:
        raise UnitConstantTermError(
            f"series_pow requires constant term 1, got {s.coeffs[0]}"
        )
    src = list(s.coeffs[: order + 1]) + [Fraction(0)] * max(0, order - s.order)
    out = [Fraction(1)]
    for m in range(order):
        acc = Fraction(0)
        for j in range(1, m + 2):
            acc += (q * j - (m + 1 - j)) * src[j] * out[m + 1 - j]
        out.append(acc / (m + 1))
    return Series(out, order)
