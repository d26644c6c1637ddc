"""
Exact arithmetic in real quadratic fields Q(sqrt(d)) and a float scalar with the
same surface, so the algebra layers above can run on either.
"""
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple, Union

Rational = Union[int, Fraction]

FLOAT_DIGITS = 12


class FieldMismatchError(ArithmeticError):
    """Scalars from different quadratic fields were combined."""


class ScalarParseError(ValueError):
    """A scalar string does not follow the 'a+b*sqrt(d)' / 'p+q*t' grammar."""


@lru_cache(maxsize=None)
def _is_square_free(d: int) -> bool:
    if d < 2:
        return False
    f = 2
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        f += 1
    return True


def _format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _rational_sqrt(value: Fraction) -> Optional[Fraction]:
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


class QuadScalar:
    """
    Element a + b*sqrt(d) of Q(sqrt(d)).

    Stored as (p + q*sqrt(d)) / den with integer p, q, den, den > 0 and
    gcd(p, q, den) == 1, so a = p/den and b = q/den are always reduced.
    """

    __slots__ = ("_p", "_q", "_den", "d")

    def __init__(self, a: Rational = 0, b: Rational = 0, d: int = 5):
        if not _is_square_free(d):
            raise ValueError(f"d must be a square-free integer >= 2, got {d}")
        a = Fraction(a)
        b = Fraction(b)
        den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        p = a.numerator * (den // a.denominator)
        q = b.numerator * (den // b.denominator)
        g = math.gcd(p, q, den)
        self._p = p // g
        self._q = q // g
        self._den = den // g
        self.d = d

    @classmethod
    def _raw(cls, p: int, q: int, den: int, d: int) -> "QuadScalar":
        g = math.gcd(p, q, den)
        if g != 1:
            p //= g
            q //= g
            den //= g
        obj = object.__new__(cls)
        obj._p = p
        obj._q = q
        obj._den = den
        obj.d = d
        return obj

    # ---- Constructors ----

    @classmethod
    def rational(cls, value: Rational, d: int) -> "QuadScalar":
        value = Fraction(value)
        return cls._raw(value.numerator, 0, value.denominator, d)

    @classmethod
    def from_tau(cls, p: Rational, q: Rational) -> "QuadScalar":
        """Build p + q*tau in Q(sqrt(5))."""
        p = Fraction(p)
        q = Fraction(q)
        return cls(p + q / 2, q / 2, 5)

    @classmethod
    def zero(cls, d: int) -> "QuadScalar":
        return cls._raw(0, 0, 1, d)

    @classmethod
    def one(cls, d: int) -> "QuadScalar":
        return cls._raw(1, 0, 1, d)

    # ---- Views ----

    @property
    def a(self) -> Fraction:
        return Fraction(self._p, self._den)

    @property
    def b(self) -> Fraction:
        return Fraction(self._q, self._den)

    def is_zero(self) -> bool:
        return self._p == 0 and self._q == 0

    def is_rational(self) -> bool:
        return self._q == 0

    def rational_part(self) -> Fraction:
        return self.a

    def to_tau_basis(self) -> Tuple[Fraction, Fraction]:
        """Return (p, q) with self = p + q*tau."""
        if self.d != 5:
            raise FieldMismatchError(f"tau basis needs d=5, scalar lives in d={self.d}")
        b = self.b
        return self.a - b, 2 * b

    def conjugate(self) -> "QuadScalar":
        return QuadScalar._raw(self._p, -self._q, self._den, self.d)

    def norm(self) -> Fraction:
        """Field norm x * conj(x)."""
        return Fraction(self._p * self._p - self.d * self._q * self._q, self._den * self._den)

    def sign(self) -> int:
        p, q = self._p, self._q
        if p >= 0 and q >= 0:
            return 0 if p == 0 and q == 0 else 1
        if p <= 0 and q <= 0:
            return -1
        lhs = p * p
        rhs = self.d * q * q
        if p > 0:
            return 1 if lhs > rhs else -1
        return 1 if rhs > lhs else -1

    # ---- Arithmetic ----

    def _coerce(self, other) -> "QuadScalar":
        if isinstance(other, QuadScalar):
            if other.d != self.d:
                raise FieldMismatchError(f"cannot combine Q(sqrt({self.d})) with Q(sqrt({other.d}))")
            return other
        if isinstance(other, int):
            return QuadScalar._raw(other, 0, 1, self.d)
        if isinstance(other, Fraction):
            return QuadScalar._raw(other.numerator, 0, other.denominator, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o._den == self._den:
            return QuadScalar._raw(self._p + o._p, self._q + o._q, self._den, self.d)
        return QuadScalar._raw(
            self._p * o._den + o._p * self._den,
            self._q * o._den + o._q * self._den,
            self._den * o._den,
            self.d,
        )

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar._raw(-self._p, -self._q, self._den, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadScalar._raw(
            self._p * o._p + self.d * self._q * o._q,
            self._p * o._q + self._q * o._p,
            self._den * o._den,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(sqrt(d))")
        n = self._p * self._p - self.d * self._q * self._q
        p, q, den = self._den * self._p, -self._den * self._q, n
        if den < 0:
            p, q, den = -p, -q, -den
        return QuadScalar._raw(p, q, den, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = QuadScalar.one(self.d)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def sqrt_exact(self) -> Optional["QuadScalar"]:
        """Square root inside the same field, or None when it leaves the field."""
        if self.sign() < 0:
            return None
        if self.is_zero():
            return self
        a, b, d = self.a, self.b, self.d
        if b == 0:
            root = _rational_sqrt(a)
            if root is not None:
                return QuadScalar(root, 0, d)
            root = _rational_sqrt(a / d)
            if root is not None:
                return QuadScalar(0, root, d)
            return None
        n = _rational_sqrt(a * a - d * b * b)
        if n is None:
            return None
        for x2 in ((a + n) / 2, (a - n) / 2):
            x = _rational_sqrt(x2)
            if x is None or x == 0:
                continue
            candidate = QuadScalar(x, b / (2 * x), d)
            if candidate.sign() < 0:
                candidate = -candidate
            if candidate * candidate == self:
                return candidate
        return None

    # ---- Comparison ----

    def __eq__(self, other):
        if isinstance(other, QuadScalar):
            if other.d != self.d:
                return self._q == 0 and other._q == 0 and self.a == other.a
            return self._p == other._p and self._q == other._q and self._den == other._den
        if isinstance(other, (int, Fraction)):
            return self._q == 0 and Fraction(self._p, self._den) == other
        return NotImplemented

    def __hash__(self):
        if self._q == 0:
            return hash(Fraction(self._p, self._den))
        return hash((self._p, self._q, self._den, self.d))

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() >= 0

    def __bool__(self):
        return not self.is_zero()

    def __float__(self):
        return (self._p + self._q * math.sqrt(self.d)) / self._den

    # ---- Text ----

    def format_sqrt(self) -> str:
        a, b = self.a, self.b
        if b == 0:
            return _format_rational(a)
        unit = f"sqrt({self.d})"
        coeff = "" if abs(b) == 1 else f"{_format_rational(abs(b))}*"
        if a == 0:
            return f"{'-' if b < 0 else ''}{coeff}{unit}"
        return f"{_format_rational(a)}{'-' if b < 0 else '+'}{coeff}{unit}"

    def format_tau(self) -> str:
        p, q = self.to_tau_basis()
        if q == 0:
            return _format_rational(p)
        coeff = "" if abs(q) == 1 else f"{_format_rational(abs(q))}*"
        if p == 0:
            return f"{'-' if q < 0 else ''}{coeff}t"
        return f"{_format_rational(p)}{'-' if q < 0 else '+'}{coeff}t"

    def to_text(self) -> str:
        """tau basis in Q(sqrt(5)), sqrt(d) basis elsewhere."""
        return self.format_tau() if self.d == 5 else self.format_sqrt()

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"QuadScalar(a={_format_rational(self.a)}, b={_format_rational(self.b)}, d={self.d})"


TAU = QuadScalar(Fraction(1, 2), Fraction(1, 2), 5)
SIGMA = QuadScalar(Fraction(1, 2), Fraction(-1, 2), 5)
SQRT2 = QuadScalar(0, 1, 2)


@dataclass(frozen=True, eq=False)
class FloatScalar:
    """binary64 scalar; compare with is_close, never with ==."""

    value: float

    @staticmethod
    def _unwrap(other):
        if isinstance(other, FloatScalar):
            return other.value
        if isinstance(other, (int, float, Fraction)):
            return float(other)
        return None

    def __add__(self, other):
        o = self._unwrap(other)
        return NotImplemented if o is None else FloatScalar(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._unwrap(other)
        return NotImplemented if o is None else FloatScalar(self.value - o)

    def __rsub__(self, other):
        o = self._unwrap(other)
        return NotImplemented if o is None else FloatScalar(o - self.value)

    def __mul__(self, other):
        o = self._unwrap(other)
        return NotImplemented if o is None else FloatScalar(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._unwrap(other)
        return NotImplemented if o is None else FloatScalar(self.value / o)

    def __neg__(self):
        return FloatScalar(-self.value)

    def __abs__(self):
        return FloatScalar(abs(self.value))

    def __float__(self):
        return self.value

    def inverse(self) -> "FloatScalar":
        if self.value == 0.0:
            raise ZeroDivisionError("inverse of zero")
        return FloatScalar(1.0 / self.value)

    def is_close(self, other, tol: float = 1e-10) -> bool:
        o = self._unwrap(other)
        return o is not None and abs(self.value - o) <= tol

    def sign(self, tol: float = 0.0) -> int:
        if abs(self.value) <= tol:
            return 0
        return 1 if self.value > 0 else -1

    def __str__(self):
        return format_float(self.value)

    def __repr__(self):
        return f"FloatScalar({self.value!r})"


Scalar = Union[QuadScalar, FloatScalar, float]


def format_float(value: float) -> str:
    text = f"{float(value):.{FLOAT_DIGITS}g}"
    return "0" if text in ("-0", "0") else text


def format_scalar(value) -> str:
    if isinstance(value, QuadScalar):
        return value.to_text()
    if isinstance(value, Fraction):
        return _format_rational(value)
    if isinstance(value, int):
        return str(value)
    return format_float(float(value))


_TERM_RE = re.compile(r"[+-]?[^+-]+")
_SQRT_RE = re.compile(r"^(.*?)\*?sqrt\((\d+)\)$")


def _parse_coefficient(text: str, line: str) -> Fraction:
    if text in ("", "+"):
        return Fraction(1)
    if text == "-":
        return Fraction(-1)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ScalarParseError(f"bad coefficient {text!r} in {line!r}") from exc


def parse_scalar(text: str, d: int = 5) -> QuadScalar:
    """Parse 'a+b*sqrt(d)', 'p+q*t' or a plain rational into Q(sqrt(d))."""
    source = text
    compact = text.replace(" ", "")
    if not compact:
        raise ScalarParseError("empty scalar")
    terms = _TERM_RE.findall(compact)
    if "".join(terms) != compact:
        raise ScalarParseError(f"cannot parse scalar {source!r}")
    a = Fraction(0)
    b = Fraction(0)
    tau_coeff = Fraction(0)
    for term in terms:
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("+-")
        match = _SQRT_RE.match(body)
        if match:
            radicand = int(match.group(2))
            if radicand != d:
                raise FieldMismatchError(f"sqrt({radicand}) in {source!r} but field is d={d}")
            b += sign * _parse_coefficient(match.group(1).rstrip("*"), source)
        elif body.endswith("t"):
            if d != 5:
                raise FieldMismatchError(f"tau term in {source!r} but field is d={d}")
            tau_coeff += sign * _parse_coefficient(body[:-1].rstrip("*"), source)
        else:
            a += sign * _parse_coefficient(body, source)
    value = QuadScalar(a, b, d)
    if tau_coeff:
        value = value + QuadScalar.from_tau(0, tau_coeff)
    return value


# ---- Functional surface ----

def quad_add(x: QuadScalar, y: QuadScalar) -> QuadScalar:
    return x + y


def quad_sub(x: QuadScalar, y: QuadScalar) -> QuadScalar:
    return x - y


def quad_neg(x: QuadScalar) -> QuadScalar:
    return -x


def quad_mul(x: QuadScalar, y: QuadScalar) -> QuadScalar:
    return x * y


def quad_inverse(x: QuadScalar) -> QuadScalar:
    return x.inverse()


def rational_part(x: QuadScalar) -> Fraction:
    return x.rational_part()


def to_tau_basis(x: QuadScalar) -> Tuple[Fraction, Fraction]:
    return x.to_tau_basis()


def compare_to_zero(x: QuadScalar) -> int:
    return x.sign()
