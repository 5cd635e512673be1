"""Truncated Laurent series with exact rational coefficients.

A :class:`QSeries` stores the coefficients of ``q^v, ..., q^(P-1)`` as a
vector of Python integers over one common positive denominator; the series
is known modulo ``O(q^P)``.  Precision travels with every value and combines
by the min-rule, so a result never claims more terms than its operands
justify.

:class:`BiSeries` is a Laurent series in an outer variable ``q`` whose
coefficients are :class:`QSeries` in an inner variable ``p``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import NonUnitDenominator, NonzeroConstantTerm, PrecisionError, ZeroLeadingCoefficient

__all__ = [
    "QSeries",
    "BiSeries",
    "convolve",
    "convolve_naive",
    "convolve_kronecker",
    "parse_rational",
    "format_rational",
]

_KRONECKER_CUTOFF = 24


def convolve_naive(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First ``n`` coefficients of the product of two integer polynomials."""
    out = [0] * n
    lb = len(b)
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        for j in range(min(lb, n - i)):
            y = b[j]
            if y:
                out[i + j] += x * y
    return out


def _pack(coeffs: Sequence[int], width: int) -> int:
    pos = b"".join((c if c > 0 else 0).to_bytes(width, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(width, "little") for c in coeffs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def convolve_kronecker(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """Same contract as :func:`convolve_naive`, via one big-integer product.

    Both inputs are evaluated at ``2**(8*width)`` with a slot wide enough for
    any signed product coefficient; the digits of the product are then read
    back with a constant offset that makes them nonnegative.
    """
    a = list(a[:n])
    b = list(b[:n])
    if not a or not b:
        return [0] * n
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return [0] * n
    bound = ma * mb * min(len(a), len(b))
    width = (bound.bit_length() + 2 + 7) // 8
    prod = _pack(a, width) * _pack(b, width)
    length = min(len(a) + len(b) - 1, n)
    full = len(a) + len(b) - 1
    half = 1 << (8 * width - 1)
    offset = int.from_bytes(half.to_bytes(width, "little") * full, "little")
    data = (prod + offset).to_bytes(width * full, "little")
    out = [
        int.from_bytes(data[i * width:(i + 1) * width], "little") - half
        for i in range(length)
    ]
    out.extend([0] * (n - length))
    return out


def convolve(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    if min(len(a), len(b), n) <= _KRONECKER_CUTOFF:
        return convolve_naive(a, b, n)
    return convolve_kronecker(a, b, n)


def parse_rational(text) -> Fraction:
    return Fraction(text) if not isinstance(text, Fraction) else text


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class QSeries:
    """Laurent series ``sum_{n>=v} a_n q^n + O(q^P)`` over the rationals.

    Values are immutable.  A series that is zero to its precision has
    ``valuation == precision`` and no stored coefficients.
    """

    __slots__ = ("valuation", "precision", "_num", "_den")

    def __init__(self, coeffs: Iterable = (), valuation: int = 0, precision: int | None = None):
        fr = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        if precision is None:
            precision = valuation + len(fr)
        length = max(precision - valuation, 0)
        fr = fr[:length] + [Fraction(0)] * (length - len(fr))
        den = 1
        for c in fr:
            if c.denominator != 1:
                den = _lcm(den, c.denominator)
        num = [c.numerator * (den // c.denominator) for c in fr]
        self._assign(num, den, valuation, precision)

    # construction helpers -------------------------------------------------
    def _assign(self, num: list[int], den: int, valuation: int, precision: int) -> None:
        start = 0
        while start < len(num) and num[start] == 0:
            start += 1
        if start == len(num):
            object.__setattr__(self, "valuation", precision)
            object.__setattr__(self, "precision", precision)
            object.__setattr__(self, "_num", ())
            object.__setattr__(self, "_den", 1)
            return
        num = num[start:]
        g = den
        for x in num:
            g = gcd(g, x)
            if g == 1:
                break
        if g != 1:
            num = [x // g for x in num]
            den //= g
        object.__setattr__(self, "valuation", valuation + start)
        object.__setattr__(self, "precision", precision)
        object.__setattr__(self, "_num", tuple(num))
        object.__setattr__(self, "_den", den)

    @classmethod
    def _from_ints(cls, num: list[int], den: int, valuation: int, precision: int) -> "QSeries":
        obj = cls.__new__(cls)
        length = max(precision - valuation, 0)
        if len(num) > length:
            num = num[:length]
        elif len(num) < length:
            num = list(num) + [0] * (length - len(num))
        if den < 0:
            num = [-x for x in num]
            den = -den
        obj._assign(list(num), den, valuation, precision)
        return obj

    @classmethod
    def zero(cls, precision: int) -> "QSeries":
        return cls._from_ints([], 1, precision, precision)

    @classmethod
    def one(cls, precision: int) -> "QSeries":
        return cls.monomial(0, 1, precision)

    @classmethod
    def monomial(cls, exponent: int, coeff=1, precision: int | None = None) -> "QSeries":
        if precision is None:
            precision = exponent + 1
        c = Fraction(coeff)
        return cls._from_ints([c.numerator], c.denominator, exponent, precision)

    @classmethod
    def from_int_list(cls, coeffs: Sequence[int], valuation: int = 0, precision: int | None = None,
                      denominator: int = 1) -> "QSeries":
        if precision is None:
            precision = valuation + len(coeffs)
        return cls._from_ints(list(coeffs), denominator, valuation, precision)

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # access -----------------------------------------------------------------
    @property
    def denominator(self) -> int:
        return self._den

    @property
    def numerators(self) -> tuple[int, ...]:
        """Integer numerators of the stored coefficients (over :attr:`denominator`)."""
        return self._num

    @property
    def coeffs(self) -> list[Fraction]:
        return [Fraction(x, self._den) for x in self._num]

    def is_zero(self) -> bool:
        return not self._num

    def is_integral(self) -> bool:
        return self._den == 1

    def __getitem__(self, n: int) -> Fraction:
        if n >= self.precision:
            raise PrecisionError(f"coefficient of q^{n} requested, series known mod q^{self.precision}")
        if n < self.valuation:
            return Fraction(0)
        return Fraction(self._num[n - self.valuation], self._den)

    coefficient = __getitem__

    def leading_coefficient(self) -> Fraction:
        if not self._num:
            raise ZeroLeadingCoefficient("series is zero to its precision")
        return Fraction(self._num[0], self._den)

    def coefficient_list(self, start: int, stop: int) -> list[Fraction]:
        return [self[n] for n in range(start, stop)]

    def int_coefficients(self, start: int, stop: int) -> list[int]:
        if self._den != 1:
            raise ValueError("series has non-integral coefficients")
        return [int(self[n]) for n in range(start, stop)]

    def _aligned_ints(self, start: int, stop: int, den: int) -> list[int]:
        """Numerators of exponents ``start..stop-1`` over denominator ``den``."""
        scale = den // self._den
        out = [0] * (stop - start)
        v = self.valuation
        for i, x in enumerate(self._num):
            e = v + i
            if start <= e < stop:
                out[e - start] = x * scale
        return out

    # comparisons ------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, QSeries):
            return (self.valuation == other.valuation and self.precision == other.precision
                    and self._num == other._num and self._den == other._den)
        return NotImplemented

    def __hash__(self):
        return hash((self.valuation, self.precision, self._num, self._den))

    def agrees_with(self, other: "QSeries", upto: int | None = None) -> bool:
        """Coefficientwise equality below ``min`` of both precisions (and ``upto``)."""
        return self.first_difference(other, upto) is None

    def first_difference(self, other: "QSeries", upto: int | None = None):
        """Smallest exponent where the two series differ, or None."""
        stop = min(self.precision, other.precision)
        if upto is not None:
            stop = min(stop, upto)
        start = min(self.valuation, other.valuation)
        for n in range(start, stop):
            if self[n] != other[n]:
                return n
        return None

    def truncate(self, precision: int) -> "QSeries":
        if precision >= self.precision:
            return self
        return QSeries._from_ints(list(self._num), self._den, self.valuation, precision)

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            # an exact constant is known to every order
            return QSeries._from_ints([c.numerator], c.denominator, 0, max(self.precision, 1))
        return None

    def __neg__(self):
        return QSeries._from_ints([-x for x in self._num], self._den, self.valuation, self.precision)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prec = min(self.precision, other.precision)
        start = min(self.valuation, other.valuation)
        if start >= prec:
            return QSeries.zero(prec)
        den = _lcm(self._den, other._den)
        a = self._aligned_ints(start, prec, den)
        b = other._aligned_ints(start, prec, den)
        return QSeries._from_ints([x + y for x, y in zip(a, b)], den, start, prec)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "QSeries":
        c = Fraction(c)
        return QSeries._from_ints([x * c.numerator for x in self._num], self._den * c.denominator,
                                  self.valuation, self.precision)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        val = self.valuation + other.valuation
        prec = min(self.precision + other.valuation, other.precision + self.valuation)
        n = prec - val
        if n <= 0 or not self._num or not other._num:
            return QSeries.zero(prec)
        num = convolve(self._num, other._num, n)
        return QSeries._from_ints(num, self._den * other._den, val, prec)

    __rmul__ = __mul__

    def invert(self) -> "QSeries":
        """Multiplicative inverse; valuation ``-v``, precision ``P - 2v``."""
        if not self._num:
            raise ZeroLeadingCoefficient("cannot invert a series that is zero to its precision")
        v = self.valuation
        rel = self.precision - v
        lead = self._num[0]
        # unit series u with u_0 = 1, held as integers over `lead`
        u = QSeries._from_ints(list(self._num), lead, 0, rel)
        inv = QSeries.one(1)
        k = 1
        while k < rel:
            k = min(2 * k, rel)
            # zero-padded approximation; one Newton step makes it exact mod q^k
            ext = QSeries._from_ints(list(inv._num), inv._den, inv.valuation, k)
            inv = ext * (2 - u.truncate(k) * ext)
        return inv.scale(Fraction(self._den, lead)).shift(-v)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, QSeries):
            return self * other.invert()
        return NotImplemented

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.invert()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert() ** (-n)
        result = QSeries.one(self.precision - self.valuation)
        base = self
        first = True
        while n:
            if n & 1:
                result = base if first else result * base
                first = False
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> "QSeries":
        """Multiply by ``q^k``."""
        return QSeries._from_ints(list(self._num), self._den, self.valuation + k, self.precision + k)

    def substitute(self, m: int) -> "QSeries":
        """The series in ``q^m`` (``f(q) -> f(q^m)``), for ``m >= 1``."""
        if m < 1:
            raise ValueError("substitution exponent must be positive")
        if m == 1 or not self._num:
            return QSeries._from_ints(list(self._num), self._den, m * self.valuation, m * self.precision)
        num = [0] * (m * (len(self._num) - 1) + 1)
        num[::m] = self._num
        return QSeries._from_ints(num, self._den, m * self.valuation, m * self.precision)

    def theta(self) -> "QSeries":
        """The operator ``q d/dq``."""
        v = self.valuation
        return QSeries._from_ints([(v + i) * x for i, x in enumerate(self._num)], self._den, v, self.precision)

    def integrate_theta(self) -> "QSeries":
        """Inverse of :meth:`theta` on series without constant term."""
        if self.precision <= 0:
            raise PrecisionError("constant term is beyond the known precision")
        if self[0] != 0:
            raise NonzeroConstantTerm(f"constant term {self[0]} obstructs integration")
        v = self.valuation
        coeffs = []
        for i, x in enumerate(self._num):
            e = v + i
            coeffs.append(Fraction(0) if e == 0 else Fraction(x, self._den * e))
        return QSeries(coeffs, v, self.precision)

    # display / serialization --------------------------------------------------
    def __repr__(self):
        terms = []
        for i, x in enumerate(self._num[:6]):
            if x:
                terms.append(f"({format_rational(Fraction(x, self._den))})q^{self.valuation + i}")
        body = " + ".join(terms) if terms else "0"
        return f"QSeries({body} + O(q^{self.precision}))"

    def to_json(self) -> dict:
        return {
            "valuation": self.valuation,
            "precision": self.precision,
            "coeffs": [format_rational(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "QSeries":
        return cls([parse_rational(c) for c in doc["coeffs"]], int(doc["valuation"]), int(doc["precision"]))


class BiSeries:
    """Laurent series in an outer variable whose coefficients are :class:`QSeries`.

    ``coeffs[i]`` is the coefficient of ``q^(valuation + i)``; the outer
    series is known modulo ``O(q^precision)``.
    """

    __slots__ = ("valuation", "precision", "coeffs", "inner_precision")

    def __init__(self, coeffs: Sequence[QSeries], valuation: int, precision: int, inner_precision: int):
        coeffs = list(coeffs)[: max(precision - valuation, 0)]
        while len(coeffs) < precision - valuation:
            coeffs.append(QSeries.zero(inner_precision))
        self.valuation = valuation
        self.precision = precision
        self.coeffs = tuple(coeffs)
        self.inner_precision = inner_precision

    @classmethod
    def from_outer(cls, series: QSeries, inner_precision: int) -> "BiSeries":
        """Outer series with constant inner coefficients."""
        coeffs = [QSeries.monomial(0, c, inner_precision) if c else QSeries.zero(inner_precision)
                  for c in series.coeffs]
        return cls(coeffs, series.valuation, series.precision, inner_precision)

    @classmethod
    def from_inner(cls, series: QSeries, outer_precision: int) -> "BiSeries":
        """The inner series placed at ``q^0``."""
        return cls([series], 0, outer_precision, series.precision)

    def __getitem__(self, m: int) -> QSeries:
        if m >= self.precision:
            raise PrecisionError(f"outer coefficient q^{m} beyond precision {self.precision}")
        if m < self.valuation:
            return QSeries.zero(self.inner_precision)
        return self.coeffs[m - self.valuation]

    def min_inner_precision(self) -> int:
        return min((c.precision for c in self.coeffs), default=self.inner_precision)

    def __add__(self, other: "BiSeries") -> "BiSeries":
        prec = min(self.precision, other.precision)
        start = min(self.valuation, other.valuation)
        ip = min(self.inner_precision, other.inner_precision)
        return BiSeries([self[m] + other[m] for m in range(start, prec)], start, prec, ip)

    def __neg__(self) -> "BiSeries":
        return BiSeries([-c for c in self.coeffs], self.valuation, self.precision, self.inner_precision)

    def __sub__(self, other: "BiSeries") -> "BiSeries":
        return self + (-other)

    def __mul__(self, other: "BiSeries") -> "BiSeries":
        val = self.valuation + other.valuation
        prec = min(self.precision + other.valuation, other.precision + self.valuation)
        ip = min(self.inner_precision, other.inner_precision)
        out = []
        for n in range(prec - val):
            acc = QSeries.zero(ip)
            for i in range(n + 1):
                a, b = self.coeffs[i], other.coeffs[n - i]
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc)
        return BiSeries(out, val, prec, ip)

    def invert(self) -> "BiSeries":
        """Inverse when the leading outer coefficient is an invertible inner series."""
        lead = self.coeffs[0] if self.coeffs else None
        if lead is None or lead.is_zero():
            raise NonUnitDenominator("leading outer coefficient is not invertible")
        inv0 = lead.invert()
        rel = self.precision - self.valuation
        ip = self.inner_precision
        b = [inv0]
        for n in range(1, rel):
            acc = QSeries.zero(ip)
            for i in range(1, n + 1):
                d = self.coeffs[i]
                if not d.is_zero() and not b[n - i].is_zero():
                    acc = acc + d * b[n - i]
            b.append(-(inv0 * acc))
        return BiSeries(b, -self.valuation, self.precision - 2 * self.valuation, ip)

    def agrees_with(self, other: "BiSeries", outer_upto: int, inner_upto: int) -> bool:
        for m in range(min(self.valuation, other.valuation), outer_upto):
            if not self[m].agrees_with(other[m], inner_upto):
                return False
        return True


def bi_divide(num: BiSeries, den: BiSeries) -> BiSeries:
    """``num / den`` as a bivariate series; see :meth:`BiSeries.invert`."""
    return num * den.invert()
