"""Levels, eta products and the cusp form Delta_N."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import FractionalValuation, InvalidLevel
from .series import QSeries

ADMITTED_LEVELS = (2, 3, 5, 6, 7, 11, 14, 15, 23)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class LevelData:
    N: int
    divisors: tuple[int, ...] = field(init=False)
    primes: tuple[int, ...] = field(init=False)
    sigma0: int = field(init=False)
    sigma1: int = field(init=False)
    k1: int = field(init=False)

    def __post_init__(self):
        if self.N not in ADMITTED_LEVELS:
            raise InvalidLevel(f"level {self.N} is not one of {ADMITTED_LEVELS}")
        ds = tuple(divisors(self.N))
        s0, s1 = len(ds), sum(ds)
        k1 = Fraction(12 * s0, s1)
        assert k1.denominator == 1
        object.__setattr__(self, "divisors", ds)
        object.__setattr__(self, "primes", tuple(prime_factors(self.N)))
        object.__setattr__(self, "sigma0", s0)
        object.__setattr__(self, "sigma1", s1)
        object.__setattr__(self, "k1", int(k1))

    @property
    def is_prime(self) -> bool:
        return len(self.primes) == 1

    @property
    def index(self) -> int:
        """Index of Gamma_0(N) in SL_2(Z) (equal to sigma_1(N) for squarefree N)."""
        return self.sigma1

    def __repr__(self):
        return f"LevelData(N={self.N})"


@lru_cache(maxsize=None)
def level(N: int) -> LevelData:
    return LevelData(N)


def as_level(x) -> LevelData:
    return x if isinstance(x, LevelData) else level(int(x))


@dataclass(frozen=True)
class EtaQuotient:
    """``prod_{m} eta(m z)^{e_m}``; ``exponents`` maps ``m`` to ``e_m``."""

    exponents: tuple[tuple[int, Fraction], ...]

    @classmethod
    def of(cls, exponents: dict) -> "EtaQuotient":
        return cls(tuple(sorted((int(m), Fraction(e)) for m, e in exponents.items() if e)))

    @property
    def offset(self) -> Fraction:
        return sum((m * e for m, e in self.exponents), Fraction(0)) / 24

    @property
    def weight(self) -> Fraction:
        return sum((e for _, e in self.exponents), Fraction(0)) / 2


def pentagonal_exponents(P: int):
    """Pairs ``(n, sign)`` with ``prod(1-q^k) = sum sign q^n`` for ``n < P``."""
    out = [(0, 1)]
    k = 1
    while True:
        a, b = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
        if a >= P:
            break
        s = -1 if k % 2 else 1
        out.append((a, s))
        if b < P:
            out.append((b, s))
        k += 1
    return sorted(out)


def eta_core(P: int) -> QSeries:
    """``prod_{n>=1} (1 - q^n)`` modulo ``q^P`` (Euler's pentagonal series)."""
    coeffs = [0] * P
    for n, s in pentagonal_exponents(P):
        coeffs[n] = s
    return QSeries.from_int_list(coeffs, 0, P)


def eta_core_naive(P: int) -> QSeries:
    """The same product, multiplied out factor by factor."""
    a = np.zeros(P, dtype=object)
    a[0] = 1
    for n in range(1, P):
        a[n:] = a[n:] - a[:-n]
    return QSeries.from_int_list([int(x) for x in a], 0, P)


def _sparse_power(terms: list[tuple[int, int]], e: int, P: int) -> list[int]:
    """Coefficients of ``f^e`` mod ``q^P`` for sparse integral ``f`` with ``f_0 = 1``.

    Uses ``n g_n = sum_k ((e+1)k - n) f_k g_{n-k}``; only the nonzero ``f_k``
    are visited, so the cost is ``P`` times the number of terms of ``f``.
    """
    g = [0] * P
    g[0] = 1
    nz = [(k, c) for k, c in terms if k > 0]
    for n in range(1, P):
        acc = 0
        for k, c in nz:
            if k > n:
                break
            acc += ((e + 1) * k - n) * c * g[n - k]
        q, r = divmod(acc, n)
        assert r == 0
        g[n] = q
    return g


def _check_integral(eq: EtaQuotient) -> int:
    off = eq.offset
    if off.denominator != 1:
        raise FractionalValuation(f"eta quotient has fractional order {off} at the cusp")
    if any(e.denominator != 1 for _, e in eq.exponents):
        raise FractionalValuation("only integer eta exponents can be expanded")
    return int(off)


def expand_eta_quotient(eq: EtaQuotient, P: int) -> QSeries:
    """q-expansion modulo ``q^P``; the valuation equals the order at the cusp."""
    off = _check_integral(eq)
    rel = max(P - off, 0)
    base = pentagonal_exponents(rel)
    result = QSeries.one(rel)
    for m, e in eq.exponents:
        short = -(-rel // m)
        factor = QSeries.from_int_list(_sparse_power(base, int(e), short), 0, short).substitute(m)
        result = result * factor.truncate(rel)
    return result.shift(off)


def expand_eta_quotient_naive(eq: EtaQuotient, P: int) -> QSeries:
    """Reference expansion by repeated multiplication with ``(1 - q^k)^{+-1}``."""
    off = _check_integral(eq)
    rel = max(P - off, 0)
    a = np.zeros(rel, dtype=object)
    if rel:
        a[0] = 1
    for m, e in eq.exponents:
        e = int(e)
        for n in range(1, rel):
            k = m * n
            if k >= rel:
                break
            for _ in range(abs(e)):
                if e > 0:
                    a[k:] = a[k:] - a[:-k]
                else:
                    for i in range(k, rel):
                        a[i] += a[i - k]
    return QSeries.from_int_list([int(x) for x in a], off, P)


def delta_quotient(lvl) -> EtaQuotient:
    lvl = as_level(lvl)
    e = Fraction(24, lvl.sigma1)
    return EtaQuotient.of({m: e for m in lvl.divisors})


@lru_cache(maxsize=64)
def _delta_cached(N: int, P: int) -> QSeries:
    return expand_eta_quotient(delta_quotient(N), P)


def delta_N(lvl, P: int) -> QSeries:
    """``Delta_N = prod_{m|N} eta(mz)^{24/sigma_1(N)}`` modulo ``q^P``.

    Weight ``k1(N)``, character ``psi^{k1(N)}``, valuation 1, monic.
    """
    return _delta_cached(as_level(lvl).N, P)
