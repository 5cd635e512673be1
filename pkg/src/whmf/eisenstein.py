"""Eisenstein series spanning E_k(N, chi) for Gamma_0(N) and the dimension table."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .characters import CharacterPlus, bernoulli_chi, kronecker
from .errors import EmptyFamily, InsufficientPrecision, ParityMismatch
from .levels import as_level, prime_factors
from .linalg import rank, series_rows
from .series import QSeries


def _disc_of(chi) -> int:
    return chi.disc if isinstance(chi, CharacterPlus) else int(chi)


def _pstar(p: int) -> int:
    return p if p % 4 == 1 else -p


def primitive_disc(d: int) -> int:
    """Discriminant of the primitive real character of odd squarefree conductor ``d``."""
    out = 1
    for p in prime_factors(d):
        out *= _pstar(p)
    return out


@dataclass(frozen=True)
class EisBasisElement:
    level: int
    weight: int
    d1: int
    d2: int
    ell: int
    series: QSeries
    special: bool = False

    @property
    def label(self) -> str:
        if self.special:
            return f"E2(z)-{self.d2}E2({self.d2}z) at l={self.ell}"
        return f"f_{self.weight}(l={self.ell}; ({self.d1}/.), ({self.d2}/.))"


def _divisor_sum_series(k: int, d1: int, d2: int, P: int) -> list[Fraction]:
    """Constant term and ``sum_{d|n} chi1(n/d) chi2(d) d^{k-1}`` for ``1 <= n < P``."""
    coeffs = [Fraction(0)] * P
    for d in range(1, P):
        c2 = kronecker(d2, d)
        if not c2:
            continue
        dk = c2 * d ** (k - 1)
        for j in range(1, (P - 1) // d + 1):
            c1 = kronecker(d1, j)
            if c1:
                coeffs[d * j] += c1 * dk
    if d1 == 1 and P:
        coeffs[0] = -bernoulli_chi(k, d2) / (2 * k)
    return coeffs


@lru_cache(maxsize=256)
def eisenstein_series(k: int, d1: int, d2: int, P: int) -> QSeries:
    """``f_k(z; chi1, chi2)`` for the characters ``(d1/.)``, ``(d2/.)``, modulo ``q^P``."""
    return QSeries(_divisor_sum_series(k, d1, d2, P), 0, P)


@lru_cache(maxsize=64)
def e2(P: int) -> QSeries:
    """``E_2 = 1 - 24 sum sigma_1(n) q^n``."""
    c = _divisor_sum_series(2, 1, 1, P)
    return QSeries([1] + [-24 * x for x in c[1:]], 0, P)


def _pairs(disc: int, k: int):
    f = abs(disc)
    primes = prime_factors(f)
    out = []
    for r in range(len(primes) + 1):
        for sub in combinations(primes, r):
            f1 = 1
            for p in sub:
                f1 *= p
            out.append((primitive_disc(f1), primitive_disc(f // f1)))
    if k == 1:
        seen, ded = set(), []
        for a, b in out:
            key = frozenset((a, b))
            if key not in seen:
                seen.add(key)
                ded.append((a, b) if abs(a) <= abs(b) else (b, a))
        out = ded
    return out


def eisenstein_basis(lvl, k: int, chi, P: int) -> list[EisBasisElement]:
    """Spanning list of E_k(N, chi) as q-expansions modulo ``q^P``.

    ``chi`` is a :class:`CharacterPlus` or the discriminant of its
    restriction to Gamma_0(N).
    """
    lvl = as_level(lvl)
    N = lvl.N
    disc = _disc_of(chi)
    if k < 0:
        raise EmptyFamily("negative weight")
    if kronecker(disc, -1) != (-1) ** (k % 2):
        raise ParityMismatch(f"character ({disc}/.) has the wrong parity for weight {k}")
    if k == 0:
        if disc != 1:
            raise EmptyFamily("weight 0 with nontrivial character")
        return [EisBasisElement(N, 0, 1, 1, 1, QSeries.one(P))]
    if k == 1 and disc == 1:
        raise EmptyFamily("weight 1 with trivial character")
    out = []
    if k == 2 and disc == 1:
        for p in lvl.primes:
            for ell in (d for d in lvl.divisors if (N // p) % d == 0):
                base = e2(-(-P // ell))
                s = base - base.substitute(p).truncate(base.precision) * p
                out.append(EisBasisElement(N, 2, 1, p, ell, s.substitute(ell).truncate(P), special=True))
        return out
    for d1, d2 in _pairs(disc, k):
        f12 = abs(d1) * abs(d2)
        for ell in (d for d in lvl.divisors if (N // f12) % d == 0):
            base = eisenstein_series(k, d1, d2, -(-P // ell))
            out.append(EisBasisElement(N, k, d1, d2, ell, base.substitute(ell).truncate(P)))
    if not out:
        raise EmptyFamily(f"no Eisenstein series of weight {k} and character ({disc}/.) at level {N}")
    return out


def dimension_d(lvl, k: int, chi) -> int:
    """The tabulated dimension of E_k(N, chi) for the admitted squarefree levels."""
    lvl = as_level(lvl)
    disc = _disc_of(chi)
    trivial = disc == 1
    if k == 0:
        return 1 if trivial else 0
    if k == 1 and trivial:
        return 0
    if kronecker(disc, -1) != (-1) ** (k % 2):
        raise ParityMismatch(f"character ({disc}/.) has the wrong parity for weight {k}")
    prime = lvl.is_prime
    if k == 1:
        if prime and lvl.N % 4 != 3:
            raise ParityMismatch("odd real characters at this level are not covered by the table")
        return 1 if prime else 2
    if k == 2:
        if prime:
            return 1 if trivial else 2
        return 3 if trivial else 4
    return 2 if prime else 4


def sturm_margin(lvl, k: int) -> int:
    lvl = as_level(lvl)
    return -(-k * lvl.sigma1 // 12) + 5


def rank_check(basis: list[EisBasisElement], P: int) -> int:
    """Rank over Q of the coefficient matrix of ``basis`` (exponents ``0..P-1``)."""
    if not basis:
        return 0
    need = sturm_margin(basis[0].level, basis[0].weight)
    if P < need:
        raise InsufficientPrecision(f"need at least {need} terms, got {P}")
    for b in basis:
        if b.series.precision < P:
            raise InsufficientPrecision(f"element {b.label} known only mod q^{b.series.precision}")
    return rank(series_rows([b.series for b in basis], 0, P))


def rank_for(lvl, k: int, chi, P: int | None = None) -> int:
    """``rank_check`` of the full spanning list, 0 for empty families."""
    lvl = as_level(lvl)
    need = sturm_margin(lvl, k)
    if P is None:
        P = need
    if P < need:
        raise InsufficientPrecision(f"need at least {need} terms at weight {k}, level {lvl.N}")
    try:
        basis = eisenstein_basis(lvl, k, chi, P)
    except (EmptyFamily, ParityMismatch):
        return 0
    return rank_check(basis, P)
