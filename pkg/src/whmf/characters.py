"""Characters of Gamma_0(N)+ that are real on Gamma_0(N).

A :class:`CharacterPlus` is pure data: the restriction to Gamma_0(N) is the
Kronecker character ``a -> (D/a)`` for a discriminant ``D`` and the values on
the Atkin-Lehner involutions are fourth roots of unity ``i^e``, stored by
their exponents ``e`` at the canonical representatives ``W_p`` of
:func:`whmf.atkin_lehner.al_matrix` for the primes ``p | N``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd

import gmpy2

from .atkin_lehner import al_matrix, coset_decomposition, matmul
from .errors import InvalidCharacter, NotCoprime, ParityMismatch
from .levels import as_level
from .series import QSeries

I_POWERS = (1, 1j, -1, -1j)

# prime p with psi(W_p) = 1 at the composite levels; at N = 15 this must be 3,
# since Delta_15 | W_5 = -Delta_15 forces psi^2(W_5) = -1
_PSI_TRIVIAL_PRIME = {6: 2, 14: 2, 15: 3}
AUX_MODULI = {14: 7, 15: 15}

# w-exponents of the auxiliary characters at (W_p for p | N in increasing order).
# Every consistent choice gives nonzero plus spaces in weights >= 3; these are
# the first ones (see whmf.plus.search_aux_w) whose xi has no weight-1 form.
DEFAULT_AUX_W = {14: (0, 1), 15: (0, 3)}


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol ``(a/n)``."""
    return int(gmpy2.kronecker(a, n))


def _disc_product(d1: int, d2: int) -> int:
    g = gcd(abs(d1), abs(d2))
    return d1 * d2 // (g * g)


def _exp_of_sign(s: int) -> int:
    return 0 if s == 1 else 2


@dataclass(frozen=True)
class CharacterPlus:
    N: int
    disc: int
    w: tuple[int, ...]

    def __post_init__(self):
        lvl = as_level(self.N)
        if len(self.w) != len(lvl.primes):
            raise InvalidCharacter(f"need one W-value per prime dividing {self.N}")
        object.__setattr__(self, "w", tuple(e % 4 for e in self.w))

    @property
    def level(self):
        return as_level(self.N)

    # values ------------------------------------------------------------------
    def restriction_value(self, a: int) -> int:
        if gcd(a, self.N) != 1:
            raise NotCoprime(f"{a} is not coprime to {self.N}")
        return kronecker(self.disc, a)

    @property
    def parity(self) -> int:
        return self.restriction_value(-1)

    def gamma_value(self, gamma) -> int:
        """Value on an element ``[[a, b], [c, d]]`` of Gamma_0(N) (depends on ``d``)."""
        return self.restriction_value(gamma[3])

    def w_exponent(self, m: int) -> int:
        lvl = self.level
        if m == 1:
            return 0
        if m in lvl.primes:
            return self.w[lvl.primes.index(m)]
        if m == lvl.N and len(lvl.primes) == 2:
            p1, p2 = lvl.primes
            prod = matmul(al_matrix(lvl, p1).matrix, al_matrix(lvl, p2).matrix)
            _, gamma = coset_decomposition(prod, lvl.N)
            return (self.w[0] + self.w[1] + _exp_of_sign(self.gamma_value(gamma))) % 4
        raise InvalidCharacter(f"{m} does not divide {self.N}")

    def w_value(self, m: int) -> complex:
        return I_POWERS[self.w_exponent(m)]

    def matrix_exponent(self, M) -> int:
        """Exponent ``e`` with ``f | M = i^e f`` for an element of Gamma_0(N)+."""
        m, gamma = coset_decomposition(M, self.N)
        return (self.w_exponent(m) + _exp_of_sign(self.gamma_value(gamma))) % 4

    # structure -----------------------------------------------------------------
    def is_consistent(self) -> bool:
        """``chi(W_m)^2 = chi(W_m^2 / m)`` for every ``m | N``."""
        for m in self.level.divisors[1:]:
            W = al_matrix(self.N, m).matrix
            sq = matmul(W, W)
            gamma = tuple(x // m for x in sq)
            if (2 * self.w_exponent(m) - _exp_of_sign(self.gamma_value(gamma))) % 4:
                return False
        return True

    def admissible(self, k: int) -> bool:
        """Whether nonzero forms of weight ``k`` with this character can exist."""
        return self.is_consistent() and self.parity == (-1) ** (k % 2)

    def require_weight(self, k: int) -> None:
        if self.parity != (-1) ** (k % 2):
            raise ParityMismatch(f"chi(-1) = {self.parity} but weight {k} needs {(-1) ** (k % 2)}")
        if not self.is_consistent():
            raise ParityMismatch(f"{self.name} is inconsistent with W_m^2 in Gamma_0({self.N})")

    def is_trivial(self) -> bool:
        return self.disc == 1 and not any(self.w)

    def __mul__(self, other: "CharacterPlus") -> "CharacterPlus":
        if other.N != self.N:
            raise InvalidCharacter("characters of different levels")
        return CharacterPlus(self.N, _disc_product(self.disc, other.disc),
                             tuple(a + b for a, b in zip(self.w, other.w)))

    def inverse(self) -> "CharacterPlus":
        return CharacterPlus(self.N, self.disc, tuple(-e for e in self.w))

    def __pow__(self, n: int) -> "CharacterPlus":
        if n < 0:
            return self.inverse() ** (-n)
        out = trivial(self.N)
        for _ in range(n):
            out = out * self
        return out

    @property
    def name(self) -> str:
        return canonical_name(self)

    def __repr__(self):
        return f"CharacterPlus(N={self.N}, {self.name})"


@lru_cache(maxsize=None)
def trivial(N: int) -> CharacterPlus:
    return CharacterPlus(N, 1, (0,) * len(as_level(N).primes))


@lru_cache(maxsize=None)
def psi(N: int) -> CharacterPlus:
    """The character psi of Delta_N's family: ``psi(W_N) = i^{-1}``."""
    lvl = as_level(N)
    if lvl.is_prime:
        disc = -N if N % 4 == 3 else 1
        return CharacterPlus(N, disc, (3,))
    p0 = _PSI_TRIVIAL_PRIME[N]
    return CharacterPlus(N, 1, tuple(0 if p == p0 else 3 for p in lvl.primes))


def psi_power(N: int, r: int) -> CharacterPlus:
    return psi(N) ** (r % 4)


def chi_N(N: int) -> CharacterPlus:
    """The character ``psi^{k1(N)}`` of Delta_N."""
    return psi_power(N, as_level(N).k1)


def xi(N: int, w: tuple[int, ...] | None = None) -> CharacterPlus:
    """Auxiliary Legendre character at N = 14 (mod 7) or N = 15 (mod 15)."""
    if N not in AUX_MODULI:
        raise InvalidCharacter(f"no auxiliary character at level {N}")
    return CharacterPlus(N, -AUX_MODULI[N], DEFAULT_AUX_W[N] if w is None else w)


def family(N: int, with_aux: bool = False) -> list[CharacterPlus]:
    """``psi^r`` for r = 0..3, optionally followed by ``psi^r * xi``."""
    chars = [psi_power(N, r) for r in range(4)]
    if with_aux and N in AUX_MODULI:
        chars += [psi_power(N, r) * xi(N) for r in range(4)]
    return chars


def canonical_name(chi: CharacterPlus) -> str:
    N = chi.N
    for r in range(4):
        if chi == psi_power(N, r):
            return "1" if r == 0 else ("psi" if r == 1 else f"psi^{r}")
    if N in AUX_MODULI:
        tag = f"xi{AUX_MODULI[N]}"
        for r in range(4):
            if chi == psi_power(N, r) * xi(N):
                return tag if r == 0 else (f"psi*{tag}" if r == 1 else f"psi^{r}*{tag}")
    w = ",".join(str(e) for e in chi.w)
    return f"chi[D={chi.disc};w={w}]"


_NAME = re.compile(r"^(?:(?P<one>1)|psi(?:\^(?P<r>-?\d+|k1))?)(?:\*xi(?P<aux>7|15))?$|^xi(?P<aux2>7|15)$")


def parse_character(N: int, text: str) -> CharacterPlus:
    """Parse ``1``, ``psi``, ``psi^r``, ``psi^k1``, optionally with ``*xi7`` / ``*xi15``."""
    text = text.strip().replace(" ", "")
    m = _NAME.match(text)
    if not m:
        raise InvalidCharacter(f"cannot parse character {text!r}")
    aux = m.group("aux") or m.group("aux2")
    if m.group("aux2"):
        base = trivial(N)
    elif m.group("one"):
        base = trivial(N)
    else:
        r = m.group("r")
        if r is None:
            r = 1
        elif r == "k1":
            r = as_level(N).k1
        base = psi_power(N, int(r))
    if aux:
        if AUX_MODULI.get(N) != int(aux):
            raise InvalidCharacter(f"xi{aux} is not available at level {N}")
        base = base * xi(N)
    return base


# generalized Bernoulli numbers -------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_chi(k: int, disc: int = 1) -> Fraction:
    """``B_{k,chi}`` for the primitive character ``a -> (disc/a)`` of conductor ``|disc|``.

    Read off from ``sum_{a=1}^f chi(a) t e^{at} / (e^{ft} - 1)`` with exact
    series division.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    f = abs(disc)
    P = k + 1
    chi = [kronecker(disc, a) for a in range(1, f + 1)]
    # sum_a chi(a) e^{at} = sum_n (sum_a chi(a) a^n) t^n / n!
    numer = QSeries([Fraction(sum(c * a ** n for a, c in zip(range(1, f + 1), chi)), factorial(n))
                     for n in range(P)], 0, P)
    # (e^{ft} - 1)/t = sum_n f^{n+1} t^n / (n+1)!
    denom = QSeries([Fraction(f ** (n + 1), factorial(n + 1)) for n in range(P)], 0, P)
    series = numer * denom.invert()
    return series[k] * factorial(k)
