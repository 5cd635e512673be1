"""Minimal weights, holomorphic bases and the weakly holomorphic basis f_{k,m}."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .characters import CharacterPlus, psi, psi_power
from .errors import EmptyBelowMinimalWeight, IndexBelowRange, NonIntegralCoefficient
from .hauptmodul import hauptmodul
from .levels import as_level, delta_N
from .plus import plus_eisenstein
from .series import QSeries


def _twist(chi: CharacterPlus, r: int) -> CharacterPlus:
    return chi * psi_power(chi.N, r)


def weight_space_nonzero(lvl, chi: CharacterPlus, k: int) -> bool:
    """Whether M_k(Gamma_0(N)+, chi) is nonzero, by the plus-space emptiness rules."""
    N = as_level(lvl).N
    if k < 0 or not chi.admissible(k):
        return False
    if k == 0:
        return chi.is_trivial()
    if k == 1:
        return chi == psi(N)
    if k == 2:
        return not chi.is_trivial()
    return True


def k_min(lvl, chi: CharacterPlus, k: int) -> int:
    """Smallest ``k' >= 0``, ``k' = k mod k1``, with M_{k'}(chi psi^{k'-k}) nonzero."""
    lvl = as_level(lvl)
    chi.require_weight(k)
    k1 = lvl.k1
    kp = k % k1
    while not weight_space_nonzero(lvl, _twist(chi, kp - k), kp):
        kp += k1
        if kp > k % k1 + 3 * k1 + 3:
            raise RuntimeError(f"no nonzero weight found for {chi.name} at level {lvl.N}")
    return kp


def _restricted_trivial(chi: CharacterPlus) -> bool:
    """Trivial on Gamma_0(N) and on W_N."""
    return chi.disc == 1 and chi.w_exponent(chi.N) == 0


def k_min_closed_form(lvl, chi: CharacterPlus, k: int) -> int | None:
    """The case table for ``k'``; None where its branches overlap (``k1 < 3``)."""
    lvl = as_level(lvl)
    k1 = lvl.k1
    if k1 < 3:
        return None
    r = k % k1
    if r == 0 and chi != psi_power(lvl.N, k):
        return k1
    if r == 1 and not _restricted_trivial(_twist(chi, -k)):
        return 1 + k1
    if r == 2 and _twist(chi, 2 - k).is_trivial():
        return 2 + k1
    return r


def ell_of(lvl, chi: CharacterPlus, k: int) -> tuple[int, int]:
    """``(k', l)`` with ``k = k' + l k1``."""
    lvl = as_level(lvl)
    kp = k_min(lvl, chi, k)
    return kp, (k - kp) // lvl.k1


def minimal_eisenstein(lvl, chi: CharacterPlus, k: int, P: int) -> QSeries:
    """``E_{k'}^(chi psi^{k'-k})`` modulo ``q^P``."""
    lvl = as_level(lvl)
    kp = k_min(lvl, chi, k)
    return plus_eisenstein(lvl.N, kp, _twist(chi, kp - k), P)


def holomorphic_basis(lvl, chi: CharacterPlus, k: int, P: int) -> list[QSeries]:
    """``E_{k'} (E_{k1}^(psi^k1))^r Delta_N^s`` for ``r + s = (k - k')/k1``, ordered by ``s``."""
    lvl = as_level(lvl)
    kp, ell = ell_of(lvl, chi, k)
    if ell < 0:
        raise EmptyBelowMinimalWeight(f"weight {k} is below the minimal weight {kp} for {chi.name}")
    E = minimal_eisenstein(lvl, chi, k, P)
    Ek1 = plus_eisenstein(lvl.N, lvl.k1, psi_power(lvl.N, lvl.k1), P)
    D = delta_N(lvl, P)
    out = []
    for s in range(ell + 1):
        out.append((E * Ek1 ** (ell - s) * D ** s).truncate(P))
    return out


@dataclass(frozen=True)
class BasisElement:
    level: int
    weight: int
    chi: CharacterPlus
    m: int
    k_prime: int
    ell: int
    series: QSeries
    faber: tuple[int, ...]  # highest degree first

    @property
    def degree(self) -> int:
        return self.ell + self.m

    def a(self, n: int) -> int:
        c = self.series[n]
        if c.denominator != 1:
            raise NonIntegralCoefficient(f"a({self.m},{n}) = {c} is not an integer")
        return c.numerator


def f_k(lvl, chi: CharacterPlus, k: int, P: int) -> QSeries:
    """``f_k = Delta_N^l E_{k'}`` modulo ``q^P`` (``l`` may be negative)."""
    lvl = as_level(lvl)
    kp, ell = ell_of(lvl, chi, k)
    pad = 2 * abs(ell) + 4
    D = delta_N(lvl, P + pad)
    Dl = D ** ell if ell >= 0 else D.invert() ** (-ell)
    E = minimal_eisenstein(lvl, chi, k, P + pad)
    out = Dl * E
    if out.precision < P:
        raise AssertionError("internal precision bookkeeping")
    return out.truncate(P)


@lru_cache(maxsize=128)
def _family(N: int, chi: CharacterPlus, k: int, M: int, P: int) -> tuple[BasisElement, ...]:
    lvl = as_level(N)
    kp, ell = ell_of(lvl, chi, k)
    steps = M + ell
    pad = abs(ell) + 2
    P0 = P + max(steps, 0) + pad
    j = hauptmodul(lvl, P0 + pad).series
    f0 = f_k(lvl, chi, k, P0)
    elems = [f0]
    fabers = [[1]]  # lowest degree first while building
    for m in range(-ell + 1, M + 1):
        g = (j * elems[-1])
        F = [0] + fabers[-1]
        # clear q^{-m'} for m' = m-1, ..., -ell using the already-built elements
        for idx in range(len(elems) - 1, -1, -1):
            mp = -ell + idx
            c = g[-mp]
            if c:
                if c.denominator != 1:
                    raise NonIntegralCoefficient(f"elimination coefficient {c} at m={m}")
                g = g - elems[idx] * c
                Fi = fabers[idx]
                F = [a - int(c) * (Fi[i] if i < len(Fi) else 0) for i, a in enumerate(F)]
        elems.append(g)
        fabers.append(F)
    out = []
    for idx, (g, F) in enumerate(zip(elems, fabers)):
        m = -ell + idx
        if g.precision < P:
            raise AssertionError("internal precision bookkeeping")
        out.append(BasisElement(N, k, chi, m, kp, ell, g.truncate(P), tuple(reversed(F))))
    return tuple(out)


def f_family(lvl, chi: CharacterPlus, k: int, M: int, P: int) -> tuple[BasisElement, ...]:
    """``f_{k,m}`` for ``m = -l, ..., M``, each modulo ``q^P``."""
    return _family(as_level(lvl).N, chi, k, M, P)


def f_basis(lvl, chi: CharacterPlus, k: int, m: int, P: int) -> BasisElement:
    """The element ``q^-m + O(q^{l+1})`` of weight k and character chi."""
    lvl = as_level(lvl)
    kp, ell = ell_of(lvl, chi, k)
    if m < -ell:
        raise IndexBelowRange(f"m = {m} is below -l = {-ell}")
    return f_family(lvl, chi, k, m, P)[m + ell]


def coefficient_a(lvl, chi: CharacterPlus, k: int, m: int, n: int) -> int:
    """Coefficient of ``q^n`` in ``f_{k,m}``."""
    return f_basis(lvl, chi, k, m, max(n + 1, 1)).a(n)


def dual_character(chi: CharacterPlus, k: int) -> CharacterPlus:
    """``chi psi^{-2k}``, the character of the weight ``2-k`` partner."""
    return _twist(chi, -2 * k)


def evaluate_faber(elem: BasisElement, lvl, P: int) -> QSeries:
    """``Delta^l E_{k'} F(j_N)`` rebuilt from the Faber polynomial."""
    lvl = as_level(lvl)
    steps = max(elem.degree, 0)
    P0 = P + steps + abs(elem.ell) + 2
    j = hauptmodul(lvl, P0 + 1).series
    acc = None
    for c in elem.faber:  # Horner, highest degree first
        acc = QSeries.one(P0) * c if acc is None else acc * j + c
    return (f_k(lvl, elem.chi, elem.weight, P0) * acc).truncate(P)
