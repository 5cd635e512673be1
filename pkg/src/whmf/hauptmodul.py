"""The hauptmodul j_N from ``-Delta_N * theta(j_N) = E_{2+k1}`` and its checks."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .atkin_lehner import al_matrix
from .characters import CharacterPlus, chi_N
from .errors import (ConstantTermObstruction, IdentityFailure, InvarianceFailure,
                     NonIntegralCoefficient)
from .levels import as_level, delta_N
from .plus import EvalPoint, evaluate, mobius, plus_eisenstein
from .series import QSeries


@dataclass(frozen=True)
class Hauptmodul:
    level: int
    series: QSeries

    @property
    def precision(self) -> int:
        return self.series.precision

    def c(self, n: int) -> int:
        return int(self.series[n])

    def coefficients(self, stop: int | None = None) -> list[int]:
        """``[c_0, c_1, ..., c_{stop-1}]`` (``c_0 = 0``)."""
        stop = self.precision if stop is None else stop
        return self.series.int_coefficients(0, stop)


def top_eisenstein(lvl, P: int) -> QSeries:
    """``E_{2+k1(N)}^(chi^(N))`` modulo ``q^P``."""
    lvl = as_level(lvl)
    return plus_eisenstein(lvl.N, 2 + lvl.k1, chi_N(lvl.N), P)


@lru_cache(maxsize=64)
def _hauptmodul(N: int, P: int) -> Hauptmodul:
    E = top_eisenstein(N, P + 1)
    D = delta_N(N, P + 2)
    deriv = -(E * D.invert())
    if deriv.leading_coefficient() != -1 or deriv.valuation != -1:
        raise ConstantTermObstruction(f"-E/Delta does not start with -q^-1 at level {N}")
    if deriv[0] != 0:
        raise ConstantTermObstruction(f"q^0 coefficient of -E/Delta is {deriv[0]} at level {N}")
    for n in range(1, deriv.precision):
        if deriv[n].denominator != 1 or deriv[n].numerator % n:
            raise NonIntegralCoefficient(f"coefficient {deriv[n]} of q^{n} is not divisible by {n} at level {N}")
    return Hauptmodul(N, deriv.integrate_theta())


def hauptmodul(lvl, P: int) -> Hauptmodul:
    """``j_N = q^-1 + sum_{n>=1} c_n q^n`` modulo ``q^P``."""
    return _hauptmodul(as_level(lvl).N, P)


def round_trip(lvl, P: int) -> bool:
    """``-Delta_N theta(j_N) == E_{2+k1}`` exactly modulo ``q^P``."""
    lvl = as_level(lvl)
    j = hauptmodul(lvl, P + 1).series
    lhs = -(delta_N(lvl, P + 2) * j.theta())
    return lhs.truncate(P) == top_eisenstein(lvl, P)


# numeric invariance ------------------------------------------------------------

_OFFSETS = ((0.03, 1.0), (-0.12, 0.95), (0.21, 1.08), (0.08, 0.86), (-0.27, 1.02),
            (0.15, 0.91), (-0.05, 1.15), (0.31, 0.97), (-0.19, 0.83), (0.24, 1.11))


def invariance_points(N: int, count: int = 10):
    """Pairs ``(gamma, z)`` with ``Im z`` and ``Im gamma z`` both as large as the group allows."""
    sN = mpmath.sqrt(N)
    T = (1, 1, 0, 1)
    G = (1, 0, N, 1)
    W = al_matrix(N, N).matrix
    out = []
    for x, t in _OFFSETS[:count]:
        out.append((T, mpmath.mpc(x - 0.5, t / sN)))
        out.append((G, mpmath.mpc(-1 + x, t) / N))
        out.append((W, mpmath.mpc(x, t) / sN))
    return out


@dataclass
class InvarianceReport:
    level: int
    terms: int
    worst: float
    witness: tuple | None
    passed: bool


def verify_numeric_invariance(h: Hauptmodul, samples=None, tolerance: float = 1e-20,
                              bits: int = 256, raise_on_failure: bool = True) -> InvarianceReport:
    """``|j_N(gamma z) - j_N(z)|`` for T, (1,0;N,1) and W_N at the sample points."""
    N = h.level
    samples = invariance_points(N) if samples is None else samples
    worst, witness = 0.0, None
    with mpmath.workprec(bits):
        for gamma, z in samples:
            z = mpmath.mpc(z)
            gz = mobius(gamma, z)
            a, ea = evaluate(h.series, EvalPoint(z, bits, max_tail=tolerance * 1e-5))
            b, eb = evaluate(h.series, EvalPoint(gz, bits, max_tail=tolerance * 1e-5))
            r = float(abs(a - b) / max(1, abs(a)))
            if r > worst:
                worst, witness = r, (gamma, complex(z))
    ok = worst < tolerance
    report = InvarianceReport(N, h.precision, worst, witness, ok)
    if raise_on_failure and not ok:
        raise InvarianceFailure(f"level {N}: residual {worst:.3g} at {witness}")
    return report


def invariance_terms(N: int) -> int:
    """Truncation order adequate for :func:`invariance_points` (``Im`` down to ~0.8/N)."""
    return 40 * N + 100


# factorization identity --------------------------------------------------------

@dataclass
class FactorizationReport:
    level: int
    weight: int
    chi: str
    complement: str
    precision: int
    passed: bool
    skipped: bool = False
    witness: tuple | None = None


def verify_factorization(lvl, chi: CharacterPlus, k: int, P: int = 200,
                         raise_on_failure: bool = True) -> FactorizationReport:
    """``E_k^(chi) E_{2+k1-k}^(chi~) == E_{2+k1}^(chi^(N))`` with ``chi chi~ = chi^(N)``."""
    from .basis import k_min

    lvl = as_level(lvl)
    if k_min(lvl, chi, k) != k:
        from .errors import HypothesisViolated

        raise HypothesisViolated(f"k = {k} is not minimal for {chi.name} at level {lvl.N}")
    top = chi_N(lvl.N)
    comp = top * chi.inverse()
    kc = 2 + lvl.k1 - k
    if k == 0 or kc == 0:
        return FactorizationReport(lvl.N, k, chi.name, comp.name, P, True, skipped=True)
    lhs = plus_eisenstein(lvl, k, chi, P) * plus_eisenstein(lvl, kc, comp, P)
    rhs = top_eisenstein(lvl, P)
    n = lhs.first_difference(rhs)
    ok = n is None
    diff = None if ok else (n, str(lhs[n]), str(rhs[n]))
    report = FactorizationReport(lvl.N, k, chi.name, comp.name, P, ok, witness=diff)
    if raise_on_failure and not ok:
        raise IdentityFailure(f"level {lvl.N}, k={k}, {chi.name}: first difference {diff}")
    return report
