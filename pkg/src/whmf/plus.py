"""Plus-space Eisenstein series E_k^(chi) by numeric Atkin-Lehner eigen-search.

The Gamma_0(N) Eisenstein span is evaluated at points paired by each ``W_p``;
the eigen-equations ``g | W_p = chi(W_p) g`` form a real homogeneous system
whose one-dimensional kernel is read off from an SVD, rationalized, and then
re-checked exactly and at held-out points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import exp, log, sqrt

import mpmath

from .atkin_lehner import al_matrix
from .characters import CharacterPlus, I_POWERS
from .eisenstein import eisenstein_basis
from .errors import (AmbiguousPlusSpace, EmptyFamily, EmptyPlusSpace,
                     ReconstructionFailed, TailBoundTooLarge, ZeroConstantTerm)
from .levels import as_level
from .linalg import echelon, in_span, series_rows
from .series import QSeries

DEFAULT_BITS = 256
DEFAULT_TERMS = 200
DEFAULT_DENOMINATOR_BOUND = 10**9
DEFAULT_RESIDUAL = 1e-25


@dataclass(frozen=True)
class PlusConfig:
    bits: int = DEFAULT_BITS
    terms: int = DEFAULT_TERMS
    denominator_bound: int = DEFAULT_DENOMINATOR_BOUND
    residual: float = DEFAULT_RESIDUAL


# evaluation ----------------------------------------------------------------------

@dataclass(frozen=True)
class EvalPoint:
    """A point of the upper half plane with the precision used to evaluate there."""

    z: complex
    bits: int = DEFAULT_BITS
    max_tail: float = 1e-30

    def __post_init__(self):
        if complex(self.z).imag <= 0:
            raise ValueError("evaluation point must lie in the upper half plane")

    @property
    def q_abs(self) -> float:
        return exp(-2 * 3.141592653589793 * complex(self.z).imag)


def _envelope(series: QSeries) -> tuple[str, float, float]:
    """Growth envelope ``|a_n| <= A n^c`` (``poly``) or ``A exp(c sqrt n)`` (``subexp``).

    Fitted on the computed coefficients with ``n >= 1`` and doubled.
    """
    start = max(series.valuation, 1)
    pairs = [(n, abs(float(series[n]))) for n in range(start, series.precision)]
    pairs = [(n, a) for n, a in pairs if a]
    if not pairs:
        return "poly", 0.0, 0.0
    if series.valuation >= 0:
        # holomorphic: polynomial growth; exponent from the tail of the data
        half = [(n, a) for n, a in pairs if n >= series.precision // 2] or pairs
        c = max(1.0, max(log(a) / log(n) for n, a in half if n > 1) if any(n > 1 for n, _ in half) else 1.0)
        c = min(c + 1.0, 40.0)
        A = 2 * max(a / n**c for n, a in pairs)
        return "poly", A, c
    half = [(n, a) for n, a in pairs if n >= series.precision // 2] or pairs
    c = 1.1 * max(log(a + 1) / sqrt(n) for n, a in half)
    A = 2 * max(a / exp(c * sqrt(n)) for n, a in pairs)
    return "subexp", A, c


def tail_bound(series: QSeries, q_abs: float) -> float:
    """Bound on ``sum_{n >= P} |a_n| |q|^n`` from the fitted envelope."""
    kind, A, c = _envelope(series)
    P = series.precision
    if A == 0:
        return 0.0
    if kind == "poly":
        ratio = ((P + 1) / P) ** c * q_abs
        first = A * P**c * q_abs**P if q_abs > 0 else 0.0
    else:
        ratio = exp(c * (sqrt(P + 1) - sqrt(P))) * q_abs
        first = A * exp(c * sqrt(P) + P * log(q_abs)) if q_abs > 0 else 0.0
    if ratio >= 1:
        return float("inf")
    return first / (1 - ratio)


def mp_coefficients(series: QSeries) -> tuple[list, int]:
    """Coefficients as mpf at the current working precision, with the valuation."""
    den = mpmath.mpf(series.denominator)
    return [mpmath.mpf(a) / den for a in series.numerators], series.valuation


def evaluate_coeffs(mpc_series: tuple[list, int], z) -> mpmath.mpc:
    coeffs, valuation = mpc_series
    q = mpmath.exp(2j * mpmath.pi * z)
    acc = mpmath.mpc(0)
    for a in reversed(coeffs):
        acc = acc * q + a
    return acc * q**valuation if valuation else acc


def evaluate(series: QSeries, pt: EvalPoint) -> tuple[mpmath.mpc, float]:
    """Value of the truncated series at ``pt.z`` and a bound on the omitted tail."""
    tail = tail_bound(series, pt.q_abs)
    if tail > pt.max_tail:
        raise TailBoundTooLarge(f"tail bound {tail:.3g} at |q| = {pt.q_abs:.3g} with {series.precision} terms")
    with mpmath.workprec(pt.bits):
        z = mpmath.mpc(pt.z.real, pt.z.imag) if isinstance(pt.z, complex) else mpmath.mpc(pt.z)
        return evaluate_coeffs(mp_coefficients(series), z), tail


# slash action --------------------------------------------------------------------

def mobius(M, z):
    a, b, c, d = M
    return (a * z + b) / (c * z + d)


def slash_factor(M, z, k: int):
    """``det(M)^{k/2} (cz+d)^{-k}``."""
    a, b, c, d = M
    det = a * d - b * c
    return mpmath.sqrt(mpmath.mpf(det)) ** k / (c * z + d) ** k


# (x, t) offsets of the sample points around each W-fixed point; the first
# SOLVE_POINTS go into the linear system, the rest are held out
_OFFSETS = ((0.11, 1.0), (-0.23, 0.93), (0.31, 1.12), (0.05, 1.27), (-0.17, 0.81), (0.21, 0.74),
            (-0.07, 1.05), (0.27, 0.88), (-0.29, 1.19), (0.13, 0.69))
SOLVE_POINTS = 6


def sample_points(N: int, m: int) -> list[mpmath.mpc]:
    """Points ``z`` with ``Im z`` and ``Im W_m z`` both near ``sqrt(m)/N``."""
    W = al_matrix(N, m).matrix
    c, d = W[2], W[3]
    s = mpmath.sqrt(m)
    return [mpmath.mpc(-d, 0) / c + mpmath.mpc(x, t) * s / c for x, t in _OFFSETS]


def terms_for(N: int, k: int, bits: int, divisors) -> int:
    """Truncation order making the omitted tail negligible at ``bits`` at every sample point."""
    im = min(min(float(z.imag), float(mobius(al_matrix(N, m).matrix, z).imag))
             for m in divisors for z in sample_points(N, m))
    target = bits * log(2) + 20
    T = 16
    while 2 * 3.141592653589793 * im * T - (abs(k) + 1) * log(T) < target:
        T += 8
    return T


# rational reconstruction --------------------------------------------------------

def rational_reconstruct(x, denominator_bound: int = DEFAULT_DENOMINATOR_BOUND,
                         digits: int | None = None) -> Fraction:
    """Best rational approximation with denominator ``<= denominator_bound``.

    Accepted only if it reproduces ``x`` to ``10^-(digits - 10)``.
    """
    x = mpmath.mpf(x)
    if digits is None:
        digits = mpmath.mp.dps
    r = _mpf_to_fraction(x).limit_denominator(denominator_bound)
    tol = mpmath.mpf(10) ** (-(digits - 10))
    if abs(x - mpmath.mpf(r.numerator) / r.denominator) > tol * max(1, abs(x)):
        raise ReconstructionFailed(f"no rational with denominator <= {denominator_bound} matches {mpmath.nstr(x, 20)}")
    return r


def _mpf_to_fraction(x) -> Fraction:
    x = mpmath.mpf(x)
    man, exp_ = x.man_exp
    man, exp_ = (-int(man) if x < 0 else int(man)), int(exp_)
    return Fraction(man * 2**exp_) if exp_ >= 0 else Fraction(man, 2 ** (-exp_))


# projection ------------------------------------------------------------------------

@dataclass(frozen=True)
class PlusEisenstein:
    level: int
    weight: int
    chi: CharacterPlus
    series: QSeries
    combination: tuple[tuple[str, Fraction], ...]
    verification: dict = field(default_factory=dict, compare=False, hash=False)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "weight": self.weight,
            "character": self.chi.name,
            "series": self.series.to_json(),
            "verification": self.verification,
        }


def _independent(series: list[QSeries], P: int) -> list[int]:
    chosen: list[int] = []
    for i in range(len(series)):
        rows = series_rows([series[j] for j in chosen + [i]], 0, P)
        if len(echelon(rows)[1]) == len(chosen) + 1:
            chosen.append(i)
    return chosen


def _spanning(lvl, k: int, chi: CharacterPlus, P: int):
    try:
        return eisenstein_basis(lvl, k, chi, P)
    except EmptyFamily:
        return []


def eigen_divisors(N: int) -> tuple[int, ...]:
    """Divisors whose W-relations are imposed: ``N`` and, for composite N, its larger prime.

    Together with Gamma_0(N) these generate Gamma_0(N)+, and they allow the
    largest imaginary parts (``Im z`` and ``Im W_m z`` both near ``sqrt(m)/N``).
    """
    primes = as_level(N).primes
    return (N,) if len(primes) == 1 else (N, primes[-1])


def _eigen_rows(coeff_lists, k: int, chi: CharacterPlus, N: int, points_per_prime: slice):
    """Rows of ``sum c_i (g_i | W_m - w_m g_i)(z) = 0`` and per-column value scales."""
    rows = []
    scales = [mpmath.mpf(0)] * len(coeff_lists)
    for m in eigen_divisors(N):
        W = al_matrix(N, m).matrix
        wv = I_POWERS[chi.w_exponent(m)]
        w = mpmath.mpc(wv.real, wv.imag)
        for z in sample_points(N, m)[points_per_prime]:
            wz = mobius(W, z)
            f = slash_factor(W, z, k)
            row = []
            for j, c in enumerate(coeff_lists):
                a, b = f * evaluate_coeffs(c, wz), w * evaluate_coeffs(c, z)
                scales[j] = max(scales[j], abs(a), abs(b))
                row.append(a - b)
            rows.append(row)
    return rows, [s or mpmath.mpf(1) for s in scales]


def _kernel(rows, scales, threshold):
    """Complex numeric kernel after dividing each column by the size of its values."""
    ncols = len(scales)
    A = mpmath.matrix(rows)
    for j in range(ncols):
        for i in range(A.rows):
            A[i, j] /= scales[j]
    U, S, V = mpmath.svd_c(A)
    svals = [S[i] for i in range(min(A.rows, ncols))]
    null = [i for i, s in enumerate(svals) if s < threshold]
    vecs = [[mpmath.conj(V[i, j]) / scales[j] for j in range(ncols)] for i in null]
    return vecs, svals


@dataclass(frozen=True)
class _Kernel:
    basis: tuple
    independent: tuple[int, ...]
    pivots: tuple[int, ...]
    transform: tuple
    vectors: tuple
    singular_values: tuple


@lru_cache(maxsize=512)
def _numeric_kernel(N: int, k: int, chi: CharacterPlus, cfg: PlusConfig) -> _Kernel:
    chi.require_weight(k)
    P = max(cfg.terms, terms_for(N, k, cfg.bits, eigen_divisors(N)))
    basis = _spanning(N, k, chi, P)
    if not basis:
        return _Kernel((), (), (), (), (), ())
    series = [b.series for b in basis]
    idx = _independent(series, P)
    red, pivots, trans = echelon(series_rows([series[i] for i in idx], 0, P))
    red_series = [QSeries(r, 0, P) for r in red]
    with mpmath.workprec(cfg.bits):
        coeff_lists = [mp_coefficients(s) for s in red_series]
        rows, scales = _eigen_rows(coeff_lists, k, chi, N, slice(0, SOLVE_POINTS))
        vecs, svals = _kernel(rows, scales, _threshold(cfg))
    return _Kernel(tuple(basis), tuple(idx), tuple(pivots), tuple(map(tuple, trans)),
                   tuple(map(tuple, vecs)), tuple(svals))


def _threshold(cfg: PlusConfig):
    return mpmath.mpf(10) ** (-int(cfg.bits * 0.30103 * 0.5))


def plus_dimension(lvl, k: int, chi: CharacterPlus, config: PlusConfig = PlusConfig()) -> int:
    """Numeric dimension over C of E_k(N, chi)^+ (no rationality required)."""
    N = as_level(lvl).N
    if k == 0:
        chi.require_weight(0)
        return int(chi.is_trivial())
    return len(_numeric_kernel(N, k, chi, config).vectors)


@lru_cache(maxsize=512)
def _plus_coefficients(N: int, k: int, chi: CharacterPlus, cfg: PlusConfig):
    """Rational combination of the spanning list giving E_k^(chi), plus numeric diagnostics."""
    ker = _numeric_kernel(N, k, chi, cfg)
    if not ker.vectors:
        raise EmptyPlusSpace(f"E_{k}({N}, {chi.name})^+ is zero")
    if len(ker.vectors) > 1:
        raise AmbiguousPlusSpace(f"kernel of dimension {len(ker.vectors)} for k={k}, N={N}, {chi.name}")
    threshold = _threshold(cfg)
    digits = int(cfg.bits * 0.30103)
    with mpmath.workprec(cfg.bits):
        v = ker.vectors[0]
        if ker.pivots[0] != 0 or abs(v[0]) < threshold * max(abs(x) for x in v):
            raise ZeroConstantTerm(f"plus-space form at k={k}, N={N}, {chi.name} vanishes at the cusp")
        c = []
        for x in v:
            r = x / v[0]
            if abs(r.imag) > mpmath.mpf(10) ** (-(digits - 10)) * max(1, abs(r)):
                raise ReconstructionFailed(
                    f"E_{k}({N}, {chi.name})^+ is nonzero but its coefficients are not real "
                    f"(ratio {mpmath.nstr(r, 12)})")
            c.append(rational_reconstruct(r.real, cfg.denominator_bound, digits))
        gap = min((s for s in ker.singular_values if s >= threshold), default=mpmath.mpf(1))
    comb = [Fraction(0)] * len(ker.basis)
    for ci, trow in zip(c, ker.transform):
        for j, t in zip(ker.independent, trow):
            comb[j] += ci * t
    return tuple(b.label for b in ker.basis), tuple(comb), float(gap)


def _held_out_residual(g: QSeries, k: int, chi: CharacterPlus, N: int, bits: int) -> float:
    worst = 0.0
    with mpmath.workprec(bits):
        co = mp_coefficients(g)
        for p in as_level(N).divisors[1:]:
            W = al_matrix(N, p).matrix
            wv = I_POWERS[chi.w_exponent(p)]
            w = mpmath.mpc(wv.real, wv.imag)
            for z in sample_points(N, p)[SOLVE_POINTS:]:
                lhs = slash_factor(W, z, k) * evaluate_coeffs(co, mobius(W, z))
                rhs = w * evaluate_coeffs(co, z)
                scale = max(abs(lhs), abs(rhs), 1)
                worst = max(worst, float(abs(lhs - rhs) / scale))
    return worst


def closed_form_prime(N: int, k: int, P: int) -> QSeries:
    """``(E_k(z) + N^{k/2} E_k(Nz)) / (1 + N^{k/2})`` for even ``k >= 4`` with ``E_k`` of constant term 1."""
    from .eisenstein import eisenstein_series

    if k % 2 or k < 4:
        raise ValueError("closed form needs even k >= 4")
    e = eisenstein_series(k, 1, 1, P)
    e = e * (1 / e[0])
    c = Fraction(N ** (k // 2))
    en = eisenstein_series(k, 1, 1, -(-P // N))
    en = (en * (1 / en[0])).substitute(N).truncate(P)
    return (e + en * c) * (1 / (1 + c))


def _combine(basis, comb) -> QSeries:
    g = None
    for b, c in zip(basis, comb):
        if c:
            g = b.series * c if g is None else g + b.series * c
    return g


@lru_cache(maxsize=512)
def project_plus(lvl, k: int, chi: CharacterPlus, P: int = DEFAULT_TERMS,
                 config: PlusConfig = PlusConfig()) -> PlusEisenstein:
    """The normalized element of E_k(N, chi)^+ modulo ``q^P``."""
    lvl = as_level(lvl)
    N = lvl.N
    if k == 0:
        chi.require_weight(0)
        if not chi.is_trivial():
            raise EmptyPlusSpace("weight 0 with nontrivial character")
        return PlusEisenstein(N, 0, chi, QSeries.one(P), (), {"constant": True})
    labels, comb, gap = _plus_coefficients(N, k, chi, config)
    basis = eisenstein_basis(lvl, k, chi, P)
    g = _combine(basis, comb)
    if g[0] != 1:
        raise ZeroConstantTerm("normalization failed")
    T = max(P, terms_for(N, k, config.bits, lvl.divisors[1:]))
    g_long = g if T == P else _combine(eisenstein_basis(lvl, k, chi, T), comb)
    residual = _held_out_residual(g_long, k, chi, N, config.bits)
    verification = {
        "span_membership": in_span(g, [b.series for b in basis], 0, P),
        "held_out_residual": residual,
        "residual_ok": residual < config.residual,
        "singular_gap": gap,
    }
    if chi.is_trivial() and lvl.is_prime and k % 2 == 0 and k >= 4:
        verification["closed_form"] = closed_form_prime(N, k, P) == g
    return PlusEisenstein(N, k, chi, g, tuple(zip(labels, comb)), verification)


def plus_eisenstein(lvl, k: int, chi: CharacterPlus, P: int = DEFAULT_TERMS) -> QSeries:
    return project_plus(lvl, k, chi, P).series


def expected_empty(lvl, k: int, chi: CharacterPlus) -> bool:
    """The exceptional cases where the plus space is zero (weights ``k >= 1``)."""
    from .characters import psi

    N = as_level(lvl).N
    return (k == 1 and chi != psi(N)) or (k == 2 and chi.is_trivial())


def search_aux_w(N: int, weights=(1, 3, 5)) -> list[tuple[int, ...]]:
    """Consistent w-exponent tuples for the auxiliary character at level N, best first.

    A tuple qualifies when every plus space of the family ``psi^r * xi`` in
    weights ``>= 3`` is nonzero; qualifying tuples for which ``xi`` itself
    has a zero weight-1 plus space come first, then lexicographic order.
    """
    from itertools import product

    from .characters import AUX_MODULI, psi_power

    lvl = as_level(N)
    scored = []
    for w in product(range(4), repeat=len(lvl.primes)):
        x = CharacterPlus(N, -AUX_MODULI[N], w)
        if not x.is_consistent():
            continue
        ok = True
        for r in range(4):
            chi = psi_power(N, r) * x
            for k in weights:
                if k >= 3 and chi.admissible(k) and plus_dimension(N, k, chi) != 1:
                    ok = False
        if ok:
            weight_one = plus_dimension(N, 1, x) if x.admissible(1) else 0
            scored.append((weight_one, tuple(w)))
    return [w for _, w in sorted(scored)]
