"""Mechanical verification of the basis theorems and the supporting identities.

Every check returns a :class:`VerificationReport`. A failing report carries a
concrete witness; checks never raise on a mathematical failure, so sibling
suites keep running.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from math import gcd

from .basis import dual_character, ell_of, f_family, f_k, k_min
from .characters import CharacterPlus, family, kronecker, psi_power, trivial
from .eisenstein import dimension_d, rank_for, sturm_margin
from .errors import HypothesisViolated, ParityMismatch, WhmfError
from .hauptmodul import hauptmodul
from .levels import as_level
from .plus import plus_eisenstein
from .series import BiSeries, bi_divide

DEFAULT_GRID = 30
DEFAULT_GENFUN = 20
DEFAULT_P = 200


@dataclass
class VerificationReport:
    suite: str
    parameters: dict
    passed: bool
    precision: int
    checked: int = 0
    witness: dict | None = None
    notes: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def to_json(self, timing: bool = False) -> dict:
        doc = asdict(self)
        if not timing:
            doc.pop("seconds")
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


class _Run:
    """Collects a report, stopping at the first counterexample."""

    def __init__(self, suite: str, precision: int, **parameters):
        self.report = VerificationReport(suite, parameters, True, precision)
        self._t0 = time.perf_counter()

    def check(self, ok: bool, **witness) -> bool:
        self.report.checked += 1
        if not ok and self.report.passed:
            self.report.passed = False
            self.report.witness = {k: str(v) for k, v in witness.items()}
        return ok

    def fail(self, reason: str) -> None:
        self.report.passed = False
        if self.report.witness is None:
            self.report.witness = {"error": reason}

    def done(self) -> VerificationReport:
        self.report.seconds = time.perf_counter() - self._t0
        return self.report


def _params(lvl, chi: CharacterPlus, k: int) -> dict:
    return {"level": as_level(lvl).N, "chi": chi.name, "k": k}


# generating function -------------------------------------------------------------

def genfun_sides(lvl, chi: CharacterPlus, k: int, M: int = DEFAULT_GENFUN, P: int = DEFAULT_GENFUN,
                 perturb: tuple[int, int] | None = None):
    """The bivariate right-hand side and the recursion family.

    The outer variable is ``q = e(tau)`` and the inner one ``e(z)``; the
    q^m coefficient of ``f_k(z) f_{2-k}(tau) / (j(tau) - j(z))`` is compared
    with ``f_{k,m}(z)``. ``perturb=(n, delta)`` adds ``delta`` to the q^n
    coefficient of ``f_{2-k}`` (mutation testing).
    """
    lvl = as_level(lvl)
    kp, ell = ell_of(lvl, chi, k)
    dual = dual_character(chi, k)
    _, ell_dual = ell_of(lvl, dual, 2 - k)
    if ell_dual != -1 - ell:
        raise HypothesisViolated(f"dual index {ell_dual} is not -1-l = {-1 - ell}")
    outer = M + 2 + abs(ell)
    inner = P + M + 2 * abs(ell) + 4
    g = f_k(lvl, dual, 2 - k, outer + abs(ell) + 2)
    if perturb is not None:
        n, delta = perturb
        g = g + g.monomial(n, delta, g.precision)
    j_out = hauptmodul(lvl, outer + 2).series
    j_in = hauptmodul(lvl, inner + 2).series
    num = BiSeries.from_outer(g, inner) * BiSeries.from_inner(f_k(lvl, chi, k, inner), g.precision)
    den = BiSeries.from_outer(j_out, inner) - BiSeries.from_inner(j_in, j_out.precision)
    rhs = bi_divide(num, den)
    fam = f_family(lvl, chi, k, M, P)
    return rhs, fam


def check_genfun(lvl, chi: CharacterPlus, k: int, M: int = DEFAULT_GENFUN, P: int = DEFAULT_GENFUN,
                 perturb: tuple[int, int] | None = None) -> VerificationReport:
    """Coefficient extraction of the generating function against ``f_{k,m}``, ``-l <= m <= M``."""
    run = _Run("genfun", P, M=M, **_params(lvl, chi, k))
    try:
        rhs, fam = genfun_sides(lvl, chi, k, M, P, perturb)
    except WhmfError as exc:
        run.fail(f"{type(exc).__name__}: {exc}")
        return run.done()
    for elem in fam:
        side = rhs[elem.m]
        if side.precision < P:
            run.fail(f"inner precision {side.precision} < {P} at m = {elem.m}")
            break
        n = elem.series.first_difference(side, P)
        run.check(n is None, m=elem.m, n=n,
                  lhs=None if n is None else elem.series[n], rhs=None if n is None else side[n])
    if rhs.valuation < -ell_of(lvl, chi, k)[1]:
        low = rhs[rhs.valuation]
        run.check(low.is_zero(), m=rhs.valuation, note="nonzero coefficient below -l")
    return run.done()


# duality ---------------------------------------------------------------------------

def check_duality(lvl, chi: CharacterPlus, k: int, m_max: int = DEFAULT_GRID,
                  n_max: int = DEFAULT_GRID) -> VerificationReport:
    """``a_k(m, n) = -a_{2-k}(n, m)`` with the dual character ``chi psi^{-2k}``."""
    run = _Run("duality", max(m_max, n_max) + 1, m_max=m_max, n_max=n_max, **_params(lvl, chi, k))
    try:
        _, ell = ell_of(lvl, chi, k)
        dual = dual_character(chi, k)
        _, ell_d = ell_of(lvl, dual, 2 - k)
        prec = max(m_max, n_max) + 1
        fam = {e.m: e for e in f_family(lvl, chi, k, m_max, prec)}
        fam_d = {e.m: e for e in f_family(lvl, dual, 2 - k, n_max, prec)}
    except WhmfError as exc:
        run.fail(f"{type(exc).__name__}: {exc}")
        return run.done()
    run.check(ell_d == -1 - ell, ell=ell, ell_dual=ell_d, note="index pairing")
    for m in range(-ell, m_max + 1):
        for n in range(-ell_d, n_max + 1):
            a = fam[m].series[n]
            b = fam_d[n].series[m]
            run.check(a == -b, m=m, n=n, a_k=a, a_dual=b)
    return run.done()


# divisibility ----------------------------------------------------------------------

def check_divisibility(lvl, chi: CharacterPlus, k: int, n_max: int = 50,
                       m_max: int = DEFAULT_GRID) -> VerificationReport:
    """``n^{k-1} | a_k(m, n)`` for ``gcd(m, n) = 1 = gcd(N, m)``; requires ``k = k'``."""
    lvl = as_level(lvl)
    if k_min(lvl, chi, k) != k:
        raise HypothesisViolated(f"k = {k} is not the minimal weight for {chi.name} at level {lvl.N}")
    run = _Run("divisibility", n_max + 1, n_max=n_max, m_max=m_max, **_params(lvl, chi, k))
    try:
        fam = f_family(lvl, chi, k, m_max, n_max + 1)
    except WhmfError as exc:
        run.fail(f"{type(exc).__name__}: {exc}")
        return run.done()
    failures = {1: 0, 0: 0, -1: 0}
    for elem in fam:
        m = elem.m
        if m < 1 or gcd(lvl.N, m) != 1:
            continue
        for n in range(1, n_max + 1):
            if gcd(m, n) != 1:
                continue
            a = elem.a(n)
            d = n ** (k - 1) if k >= 1 else 1
            if not run.check(a % d == 0, m=m, n=n, a=a, divisor=d):
                failures[kronecker(chi.disc, n)] += 1
    if not run.report.passed:
        run.report.notes.append("failures by the Kronecker symbol (disc/n): "
                                + ", ".join(f"{s:+d}: {c}" for s, c in failures.items()))
    return run.done()


# integrality -----------------------------------------------------------------------

def check_integrality(lvl, chi: CharacterPlus, k: int, m_max: int = DEFAULT_GRID,
                      P: int = DEFAULT_P) -> VerificationReport:
    """Gap structure, monic integer Faber polynomials and integral ``a_k(m, n)``, ``n < P``."""
    run = _Run("integrality", P, m_max=m_max, **_params(lvl, chi, k))
    try:
        _, ell = ell_of(lvl, chi, k)
        fam = f_family(lvl, chi, k, m_max, P)
    except WhmfError as exc:
        run.fail(f"{type(exc).__name__}: {exc}")
        return run.done()
    for elem in fam:
        s = elem.series
        run.check(s.valuation == -elem.m and s[-elem.m] == 1, m=elem.m, note="leading term q^-m")
        gap = [n for n in range(-elem.m + 1, ell + 1) if s[n] != 0]
        run.check(not gap, m=elem.m, n=gap[0] if gap else None, note="gap")
        run.check(len(elem.faber) == elem.degree + 1 and elem.faber[0] == 1, m=elem.m,
                  faber=elem.faber, note="monic of degree l+m")
        run.check(all(isinstance(c, int) for c in elem.faber), m=elem.m, faber=elem.faber)
        run.check(s.is_integral(), m=elem.m,
                  n=next((n for n in range(s.valuation, P) if s[n].denominator != 1), None))
    return run.done()


def weight_range(lvl, periods: int = 2) -> range:
    """Weights from ``2 - periods*k1 - 1`` to ``periods*k1 + 1`` (both signs, two periods)."""
    k1 = as_level(lvl).k1
    return range(1 - periods * k1, periods * k1 + 2)


# dimensions ------------------------------------------------------------------------

def check_dimensions(lvl, weights=range(6)) -> VerificationReport:
    """Rank of the Eisenstein spanning list against the dimension table."""
    lvl = as_level(lvl)
    run = _Run("dimensions", 0, level=lvl.N, weights=list(weights))
    seen = set()
    for chi in family(lvl.N, with_aux=True):
        disc = chi.disc
        for k in weights:
            if (disc, k) in seen:
                continue
            try:
                expected = dimension_d(lvl, k, disc)
            except ParityMismatch:
                continue
            seen.add((disc, k))
            got = rank_for(lvl, k, disc)
            run.check(got == expected, disc=disc, k=k, rank=got, table=expected)
    run.report.precision = max(sturm_margin(lvl, k) for k in weights)
    return run.done()


# products --------------------------------------------------------------------------

def product_identities(N: int) -> list[tuple[list[tuple[int, int]], tuple[int, int]]]:
    """``([(k, r), ...], (k, r))``: the product of ``E_k^(psi^r)`` equals the right side."""
    if N == 2:
        return [([(2, 2), (4, 2)], (6, 0))]
    if N == 3:
        return [([(1, 1)] * 4, (4, 0)), ([(2, 2), (2, 2)], (4, 0)),
                ([(3, 1), (3, 3)], (6, 0)), ([(2, 2), (4, 2)], (6, 0))]
    if N == 5:
        return [([(2, 2), (4, 2)], (6, 0))]
    return []


def check_products(lvl, P: int = DEFAULT_P) -> VerificationReport:
    """The product identities used for the zero statements, as exact series equalities."""
    lvl = as_level(lvl)
    run = _Run("products", P, level=lvl.N)
    ids = product_identities(lvl.N)
    if not ids:
        run.report.notes.append("no product identities are listed for this level")
    for factors, (k, r) in ids:
        lhs = None
        for kf, rf in factors:
            e = plus_eisenstein(lvl.N, kf, psi_power(lvl.N, rf), P)
            lhs = e if lhs is None else (lhs * e).truncate(P)
        rhs = plus_eisenstein(lvl.N, k, psi_power(lvl.N, r) if r else trivial(lvl.N), P)
        n = lhs.first_difference(rhs, P)
        label = " * ".join(f"E{kf}(psi^{rf})" for kf, rf in factors) + f" = E{k}(psi^{r})"
        run.check(n is None, identity=label, n=n)
    return run.done()


# hauptmodul and factorization, in report form -----------------------------------------

def check_hauptmodul(lvl, P: int = DEFAULT_P) -> VerificationReport:
    """Integrality of ``c_n`` (``n < P``), the round trip and numeric invariance."""
    from .hauptmodul import invariance_terms, round_trip, verify_numeric_invariance

    lvl = as_level(lvl)
    run = _Run("hauptmodul", P, level=lvl.N)
    try:
        h = hauptmodul(lvl, P)
        run.check(h.series.is_integral() and h.series[0] == 0, note="integral with c_0 = 0")
        run.check(round_trip(lvl, P), note="round trip")
        inv = verify_numeric_invariance(hauptmodul(lvl, invariance_terms(lvl.N)), raise_on_failure=False)
        run.check(inv.passed, residual=f"{inv.worst:.3g}", at=inv.witness)
        run.report.notes.append(f"invariance residual {inv.worst:.3g}")
    except WhmfError as exc:
        run.fail(f"{type(exc).__name__}: {exc}")
    return run.done()


def factorization_instances(lvl) -> list[tuple[CharacterPlus, int]]:
    """``(chi, k)`` with ``k = k'(N, chi, k)``, ``0 <= k <= 2 + k1``, ``chi`` in the psi family."""
    lvl = as_level(lvl)
    return [(chi, k) for chi in family(lvl.N) for k in range(lvl.k1 + 3)
            if chi.admissible(k) and k_min(lvl, chi, k) == k]


def check_factorization(lvl, chi: CharacterPlus, k: int, P: int = DEFAULT_P) -> VerificationReport:
    from .hauptmodul import verify_factorization

    run = _Run("factorization", P, **_params(lvl, chi, k))
    try:
        rep = verify_factorization(lvl, chi, k, P, raise_on_failure=False)
        run.check(rep.passed, n=rep.witness)
        if rep.skipped:
            run.report.notes.append("degenerate case (k = 0 or k = 2 + k1), skipped")
    except WhmfError as exc:
        run.fail(f"{type(exc).__name__}: {exc}")
    return run.done()


# default instances -------------------------------------------------------------------

def default_instances(lvl, weights=range(-2, 5)) -> list[tuple[CharacterPlus, int]]:
    """Admissible ``(chi, k)`` over the psi family for a small band of weights."""
    lvl = as_level(lvl)
    return [(chi, k) for chi in family(lvl.N) for k in weights if chi.admissible(k)]


def divisibility_instances(lvl) -> list[tuple[CharacterPlus, int]]:
    """``k = k'`` instances with ``3 <= k <= 2 k1 + 2``."""
    lvl = as_level(lvl)
    return [(chi, k) for chi in family(lvl.N) for k in range(3, 2 * lvl.k1 + 3)
            if chi.admissible(k) and k_min(lvl, chi, k) == k]


SUITES = ("genfun", "duality", "divisibility", "integrality", "dimensions", "products",
          "hauptmodul", "factorization")


def run_suite(suite: str, lvl, chi: CharacterPlus | None = None, k: int | None = None,
              P: int = DEFAULT_P) -> list[VerificationReport]:
    """Reports for one suite at one level; ``chi``/``k`` restrict the instances."""
    lvl = as_level(lvl)

    def pick(instances):
        return [(c, w) for c, w in instances if (chi is None or c == chi) and (k is None or w == k)]

    if suite == "dimensions":
        return [check_dimensions(lvl)]
    if suite == "products":
        return [check_products(lvl, P)]
    if suite == "hauptmodul":
        return [check_hauptmodul(lvl, P)]
    if suite == "factorization":
        return [check_factorization(lvl, c, w, P) for c, w in pick(factorization_instances(lvl))]
    if suite == "divisibility":
        if chi is not None and k is not None:
            return [check_divisibility(lvl, chi, k)]
        return [check_divisibility(lvl, c, w) for c, w in pick(divisibility_instances(lvl))]
    explicit = chi is not None and k is not None
    instances = [(chi, k)] if explicit else pick(default_instances(lvl))
    if suite == "genfun":
        return [check_genfun(lvl, c, w) for c, w in instances]
    if suite == "duality":
        return [check_duality(lvl, c, w) for c, w in instances]
    if suite == "integrality":
        return [check_integrality(lvl, c, w, P=P) for c, w in instances]
    raise ValueError(f"unknown suite {suite!r}")
