"""Numeric location of the zeros of low-weight plus Eisenstein series for N = 2, 3, 5.

On each arc piece an involution ``M`` of Gamma_0(N)+ acts as the reflection
``z -> -conj(z) + s``; with real coefficients this gives
``conj(E(z)) = lambda u(z)^k E(z)`` where ``u = (cz+d)/sqrt(det M)`` has modulus
one on the arc and ``lambda = chi(M)``. Hence ``h = mu u^{k/2} E`` is real for
``mu^2 = lambda``, and its sign changes count zeros on the arc. Off the arcs the
zeros are counted cell by cell with the argument principle.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import _accel
from .characters import CharacterPlus, family, psi_power, trivial
from .errors import EmptyPlusSpace, ParityMismatch, RealityFailure, UsageError, WindingAmbiguous
from .plus import EvalPoint, evaluate, plus_eisenstein
from .series import QSeries

ZERO_LEVELS = (2, 3, 5)
DEFAULT_TERMS = 200
REALITY_TOL = 1e-18
# |Re h| below this fraction of max |h| is an exact zero (elliptic points on the arc ends)
ZERO_TOL = 1e-30


@dataclass(frozen=True)
class Form:
    """A modular form for Gamma_0(N)+ given by its q-expansion."""

    level: int
    weight: int
    chi: CharacterPlus
    series: QSeries

    @property
    def label(self) -> str:
        return f"E_{self.weight}^({self.chi.name}) at N={self.level}"


def eisenstein_form(N: int, k: int, chi: CharacterPlus, P: int = DEFAULT_TERMS) -> Form:
    if k == 0:
        return Form(N, 0, chi, QSeries.one(P))
    return Form(N, k, chi, plus_eisenstein(N, k, chi, P))


def low_weight_forms(N: int, max_weight: int = 4, P: int = DEFAULT_TERMS) -> list[Form]:
    """Every nonzero ``E_k^(chi)``, ``1 <= k <= max_weight``, ``chi`` in the psi family."""
    out = []
    for k in range(1, max_weight + 1):
        for chi in family(N):
            if not chi.admissible(k):
                continue
            try:
                out.append(eisenstein_form(N, k, chi, P))
            except EmptyPlusSpace:
                continue
    return out


# arcs ------------------------------------------------------------------------------

@dataclass(frozen=True)
class ArcPiece:
    """``center + r e^{i theta}``, ``r^2 = radius_sq``, for ``theta`` between two directions.

    Directions are rational vectors ``(dx, dy, sqrt_of)`` meaning
    ``(dx sqrt(sqrt_of), dy)`` from the center, so every quantity is exact
    until it is evaluated at the working precision.
    """

    center: Fraction
    radius_sq: Fraction
    lo: tuple[int, int, int]
    hi: tuple[int, int, int]
    matrix: tuple[int, int, int, int]

    @staticmethod
    def _angle(direction):
        dx, dy, root = direction
        return mpmath.atan2(dy, dx * mpmath.sqrt(root))

    @property
    def radius(self):
        return mpmath.sqrt(mpmath.mpf(self.radius_sq.numerator) / self.radius_sq.denominator)

    def point(self, theta):
        c = mpmath.mpf(self.center.numerator) / self.center.denominator
        return c + self.radius * mpmath.expj(theta)

    def thetas(self, count: int) -> list:
        lo, hi = self._angle(self.lo), self._angle(self.hi)
        return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


@dataclass(frozen=True)
class ArcSpec:
    level: int
    pieces: tuple[ArcPiece, ...]


def arc_spec(N: int) -> ArcSpec:
    """The arcs carrying the zeros, as closed pieces in the left half of the domain."""
    up = (0, 1, 1)
    if N == 2:
        return ArcSpec(2, (ArcPiece(Fraction(0), Fraction(1, 2), up, (-1, 1, 1), (0, -1, 2, 0)),))
    if N == 3:
        return ArcSpec(3, (ArcPiece(Fraction(0), Fraction(1, 3), up, (-1, 1, 3), (0, -1, 3, 0)),))
    if N == 5:
        # the two circles meet at -2/5 + i/5
        return ArcSpec(5, (
            ArcPiece(Fraction(0), Fraction(1, 5), up, (-2, 1, 1), (0, -1, 5, 0)),
            ArcPiece(Fraction(-1, 2), Fraction(1, 20), (1, 2, 1), up, (-5, -3, 10, 5)),
        ))
    raise UsageError(f"zeros are located for N in {ZERO_LEVELS}, not {N}")


def _boundary_circles(N: int) -> list[tuple[float, float]]:
    """Circles bounding the domain from below, with their translates by +-1."""
    r = 1 / math.sqrt(N)
    circles = [(c, r) for c in (-1.0, 0.0, 1.0)]
    if N == 5:
        circles += [(c, 1 / (2 * math.sqrt(5))) for c in (-1.5, -0.5, 0.5, 1.5)]
    return circles


def boundary_distance(N: int, z: complex) -> float:
    """Signed distance to the domain's lower boundary (negative below it)."""
    return min(abs(z - c) - r for c, r in _boundary_circles(N))


# reality on the arcs -------------------------------------------------------------------

def _mp_value(form: Form, z, bits: int = 256):
    value, _ = evaluate(form.series, EvalPoint(z, bits, max_tail=1e-40))
    return value


def rotation(form: Form, piece: ArcPiece, branch_shift: int = 0):
    """``mu`` with ``mu^2 = chi(M)``; ``branch_shift = 1`` multiplies it by ``i`` (the wrong branch)."""
    e = form.chi.matrix_exponent(piece.matrix)
    return mpmath.expj(mpmath.pi * (e + 2 * branch_shift) / 4)


def h_values(form: Form, piece: ArcPiece, thetas, branch_shift: int = 0) -> list:
    out = []
    with mpmath.workprec(256):
        mu = rotation(form, piece, branch_shift)
        for t in thetas:
            z = piece.point(t)
            out.append(mu * mpmath.expj(form.weight * t / 2) * _mp_value(form, z))
    return out


@dataclass
class RealityReport:
    label: str
    points: int
    worst_imag: float
    sign_changes: int
    endpoint_zeros: int
    passed: bool
    samples: list = field(default_factory=list, repr=False)


def reality_on_arc(form: Form, arc: ArcSpec | None = None, grid_points: int = 200,
                   tolerance: float = REALITY_TOL, branch_shift: int = 0,
                   raise_on_failure: bool = True) -> RealityReport:
    """``|Im h| < tolerance`` along every arc piece, with the sign changes of ``Re h``."""
    arc = arc_spec(form.level) if arc is None else arc
    worst, changes, samples = 0.0, 0, []
    ends = set()
    for piece in arc.pieces:
        with mpmath.workprec(256):
            thetas = piece.thetas(grid_points)
        hs = h_values(form, piece, thetas, branch_shift)
        worst = max(worst, max(float(abs(h.imag)) for h in hs))
        scale = max(float(abs(h)) for h in hs)
        re = [float(h.real) if abs(h.real) > ZERO_TOL * scale else 0.0 for h in hs]
        changes += _sign_changes(re)
        for idx in (0, -1):
            if re[idx] == 0.0:
                ends.add(mpmath.nstr(piece.point(thetas[idx]), 12))
        samples += [(float(t), float(h.real), float(h.imag)) for t, h in zip(thetas, hs)]
    ok = worst < tolerance
    report = RealityReport(form.label, grid_points * len(arc.pieces), worst, changes, len(ends), ok, samples)
    if raise_on_failure and not ok:
        raise RealityFailure(f"{form.label}: |Im h| reaches {worst:.3g}")
    return report


def _sign_changes(values: list[float]) -> int:
    """Sign changes among the nonzero values (zeros at the ends are not counted)."""
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_sign_changes(form: Form, arc: ArcSpec | None = None, grid_points: int = 200) -> int:
    return reality_on_arc(form, arc, grid_points, raise_on_failure=False).sign_changes


def arc_csv(report: RealityReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "re_h", "im_h"])
    for t, re, im in report.samples:
        w.writerow([repr(t), repr(re), repr(im)])
    return buf.getvalue()


# off-arc windings ----------------------------------------------------------------------

@dataclass(frozen=True)
class DomainSpec:
    """Square cells of side ``cell`` covering one period ``[-1/2 - cell/2, 1/2 - cell/2]``.

    The half-cell offset puts ``Re z = 0`` and ``Re z = +-1/2`` through cell
    centers rather than along cell edges.
    """

    level: int
    floor: float
    top: float = 2.0
    cell: float = 0.02
    depth: int = 4
    margin: float = 0.01
    side_points: int = 16

    @classmethod
    def default(cls, N: int) -> "DomainSpec":
        return cls(N, 0.15 / math.sqrt(N))

    def cells(self):
        """``(lower-left corner, kind)`` with kind ``inside``, ``arc`` or ``outside``."""
        h = self.cell
        nx = int(round(1 / h))
        ny = int(math.ceil((self.top - self.floor) / h))
        reach = h / math.sqrt(2)
        for i in range(nx):
            x = -0.5 - h / 2 + i * h
            for j in range(ny):
                y = self.floor + j * h
                d = boundary_distance(self.level, complex(x + h / 2, y + h / 2))
                if d < -reach:
                    kind = "outside"
                elif d <= reach + self.margin:
                    kind = "arc"
                else:
                    kind = "inside"
                yield complex(x, y), kind


def _contour(corner: complex, h: float, n: int) -> np.ndarray:
    t = np.arange(n) / n
    return np.concatenate([corner + h * t, corner + h + 1j * h * t,
                           corner + h * (1 - t) + 1j * h, corner + 1j * h * (1 - t)])


@dataclass
class WindingReport:
    label: str
    cells: int
    arc_cells: int
    nonzero: list
    subdivided: int
    ambiguous: list
    tail_ok: bool
    backend: str
    passed: bool
    notes: list = field(default_factory=list)


def _float_coeffs(series: QSeries, P: int):
    return np.array([float(c) for c in series.coefficient_list(series.valuation, P)]), series.valuation


def windings(form: Form, corners: np.ndarray, h: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Winding numbers (unrounded) and largest phase step around each cell."""
    coeffs, val = _float_coeffs(form.series, form.series.precision)
    pts = np.stack([_contour(c, h, n) for c in corners]) if len(corners) else np.zeros((0, 4 * n), complex)
    vals = _accel.eval_series(coeffs, val, pts)
    total, worst = _accel.phase_sums(vals.reshape(len(corners), -1))
    return total / (2 * math.pi), worst


def tail_certificate(form: Form, height: float) -> bool:
    """``|E(z) - 1| < 1`` for ``Im z >= height``, so ``E`` has no zeros there."""
    q = math.exp(-2 * math.pi * height)
    s = form.series
    bound = sum(abs(float(s[n])) * q ** n for n in range(1, s.precision))
    n = s.precision
    bound += abs(float(s[n - 1])) * q ** n / (1 - q) * 4  # crude allowance for the omitted tail
    return s[0] == 1 and bound < 1


def certify_no_offarc_zeros(form: Form, domain: DomainSpec | None = None,
                            raise_on_ambiguous: bool = False) -> WindingReport:
    """Winding number 0 around every domain cell away from the arcs."""
    domain = DomainSpec.default(form.level) if domain is None else domain
    inside, arc_cells = [], 0
    for corner, kind in domain.cells():
        if kind == "inside":
            inside.append(corner)
        elif kind == "arc":
            arc_cells += 1
    nonzero, ambiguous, subdivided = [], [], 0
    pending = [(np.array(inside), domain.cell, 0)]
    while pending:
        corners, h, level = pending.pop()
        if not len(corners):
            continue
        w, step = windings(form, corners, h, domain.side_points)
        rounded = np.rint(w)
        bad = (np.abs(w - rounded) > 1e-3) | (step > math.pi / 4)
        for c, r in zip(corners[~bad], rounded[~bad]):
            if r != 0:
                nonzero.append((complex(c), int(r)))
        if bad.any():
            if level >= domain.depth:
                ambiguous += [complex(c) for c in corners[bad]]
                continue
            subdivided += int(bad.sum())
            half = h / 2
            kids = np.concatenate([corners[bad] + off for off in (0, half, 1j * half, half + 1j * half)])
            pending.append((kids, half, level + 1))
    tail_ok = tail_certificate(form, domain.top)
    ok = not nonzero and not ambiguous and tail_ok
    report = WindingReport(form.label, len(inside), arc_cells, nonzero, subdivided, ambiguous,
                           tail_ok, _accel.BACKEND, ok,
                           ["rectangle approximation of the fundamental domain up to Im z = "
                            f"{domain.top}; cells within {domain.margin} of the arcs are excluded"])
    if raise_on_ambiguous and ambiguous:
        raise WindingAmbiguous(f"{form.label}: {len(ambiguous)} cells stay ambiguous at depth {domain.depth}")
    return report


def arc_zero_counts(form: Form, grid_points: int = 200) -> tuple[int, int]:
    """``(interior sign changes, zeros at the arc ends)``."""
    r = reality_on_arc(form, grid_points=grid_points, raise_on_failure=False)
    return r.sign_changes, r.endpoint_zeros


def product_sign_consistency(P: int = DEFAULT_TERMS, grid_points: int = 200) -> dict:
    """Arc zero counts of ``E_3^(psi)``, ``E_3^(psi^3)`` and their product ``E_6^(1)`` at N = 3."""
    a = arc_zero_counts(eisenstein_form(3, 3, psi_power(3, 1), P), grid_points)
    b = arc_zero_counts(eisenstein_form(3, 3, psi_power(3, 3), P), grid_points)
    c = arc_zero_counts(eisenstein_form(3, 6, trivial(3), P), grid_points)
    ok = a[0] + b[0] == c[0] and a[1] + b[1] == c[1]
    return {"E3(psi)": a, "E3(psi^3)": b, "E6(1)": c, "additive": ok}


def parse_zero_target(N: int, k: int, chi: CharacterPlus, P: int = DEFAULT_TERMS) -> Form:
    if N not in ZERO_LEVELS:
        raise UsageError(f"zeros are located for N in {ZERO_LEVELS}, not {N}")
    if not chi.admissible(k):
        raise ParityMismatch(f"{chi.name} is not admissible in weight {k}")
    return eisenstein_form(N, k, chi, P)
