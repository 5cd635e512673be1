"""Integer 2x2 matrices for Gamma_0(N) and its Atkin-Lehner involutions."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotADivisor
from .levels import as_level

Matrix = tuple[int, int, int, int]  # (a, b, c, d) for [[a, b], [c, d]]


def matmul(x: Matrix, y: Matrix) -> Matrix:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def det(x: Matrix) -> int:
    return x[0] * x[3] - x[1] * x[2]


def adjugate(x: Matrix) -> Matrix:
    a, b, c, d = x
    return (d, -b, -c, a)


def in_gamma0(g: Matrix, N: int) -> bool:
    return det(g) == 1 and g[2] % N == 0


@dataclass(frozen=True)
class ALMatrix:
    """``W_m = [[m x, y], [N z, m w]]`` with determinant ``m``."""

    N: int
    m: int
    a: int
    b: int
    c: int
    d: int

    @property
    def matrix(self) -> Matrix:
        return (self.a, self.b, self.c, self.d)

    def __post_init__(self):
        assert det(self.matrix) == self.m
        assert self.a % self.m == 0 and self.d % self.m == 0 and self.c % self.N == 0


def al_matrix(lvl, m: int) -> ALMatrix:
    """Canonical representative of ``W_m`` (extended gcd on ``m`` and ``N/m``)."""
    N = as_level(lvl).N
    if m <= 0 or N % m:
        raise NotADivisor(f"{m} does not divide {N}")
    if m == 1:
        return ALMatrix(N, 1, 1, 0, 0, 1)
    if m == N:
        return ALMatrix(N, N, 0, -1, N, 0)
    n = N // m
    x = pow(m, -1, n)
    y = (m * x - 1) // n
    return ALMatrix(N, m, m * x, y, N, m)


def coset_decomposition(M: Matrix, N: int) -> tuple[int, Matrix]:
    """Write ``M = W_m * gamma`` with ``gamma`` in Gamma_0(N); return ``(m, gamma)``.

    ``M`` must be an integral matrix of determinant ``m | N`` normalising
    Gamma_0(N) in the Atkin-Lehner shape.
    """
    m = det(M)
    if m <= 0 or N % m:
        raise NotADivisor(f"determinant {m} does not divide {N}")
    W = al_matrix(N, m).matrix
    prod = matmul(adjugate(W), M)
    if any(v % m for v in prod):
        raise ValueError(f"{M} is not in the W_{m} coset of Gamma_0({N})")
    gamma = tuple(v // m for v in prod)
    if not in_gamma0(gamma, N):
        raise ValueError(f"{M} is not in the W_{m} coset of Gamma_0({N})")
    return m, gamma
