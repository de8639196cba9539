"""Quadrature engines shared by the transform and kernel modules.

Composite Gauss-Legendre panels with embedded error estimates, a Wynn
epsilon accelerator for conditionally convergent oscillatory tails, and
rotated-contour evaluation of incomplete oscillatory power integrals.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DomainError, QuadratureError


class Estimate(NamedTuple):
    """Value with a propagated absolute-error estimate."""

    value: complex
    error: float

    def __complex__(self):
        return complex(self.value)

    def __float__(self):
        return float(np.real(self.value))


@lru_cache(maxsize=32)
def gauss_rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def panel_nodes(edges: np.ndarray, n: int):
    """Nodes/weights for Gauss-Legendre on each [edges[i], edges[i+1]]."""
    x, w = gauss_rule(n)
    a = edges[:-1]
    half = 0.5 * (edges[1:] - a)
    mid = a + half
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate_panels(
    f: Callable[[np.ndarray], np.ndarray],
    edges: Sequence[float],
    n: int = 24,
) -> Estimate:
    """Integrate a vectorized integrand over fixed panels.

    The error estimate is the difference against the same panels at a
    lower order; for analytic integrands this overestimates the true
    error by orders of magnitude, which is the safe direction.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 2:
        raise DomainError("need at least one panel")
    nodes, weights = panel_nodes(edges, n)
    hi = np.sum(f(nodes) * weights)
    nodes2, weights2 = panel_nodes(edges, max(n // 2, 4))
    lo = np.sum(f(nodes2) * weights2)
    return Estimate(hi, float(abs(hi - lo)) + 1e-18 * float(abs(hi)))


def uniform_edges(a: float, b: float, width: float) -> np.ndarray:
    k = max(1, int(np.ceil((b - a) / max(width, 1e-12))))
    return np.linspace(a, b, k + 1)


def wynn_epsilon(partial: Sequence[complex]):
    """Accelerate a sequence of partial sums with the Wynn epsilon table.

    Returns (limit, error_estimate). Works well for the alternating-panel
    sums produced by slowly decaying oscillatory tails.
    """
    s = [complex(v) for v in partial]
    m = len(s)
    if m == 0:
        return 0j, np.inf
    if m == 1:
        return s[0], abs(s[0])
    e_prev = [0j] * m  # epsilon_{-1}
    e_curr = s[:]      # epsilon_0
    best = s[-1]
    best_step = abs(s[-1] - s[-2])
    col = 0
    while len(e_curr) > 1 and col < 80:
        e_next = []
        degenerate = False
        for i in range(len(e_curr) - 1):
            d = e_curr[i + 1] - e_curr[i]
            if d == 0:
                degenerate = True
                break
            e_next.append(e_prev[i + 1] + 1.0 / d)
        if degenerate:
            break
        e_prev, e_curr = e_curr, e_next
        col += 1
        if col % 2 == 0 and len(e_curr) >= 2:
            step = abs(e_curr[-1] - e_curr[-2])
            if step < best_step:
                best_step = step
                best = e_curr[-1]
    return best, max(best_step, 1e-18 * abs(best))


@lru_cache(maxsize=8)
def laguerre_rule(n: int):
    x, w = np.polynomial.laguerre.laggauss(n)
    return x, w


def osc_power_tail(X: float, b: float, rho: complex, n: int = 60) -> complex:
    """E(X;b) = integral_X^inf x^(-rho) e^(i b x) dx for real b != 0.

    Rotated to the half-line where the exponential decays:
    E = s*i*e^{ibX}/|b| * int_0^inf (X + s*i*u/|b|)^(-rho) e^(-u) du,
    s = sign(b). Absolutely convergent and smooth; Gauss-Laguerre applies.
    Valid for any complex rho (Re rho > 0 keeps the magnitude sane here).
    """
    if b == 0.0:
        if np.real(rho) <= 1.0:
            raise DomainError("b=0 tail needs Re rho > 1")
        return X ** (1.0 - rho) / (rho - 1.0)
    s = 1.0 if b > 0 else -1.0
    ab = abs(b)
    u, w = laguerre_rule(n)
    zs = X + (s * 1j / ab) * u
    vals = np.exp(-rho * np.log(zs))
    total = np.sum(w * vals)
    return s * 1j * np.exp(1j * b * X) / ab * total


def cos_power_tail(X: float, b: float, rho: complex, n: int = 60) -> complex:
    """integral_X^inf x^(-rho) cos(b x) dx (conditionally convergent)."""
    if b == 0.0:
        if np.real(rho) <= 1.0:
            raise DomainError("b=0 cosine tail needs Re rho > 1")
        return X ** (1.0 - rho) / (rho - 1.0)
    return 0.5 * (osc_power_tail(X, b, rho, n) + osc_power_tail(X, -b, rho, n))


def cos_power_tail_batch(X: float, b_arr, rho: complex, n: int = 60) -> np.ndarray:
    """Vectorized cos_power_tail over an array of nonzero frequencies."""
    b = np.asarray(b_arr, dtype=float)
    ab = np.maximum(np.abs(b), 1e-13)
    u, w = laguerre_rule(n)
    out = np.zeros(b.shape, dtype=complex)
    for s in (+1.0, -1.0):
        zs = X + (s * 1j) * np.multiply.outer(1.0 / ab, u)
        vals = np.exp(-rho * np.log(zs)) @ w
        out += 0.5 * s * 1j * np.exp(1j * s * ab * X) / ab * vals
    return out


def exp_power_tail_cbatch(X: float, b_arr, rho: complex, n: int = 90) -> np.ndarray:
    """E(X;b) = integral_X^inf x^(-rho) e^(i b x) dx for complex b with
    Im b >= 0 (and b != 0).

    |b| X > 12: rotated ray x = X + i u / b (valid for Im b >= 0: the ray
    keeps Re x >= X, never crossing the x^(-rho) branch cut).
    |b| X <= 12: the closed full-line value Gamma(1-rho) (-ib)^(rho-1)
    minus the entire head series sum_k (ib)^k X^(k+1-rho)/(k! (k+1-rho)),
    which avoids the endpoint-singular Laguerre regime at small |b|.
    Requires 0 < Re rho < 1 on the small-|b| branch.
    """
    from .specfun import gamma_complex

    b = np.asarray(b_arr, dtype=complex)
    if np.any(b.imag < -1e-12):
        raise DomainError("exp_power_tail_cbatch requires Im b >= 0")
    if np.any(np.abs(b) < 1e-13):
        raise DomainError("exp_power_tail_cbatch requires |b| > 0")
    out = np.empty(b.shape, dtype=complex)
    small = np.abs(b) * X <= 12.0
    if np.any(~small):
        bb = b[~small]
        u, w = laguerre_rule(n)
        zs = X + 1j * np.multiply.outer(1.0 / bb, u)
        vals = np.exp(-rho * np.log(zs)) @ w
        out[~small] = 1j * np.exp(1j * bb * X) / bb * vals
    if np.any(small):
        if not (0.0 < np.real(rho) < 1.0):
            raise DomainError("small-|b| tail branch needs 0 < Re rho < 1")
        bb = b[small]
        full = gamma_complex(1.0 - rho) * np.exp((rho - 1.0) * np.log(-1j * bb))
        term = np.full(bb.shape, X ** (1.0 - rho) / (1.0 - rho), dtype=complex)
        head = term.copy()
        k = 0
        while k < 80:
            term = term * (1j * bb * X) * (k + 1.0 - rho) / ((k + 1.0) * (k + 2.0 - rho))
            head += term
            k += 1
            if np.all(np.abs(term) < 1e-18 * np.maximum(np.abs(head), 1e-300)):
                break
        out[small] = full - head
    return out


def cos_power_full(b: float, rho: complex) -> complex:
    """integral_0^inf x^(-rho) cos(b x) dx = Gamma(1-rho) sin(pi rho/2) |b|^(rho-1).

    Requires 0 < Re rho < 1; classical Mellin value.
    """
    from .specfun import gamma_complex

    if not (0.0 < np.real(rho) < 1.0):
        raise DomainError("cosine Mellin integral needs 0 < Re rho < 1")
    ab = abs(b)
    if ab == 0.0:
        raise DomainError("b must be nonzero")
    return gamma_complex(1.0 - rho) * np.sin(np.pi * rho / 2.0) * ab ** (rho - 1.0)


def require(cond: bool, message: str):
    if not cond:
        raise QuadratureError(message)
