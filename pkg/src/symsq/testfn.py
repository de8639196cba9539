"""The admissible test-function family, the averaged window, and the
Kuznetsov transforms H0, phi, phi-hat.

A small weight protocol unifies the two even weights the kernels integrate
against: the Gaussian pair h(K,N;r) and the window average
q_N(r) (omega_T(r) + omega_T(-r)).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, PrecisionConfig
from .errors import DomainError, PoleError, PrecisionError, QuadratureError
from .quadrature import Estimate, integrate_panels, uniform_edges
from .specfun import bessel_j_imag_order_arrays, erf_real, log_gamma


def q_polynomial(N: int, r):
    """q_N(r) = prod_k (r^2+(k+1/2)^2) / (r^2+100 N^2)^N, k = 0..N-1.

    Rational, even, ->1 at infinity, zeros at r = +-(k+1/2)i, poles at
    r = +-10Ni.
    """
    if N < 1:
        raise DomainError("q_polynomial requires N >= 1")
    r = np.asarray(r, dtype=complex)
    if np.any(np.abs(r * r + 100.0 * N * N) < 1e-12):
        raise PoleError("q_N pole at r = +-10Ni")
    r2 = r * r
    num = np.ones(r.shape, dtype=complex)
    for k in range(N):
        num = num * (r2 + (k + 0.5) ** 2)
    out = num / (r2 + 100.0 * N * N) ** N
    return complex(out) if out.shape == () else out


@dataclass(frozen=True)
class GaussianPairTestFunction:
    """h(r) = q_N(r) [e^{-((r-K)/G)^2} + e^{-((r+K)/G)^2}]: even, entire
    times rational, with forced zeros at r = +-(n+1/2)i for n < N."""

    K: float
    G: float
    N: int = 4

    def __post_init__(self):
        if self.K <= 0 or self.G <= 0:
            raise DomainError("K and G must be positive")
        if self.N < 1:
            raise DomainError("N must be a positive integer")

    def __call__(self, r):
        return h_eval(self, r)

    def window(self, floor: float = 1e-16):
        """Half-width of the effective Gaussian support."""
        return self.G * math.sqrt(-math.log(floor)) + 2.0

    def support(self, floor: float = 1e-16):
        """Positive-r intervals carrying the mass of the weight."""
        w = self.window(floor)
        lo = max(0.0, self.K - w)
        return [(lo, self.K + w)]

    def hhat_smax(self):
        """Decay range of the cosine transform Hhat (exp(-(G u)^2) scale)."""
        return 6.2 / self.G + 0.5

    def eval_positive(self, r):
        return h_eval(self, r)


def h_eval(h: GaussianPairTestFunction, r):
    """Evaluate at real or complex r (the explicit formulas use both)."""
    r = np.asarray(r, dtype=complex)
    g1 = np.exp(-((r - h.K) / h.G) ** 2)
    g2 = np.exp(-((r + h.K) / h.G) ** 2)
    out = q_polynomial(h.N, r) * (g1 + g2)
    return complex(out) if out.shape == () else out


@dataclass(frozen=True)
class WindowSpec:
    """Averaging window over centers K in [T, 2T] with Gaussian width G."""

    T: float
    G: float

    def __post_init__(self):
        if self.T <= 0 or self.G <= 0:
            raise DomainError("T and G must be positive")
        if not (1.0 < self.G < self.T):
            warnings.warn(
                f"window G={self.G} outside the advisory band 1 < G < T={self.T}",
                stacklevel=2,
            )


def omega_window(w: WindowSpec, r) -> float:
    """Closed form of the averaged Gaussian window:
    (1/2)[erf((2T-r)/G) - erf((T-r)/G)]."""
    r = np.asarray(r, dtype=float)
    if r.shape == ():
        return 0.5 * (erf_real((2.0 * w.T - float(r)) / w.G) - erf_real((w.T - float(r)) / w.G))
    from numpy import vectorize

    f = vectorize(lambda x: 0.5 * (erf_real((2.0 * w.T - x) / w.G) - erf_real((w.T - x) / w.G)))
    return f(r)


@dataclass(frozen=True)
class AveragedWindowWeight:
    """Even weight q_N(r) (omega_T(r) + omega_T(-r)) replacing the Gaussian
    pair after averaging the center K over [T, 2T]."""

    w: WindowSpec
    N: int = 4

    def eval_positive(self, r):
        r = np.asarray(r, dtype=float)
        om = omega_window(self.w, r) + omega_window(self.w, -r)
        return q_polynomial(self.N, r.astype(complex)).real * om

    def __call__(self, r):
        return self.eval_positive(r)

    def window(self, floor: float = 1e-16):
        return self.w.G * math.sqrt(-math.log(floor)) + 2.0

    def support(self, floor: float = 1e-16):
        pad = self.window(floor)
        return [(max(0.0, self.w.T - pad), 2.0 * self.w.T + pad)]

    def hhat_smax(self):
        # erf edges of width G damp the transform like exp(-(G u)^2 / 4)
        return 12.4 / self.w.G + 0.5


def _support_edges(weight, osc_rate: float = 0.0, per_panel: float = 2.0):
    """Panel edges covering the weight support, resolving oscillation."""
    edges = []
    for (lo, hi) in weight.support():
        width = min(per_panel, math.pi / (osc_rate + 1e-9)) if osc_rate > 0 else per_panel
        width = max(width, 1e-3)
        edges.append(uniform_edges(lo, hi, width))
    return edges


def weighted_line_integral(weight, f, osc_rate: float = 0.0, n: int = 24) -> Estimate:
    """integral over r>0 of weight(r) * f(r) dr on the weight's support."""
    total = 0.0 + 0.0j
    err = 0.0
    for edges in _support_edges(weight, osc_rate):
        est = integrate_panels(lambda r: weight.eval_positive(r) * f(r), edges, n=n)
        total += est.value
        err += est.error
    return Estimate(total, err)


def h0_functional(weight, cfg: PrecisionConfig = DEFAULT) -> Estimate:
    """H0 = integral over R of r h(r) tanh(pi r) dr  (even integrand)."""
    est = weighted_line_integral(weight, lambda r: r * np.tanh(np.pi * r))
    if est.error > 1e-5 * max(abs(est.value), 1.0):
        raise QuadratureError("H0 quadrature failed to converge")
    return Estimate(2.0 * est.value.real, 2.0 * est.error)


def hhat_transform(weight, u, cfg: PrecisionConfig = DEFAULT) -> np.ndarray:
    """Hhat(u) = integral over r>0 of r h(r) tanh(pi r) cos(2 r u) dr.

    The cosine transform of the spectral weight; Gaussian-localized along
    the real axis, entire of exponential type in complex u. Vectorized and
    chunked over the u array.
    """
    u = np.atleast_1d(np.asarray(u))
    is_complex = np.iscomplexobj(u)
    out = np.zeros(u.shape, dtype=complex if is_complex else float)
    rate = 2.0 * float(np.max(np.abs(np.real(u)))) if u.size else 0.0
    for (lo, hi) in weight.support():
        width = min(2.0, math.pi / (rate + 1e-9))
        edges = uniform_edges(lo, hi, max(width, 1e-3))
        from .quadrature import panel_nodes

        nodes, wts = panel_nodes(edges, 20)
        base = np.real(np.asarray(weight.eval_positive(nodes))) \
            * nodes * np.tanh(np.pi * nodes) * wts
        chunk = max(1, int(4e6 / max(len(nodes), 1)))
        for i0 in range(0, len(u), chunk):
            blk = u[i0:i0 + chunk]
            out[i0:i0 + chunk] += np.cos(2.0 * np.outer(blk, nodes)) @ base
    return out


def phi_kernel(h, x: float, cfg: PrecisionConfig = DEFAULT) -> Estimate:
    """phi(x) = (2i/pi) integral J_{2ir}(x) h(r) r / cosh(pi r) dr.

    Real for admissible h; the imaginary part is certified below
    1e-9 |value| + 1e-12 and discarded. The reported error folds in the
    Bessel-series cancellation certificate.
    """
    vals, errs = phi_kernel_batch(h, np.asarray([x]), cfg)
    val, err = complex(vals[0]), float(errs[0])
    if abs(val.imag) > 1e-9 * abs(val) + 1e-12:
        raise PrecisionError(
            f"phi reality certification failed: Im = {val.imag:.3e} vs |phi| = {abs(val):.3e}"
        )
    return Estimate(val.real, err)


def phi_kernel_batch(h, x, cfg: PrecisionConfig = DEFAULT):
    """Vectorized phi over an array of arguments (complex values returned
    so callers can run their own reality certification)."""
    from .quadrature import panel_nodes

    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0.0) or np.any(x > 40.0):
        raise DomainError("phi_kernel requires 0 < x <= 40 (Bessel series range)")
    total = np.zeros(x.shape, dtype=complex)
    lo_total = np.zeros(x.shape, dtype=complex)
    series = np.zeros(x.shape, dtype=float)
    for (lo, hi) in h.support():
        edges = uniform_edges(lo, hi, 1.0)
        for n, acc in ((24, total), (12, lo_total)):
            nodes, wts = panel_nodes(edges, n)
            for sign in (+1.0, -1.0):
                r = sign * nodes
                jv, je = bessel_j_imag_order_arrays(r[None, :], x[:, None], cfg)
                w = np.asarray(h(r)) * r / np.cosh(np.pi * r)
                acc += (jv * w[None, :]) @ wts
                if n == 24:
                    series += (je * np.abs(w)[None, :]) @ np.abs(wts)
    vals = (2j / math.pi) * total
    errs = (2.0 / math.pi) * (np.abs(total - lo_total) + series) + 1e-15
    return vals, errs


def cosh_adaptive_edges(xmax: float, smax: float, extra_rate: float = 0.0):
    """Panels on [0, smax] resolving cos(x cosh s)-type oscillation."""
    edges = [0.0]
    s = 0.0
    while s < smax:
        step = math.pi / (xmax * math.sinh(s) + extra_rate + 1.0)
        rate = xmax * math.sinh(min(s + step, smax)) + extra_rate + 1.0
        s = min(smax, s + math.pi / rate)
        edges.append(s)
        if len(edges) > 10**6:
            raise QuadratureError("cosh-kernel panel budget exhausted")
    return np.asarray(edges)


def phi_cosh_route(weight, x, cfg: PrecisionConfig = DEFAULT) -> np.ndarray:
    """phi(x) = (8/pi^2) integral_0^inf cos(x cosh s) Hhat(s) ds.

    Exact alternative route (via the cosine kernel identity); stable for
    any x and any center, used for cross-checks and kernel tails.
    """
    from .quadrature import panel_nodes

    x = np.atleast_1d(np.asarray(x, dtype=float))
    smax = weight.hhat_smax()
    edges = cosh_adaptive_edges(float(np.max(x)), smax)
    nodes, wts = panel_nodes(edges, 12)
    hh = hhat_transform(weight, nodes, cfg)
    return (8.0 / math.pi**2) * (np.cos(np.outer(x, np.cosh(nodes))) @ (hh * wts))


def phi_hat(h, s, cfg: PrecisionConfig = DEFAULT, method: str = "auto") -> Estimate:
    """Mellin transform of phi.

    Real-line formula (0 < Re s < 3/2):
      (2^s i / pi) integral r h(r)/cosh(pi r) * G(s/2+ir)/G(1-s/2+ir) dr
    Shifted-contour formula (-1-2N < Re s < 3/2), z = c + iv:
      (2^s / (pi i)) integral_(c) z h(iz)/cos(pi z) * G(s/2+z)/G(1-s/2+z) dz
    """
    s = complex(s)
    N = h.N
    if not (-1.0 - 2.0 * N < s.real < 1.5):
        raise DomainError(f"phi_hat strip is (-1-2N, 3/2), got Re s = {s.real}")
    if method == "auto":
        method = "real_line" if s.real > 0.0 else "shifted"

    if method == "real_line":
        if not (0.0 < s.real < 1.5):
            raise DomainError("real-line formula needs 0 < Re s < 3/2")

        def f(r):
            ratio = np.exp(log_gamma(s / 2.0 + 1j * r) - log_gamma(1.0 - s / 2.0 + 1j * r))
            return r * np.asarray(h(r)) / np.cosh(np.pi * r) * ratio

        total = 0.0 + 0.0j
        err = 0.0
        for (lo, hi) in h.support():
            edges = uniform_edges(lo, hi, 1.0)
            for sign in (+1.0, -1.0):
                est = integrate_panels(lambda r: f(sign * r), edges, n=24)
                total += est.value
                err += est.error
        pref = 2.0**s * 1j / math.pi if s.imag == 0 else cmath.exp(s * math.log(2.0)) * 1j / math.pi
        return Estimate(pref * total, abs(pref) * err)

    # shifted contour: c defaults to N/2; deep-left s needs c > -Re(s)/2
    # to keep the Gamma(s/2+z) poles left of the line
    c_lo = max(N / 2.0, -s.real / 2.0 + 0.02)
    if c_lo >= N + 0.49:
        raise DomainError("no admissible contour offset c for this s")
    c = N / 2.0 if N / 2.0 >= c_lo else 0.5 * (c_lo + N + 0.5)
    if abs(c - round(c) - 0.5) < 0.05:
        c += 0.1  # stay away from the cos(pi z) zeros at half-integers

    K, G = h.K, h.G
    vwin = math.sqrt(c * c + G * G * 37.0) + 2.0

    def g(v):
        z = c + 1j * v
        ratio = np.exp(log_gamma(s / 2.0 + z) - log_gamma(1.0 - s / 2.0 + z))
        return z * np.asarray(h_eval(h, 1j * z)) / np.cos(np.pi * z) * ratio

    intervals = [(-K - vwin, -K + vwin), (K - vwin, K + vwin)]
    if intervals[0][1] >= intervals[1][0]:  # merge when the peaks overlap
        intervals = [(intervals[0][0], intervals[1][1])]
    total = 0.0 + 0.0j
    err = 0.0
    for (lo, hi) in intervals:
        edges = uniform_edges(lo, hi, 0.8)
        est = integrate_panels(g, edges, n=24)
        total += est.value
        err += est.error
    pref = cmath.exp(s * math.log(2.0)) / math.pi
    return Estimate(pref * total, abs(pref) * err)
