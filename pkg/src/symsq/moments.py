"""Both sides of the explicit formulas: spectral moments, the Kuznetsov
trace-formula residual, the arithmetic-side assemblies, the critical-point
formula with its limit probe, and the averaged main term."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .arithmetic import (divisors, factorize, kloosterman, tau_v,
                         tau_v_array, zagier_l)
from .config import DEFAULT, PrecisionConfig
from .errors import (CompletenessError, DataError, DomainError, PoleError,
                     QuadratureError, ResourceError, TailError)
from .kernels import KernelRequest, kernel_I, kernel_at_two
from .quadrature import Estimate, integrate_panels, panel_nodes, uniform_edges
from .specfun import digamma, digamma_array, gamma_complex, zeta_complex
from .testfn import (WindowSpec, h0_functional, h_eval, omega_window,
                     phi_hat, phi_kernel_batch)

EULER_GAMMA = 0.5772156649015328606065120900824024


@dataclass
class MaassForm:
    """One spectral datum: parameter t, normalization alpha, Hecke map."""

    t: float
    alpha: float
    hecke: Dict[int, float]
    n_max: int
    label: str = ""
    parity: str = "even"

    def __post_init__(self):
        if self.t <= 0 or self.alpha <= 0:
            raise DomainError("MaassForm requires t > 0 and alpha > 0")
        lam1 = self.hecke.get(1)
        if lam1 is None or abs(lam1 - 1.0) > 1e-9:
            raise DomainError("MaassForm requires lambda(1) = 1")


@dataclass
class SpectralDataset:
    forms: List[MaassForm]
    completeness_cutoff: float
    source: str = ""

    def __post_init__(self):
        ts = [f.t for f in self.forms]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise DomainError("forms must be sorted with strictly increasing t")
        if self.forms and self.completeness_cutoff > max(ts) + 1e-9:
            raise DomainError("completeness cutoff exceeds the data")


@dataclass
class TruncationCaps:
    n_cap: int = 0
    c_cap: int = 1000
    coeff_cap: int = 0


@dataclass
class MomentReport:
    """Itemized evaluation of one side of an explicit formula."""

    terms: Dict[str, complex]
    total: complex
    error_budget: float
    truncation_caps: TruncationCaps
    extras: Dict[str, complex] = field(default_factory=dict)

    @classmethod
    def assemble(cls, terms, error_budget, caps, extras=None):
        total = sum(terms.values())
        return cls(dict(terms), total, float(error_budget), caps, extras or {})


def hecke_identity_residuals(hecke: Dict[int, float], n_max: int,
                             pairs: Optional[List[Tuple[int, int]]] = None):
    """Residuals of lambda(m)lambda(n) = sum_{d | (m,n)} lambda(mn/d^2)."""
    if pairs is None:
        pairs = [(m, n) for m in range(2, 13) for n in range(m, 13) if m * n <= n_max]
    res = []
    for (m, n) in pairs:
        if m * n > n_max:
            continue
        lhs = hecke[m] * hecke[n]
        rhs = 0.0
        for d in divisors(math.gcd(m, n)):
            rhs += hecke[(m * n) // (d * d)]
        res.append(((m, n), lhs - rhs))
    return res


def lambda_extend(f: MaassForm, m: int) -> float:
    """lambda(m) via multiplicativity and the Hecke recursion on prime
    powers; needs lambda(p) for every prime p | m."""
    if m < 1:
        raise DomainError("lambda_extend requires m >= 1")
    if m <= f.n_max and m in f.hecke:
        return f.hecke[m]
    val = 1.0
    for p, e in factorize(m):
        pe = p**e
        if pe <= f.n_max and pe in f.hecke:
            val *= f.hecke[pe]
            continue
        if p > f.n_max or p not in f.hecke:
            raise DataError(f"prime {p} outside stored support (n_max={f.n_max})")
        lam_p = f.hecke[p]
        prev, cur = 1.0, lam_p  # lambda(p^0), lambda(p^1)
        for _ in range(e - 1):
            prev, cur = cur, lam_p * cur - prev
        val *= cur
    return val


def sym_square_l(f: MaassForm, s, cfg: PrecisionConfig = DEFAULT,
                 cap: Optional[int] = None) -> Estimate:
    """L(sym^2, s) = zeta(2s) sum lambda(n^2) n^(-s) for Re s > 1.

    The returned error is the crude envelope tail |lambda(n^2)| <=
    tau_0(n^2) n^(7/32) past the cap (no continuation is attempted here).
    """
    s = complex(s)
    if s.real <= 1.0:
        raise DomainError("sym_square_l is series-only: Re s > 1 required")
    if cap is None:
        cap = f.n_max
    if cap > f.n_max:
        raise DataError(f"cap {cap} beyond stored coefficients (n_max={f.n_max})")
    ns = np.arange(1, cap + 1)
    lam_sq = np.array([lambda_extend(f, int(n) * int(n)) for n in ns])
    series = complex(np.sum(lam_sq * np.exp(-s * np.log(ns))))
    zfac = complex(zeta_complex(2.0 * s, cfg))
    tail = _sym_sq_tail_envelope(cap, s.real) * abs(zfac)
    return Estimate(zfac * series, tail)


def _sym_sq_tail_envelope(cap: int, sigma: float) -> float:
    """sum_{n > cap} tau_0(n^2) n^(7/32 - sigma), crude monotone bound."""
    expo = 7.0 / 32.0 - sigma
    n = np.arange(cap + 1, cap + 4001)
    dens = 0.4 * np.log(n) ** 2 + 1.0  # tau_0(n^2) average envelope
    head = float(np.sum(dens * n**expo))
    N2 = cap + 4000
    integ = (0.4 * math.log(N2) ** 2 + 1.0) * N2 ** (expo + 1.0) / (-expo - 1.0)
    return head + integ


def spectral_moment(ds: SpectralDataset, l: int, rho, h, cfg: PrecisionConfig = DEFAULT,
                    cap: Optional[int] = None,
                    completeness_budget: Optional[float] = None) -> Estimate:
    """sum_j h(t_j) alpha_j lambda_j(l^2) L(sym^2 u_j, rho) over the dataset.

    The spectral tail past the completeness cutoff is bounded by the
    Gaussian decay of h times a Weyl-density envelope and folded into the
    reported error (an empty dataset returns 0 with a full-mass flag);
    CompletenessError when a budget is given and the mass exceeds it.
    """
    rho = complex(rho)
    if rho.real <= 1.0:
        raise DomainError("spectral moment needs Re rho > 1 (series L-values)")
    total = 0.0 + 0.0j
    err = 0.0
    for f in ds.forms:
        hv = complex(h_eval(h, f.t))
        if abs(hv) < 1e-300:
            continue
        lam = lambda_extend(f, l * l)
        lv = sym_square_l(f, rho, cfg, cap)
        total += hv * f.alpha * lam * lv.value
        err += abs(hv) * f.alpha * abs(lam) * lv.error
    tail = _completeness_tail(ds.completeness_cutoff, h)
    err += tail
    if completeness_budget is not None and tail > completeness_budget:
        raise CompletenessError(
            f"test-function mass {tail:.3e} beyond cutoff {ds.completeness_cutoff}")
    return Estimate(total, err)


def _completeness_tail(cutoff: float, h) -> float:
    """Weyl-density bound on the h-mass above the cutoff (alpha lambda L
    factors bounded crudely by 10)."""
    if cutoff <= 0:
        return float("inf")
    K, G = h.K, h.G
    ts = np.linspace(cutoff, cutoff + 12.0 * G + 12.0, 400)
    env = np.exp(-((ts - K) / G) ** 2) + np.exp(-((ts + K) / G) ** 2)
    dens = ts / 6.0 + 1.0
    return 10.0 * float(np.trapezoid(env * dens, ts))


def eisenstein_term(m: int, n: int, h, cfg: PrecisionConfig = DEFAULT) -> Estimate:
    """(1/pi) integral tau_ir(m) tau_ir(n) / |zeta(1+2ir)|^2 h(r) dr."""
    if m < 1 or n < 1:
        raise DomainError("eisenstein_term requires m, n >= 1")

    def f(r):
        tm = tau_v_array(m, 1j * r)
        tn = tau_v_array(n, 1j * r)
        zf = zeta_complex(1.0 + 2j * r, cfg) * zeta_complex(1.0 - 2j * r, cfg)
        return tm * tn / zf * np.asarray(h(r))

    total = 0.0 + 0.0j
    err = 0.0
    for (lo, hi) in h.support():
        edges = uniform_edges(lo, hi, 0.7)
        for sign in (+1.0, -1.0):
            est = integrate_panels(lambda r: f(sign * r), edges, n=20)
            total += est.value
            err += est.error
    if err > 1e-4 * max(abs(total), 1e-12):
        raise QuadratureError("eisenstein quadrature did not converge")
    return Estimate(total.real / math.pi, err / math.pi + abs(total.imag) / math.pi)


def phi_envelope_constant(h, cfg: PrecisionConfig = DEFAULT) -> Tuple[float, float]:
    """(C, p) with |phi(x)| <= C x^p near zero: p = 2N + 0.9 from the
    Mellin strip, C from quadrature of |phi_hat| on the line Re s = -p."""
    p = 2 * h.N + 0.8
    edges = uniform_edges(-60.0, 60.0, 2.0)
    nodes, wts = panel_nodes(edges, 8)
    vals = np.array([abs(phi_hat(h, complex(-p, v), cfg).value) for v in nodes])
    C = float(np.sum(vals * np.abs(wts))) / (2.0 * math.pi)
    return C, p


def geometric_side(m: int, n: int, h, c_max: int, cfg: PrecisionConfig = DEFAULT,
                   _phi_env_cache={}) -> Estimate:
    """delta(m,n) H0 / pi^2 + sum_{c <= c_max} S(m,n;c)/c phi(4 pi sqrt(mn)/c),
    with the Weil-bound tail of the c-sum folded into the error."""
    if c_max < 1:
        raise DomainError("c_max >= 1 required")
    x0 = 4.0 * math.pi * math.sqrt(m * n)
    if x0 > 40.0:
        raise ResourceError("4 pi sqrt(mn) beyond the Bessel series range")
    total = 0.0
    err = 0.0
    if m == n:
        h0 = h0_functional(h, cfg)
        total += h0.value / math.pi**2
        err += h0.error / math.pi**2
    cs = np.arange(1, c_max + 1)
    phis, phierrs = phi_kernel_batch(h, x0 / cs, cfg)
    svals = np.array([kloosterman(m, n, int(c)) for c in cs])
    total += float(np.sum(svals / cs * np.real(phis)))
    err += float(np.sum(np.abs(svals) / cs * (phierrs + np.abs(np.imag(phis)))))
    # tail bound: |S| <= tau_0(c) sqrt(gcd) sqrt(c), |phi(x)| <= C x^p
    key = (h.K, h.G, h.N)
    if key not in _phi_env_cache:
        _phi_env_cache[key] = phi_envelope_constant(h, cfg)
    C, p = _phi_env_cache[key]
    g = math.gcd(m, n)  # gcd(m,n,c) <= gcd(m,n)
    ctail = np.arange(c_max + 1, c_max + 20001)
    dens = 0.4 * np.log(ctail) ** 2 + 1.0
    tail = float(np.sum(dens * math.sqrt(g) * ctail**(-0.5) * C * (x0 / ctail) ** p))
    err += tail
    return Estimate(total, err)


@dataclass
class ResidualReport:
    spectral: float
    eisenstein: float
    geometric: float
    residual: float
    budget: float


def kuznetsov_residual(ds: SpectralDataset, m: int, n: int, h, c_max: int,
                       cfg: PrecisionConfig = DEFAULT) -> ResidualReport:
    """|spectral + eisenstein - geometric| for the trace formula at (m,n)."""
    spec = 0.0
    spec_err = 0.0
    for f in ds.forms:
        hv = float(np.real(h_eval(h, f.t)))
        if abs(hv) < 1e-300:
            continue
        spec += hv * f.alpha * lambda_extend(f, m) * lambda_extend(f, n)
        spec_err += abs(hv) * f.alpha * 1e-7  # coefficient precision envelope
    spec_err += _completeness_tail(ds.completeness_cutoff, h)
    eis = eisenstein_term(m, n, h, cfg)
    geo = geometric_side(m, n, h, c_max, cfg)
    resid = abs(spec + eis.value - geo.value)
    budget = spec_err + eis.error + geo.error
    return ResidualReport(spec, eis.value, geo.value, resid, budget)


# ------------------------------------------------------- explicit formulas

def continuous_term_C(l: int, rho, h, cfg: PrecisionConfig = DEFAULT) -> Estimate:
    """C(l;rho): the Eisenstein-type r-integral, continued through the
    critical strip by its residue pair when 0 < Re rho < 1."""
    rho = complex(rho)
    if not (0.0 < rho.real < 1.0 or rho.real > 1.5):
        raise DomainError("C(l;rho) evaluated for 0<Re rho<1 or Re rho>3/2 only")
    est = _c_integral(l, rho, h, cfg)
    if rho.real > 1.5:
        return est
    res = residue_pair_term(l, rho, h, cfg)
    return Estimate(est.value - res, est.error)


def _c_integral(l: int, rho, h, cfg) -> Estimate:
    rho = complex(rho)
    if abs(rho - 1.0) < 1e-10:
        raise PoleError("zeta(rho) pole at rho=1")
    l2 = l * l

    def f(r):
        t = tau_v_array(l2, 1j * r)
        num = zeta_complex(rho + 2j * r, cfg) * zeta_complex(rho - 2j * r, cfg)
        den = zeta_complex(1.0 + 2j * r, cfg) * zeta_complex(1.0 - 2j * r, cfg)
        return t * num / den * np.asarray(h(r))

    total = 0.0 + 0.0j
    err = 0.0
    for (lo, hi) in h.support():
        edges = uniform_edges(lo, hi, 0.6)
        for sign in (+1.0, -1.0):
            est = integrate_panels(lambda r: f(sign * r), edges, n=20)
            total += est.value
            err += est.error
    z = complex(zeta_complex(rho, cfg))
    return Estimate(z / math.pi * total, abs(z) / math.pi * err)


def residue_pair_term(l: int, rho, h, cfg: PrecisionConfig = DEFAULT) -> complex:
    """-2 zeta(2 rho - 1)/zeta(2 - rho) tau_{(1-rho)/2}(l^2) h((1-rho)/(2i)).

    The correction picked up when the contour continuation crosses the
    zeta(rho +- z) poles; enters the explicit formula with this sign.
    """
    rho = complex(rho)
    harg = (1.0 - rho) / 2j
    return (-2.0 * complex(zeta_complex(2.0 * rho - 1.0, cfg))
            / complex(zeta_complex(2.0 - rho, cfg))
            * tau_v(l * l, (1.0 - rho) / 2.0)
            * complex(h_eval(h, harg)))


def explicit_rhs(l: int, rho, h, caps: TruncationCaps,
                 cfg: PrecisionConfig = DEFAULT,
                 budget: float = 1e-9) -> MomentReport:
    """Arithmetic side of the explicit formula for the twisted first moment.

    Re rho > 3/2: diagonal - C + phi-hat term + a single n-sum over
    L_{n^2-4l^2}(rho) I(rho; n/l) (the n=2l summand carries n^(rho-1)
    verbatim and is itemized as kernel_at_2).
    0 < Re rho < 1: the continued assembly with the residue pair split out;
    the n=2l term keeps the (2l)^(rho-1) factor of the n-sum it came from
    (the display variant without it is recorded in extras).
    """
    rho = complex(rho)
    l = int(l)
    if l < 1:
        raise DomainError("l >= 1 required")
    if caps.n_cap < 2 * l + 10:
        raise DomainError("n_cap >= 2l + 10 required")
    in_strip = 0.0 < rho.real < 1.0
    if not (in_strip or rho.real > 1.5):
        raise DomainError("rho in (0,1) or Re rho > 3/2 required")

    terms: Dict[str, complex] = {}
    extras: Dict[str, complex] = {}
    err = 0.0

    h0 = h0_functional(h, cfg)
    terms["diagonal"] = (complex(zeta_complex(2.0 * rho, cfg)) / math.pi**2
                         * cmath.exp(-rho * math.log(l)) * h0.value)
    err += abs(terms["diagonal"]) / max(abs(h0.value), 1e-300) * h0.error

    ci = _c_integral(l, rho, h, cfg)
    terms["eisenstein"] = -ci.value
    err += ci.error
    if in_strip:
        terms["residue_pair"] = residue_pair_term(l, rho, h, cfg)

    ph = phi_hat(h, 1.0 - rho, cfg)
    terms["phi_hat_term"] = (ph.value * cmath.exp(-(1.0 - rho) * math.log(4.0 * math.pi * l))
                             * zagier_l(-4 * l * l, rho, cfg))
    err += ph.error * abs(cmath.exp(-(1.0 - rho) * math.log(4.0 * math.pi * l)))

    pref = cmath.exp((rho - 1.0) * math.log(2.0 * math.pi))
    at2 = kernel_at_two(rho, h, cfg)
    n2l_factor = cmath.exp((rho - 1.0) * math.log(2.0 * l))
    z2l1 = complex(zeta_complex(2.0 * rho - 1.0, cfg))
    terms["kernel_at_2"] = pref * n2l_factor * z2l1 * at2.value
    extras["kernel_at_2_display_variant"] = pref * z2l1 * at2.value
    err += abs(pref * n2l_factor * z2l1) * at2.error

    lo_sum = 0.0 + 0.0j
    for n in range(1, 2 * l):
        lv = zagier_l(n * n - 4 * l * l, rho, cfg)
        if lv == 0:
            continue
        est = kernel_I(KernelRequest(rho, n / l, h, "auto", cfg)) if in_strip \
            else _kernel_region_extended(rho, n / l, h, cfg)
        lo_sum += cmath.exp((rho - 1.0) * math.log(n)) * lv * est.value
        err += abs(lv) * est.error
    terms["sum_below_2l"] = pref * lo_sum

    hi_sum = 0.0 + 0.0j
    tail_seen = []
    converged = False
    n = 2 * l + 1
    while n <= caps.n_cap:
        nn = n * n - 4 * l * l
        lv = zagier_l(nn, rho, cfg)
        if lv != 0:
            est = kernel_I(KernelRequest(rho, n / l, h, "auto", cfg)) if in_strip \
                else _kernel_region_extended(rho, n / l, h, cfg)
            term = cmath.exp((rho - 1.0) * math.log(n)) * lv * est.value
            hi_sum += term
            err += abs(lv) * est.error
            tail_seen.append(abs(term))
            if len(tail_seen) >= 4 and all(t < budget / 10.0 for t in tail_seen[-3:]):
                converged = True
                break
        n += 1
    if not converged and tail_seen and tail_seen[-1] > budget:
        raise TailError(
            f"n-sum tail {tail_seen[-1]:.2e} above budget {budget:.2e} at n_cap")
    err += 3.0 * (tail_seen[-1] if tail_seen else 0.0)
    terms["sum_above_2l"] = pref * hi_sum

    caps_used = TruncationCaps(n_cap=min(n, caps.n_cap), c_cap=caps.c_cap,
                               coeff_cap=caps.coeff_cap)
    return MomentReport.assemble(terms, err, caps_used, extras)


def _kernel_region_extended(rho, x, h, cfg) -> Estimate:
    """I(rho; x) for Re rho > 3/2 via the analytically continued
    hypergeometric forms (the representation identities extend in rho)."""
    from .kernels import kernel_hyp_large, kernel_hyp_small

    x = float(x)
    if x == 2.0:
        return kernel_at_two(rho, h, cfg)
    if x > 2.0:
        return kernel_hyp_large(rho, x, h, cfg)
    return kernel_hyp_small(rho, x, h, cfg)


def digamma_main_term(l: int, h, cfg: PrecisionConfig = DEFAULT) -> Estimate:
    """(1/(pi^2 sqrt(l))) integral r h(r) tanh(pi r)
       [3/2 gamma - pi/4 - log l - 3/2 log(2 pi) + Re psi(1/4 + i r)] dr."""
    const = (1.5 * EULER_GAMMA - math.pi / 4.0 - math.log(l)
             - 1.5 * math.log(2.0 * math.pi))

    def f(r):
        ps = np.real(digamma_array(0.25 + 1j * r))  # (psi(1/4+ir)+psi(1/4-ir))/2
        return r * np.tanh(np.pi * r) * (const + ps) * np.asarray(h(r))

    total = 0.0
    err = 0.0
    for (lo, hi) in h.support():
        edges = uniform_edges(lo, hi, 0.8)
        est = integrate_panels(f, edges, n=20)
        total += 2.0 * est.value.real  # even integrand
        err += 2.0 * est.error
    pref = 1.0 / (math.pi**2 * math.sqrt(l))
    return Estimate(pref * total, pref * err)


def critical_point_rhs(l: int, h, cfg: PrecisionConfig = DEFAULT,
                       n_cap: Optional[int] = None) -> MomentReport:
    """Arithmetic side of the critical-point explicit formula (rho = 1/2)."""
    l = int(l)
    if l < 1:
        raise DomainError("l >= 1 required")
    if n_cap is None:
        n_cap = 2 * l + 60
    terms: Dict[str, complex] = {}
    err = 0.0

    main = digamma_main_term(l, h, cfg)
    terms["diagonal"] = main.value
    err += main.error

    ci = _c_integral(l, 0.5, h, cfg)
    terms["eisenstein"] = -ci.value
    err += ci.error

    # -2 zeta(0)/zeta(3/2) tau_{1/4}(l^2) h(1/(4i))
    terms["residue_pair"] = (-2.0 * complex(zeta_complex(0.0, cfg))
                             / complex(zeta_complex(1.5, cfg))
                             * tau_v(l * l, 0.25) * complex(h_eval(h, 0.25 / 1j)))

    ph = phi_hat(h, 0.5, cfg)
    terms["phi_hat_term"] = (ph.value / math.sqrt(4.0 * math.pi * l)
                             * zagier_l(-4 * l * l, 0.5, cfg))
    err += ph.error / math.sqrt(4.0 * math.pi * l)

    pref = (2.0 * math.pi) ** (-0.5)
    lo_sum = 0.0 + 0.0j
    for n in range(1, 2 * l):
        lv = zagier_l(n * n - 4 * l * l, 0.5, cfg)
        if lv == 0:
            continue
        est = kernel_I(KernelRequest(0.5, n / l, h, "auto", cfg))
        lo_sum += lv * est.value / math.sqrt(n)
        err += abs(lv) * est.error
    terms["sum_below_2l"] = pref * lo_sum

    hi_sum = 0.0 + 0.0j
    tail_seen = []
    for n in range(2 * l + 1, n_cap + 1):
        lv = zagier_l(n * n - 4 * l * l, 0.5, cfg)
        if lv == 0:
            continue
        est = kernel_I(KernelRequest(0.5, n / l, h, "auto", cfg))
        term = lv * est.value / math.sqrt(n)
        hi_sum += term
        err += abs(lv) * est.error
        tail_seen.append(abs(term))
        if len(tail_seen) >= 4 and all(t < 1e-11 for t in tail_seen[-3:]):
            break
    err += 3.0 * (tail_seen[-1] if tail_seen else 0.0)
    terms["sum_above_2l"] = pref * hi_sum

    return MomentReport.assemble(terms, err, TruncationCaps(n_cap=n_cap))


def critical_limit_probe(l: int, h, u: float, cfg: PrecisionConfig = DEFAULT) -> complex:
    """The bracket whose u -> 0 limit is the digamma main term:

    zeta(1+2u)/(pi^2 l^(1/2+u)) H0 + zeta(2u) Gamma(u)
      * 2i/(pi^(2-u) (2l)^(1/2-u)) * integral r h(r)/cosh(pi r)
        sin(pi(1/4+u/2-ir)) G(1/4-u/2+ir)G(3/4-u/2+ir)
                             /(G(1/4+u/2+ir)G(3/4+u/2+ir)) dr.
    """
    if not (0.0 < abs(u) <= 0.05):
        raise DomainError("probe expects 0 < |u| <= 0.05")
    l = int(l)
    h0 = h0_functional(h, cfg)
    a_term = (complex(zeta_complex(1.0 + 2.0 * u, cfg)) / math.pi**2
              * math.exp(-(0.5 + u) * math.log(l)) * h0.value)

    from .specfun import log_gamma

    def f(r):
        r = np.asarray(r, dtype=float)
        stable = (np.sin(np.pi * (0.25 + u / 2.0))
                  - 1j * np.cos(np.pi * (0.25 + u / 2.0)) * np.tanh(np.pi * r))
        lg = (log_gamma(0.25 - u / 2.0 + 1j * r) + log_gamma(0.75 - u / 2.0 + 1j * r)
              - log_gamma(0.25 + u / 2.0 + 1j * r) - log_gamma(0.75 + u / 2.0 + 1j * r))
        return r * np.asarray(h(r)) * stable * np.exp(lg)

    total = 0.0 + 0.0j
    for (lo, hi) in h.support():
        edges = uniform_edges(lo, hi, 0.8)
        for sign in (+1.0, -1.0):
            total += integrate_panels(lambda r: f(sign * r), edges, n=24).value
    b_term = (complex(zeta_complex(2.0 * u, cfg)) * gamma_complex(u)
              * 2j / (math.pi ** (2.0 - u) * (2.0 * l) ** (0.5 - u)) * total)
    return complex(a_term + b_term)


def main_term_MT(w: WindowSpec, l: int, t: float, cfg: PrecisionConfig = DEFAULT) -> Estimate:
    """Averaged main term at s = 1/2 + it: the two r-integrals against
    omega_T(r) + omega_T(-r) (evaluated verbatim from its display)."""
    s = 0.5 + 1j * t
    l = int(l)
    pad = w.G * math.sqrt(-math.log(1e-16)) + 2.0
    lo, hi = w.T - pad, 2.0 * w.T + pad

    def wgt(r):
        return omega_window(w, r) + omega_window(w, -r)

    def f1(r):
        return r * wgt(r) * np.tanh(np.pi * r)

    from .specfun import log_gamma

    def f2(r):
        stable = (np.sin(np.pi * s / 2.0)
                  - 1j * np.cos(np.pi * s / 2.0) * np.tanh(np.pi * r))
        lg = (log_gamma(0.5 - s / 2.0 + 1j * r) + log_gamma(1.0 - s / 2.0 + 1j * r)
              - log_gamma(s / 2.0 + 1j * r) - log_gamma(0.5 + s / 2.0 + 1j * r))
        return r * wgt(r) * stable * np.exp(lg)

    edges = uniform_edges(lo, hi, 1.5)
    i1 = 0.0 + 0.0j
    i2 = 0.0 + 0.0j
    err = 0.0
    for sign in (+1.0, -1.0):
        e1 = integrate_panels(lambda r: f1(sign * r), edges, n=20)
        e2 = integrate_panels(lambda r: f2(sign * r), edges, n=20)
        i1 += e1.value
        i2 += e2.value
        err += e1.error + e2.error
    val = (complex(zeta_complex(2.0 * s, cfg)) / (math.pi**2) * cmath.exp(-s * math.log(l)) * i1
           + cmath.exp((s - 1.0) * math.log(2.0 * math.pi))
           * complex(zeta_complex(2.0 * s - 1.0, cfg)) * gamma_complex(s - 0.5)
           * cmath.exp((2.0 - s) * math.log(2.0)) * 1j / math.pi**1.5 * i2)
    return Estimate(val, err * (1.0 + abs(val)))
