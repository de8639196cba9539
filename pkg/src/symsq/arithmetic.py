"""Integer arithmetic: divisor sums, Kloosterman sums, square-root counting
functions rho_q / lambda_q, the Kronecker symbol, quadratic Dirichlet
L-functions, and the Zagier series with its meromorphic continuation."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import DEFAULT, PrecisionConfig
from .errors import DomainError, PoleError, ResourceError, SymsqError
from .specfun import hurwitz_zeta, hurwitz_zeta_reg, zeta_complex

RHO_ENUMERATION_MAX = 1000      # below: brute-force count; above: CRT formula
RHO_Q_CAP = 10**6


@dataclass(frozen=True)
class BoundConstants:
    """Subconvexity exponents used only in monitored-bound reports."""

    theta: float = 1.0 / 6.0
    theta_t: float = 1.0 / 6.0
    vartheta: float = 13.0 / 84.0


@dataclass(frozen=True)
class DiscriminantDecomposition:
    """n = d0 * f^2 with d0 a fundamental discriminant (or the unit 1)."""

    n: int
    d0: int
    f: int
    is_zero: bool
    is_square: bool


@lru_cache(maxsize=200000)
def factorize(n: int):
    """Prime factorization as a tuple of (p, e); trial division."""
    n = abs(int(n))
    if n <= 1:
        return ()
    out = []
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += wheel[i]
        i = (i + 1) % 8
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def divisors(n: int):
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def sigma_v(n: int, v) -> complex:
    """sigma_v(n) = sum over divisors d of n of d^v (exact finite sum)."""
    if n < 1:
        raise DomainError("sigma_v requires n >= 1")
    v = complex(v)
    if v == 0:
        return complex(len(divisors(n)))
    return complex(sum(cmath.exp(v * math.log(d)) for d in divisors(n)))


def tau_v(n: int, v) -> complex:
    """tau_v(n) = n^(-v) sigma_{2v}(n) = sum over d1 d2 = n of (d1/d2)^v."""
    if n < 1:
        raise DomainError("tau_v requires n >= 1")
    v = complex(v)
    return complex(sum(cmath.exp(v * math.log(d * d / n)) for d in divisors(n)))


def tau_v_array(n: int, v_arr) -> np.ndarray:
    """tau_v(n) on an array of complex orders (used along quadrature lines)."""
    v_arr = np.asarray(v_arr, dtype=complex)
    logs = np.array([math.log(d * d / n) for d in divisors(n)])
    return np.sum(np.exp(np.multiply.outer(v_arr, logs)), axis=-1)


# ---------------------------------------------------------------- Kloosterman

@lru_cache(maxsize=4096)
def _units_and_inverses(c: int):
    if c == 1:
        return np.array([0]), np.array([0])
    a = np.arange(1, c)
    units = a[np.gcd(a, c) == 1]
    inv = np.array([pow(int(u), -1, c) for u in units], dtype=np.int64)
    return units.astype(np.int64), inv


def kloosterman(m: int, n: int, c: int) -> float:
    """S(m,n;c) = sum over units a mod c of e((a m + a* n)/c), a a* = 1 mod c.

    Exact real value; the imaginary part is certified below 1e-12 and
    discarded (a larger imaginary part signals an internal bug).
    """
    if c < 1:
        raise DomainError("kloosterman requires c >= 1")
    if c == 1:
        return 1.0
    units, inv = _units_and_inverses(c)
    phase = ((units * (m % c) + inv * (n % c)) % c).astype(float) / c
    s = np.sum(np.exp(2j * np.pi * phase))
    if abs(s.imag) > 1e-12 * max(1.0, len(units) / 1000.0):
        raise SymsqError(
            f"Kloosterman imaginary part {s.imag:.2e} exceeds certification threshold"
        )
    return float(s.real)


# ------------------------------------------------- square-root counting rho_q

def _count_roots_ppow(p: int, e: int, n: int) -> int:
    """#{x mod p^e : x^2 = n mod p^e}."""
    pe = p**e
    nn = n % pe
    if nn == 0:
        return p ** (e // 2)
    v = 0
    u = nn
    while u % p == 0:
        u //= p
        v += 1
    if v % 2 == 1:
        return 0
    k = e - v  # count roots of y^2 = u mod p^k, scaled by p^(v/2)
    scale = p ** (v // 2)
    if p != 2:
        leg = pow(u, (p - 1) // 2, p)
        cnt = 2 if leg == 1 else 0
        return scale * cnt
    if k == 1:
        return scale
    if k == 2:
        return scale * (2 if u % 4 == 1 else 0)
    return scale * (4 if u % 8 == 1 else 0)


def rho_q(q: int, n: int) -> int:
    """#{x mod 2q : x^2 = n mod 4q}; enumeration below 1e3, CRT above."""
    if q < 1:
        raise DomainError("rho_q requires q >= 1")
    if q > RHO_Q_CAP:
        raise ResourceError(f"rho_q capped at q <= {RHO_Q_CAP}")
    if q <= RHO_ENUMERATION_MAX:
        m4 = 4 * q
        nn = n % m4
        return int(sum(1 for x in range(2 * q) if (x * x - nn) % m4 == 0))
    # x^2 mod 4q depends on x mod 2q only, so the count is N(4q)/2 where
    # N counts solutions mod 4q; N is multiplicative over prime powers.
    total = 1
    for p, e in factorize(4 * q):
        total *= _count_roots_ppow(p, e, n)
        if total == 0:
            return 0
    return total // 2


def _lambda_ppow(p: int, e: int, n: int) -> int:
    """lambda on prime powers: sum_{c<=e} (-1)^(e-c) rho-type root counts.

    Derived from lambda_q = sum_{q1^2 q2 q3 = q} mu(q2) rho_{q3}: on p^e the
    triple factorizations give exactly one term per c with sign (-1)^(e-c).
    """
    total = 0
    sign = 1
    for c in range(e, -1, -1):
        total += sign * _rho_ppow(p, c, n)
        sign = -sign
    return total


def _rho_ppow(p: int, c: int, n: int) -> int:
    """Multiplicative piece of rho at p^c, valid for n = 0,1 mod 4:
    rho_q(n) = prod_p piece(p, e_p).  Odd p: N(p^c); p=2: N(2^(c+2))/2."""
    if c == 0:
        return 1
    if p == 2:
        return _count_roots_ppow(2, c + 2, n) // 2
    return _count_roots_ppow(p, c, n)


def lambda_q(q: int, n: int) -> int:
    """lambda_q(n) = sum over q1^2 q2 q3 = q of mu(q2) rho_{q3}(n) (exact)."""
    if q < 1:
        raise DomainError("lambda_q requires q >= 1")
    if q > RHO_Q_CAP:
        raise ResourceError(f"lambda_q capped at q <= {RHO_Q_CAP}")
    total = 0
    q1 = 1
    while q1 * q1 <= q:
        if q % (q1 * q1) == 0:
            rest = q // (q1 * q1)
            for q2 in divisors(rest):
                mu = mobius(q2)
                if mu != 0:
                    total += mu * rho_q(rest // q2, n)
        q1 += 1
    return total


# ------------------------------------------------------------ Kronecker symbol

def kronecker_symbol(d: int, n: int) -> int:
    """Extended Kronecker symbol (d|n)."""
    d = int(d)
    n = int(n)
    if n == 0:
        return 1 if d in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    # factor out 2s from n
    if n % 2 == 0:
        if d % 2 == 0:
            return 0
        while n % 2 == 0:
            n //= 2
            if d % 8 in (3, 5):
                result = -result
    # now n odd positive; Jacobi with reciprocity
    a = d % n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a = a % n
    return result if n == 1 else 0


def is_fundamental_discriminant(d: int) -> bool:
    if d == 1:
        return True
    if d == 0:
        return False
    if d % 4 == 1:
        return _is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _is_squarefree(m)
    return False


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def decompose_discriminant(n: int) -> DiscriminantDecomposition:
    """n = d0 f^2 with d0 fundamental (d0 = 1 for positive squares)."""
    if n == 0:
        return DiscriminantDecomposition(0, 0, 1, True, True)
    if n % 4 in (2, 3):
        raise DomainError("n = 2,3 mod 4 carries no discriminant decomposition")
    sq = 1
    d = 1 if n > 0 else -1
    for p, e in factorize(n):
        if e % 2 == 1:
            d *= p
        sq *= p ** (e // 2)
    if d % 4 == 1:
        d0, f = d, sq
    else:
        d0, f = 4 * d, sq // 2
    assert d0 * f * f == n
    return DiscriminantDecomposition(n, d0, f, False, n > 0 and d == 1)


# ------------------------------------------------ quadratic Dirichlet L-series

def dirichlet_l_quadratic(d0: int, s, cfg: PrecisionConfig = DEFAULT) -> complex:
    """L(s, chi_d0) via q^(-s) sum_a chi(a) zeta_H(s, a/q), q = |d0|.

    d0 = 1 returns zeta(s). Near s=1 (non-principal chi) the pole parts of
    the Hurwitz values cancel across a, so the regularized Hurwitz kernel
    is used there.
    """
    if d0 == 1:
        return complex(zeta_complex(s, cfg))
    if not is_fundamental_discriminant(d0):
        raise DomainError(f"{d0} is not a fundamental discriminant")
    s = complex(s)
    q = abs(d0)
    chi = [kronecker_symbol(d0, a) for a in range(q)]
    if abs(s - 1.0) < 0.5:
        total = sum(chi[a] * hurwitz_zeta_reg(s, a / q, cfg) for a in range(1, q) if chi[a])
    else:
        total = sum(chi[a] * hurwitz_zeta(s, a / q, cfg) for a in range(1, q) if chi[a])
    return cmath.exp(-s * math.log(q)) * total


# ------------------------------------------------------------- Zagier series

def zagier_l(n: int, s, cfg: PrecisionConfig = DEFAULT) -> complex:
    """Zagier's series L_n(s) (counts of square roots of n mod 4q).

    Routes: n=0 -> zeta(2s-1); n = 2,3 mod 4 -> exact 0; otherwise
    n = d0 f^2 and
      L_n(s) = L(s, chi_d0) * sum_{d|f} mu(d) chi_d0(d) d^(-s) sigma_{1-2s}(f/d).
    """
    s = complex(s)
    if n % 4 in (2, 3):
        return 0.0 + 0.0j
    if n == 0:
        if abs(2 * s - 1 - 1.0) < 1e-12:
            raise PoleError("L_0(s) = zeta(2s-1) pole at s=1")
        return complex(zeta_complex(2 * s - 1.0, cfg))
    dec = decompose_discriminant(n)
    if dec.d0 == 1 and abs(s - 1.0) < 1e-12:
        raise PoleError("L_n pole at s=1 for square n")
    lval = dirichlet_l_quadratic(dec.d0, s, cfg)
    fin = 0.0 + 0.0j
    for d in divisors(dec.f):
        mu = mobius(d)
        if mu == 0:
            continue
        chi = kronecker_symbol(dec.d0, d)
        if chi == 0:
            continue
        fin += mu * chi * cmath.exp(-s * math.log(d)) * sigma_v(dec.f // d, 1.0 - 2.0 * s)
    return lval * fin


def lambda_sieve(n: int, Q: int) -> np.ndarray:
    """lambda_q(n) for q = 1..Q via multiplicativity (direct-series route)."""
    if n % 4 in (2, 3):
        return np.zeros(Q + 1, dtype=np.float64)
    spf = np.zeros(Q + 1, dtype=np.int64)
    for p in range(2, Q + 1):
        if spf[p] == 0:
            spf[p::p] = np.where(spf[p::p] == 0, p, spf[p::p])
    ppow_cache: dict = {}

    def lam_ppow(p, e):
        key = (p, e)
        if key not in ppow_cache:
            ppow_cache[key] = float(_lambda_ppow(p, e, n))
        return ppow_cache[key]

    lam_vals = np.ones(Q + 1, dtype=np.float64)
    lam_vals[0] = 0.0
    for q in range(2, Q + 1):
        p = int(spf[q])
        m = q
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        lam_vals[q] = lam_vals[m] * lam_ppow(p, e)
    return lam_vals


def zagier_l_direct(n: int, s, Q: int = 100000, smoothed: bool = True) -> complex:
    """Direct-series evaluation sum_q lambda_q(n) q^(-s) for cross-checks.

    The smoothing weight (1 + 9(q/Q)^2) exp(-9(q/Q)^2) has a Mellin
    transform with no pole at w = -2, so the smoothing error is
    O(Q^(1/2 - Re s)) from the critical-strip continuation alone.
    For square n (or n=0) the series has a pole at s=1 and the smoothed
    sum picks up an extra O(Q^(1-Re s)) term; cross-checks use non-square n.
    """
    s = complex(s)
    if np.real(s) <= 1.05:
        raise DomainError("direct series route needs Re s > 1.05")
    lam = lambda_sieve(n, Q)
    q = np.arange(1, Q + 1, dtype=np.float64)
    if smoothed:
        t = 9.0 * (q / Q) ** 2
        weights = (1.0 + t) * np.exp(-t)
    else:
        weights = np.ones_like(q)
    return complex(np.sum(lam[1:] * weights * np.exp(-s * np.log(q))))


def zagier_direct_budget(n: int, s, Q: int) -> float:
    """Magnitude bound for the smoothed-series truncation error.

    Contour shift of the Mellin-smoothed sum to Re w = 1/2 - sigma gives
    c * max|L_n(1/2+it)| * Q^(1/2-sigma); the subconvexity envelope with
    a generous constant covers the n-dependence.
    """
    sigma = float(np.real(s))
    size = 8.0 * (1.0 + abs(n)) ** (1.0 / 6.0 + 0.01)
    return size * Q ** (0.5 - sigma)
