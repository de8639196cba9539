import cmath
import math

import numpy as np
import pytest

from conftest import golden_map, rel_err
from symsq.arithmetic import (BoundConstants, decompose_discriminant,
                              dirichlet_l_quadratic, factorize, kloosterman,
                              kronecker_symbol, lambda_q, lambda_sieve, rho_q,
                              sigma_v, tau_v, zagier_direct_budget, zagier_l,
                              zagier_l_direct)
from symsq.errors import DomainError, PoleError, ResourceError
from symsq.specfun import zeta_complex


class TestDivisorSums:
    def test_sigma_counts(self):
        assert sigma_v(6, 0) == 4
        assert sigma_v(6, 1) == 12

    def test_sigma_complex(self):
        v = 2j
        expected = 1 + cmath.exp(v * math.log(2)) + cmath.exp(v * math.log(4))
        assert abs(sigma_v(4, v) - expected) < 1e-14

    def test_tau_basics(self):
        for v in (0.0, 1.3, 2j, 0.7 - 0.2j):
            assert abs(tau_v(1, v) - 1.0) < 1e-15
        assert abs(tau_v(4, 0) - 3.0) < 1e-14

    def test_tau_symmetry(self):
        rng = np.random.RandomState(5)
        for _ in range(30):
            n = int(rng.randint(1, 500))
            v = complex(rng.uniform(-2, 2), rng.uniform(-3, 3))
            assert abs(tau_v(n, v) - tau_v(n, -v)) < 1e-12 * (1 + abs(tau_v(n, v)))

    def test_tau_dirichlet_series_identity(self):
        # sum tau_ir(n^2)/n^s = zeta(s)zeta(s+2ir)zeta(s-2ir)/zeta(2s)
        s, r = 3.0, 1.0
        total = sum(tau_v(n * n, 1j * r) / n**s for n in range(1, 10**4 + 1))
        rhs = (zeta_complex(s) * zeta_complex(s + 2j * r) * zeta_complex(s - 2j * r)
               / zeta_complex(2 * s))
        assert abs(total - rhs) < 1e-8


class TestKloosterman:
    def test_trivial_modulus(self):
        assert kloosterman(1, 1, 1) == 1.0

    def test_c3(self):
        assert abs(kloosterman(1, 1, 3) - (-1.0)) < 1e-12

    def test_weil_bound_sample(self):
        for m in range(1, 8):
            for n in range(1, 8):
                for c in range(1, 120):
                    s = kloosterman(m, n, c)
                    bound = (tau_v(c, 0).real
                             * math.sqrt(math.gcd(m, math.gcd(n, c)) * c))
                    assert abs(s) <= bound + 1e-9

    def test_twisted_multiplicativity(self):
        # S(m,n;c1 c2) = S(c2* m, c2* n; c1) S(c1* m, c1* n; c2), (c1,c2)=1
        for (c1, c2) in [(5, 7), (4, 9), (8, 15), (11, 13), (3, 25)]:
            c2b = pow(c2, -1, c1)
            c1b = pow(c1, -1, c2)
            for (m, n) in [(1, 1), (1, 2), (3, 4), (2, 5)]:
                lhs = kloosterman(m, n, c1 * c2)
                rhs = (kloosterman(c2b * m, c2b * n, c1)
                       * kloosterman(c1b * m, c1b * n, c2))
                assert abs(lhs - rhs) < 1e-7 * (1 + abs(lhs))


class TestRhoLambda:
    def test_rho_basics(self):
        assert rho_q(1, 1) == 1
        assert rho_q(1, 0) == 1

    def test_rho_vanishes_2_3_mod_4(self):
        for q in range(1, 51):
            for n in (2, 3, 6, 7, -2, -5):
                if n % 4 in (2, 3):
                    assert rho_q(q, n) == 0

    def test_rho_crt_matches_enumeration(self):
        rng = np.random.RandomState(11)
        from symsq.arithmetic import _count_roots_ppow

        for _ in range(200):
            q = int(rng.randint(1, 1000))
            n = int(rng.randint(-300, 300))
            enum = rho_q(q, n)
            if n % 4 in (2, 3):
                assert enum == 0
                continue
            total = 1
            for p, e in factorize(4 * q):
                total *= _count_roots_ppow(p, e, n)
            assert enum == total // 2

    def test_rho_cap(self):
        with pytest.raises(ResourceError):
            rho_q(10**6 + 1, 1)

    def test_lambda_1(self):
        for n in (0, 1, 4, 5):
            assert lambda_q(1, n) == rho_q(1, n)

    def test_lambda_4_5_direct_expansion(self):
        # direct triple-factorization sum over q1^2 q2 q3 = 4
        from symsq.arithmetic import mobius

        total = 0
        for q1 in (1, 2):
            rest = 4 // (q1 * q1)
            for q2 in [d for d in (1, 2, 4) if rest % d == 0]:
                q3 = rest // q2
                total += mobius(q2) * rho_q(q3, 5)
        assert lambda_q(4, 5) == total

    def test_lambda_sieve_matches(self):
        lam = lambda_sieve(-3, 300)
        for q in range(1, 301):
            assert lam[q] == lambda_q(q, -3)

    def test_lambda_rho_series_identity(self):
        # sum lambda_q(1)/q^s = zeta(2s)/zeta(s) * sum rho_q(1)/q^s at s=3
        s = 3.0
        lam = lambda_sieve(1, 10**4)
        lhs = float(np.sum(lam[1:] * np.arange(1, 10**4 + 1, dtype=float) ** (-s)))
        rho_vals = np.array([rho_q(q, 1) for q in range(1, 10**5 + 1)])
        rhs_sum = float(np.sum(rho_vals * np.arange(1, 10**5 + 1, dtype=float) ** (-s)))
        rhs = complex(zeta_complex(2 * s) / zeta_complex(s)) * rhs_sum
        assert abs(lhs - rhs) < 1e-8


class TestKronecker:
    def test_unit_denominator(self):
        for d in (-7, -1, 1, 5, 12):
            assert kronecker_symbol(d, 1) == 1

    def test_periodic_legendre_5(self):
        legendre = {1: 1, 2: -1, 3: -1, 4: 1, 0: 0}
        for n in range(1, 60):
            assert kronecker_symbol(5, n) == legendre[n % 5]

    def test_minus4_at_3(self):
        assert kronecker_symbol(-4, 3) == -1

    def test_quadratic_residue_consistency(self):
        # (d|p) for odd prime p agrees with Euler's criterion
        rng = np.random.RandomState(3)
        for p in (3, 7, 11, 101, 997):
            for _ in range(10):
                d = int(rng.randint(-400, 400))
                if d % p == 0:
                    assert kronecker_symbol(d, p) == 0
                    continue
                euler = pow(d % p, (p - 1) // 2, p)
                expected = 1 if euler == 1 else -1
                assert kronecker_symbol(d, p) == expected


class TestDirichletL:
    def test_principal_reduction(self):
        assert abs(dirichlet_l_quadratic(1, 2.0) - zeta_complex(2.0)) < 1e-12

    def test_leibniz(self):
        got = dirichlet_l_quadratic(-4, 1.0)
        assert abs(got - math.pi / 4.0) < 1e-10

    def test_golden(self):
        for inputs, value in golden_map("dirichlet_l_quadratic").items():
            d0, sr, si = inputs
            got = dirichlet_l_quadratic(int(d0), complex(sr, si))
            assert rel_err(got, value) < 1e-11

    def test_non_fundamental_rejected(self):
        with pytest.raises(DomainError):
            dirichlet_l_quadratic(20, 2.0)  # 20 = 4*5 with 5 = 1 mod 4


class TestZagier:
    def test_zero_subscript_is_shifted_zeta(self):
        for s in (2.0, 1.3 + 0.5j, 2.5 - 1j):
            assert abs(zagier_l(0, s) - zeta_complex(2 * s - 1)) < 1e-12

    def test_vanishing_classes(self):
        for n in (6, -2, 7, 3, -13):
            if n % 4 in (2, 3):
                assert zagier_l(n, 2.2) == 0

    def test_decomposition_examples(self):
        assert decompose_discriminant(-4).d0 == -4
        assert decompose_discriminant(-16).f == 2
        dec = decompose_discriminant(9)
        assert dec.d0 == 1 and dec.f == 3 and dec.is_square

    def test_decomposition_vs_direct_series(self):
        got = zagier_l(5, 2.0)
        direct = zagier_l_direct(5, 2.0, Q=10**5)
        assert abs(got - direct) < 1e-6

    def test_consistency_random_points(self):
        rng = np.random.RandomState(23)
        checked = 0
        while checked < 20:
            n = int(rng.randint(-200, 201))
            if n == 0 or n % 4 in (2, 3):
                continue
            dec = decompose_discriminant(n)
            if dec.is_square:
                continue  # direct smoothed series meets the zeta pole there
            s = complex(rng.uniform(1.3, 3.0), rng.uniform(-1.0, 1.0))
            a = zagier_l(n, s)
            b = zagier_l_direct(n, s, Q=10**5)
            assert abs(a - b) < 1e-6, (n, s, abs(a - b))
            checked += 1

    def test_pole_for_square_subscript(self):
        with pytest.raises(PoleError):
            zagier_l(9, 1.0)

    def test_subconvexity_monitor(self):
        # |L_n(1/2+it)| <= C |n|^(1/6+0.01) (1+|t|)^(1/6+0.01), fitted C
        bc = BoundConstants()
        rng = np.random.RandomState(9)
        worst = 0.0
        for _ in range(40):
            n = int(rng.randint(-10**4, 10**4))
            if n == 0 or n % 4 in (2, 3):
                continue
            t = float(rng.choice([0.0, 5.0, 50.0]))
            val = abs(zagier_l(n, 0.5 + 1j * t))
            env = (abs(n) ** (bc.theta + 0.01)) * (1.0 + abs(t)) ** (bc.theta_t + 0.01)
            worst = max(worst, val / env)
        assert worst <= 50.0


def test_bound_constants_frozen():
    bc = BoundConstants()
    assert bc.theta == pytest.approx(1.0 / 6.0)
    assert bc.theta_t == pytest.approx(1.0 / 6.0)
    assert bc.vartheta == pytest.approx(13.0 / 84.0)
