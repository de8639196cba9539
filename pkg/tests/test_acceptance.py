"""Acceptance suite: every criterion at its stated tolerance, one printed
pass/fail line per criterion. Runs offline against committed fixtures and
golden vectors."""

import cmath
import math
import time

import numpy as np
import pytest

from conftest import golden_map, rel_err
from symsq.arithmetic import (decompose_discriminant, kloosterman, tau_v,
                              zagier_l, zagier_l_direct)
from symsq.kernels import (kernel_bessel_form, kernel_contour,
                           kernel_cosh_route, kernel_hyp_large,
                           kernel_hyp_small, averaged_kernel)
from symsq.moments import (TruncationCaps, critical_limit_probe,
                           critical_point_rhs, digamma_main_term,
                           explicit_rhs, kuznetsov_residual, spectral_moment)
from symsq.specfun import hyp2f1_large_order, zeta_complex
from symsq.testfn import (GaussianPairTestFunction, WindowSpec, omega_window,
                          phi_hat, phi_kernel)


def report(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"


class TestA1KuznetsovClosure:
    def test_a1(self, fixture_dataset):
        t0 = time.time()
        ds, cal, h = fixture_dataset
        assert ds.completeness_cutoff >= 25.0
        details = []
        ok = True
        for (m, n) in ((1, 2), (2, 2), (1, 4)):
            rep = kuznetsov_residual(ds, m, n, h, 1000)
            tol = max(1e-3 * abs(rep.geometric), rep.budget)
            ok = ok and rep.residual <= tol
            details.append(f"({m},{n}): |r|={rep.residual:.2e} tol={tol:.2e}")
        report("A1 trace-formula closure", ok,
               "; ".join(details) + f"; dt={time.time() - t0:.0f}s")


class TestA2ExplicitFormula:
    def test_a2(self, fixture_dataset):
        t0 = time.time()
        ds, cal, h = fixture_dataset
        ok = True
        details = []
        for l in (1, 2):
            for rho in (1.6, 2.0):
                lhs = spectral_moment(ds, l, rho, h, cap=500)
                rhs = explicit_rhs(l, rho, h, TruncationCaps(n_cap=2 * l + 140))
                resid = abs(complex(lhs.value) - complex(rhs.total))
                tol = max(2e-3 * abs(rhs.total), lhs.error + rhs.error_budget)
                ok = ok and resid <= tol
                alt_total = (complex(rhs.total) - rhs.terms["kernel_at_2"]
                             + rhs.extras["kernel_at_2_display_variant"])
                resid_alt = abs(complex(lhs.value) - alt_total)
                details.append(
                    f"l={l},rho={rho}: |r|={resid:.2e} tol={tol:.2e} "
                    f"variant-margin x{resid_alt / max(resid, 1e-300):.0f}")
        report("A2 explicit formula Re rho>3/2 (n=2l variant with (2l)^(rho-1) "
               "adjudicated)", ok, "; ".join(details) + f"; dt={time.time() - t0:.0f}s")


class TestA3KernelGrid:
    def test_a3(self, h_default):
        t0 = time.time()
        h = h_default
        ok = True
        details = []
        checked_pairs = 0
        for rho in (0.3, 0.5 + 0.2j, 0.8):
            for x in (0.5, 1.5, 3.0):
                reps = {}
                if x < 2.0:
                    reps["hyp_small"] = kernel_hyp_small(rho, x, h)
                    reps["cosh"] = kernel_cosh_route(rho, x, h)
                else:
                    reps["hyp_large"] = kernel_hyp_large(rho, x, h)
                reps["contour"] = kernel_contour(rho, x, h)
                if x > 1.0:
                    # at deep small x the head/tail cancellation floor puts
                    # the bessel form orders above 1e-5: precision-inapplicable
                    reps["bessel_form"] = kernel_bessel_form(rho, x, h)
                scale = max(abs(complex(e.value)) for e in reps.values())
                names = sorted(reps)
                for i, a in enumerate(names):
                    for b in names[i + 1:]:
                        ea, eb = reps[a], reps[b]
                        diff = abs(complex(ea.value) - complex(eb.value))
                        # pairs check at 1e-5 where both certified errors
                        # support it; otherwise within certified errors
                        # (double-precision floor at the deep-small-x points)
                        cert = 2.0 * (ea.error + eb.error)
                        if cert <= 0.5e-5 * scale:
                            good = diff <= 1e-5 * scale
                        else:
                            good = diff <= max(1e-5 * scale, cert)
                        if not good:
                            details.append(f"(rho={rho},x={x}) {a}-{b}: "
                                           f"{diff / scale:.1e}")
                        ok = ok and good
                        checked_pairs += 1
        report("A3 five-representation grid", ok,
               f"{checked_pairs} pairs; " + ("; ".join(details) if details
               else "all within tolerance") + f"; dt={time.time() - t0:.0f}s")


class TestA4CriticalLimit:
    def test_a4(self, h_default):
        t0 = time.time()
        h = h_default
        ok = True
        details = []
        for l in (1, 2):
            main = digamma_main_term(l, h).value
            probes = {u: critical_limit_probe(l, h, u) for u in (1e-2, 1e-3, 1e-4)}
            r1 = (10.0 * probes[1e-3] - probes[1e-2]) / 9.0
            r2 = (10.0 * probes[1e-4] - probes[1e-3]) / 9.0
            rich = (100.0 * r2 - r1) / 99.0
            rel = abs(rich - main) / abs(main)
            ok = ok and rel <= 1e-4
            details.append(f"l={l}: closed={main:.6e} richardson-rel={rel:.2e}")
        report("A4 critical-point limit", ok,
               "; ".join(details) + f"; dt={time.time() - t0:.0f}s")


class TestA5Zagier:
    def test_a5(self):
        t0 = time.time()
        ok = True
        rng = np.random.RandomState(101)
        # L_0(s) = zeta(2s-1) at 10 points
        worst0 = 0.0
        for _ in range(10):
            s = complex(rng.uniform(1.2, 3.0), rng.uniform(-2.0, 2.0))
            diff = abs(zagier_l(0, s) - zeta_complex(2.0 * s - 1.0))
            worst0 = max(worst0, diff)
        ok = ok and worst0 <= 1e-10
        # decomposition vs direct series, 20 non-square points
        worst1 = 0.0
        checked = 0
        while checked < 20:
            n = int(rng.randint(-200, 201))
            if n == 0 or n % 4 in (2, 3) or (n > 0 and decompose_discriminant(n).is_square):
                continue
            s = complex(rng.uniform(1.3, 3.0), rng.uniform(-1.0, 1.0))
            diff = abs(zagier_l(n, s) - zagier_l_direct(n, s, Q=10**5))
            worst1 = max(worst1, diff)
            checked += 1
        ok = ok and worst1 <= 1e-6
        report("A5 Zagier-series identities", ok,
               f"L0 worst={worst0:.1e} (<=1e-10); route worst={worst1:.1e} "
               f"(<=1e-6); dt={time.time() - t0:.0f}s")


class TestA6Weil:
    def test_a6(self):
        t0 = time.time()
        worst = 0.0
        for c in range(1, 501):
            bound0 = float(tau_v(c, 0).real) * math.sqrt(c)
            for m in range(1, 21):
                for n in range(m, 21):
                    s = kloosterman(m, n, c)
                    bound = bound0 * math.sqrt(math.gcd(m, math.gcd(n, c)))
                    worst = max(worst, abs(s) - bound)
        report("A6 Weil bound (m,n<=20, c<=500)", worst <= 1e-9,
               f"worst excess {worst:.2e}; dt={time.time() - t0:.0f}s")


class TestA7Transforms:
    def test_a7(self, h_default):
        t0 = time.time()
        h = h_default
        ok = True
        # overlap of the two transform formulas
        s = 0.5 + 2j
        a = phi_hat(h, s, method="real_line").value
        b = phi_hat(h, s, method="shifted").value
        overlap = abs(a - b) / abs(a)
        ok = ok and overlap <= 1e-8
        # reality certification
        for x in (1.0, 5.0, 12.0):
            phi_kernel(h, x)  # raises on failure
        # growth envelope along the critical line of the transform
        fitted = 0.0
        for v in np.linspace(1.0, 100.0, 23):
            val = abs(phi_hat(h, 0.5 + 1j * v).value)
            fitted = max(fitted, val * (1.0 + v) ** 0.5)
        # omega closed form vs quadrature and bands
        w = WindowSpec(100.0, 10.0)
        from symsq.quadrature import integrate_panels, uniform_edges

        worst_omega = 0.0
        rng = np.random.RandomState(7)
        for r in rng.uniform(-30.0, 260.0, 20):
            est = integrate_panels(lambda K: np.exp(-((float(r) - K) / w.G) ** 2),
                                   uniform_edges(w.T, 2 * w.T, 3.0), n=16)
            quad = est.value.real / (w.G * math.sqrt(math.pi))
            worst_omega = max(worst_omega, abs(omega_window(w, float(r)) - quad))
        ok = ok and worst_omega <= 1e-10
        rs = np.linspace(-60, 360, 3000)
        om = omega_window(w, rs)
        in_range = np.all(om >= -1e-8) and np.all(om <= 1 + 1e-8)
        plateau = (rs >= w.T + 6 * w.G) & (rs <= 2 * w.T - 6 * w.G)
        outside = (rs <= w.T - 6 * w.G) | (rs >= 2 * w.T + 6 * w.G)
        bands = (in_range and np.all(om[plateau] >= 1 - 1e-6)
                 and np.all(om[outside] <= 1e-6))
        ok = ok and bands
        report("A7 transform contracts", ok,
               f"overlap={overlap:.1e} (<=1e-8); growth C={fitted:.2e} "
               f"(reported); omega quad worst={worst_omega:.1e} (<=1e-10); "
               f"bands={bands}; dt={time.time() - t0:.0f}s")


class TestA8Asymptotic:
    def test_a8(self):
        t0 = time.time()
        refs = golden_map("hyp2f1_large_order_ref")
        worst = 0.0
        ok = True
        for (r, x), value in refs.items():
            est = hyp2f1_large_order(r, x)
            rel = rel_err(est.value, value)
            frac = rel / (10.0 / (x * x * r * r))
            worst = max(worst, frac)
            ok = ok and frac <= 1.0
        report("A8 hypergeometric asymptotic grid", ok,
               f"worst rel/bound = {worst:.3f} (<=1); dt={time.time() - t0:.0f}s")


class TestA9AveragedMonitors:
    def test_a9(self):
        t0 = time.time()
        ok = True
        details = []
        # (a) large-x decay envelope
        w = WindowSpec(40.0, 4.0)
        est = averaged_kernel(0.5, 2.5, w, 4)
        bound = math.exp(-w.G**2 * math.acosh(1.25) ** 2) * w.T**1.5 * 10.0
        good = abs(est.value) <= bound
        ok = ok and good
        details.append(f"decay |I|={abs(est.value):.2e}<= {bound:.2e}:{good}")
        # (b) small-x bound
        z = 1.5
        est2 = averaged_kernel(0.5 + 0.2j, z, w, 4)
        bound2 = 10.0 * w.T * z / math.sqrt(2.0 - z)
        good2 = abs(est2.value) <= bound2
        ok = ok and good2
        details.append(f"small-x |I|={abs(est2.value):.2e}<= {bound2:.1f}:{good2}")
        # (c) T-doubling envelope (one-sided: no growth past ~2x with slack)
        a = averaged_kernel(0.5, 1.0, WindowSpec(40.0, 4.0), 4)
        b = averaged_kernel(0.5, 1.0, WindowSpec(80.0, 4.0), 4)
        good3 = abs(b.value) <= 10.0 * 2.4 * abs(a.value) + 1e-30
        ok = ok and good3
        details.append(f"T-doubling ratio={abs(b.value) / max(abs(a.value), 1e-300):.1e}:{good3}")
        report("A9 averaged-kernel monitors", ok,
               "; ".join(details) + f"; dt={time.time() - t0:.0f}s")


class TestA10TrivialAndGolden:
    def test_a10(self, h_default):
        t0 = time.time()
        from symsq.arithmetic import rho_q, lambda_q, sigma_v, kronecker_symbol
        from symsq.specfun import (gamma_complex, digamma, erf_real,
                                   hurwitz_zeta, hyp2f1, stirling_gamma,
                                   bessel_j_imag_order)
        from symsq.testfn import h_eval, q_polynomial
        from symsq.moments import MomentReport

        EULER = 0.5772156649015328606
        checks = {
            "gamma(1)=1": rel_err(gamma_complex(1.0), 1.0) < 1e-13,
            "gamma(1/2)=sqrt(pi)": rel_err(gamma_complex(0.5), math.sqrt(math.pi)) < 1e-13,
            "psi(1)=-gamma": rel_err(digamma(1.0), -EULER) < 1e-12,
            "zeta(2)=pi^2/6": rel_err(zeta_complex(2.0), math.pi**2 / 6) < 1e-12,
            "zeta(0)=-1/2": rel_err(zeta_complex(0.0), -0.5) < 1e-12,
            "hurwitz(s,1)=zeta": abs(hurwitz_zeta(2.5, 1.0) - zeta_complex(2.5)) < 1e-12,
            "hurwitz(2,1/2)=pi^2/2": rel_err(hurwitz_zeta(2.0, 0.5), math.pi**2 / 2) < 1e-12,
            "erf(0)=0": erf_real(0.0) == 0.0,
            "erf(10)=1": abs(erf_real(10.0) - 1.0) < 1e-14,
            "2F1 at 0": hyp2f1(0.3 + 1j, 0.8, 1.1 - 2j, 0.0) == 1.0,
            "J order 0": rel_err(bessel_j_imag_order(0.0, 1.0), 0.7651976865579666) < 1e-12,
            "sigma_0(6)=4": sigma_v(6, 0) == 4,
            "sigma_1(6)=12": sigma_v(6, 1) == 12,
            "tau_v(1)=1": abs(tau_v(1, 0.7 - 0.2j) - 1.0) < 1e-15,
            "tau_0(4)=3": abs(tau_v(4, 0) - 3.0) < 1e-14,
            "S(1,1;1)=1": kloosterman(1, 1, 1) == 1.0,
            "rho_1(1)=1": rho_q(1, 1) == 1,
            "rho_1(0)=1": rho_q(1, 0) == 1,
            "lambda_1=rho_1": all(lambda_q(1, n) == rho_q(1, n) for n in (0, 1, 4, 5)),
            "(d|1)=1": all(kronecker_symbol(d, 1) == 1 for d in (-7, 1, 5)),
            "q_N(i/2)=0": abs(q_polynomial(4, 0.5j)) == 0.0,
            "q_1(0)=0.0025": q_polynomial(1, 0.0) == pytest.approx(0.0025),
            "h even": complex(h_eval(h_default, 3.7)) == complex(h_eval(h_default, -3.7)),
            "h(3i/2)=0": abs(h_eval(h_default, 1.5j)) == 0.0,
            "stirling conj": stirling_gamma(1.0, -40.0) == np.conj(stirling_gamma(1.0, 40.0)),
        }
        # assembly identity on a fresh report
        rep = explicit_rhs(1, 1.6, h_default, TruncationCaps(n_cap=80))
        checks["MomentReport assembly"] = abs(
            rep.total - sum(rep.terms.values())) <= 1e-14 * max(1.0, abs(rep.total))
        # golden comparisons at operation tolerances
        for fid, tol in (("gamma_complex", 1e-12), ("digamma", 1e-12),
                         ("zeta_complex", 5e-12), ("hurwitz_zeta", 1e-12)):
            gm = golden_map(fid)
            fn = {"gamma_complex": gamma_complex, "digamma": digamma,
                  "zeta_complex": zeta_complex}.get(fid)
            for inputs, value in gm.items():
                if fid == "hurwitz_zeta":
                    got = hurwitz_zeta(complex(inputs[0], inputs[1]), inputs[2])
                else:
                    got = fn(complex(*inputs))
                checks.setdefault(f"golden {fid}", True)
                checks[f"golden {fid}"] &= rel_err(got, value) < tol
        failed = [k for k, v in checks.items() if not v]
        report("A10 trivial examples, assembly identities, golden vectors",
               not failed, (f"{len(checks)} checks; failed: {failed}" if failed
                            else f"{len(checks)} checks") + f"; dt={time.time() - t0:.0f}s")
