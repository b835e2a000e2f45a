"""Independent high-precision oracles used only by the test suite.

Everything here goes through mpmath with adaptive working precision and is
deliberately implemented from the defining series / classical asymptotic
expansions, independent of the evaluation paths in fracvolt.specfun.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np


def ml_oracle(alpha: float, z: float) -> float:
    """E_alpha(z) by high-precision Taylor summation where feasible.

    For very negative z (where the precision required by the cancelling
    series explodes) the classical asymptotic expansion with smallest-term
    truncation is used for alpha >= 0.4, where cross-validation against the
    convergent series shows it is exact to well below double precision.
    For smaller alpha the expansion carries exponentially small corrections
    that are *not* negligible (observed ~1e-5 relative at alpha=0.1, z=-2),
    so the completely-monotone spectral representation is integrated with
    mpmath tanh-sinh quadrature instead.
    """
    if z == 0.0:
        return 1.0
    y = abs(z) ** (1.0 / alpha)
    if z > 0 or y <= 350.0:
        dps = int(y / math.log(10)) + 40
        return _ml_series_mp(alpha, z, dps)
    if alpha >= 0.4:
        return _ml_asymp_mp(alpha, -z)
    return _ml_spectral_mp(alpha, -z)


def _ml_spectral_mp(alpha: float, x: float) -> float:
    """E_alpha(-x), 0 < alpha < 1, x > 0: mpmath quadrature of
    sin(a pi)/(a pi) Int_0^inf e^{-(x u)^(1/a)} / (u^2 + 2 u cos(a pi) + 1) du."""
    with mp.workdps(40):
        a = mp.mpf(alpha)
        xx = mp.mpf(x)
        ca = mp.cos(a * mp.pi)
        inva = 1 / a

        def f(u):
            return mp.e ** (-((xx * u) ** inva)) / (u * u + 2 * ca * u + 1)

        cliff = 1 / xx  # e^{-(xu)^(1/a)} transitions at u ~ 1/x
        pts = [0, cliff / 2, cliff, 2 * cliff, 4 * cliff, mp.inf]
        val = mp.quad(f, pts)
        return float(mp.sin(a * mp.pi) / (a * mp.pi) * val)


def _ml_series_mp(alpha: float, z: float, dps: int) -> float:
    with mp.workdps(dps):
        a = mp.mpf(alpha)
        za = mp.mpf(z)
        s = mp.mpf(0)
        tmax = mp.mpf(0)
        n = 0
        while True:
            t = za ** n / mp.gamma(a * n + 1)
            s += t
            tmax = max(tmax, abs(t))
            if n > 5 and abs(t) < mp.mpf(10) ** (-dps + 5) * max(tmax, abs(s)):
                break
            n += 1
            if n > 400_000:
                raise RuntimeError("series did not converge")
        return float(s)


def _ml_asymp_mp(alpha: float, x: float) -> float:
    with mp.workdps(60):
        a = mp.mpf(alpha)
        s = mp.mpf(0)
        prev = mp.inf
        for k in range(1, 400):
            t = -((mp.mpf(-x)) ** (-k)) * mp.rgamma(1 - a * k)
            if abs(t) > prev:
                break
            s += t
            if t != 0:
                prev = abs(t)
        if alpha > 1:
            th = mp.mpf(x) ** (1 / a)
            s += (2 / a) * mp.e ** (th * mp.cos(mp.pi / a)) * mp.cos(th * mp.sin(mp.pi / a))
        return float(s)


def wright_oracle(gamma: float, z: float) -> float:
    """Phi_gamma(z) by high-precision series with pole-aware stop rule."""
    c = 1.0 / (1.0 - gamma)
    b = (1.0 - gamma) * gamma ** (gamma / (1.0 - gamma))
    dps = int(2.2 * b * max(z, 1e-9) ** c / math.log(10)) + 60
    with mp.workdps(dps):
        g = mp.mpf(gamma)
        zz = mp.mpf(z)
        s = mp.mpf(0)
        tmax = mp.mpf(0)
        n = 0
        small = 0
        while True:
            t = (-zz) ** n / mp.factorial(n) * mp.rgamma(-g * n + 1 - g)
            s += t
            tmax = max(tmax, abs(t))
            if n > 10 and abs(t) < mp.mpf(10) ** (-dps + 5) * max(tmax, abs(s)):
                small += 1
                if small >= 8:
                    break
            else:
                small = 0
            n += 1
            if n > 100_000:
                raise RuntimeError("series did not converge")
        return float(s)


def rgamma_oracle(x: float) -> float:
    with mp.workdps(40):
        return float(mp.rgamma(x))


def erfc_oracle(x: float) -> float:
    with mp.workdps(40):
        return float(mp.erfc(x))


def laplace_of_wright(gamma: float, z: float) -> float:
    """Int_0^inf Phi_gamma(s) e^{-z s} ds by mpmath quadrature on the series."""
    with mp.workdps(40):
        g = mp.mpf(gamma)

        def phi(s):
            tot = mp.mpf(0)
            tmax = mp.mpf(0)
            n = 0
            small = 0
            while True:
                t = (-s) ** n / mp.factorial(n) * mp.rgamma(-g * n + 1 - g)
                tot += t
                tmax = max(tmax, abs(t))
                if n > 10 and abs(t) < mp.mpf(10) ** (-50) * max(tmax, abs(tot), mp.mpf(1)):
                    small += 1
                    if small >= 8:
                        break
                else:
                    small = 0
                n += 1
            return tot

        val = mp.quad(lambda s: phi(s) * mp.e ** (-z * s), [0, 1, 4, 12])
        return float(val)


def grid_cases_ml():
    """(alpha, z) pairs spanning all evaluation branches of mittag_leffler."""
    cases = []
    for alpha in (0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 1.05, 1.3, 1.5, 1.9):
        for z in (-200.0, -50.0, -20.0, -5.0, -2.0, -0.5, 0.0, 0.5, 2.0, 8.0):
            y = abs(z) ** (1.0 / alpha)
            if z > 0 and y > 600:
                continue  # overflow region
            cases.append((alpha, z))
    return cases


def grid_cases_wright():
    cases = []
    for gamma in (0.1, 0.3, 0.5, 0.7, 0.8, 0.9):
        c = 1.0 / (1.0 - gamma)
        b = (1.0 - gamma) * gamma ** (gamma / (1.0 - gamma))
        for z in (0.0, 0.3, 1.0, 3.0, 6.0, 10.0, 16.0):
            if b * z ** c > 500:
                continue  # value below double-precision underflow interest
            cases.append((gamma, z))
    return cases


def fractional_convolution_reference(alpha: float, f_fn, t: float) -> float:
    """Independent reference for Int_0^t g_alpha(t - tau) f(tau) dtau
    using scipy's algebraic-weight adaptive quadrature."""
    from scipy.integrate import quad
    from scipy.special import gamma as gamma_fn

    val, _ = quad(
        f_fn, 0.0, t, weight="alg", wvar=(0.0, alpha - 1.0), epsabs=1e-12, epsrel=1e-12
    )
    return val / gamma_fn(alpha)
