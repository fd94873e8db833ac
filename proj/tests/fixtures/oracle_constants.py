#!/usr/bin/env python3
# Copyright The malacert Authors.
# SPDX-License-Identifier: Apache-2.0
"""Arbitrary-precision reference evaluation of the certificate constant chains.

Regenerates the golden JSON fixtures consumed by the C++ tests:

    python3 oracle_constants.py            # writes *.golden.json next to this file

Everything is evaluated with mpmath at 60 digits, directly from the closed
forms, without sharing any code with the C++ library.
"""
import json
import os

from mpmath import mp, mpf, sqrt, log, log1p, exp, e, erfc, inf

mp.dps = 60

TWO = mpf(2)


def c1(gb, L, M):
    gb, L, M = mpf(gb), mpf(L), mpf(M)
    inner = max(mpf(1), sqrt(gb), gb * L, (gb * L ** (mpf(4) / 3)) ** (mpf(3) / 2))
    return 2 * max(sqrt(2) * M, sqrt(gb) * M * L, 2 * L ** 2 * inner)


def c2(gb, L, m):
    eps = (m ** 3 / 16) / (sqrt(2) * L ** 2 + TWO ** (-1.5) * sqrt(gb) * L ** 3)
    return 2 * L + sqrt(2) * L ** 2 / eps + gb / 2 * L ** 2 + TWO ** (-1.5) * gb ** 1.5 * L ** 3 / eps


def c2_beta(gb, L, Lb, mb):
    eps = (mb ** 3 / 16) / (TWO ** 1.5 * Lb ** 2 + TWO ** (-0.5) * sqrt(gb) * Lb ** 3)
    return 2 * L + TWO ** 1.5 * Lb ** 2 / eps + gb / 2 * L ** 2 + TWO ** (-0.5) * gb ** 1.5 * Lb ** 3 / eps


def log_eps_of_K(K, L):
    t = sqrt(1 + 1 / L) * sqrt(3 * L) * K
    return log(erfc(t / sqrt(2)))  # 2 * Phi(-t) = erfc(t / sqrt 2)


def logsumexp(*xs):
    xs = [x for x in xs if x != -inf]
    hi = max(xs)
    return hi + log(sum(exp(x - hi) for x in xs))


def rate_chain(log_lambda, log_b, log_gb, eta, log_eps):
    """Shared tail: M, K, rho, C from the drift/minorization outputs."""
    lam = exp(log_lambda)
    log_M = max(log(4) + log_b + log(1 + exp(log_gb)) - log(1 - lam), mpf(0))
    eps = exp(log_eps)
    lam_bar = lam + (1 - lam) / 2
    log_bbar = logsumexp(log_lambda + log_b, log_M)
    a = -log1p(-eps / 2)
    c = -log1p(-(1 - lam) / 2)
    neg_log_rho = a * c / (a + c + log_bbar)
    log_C = neg_log_rho + log(lam + 1) + log(1 + exp(log_bbar) / ((1 - eps / 2) * ((1 - lam) / 2)))
    return log_M, log_bbar, neg_log_rho, log_C


def gaussian_like_a3(L, M, m, K, d, ups=1, ups_t=1, gamma_bar=None):
    L, M, m, K = mpf(L), mpf(M), mpf(m), mpf(K)
    eta = m / 16
    Kt = 2 * K * (1 + L / m)
    KU = max(Kt, 4 * sqrt(d / m))
    G_half = min(mpf(ups), m ** 3 / (4 * L ** 4), mpf(1) / d)
    C2h = c2(G_half, L, m)
    b_half = C2h * d + TWO ** 7 / e
    K_half = max(mpf(16), 2 * K, KU, Kt)
    KM = max(K_half, 4 * sqrt(b_half) / sqrt(m * eta))
    Gamma = min(G_half, m ** 3 / (4 * L ** 4), mpf(1) / d, 4 / (m * eta * KM ** 2))
    varpi = eta * m * KM ** 2 / 16

    def log_bU(gb):
        S = m / 4 + (1 + 16 * eta * gb) * (4 * eta + 2 * L + gb * L ** 2)
        return log(eta * S * KU ** 2 + 4 * eta * d) + gb * eta * S * KU ** 2 + 4 * eta * gb * d

    def log_bM(log_gb):
        gb = exp(log_gb)
        return logsumexp(log_bU(gb),
                         log(eta * m * KM ** 2 / 16) + eta * KM ** 2,
                         log(c1(gb, L, M)) + log_gb / 2 + log(d + sqrt(3) * d ** 2 + KM ** 2))

    def tilde_b(gb):
        return 2 * d + max(Kt, 2 * sqrt(2 * d / m)) ** 2 * (gb * L ** 2 + 2 * L + m / 2)

    def log_gamma_tilde(K_):
        gh = min(mpf(ups_t), m / (4 * L ** 2))
        den = 2 * c1(gh, L, M) * (d + sqrt(3) * d ** 2 + K_ ** 2 + 2 * tilde_b(gh) / m)
        return min(log(gh), 2 * (log_eps_of_K(K_, L) - log(den)))

    log_lambda = -varpi
    log_M_G = max(log(4) + log_bM(log(Gamma)) + log(1 + Gamma) - log(1 - exp(log_lambda)), mpf(0))
    K_G = sqrt(log_M_G / eta)
    log_Gbar = min(log(Gamma), log_gamma_tilde(K_G))
    log_gb = log_Gbar if gamma_bar is None else log(mpf(gamma_bar))
    log_b = log_bM(log_gb)
    log_M = max(log(4) + log_b + log(1 + exp(log_gb)) - log(1 - exp(log_lambda)), mpf(0))
    K_gb = sqrt(log_M / eta)
    log_eps = log_eps_of_K(K_gb, L)
    log_M2, log_bbar, nlr, log_C = rate_chain(log_lambda, log_b, log_gb, eta, log_eps)
    assert abs(log_M2 - log_M) < mpf(10) ** -40
    return {
        "eta": eta, "K_tilde": Kt, "K_U": KU, "Gamma_half": G_half, "C2_Gamma_half": C2h,
        "b_half": b_half, "K_half": K_half, "K_M": KM, "Gamma": Gamma, "varpi": varpi,
        "log_b_U_at_Gamma": log_bU(Gamma), "log_b_M_at_Gamma": log_bM(log(Gamma)),
        "log_M_Gamma": log_M_G, "K_Gamma": K_G, "log_gamma_bar": log_Gbar if gamma_bar is None else log_gb,
        "log_Gamma_bar": log_Gbar,
        "log_lambda": log_lambda, "log_b_M": log_b, "log_M": log_M, "K_gamma_bar": K_gb,
        "log_epsilon": log_eps, "log_b_bar": log_bbar, "log_neg_log_rho": log(nlr),
        "log_C": log_C, "log_A_bar": log_b - log(varpi),
        "log_gamma_tilde_K4": log_gamma_tilde(mpf(4)),
        "C1_Gamma": c1(Gamma, L, M),
    }


def beta_chain(beta, mb, Lb, Kb, L, M, d, ups_b=1, ups_h=1, gamma_bar=None):
    beta, mb, Lb, Kb, L, M = map(mpf, (beta, mb, Lb, Kb, L, M))
    eta = mb / 32
    base = 4 * Kb * (1 + L / mb)
    Kt = max(base, base ** (1 / (1 - beta)))
    kb = 2 * L * Kb / Lb
    Kbar = max(kb, kb ** (1 / (1 - 3 * beta / 4)))
    Kray = max(mpf(1), Kbar, Kt, (32 * d / mb) ** (1 / (2 - beta)))

    def log_b_ula(gb):
        A = L * (1 + L / 2) * Kray ** 2 + d + eta
        return log(eta * A + mb * eta * sqrt(1 + Kray ** 2) / (16 * (1 + Kray ** beta))) + gb * eta * A

    G_half = min(mpf(ups_b), mb ** 3 / (32 * Lb ** 4), 1 / mpf(8 * d))
    C2h = c2_beta(G_half, L, Lb, mb)
    bt_half = C2h * d + TWO ** 7 / e
    K_half = max(mpf(1), 2 * Kb, Kray, 2 * Kt, Kbar)
    Ktr = max(K_half, (2 ** 7 * bt_half / (eta * mb)) ** (1 / (1 - beta)))
    Gamma = min(G_half, 32 / (mb * eta * Ktr ** (1 - beta)))
    varpi = eta * mb * Ktr ** (1 - beta) / 2 ** 7

    def log_bM(log_gb):
        gb = exp(log_gb)
        return logsumexp(log_b_ula(gb),
                         log(eta * mb * Ktr ** (1 - beta) / 2 ** 7) + eta * sqrt(1 + Ktr ** 2),
                         log(c1(gb, L, M)) + log_gb / 2 + log(d + sqrt(3) * d ** 2 + Ktr ** 2))

    def radius(log_M):
        ell = log_M / eta
        return sqrt(max(ell ** 2 - 1, mpf(0)))

    def log_gamma_hat(K_):
        gh = min(mpf(ups_h), 1 / L)
        Lg = 2 * L + gh * L ** 2
        den = 2 * c1(gh, L, M) * (d + sqrt(3) * d ** 2 + exp(Lg) * (K_ ** 2 + 2 * d))
        return min(log(gh), 2 * (log_eps_of_K(K_, L) - log(den)))

    log_lambda = -varpi
    log_M_G = max(log(4) + log_bM(log(Gamma)) + log(1 + Gamma) - log(1 - exp(log_lambda)), mpf(0))
    K_G = radius(log_M_G)
    log_Gbar = min(log(Gamma), log_gamma_hat(K_G))
    log_gb = log_Gbar if gamma_bar is None else log(mpf(gamma_bar))
    log_b = log_bM(log_gb)
    log_M = max(log(4) + log_b + log(1 + exp(log_gb)) - log(1 - exp(log_lambda)), mpf(0))
    K_gb = radius(log_M)
    log_eps = log_eps_of_K(K_gb, L)
    _, log_bbar, nlr, log_C = rate_chain(log_lambda, log_b, log_gb, eta, log_eps)
    return {
        "eta": eta, "K_tilde_beta": Kt, "K_bar_beta": Kbar, "K_ray_beta": Kray,
        "log_b_beta_at_Gamma": log_b_ula(Gamma), "Gamma_half_beta": G_half,
        "C2_beta_Gamma_half": C2h, "b_half_beta": bt_half, "K_tilde_ray": Ktr,
        "Gamma_beta": Gamma, "varpi_beta": varpi, "log_b_M_at_Gamma": log_bM(log(Gamma)),
        "log_M_Gamma": log_M_G, "K_Gamma": K_G, "log_Gamma_bar": log_Gbar,
        "log_gamma_bar": log_gb, "log_lambda": log_lambda, "log_b_M": log_b, "log_M": log_M,
        "K_gamma_bar": K_gb, "log_epsilon": log_eps, "log_b_bar": log_bbar,
        "log_neg_log_rho": log(nlr), "log_C": log_C, "log_A_bar": log_b - log(varpi),
        "log_gamma_hat_K4": log_gamma_hat(mpf(4)),
    }


def dump(path, inputs, values):
    out = {"inputs": inputs, "values": {k: float(v) for k, v in values.items()},
           "values_str": {k: mp.nstr(v, 30) for k, v in values.items()}}
    with open(path, "w") as f:
        json.dump(out, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    here = os.path.dirname(os.path.abspath(__file__))
    g_in = {"L": 1.0, "M": 0.0, "m": 1.0, "K": 0.0, "d": 1}
    dump(os.path.join(here, "gaussian_d1.golden.json"), g_in,
         gaussian_like_a3(g_in["L"], g_in["M"], g_in["m"], g_in["K"], g_in["d"]))
    b_in = {"beta": 0.5, "m_beta": 0.495, "L_beta": 1.7, "K_beta": 0.0, "L": 1.0, "M": 0.5, "d": 2}
    dump(os.path.join(here, "beta_tail_b05_d2.golden.json"), b_in,
         beta_chain(b_in["beta"], b_in["m_beta"], b_in["L_beta"], b_in["K_beta"],
                    b_in["L"], b_in["M"], b_in["d"]))
    # Sanity: hand-computable anchors.
    assert abs(c2(mpf("0.25"), mpf(1), mpf(1)) - mpf("39.25")) < mpf(10) ** -50
    assert c1(1, 1, 0) == 4
