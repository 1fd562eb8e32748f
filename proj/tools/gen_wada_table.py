#!/usr/bin/env python3
# Copyright 2026 The TTSDS Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the WADA-SNR lookup table in include/ttsds/wada_snr.hpp.

Clean speech amplitude is Gamma(shape=0.4) with a random sign and unit power;
noise is N(0, sigma^2) with sigma^2 = 10^(-snr/10). For each integer SNR in
[-20, 100] dB the table holds G = log E|z| - E log|z| with z = speech + noise.
"""
import math

import numpy as np

from scipy import integrate, special, stats

SHAPE = 0.4
SCALE = 1.0 / math.sqrt(SHAPE * (SHAPE + 1.0))  # E[x^2] = 1


def log_abs_shifted_normal(m):
    """E log|m + Z| for Z ~ N(0, 1).

    (m + Z)^2 is noncentral chi-square with one degree of freedom, a
    Poisson(m^2 / 2) mixture of central chi-square(1 + 2j) variables, and
    E log chi-square(k) = log 2 + digamma(k / 2).
    """
    lam = 0.5 * m * m
    if lam > 5000.0:
        return math.log(m) - 1.0 / (2 * m * m) - 3.0 / (4 * m ** 4)
    hi = int(lam + 40.0 * math.sqrt(lam + 1.0) + 40)
    j = np.arange(hi + 1)
    weights = stats.poisson.pmf(j, lam)
    return 0.5 * (math.log(2.0) + float(np.dot(weights, special.digamma(0.5 + j))))


def folded_normal_mean(mu, sigma):
    return sigma * math.sqrt(2 / math.pi) * math.exp(-mu * mu / (2 * sigma * sigma)) + \
        mu * (1 - 2 * stats.norm.cdf(-mu / sigma))


def g_value(snr_db):
    sigma = math.sqrt(10.0 ** (-snr_db / 10.0))
    # Substitute g = u^(1/shape) to remove the g^(shape-1) singularity at 0.
    def expect(fn):
        def integrand(u):
            g = u ** (1.0 / SHAPE)
            return fn(SCALE * g) * math.exp(-g) / special.gamma(SHAPE + 1.0)
        upper = 60.0 ** SHAPE
        val, _ = integrate.quad(integrand, 0.0, upper, limit=400, epsabs=1e-13, epsrel=1e-11)
        return val
    mean_abs = expect(lambda mu: folded_normal_mean(mu, sigma))
    mean_log = expect(lambda mu: math.log(sigma) + log_abs_shifted_normal(mu / sigma))
    return math.log(mean_abs) - mean_log


if __name__ == "__main__":
    values = [g_value(db) for db in range(-20, 101)]
    for i in range(0, len(values), 4):
        print("    " + ", ".join(f"{v:.8f}" for v in values[i:i + 4]) + ",")
