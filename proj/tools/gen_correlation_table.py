#!/usr/bin/env python3
"""Regenerates the area-correlation grid in src/correlation_table.cpp.

Binormal model: two modalities rate the same cases, latent scores are
bivariate normal with unit variance and correlation r; positives are shifted
by mu = sqrt(2) * Phi^-1(A) so that each modality has area A.  The
correlation between the two area estimates (equal |P| and |N|) then reduces
to corr(Phi(X), Phi(X')) for (X, X') ~ N(mu, [[1, r], [r, 1]]).
"""
import math

import numpy as np
from scipy.stats import norm

NODES, WEIGHTS = np.polynomial.hermite_e.hermegauss(80)
WEIGHTS = WEIGHTS / WEIGHTS.sum()


def area_correlation(r, area):
    mu = math.sqrt(2.0) * norm.ppf(area)
    x = mu + NODES[:, None]
    xp = mu + r * NODES[:, None] + math.sqrt(1.0 - r * r) * NODES[None, :]
    w = WEIGHTS[:, None] * WEIGHTS[None, :]
    a = norm.cdf(x) * np.ones_like(xp)
    b = norm.cdf(xp)
    ma, mb = (w * a).sum(), (w * b).sum()
    cov = (w * (a - ma) * (b - mb)).sum()
    return cov / math.sqrt((w * (a - ma) ** 2).sum() * (w * (b - mb) ** 2).sum())


def main():
    areas = [0.700 + 0.025 * j for j in range(12)]
    rows = [0.02 * i for i in range(1, 46)]
    for r in rows:
        cells = ", ".join(f"{area_correlation(r, a):.2f}" for a in areas)
        print(f"    {{{cells}}},  // {r:.2f}")


if __name__ == "__main__":
    main()
