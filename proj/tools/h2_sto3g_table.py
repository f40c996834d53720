# ******************************************************************************
# Copyright (c) 2026 The qitelab Authors.
# All rights reserved.
#
# This source code and the accompanying materials are made available under
# the terms of the Apache License 2.0 which accompanies this distribution.
# ******************************************************************************
"""Regenerates data/h2_sto3g.csv: two-qubit H2 coefficients in STO-3G.

Basis: |00> = sigma_g^2, |11> = sigma_u^2, |01>/|10> = the two open-shell
determinants. Nuclear repulsion is folded into h0. Requires numpy and scipy.
"""
import sys

import numpy as np
from scipy.special import erf

BOHR = 0.52917721092  # angstrom
ALPHA = np.array([3.42525091, 0.62391373, 0.16885540])
COEF = np.array([0.15432897, 0.53532814, 0.44463454])
NORM = (2 * ALPHA / np.pi) ** 0.75


def boys0(t):
    return 1.0 if t < 1e-12 else 0.5 * np.sqrt(np.pi / t) * erf(np.sqrt(t))


def one_electron(a, A, b, B, nuclei):
    p = a + b
    ab2 = np.sum((A - B) ** 2)
    P = (a * A + b * B) / p
    s = (np.pi / p) ** 1.5 * np.exp(-a * b / p * ab2)
    t = a * b / p * (3 - 2 * a * b / p * ab2) * s
    v = sum(-2 * np.pi / p * z * np.exp(-a * b / p * ab2) * boys0(p * np.sum((P - C) ** 2))
            for z, C in nuclei)
    return s, t, v


def two_electron(a, A, b, B, c, C, d, D):
    p, q = a + b, c + d
    P, Q = (a * A + b * B) / p, (c * C + d * D) / q
    pre = 2 * np.pi ** 2.5 / (p * q * np.sqrt(p + q))
    return pre * np.exp(-a * b / p * np.sum((A - B) ** 2) - c * d / q * np.sum((C - D) ** 2)) \
        * boys0(p * q / (p + q) * np.sum((P - Q) ** 2))


def coefficients(r_angstrom):
    r = r_angstrom / BOHR
    centers = [np.zeros(3), np.array([0.0, 0.0, r])]
    nuclei = [(1.0, c) for c in centers]
    S = np.zeros((2, 2))
    Hc = np.zeros((2, 2))
    G = np.zeros((2, 2, 2, 2))
    w = COEF * NORM
    for i in range(2):
        for j in range(2):
            for a in range(3):
                for b in range(3):
                    s, t, v = one_electron(ALPHA[a], centers[i], ALPHA[b], centers[j], nuclei)
                    S[i, j] += w[a] * w[b] * s
                    Hc[i, j] += w[a] * w[b] * (t + v)
    for idx in np.ndindex(2, 2, 2, 2):
        i, j, k, l = idx
        G[idx] = sum(w[a] * w[b] * w[c] * w[d] *
                     two_electron(ALPHA[a], centers[i], ALPHA[b], centers[j],
                                  ALPHA[c], centers[k], ALPHA[d], centers[l])
                     for a, b, c, d in np.ndindex(3, 3, 3, 3))
    s = S[0, 1]
    mo = np.array([[1, 1], [1, -1]]) / np.array([np.sqrt(2 * (1 + s)), np.sqrt(2 * (1 - s))])
    h = mo.T @ Hc @ mo
    g = np.einsum('pi,qj,rk,sl,pqrs->ijkl', mo, mo, mo, mo, G)
    e_nuc = 1.0 / r
    d00 = 2 * h[0, 0] + g[0, 0, 0, 0] + e_nuc
    d11 = 2 * h[1, 1] + g[1, 1, 1, 1] + e_nuc
    dop = h[0, 0] + h[1, 1] + g[0, 0, 1, 1] + e_nuc
    k = g[0, 1, 0, 1]
    return [(d00 + 2 * dop + d11) / 4, (d00 - d11) / 4, (d00 - d11) / 4,
            (d00 - 2 * dop + d11) / 4, k, 0.0]


def main(path):
    with open(path, 'w') as f:
        f.write('# H2 two-qubit Hamiltonian, STO-3G, generated by tools/h2_sto3g_table.py\n')
        f.write('#units: angstrom\n')
        f.write('R,h0,h1,h2,h3,h4,h5\n')
        for r in np.round(np.arange(0.30, 2.501, 0.10), 2):
            f.write('%.2f,' % r + ','.join('%.10f' % x for x in coefficients(r)) + '\n')


if __name__ == '__main__':
    main(sys.argv[1] if len(sys.argv) > 1 else 'data/h2_sto3g.csv')
