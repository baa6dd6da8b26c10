#!/usr/bin/env python3
"""Independent cross-check for the principal-ideal enumeration and L(1,v).

Enumerates principal ideals of the discriminant-257 field by fundamental
domain reduction in numpy, evaluates the exponentially smoothed character
sums at two cutoffs and Richardson-extrapolates. Sources of the frozen
numbers in tests/test_lseries.cpp: the ideal counts at norm 50 / 200, the
reference L(1,v) = 0.5444034309, and the sharp-partial-sum envelope.
No project code is used.

Usage: python3 lvalue_smoothed.py [B]
"""
import math
import sys

import mpmath as mp
import numpy as np
import sympy as sp

mp.mp.dps = 40
x, q0s, q1s, q2s = sp.symbols("x q0 q1 q2")

A, B_, C_ = 2, -3, -1  # x^3 + 2x^2 - 3x - 1, discriminant 257
NFP = sp.Poly(sp.expand(sp.resultant(x**3 + A * x * x + B_ * x + C_,
                                     q0s + q1s * x + q2s * x * x, x)), q0s, q1s, q2s)
COEFFS = {m: int(c) for m, c in zip(NFP.monoms(), NFP.coeffs())}

RTS = sorted([mp.re(r) for r in mp.polyroots([1, A, B_, C_], maxsteps=200,
                                             extraprec=200)], reverse=True)
RF = [float(r) for r in RTS]
W = np.array([[RF[i] ** j for j in range(3)] for i in range(3)])

# fundamental units: alpha and alpha - 1
EPS = [(0, 1, 0), (-1, 1, 0)]


def emb(c, i):
    return float(c[0] + c[1] * RF[i] + c[2] * RF[i] * RF[i])


LMAT = np.array([[math.log(abs(emb(e, 0))), math.log(abs(emb(e, 1)))] for e in EPS]).T
AINV = np.linalg.inv(LMAT)
V1, V2 = LMAT[:, 0], LMAT[:, 1]
YMAX = np.array([max(0, V1[0]) + max(0, V2[0]), max(0, V1[1]) + max(0, V2[1]),
                 max(0, -(V1[0] + V1[1])) + max(0, -(V2[0] + V2[1]))])


def ideals_upto(nmax):
    """(norms, v-values) with v = sgn(z^(2)) sgn(z^(3)), one per ideal."""
    r3 = float(nmax) ** (1.0 / 3.0)
    rad = np.exp(YMAX) * r3 * (1 + 1e-9)
    cap = np.ceil(np.abs(np.linalg.inv(W)) @ rad).astype(np.int64)
    out_n, out_v = [], []
    c0r = np.arange(-cap[0], cap[0] + 1, dtype=np.int64)
    for c2 in range(-int(cap[2]), int(cap[2]) + 1):
        for c1 in range(-int(cap[1]), int(cap[1]) + 1):
            a3 = a2 = a1 = a0 = 0
            for (i, j, k), co in COEFFS.items():
                t = co * (c1**j) * (c2**k)
                if i == 3: a3 += t
                elif i == 2: a2 += t
                elif i == 1: a1 += t
                else: a0 += t
            nv = ((a3 * c0r + a2) * c0r + a1) * c0r + a0
            az = np.abs(nv)
            ok = (az > 0) & (az <= nmax)
            if not ok.any():
                continue
            q0 = c0r[ok]; azk = az[ok]
            e1 = q0 + (W[0, 1] * c1 + W[0, 2] * c2)
            e2 = q0 + (W[1, 1] * c1 + W[1, 2] * c2)
            e3 = q0 + (W[2, 1] * c1 + W[2, 2] * c2)
            inb = (np.abs(e1) <= rad[0]) & (np.abs(e2) <= rad[1]) & (np.abs(e3) <= rad[2])
            if not inb.any():
                continue
            q0, azk, e1, e2, e3 = q0[inb], azk[inb], e1[inb], e2[inb], e3[inb]
            t = np.log(azk.astype(np.float64)) / 3.0
            y0 = np.log(np.abs(e1)) - t
            y1 = np.log(np.abs(e2)) - t
            s0 = AINV[0, 0] * y0 + AINV[0, 1] * y1
            s1 = AINV[1, 0] * y0 + AINV[1, 1] * y1
            # snap exact lattice hits (units and integer multiples of units)
            s0 = np.where(np.abs(s0 - np.round(s0)) < 1e-9, np.round(s0), s0)
            s1 = np.where(np.abs(s1 - np.round(s1)) < 1e-9, np.round(s1), s1)
            infd = (s0 >= 0) & (s0 < 1) & (s1 >= 0) & (s1 < 1)
            if not infd.any():
                continue
            q0, azk, e2, e3 = q0[infd], azk[infd], e2[infd], e3[infd]
            if c2 > 0 or (c2 == 0 and c1 > 0):
                keep = np.ones(len(q0), bool)
            elif c2 < 0 or (c2 == 0 and c1 < 0):
                keep = np.zeros(len(q0), bool)
            else:
                keep = q0 > 0
            if not keep.any():
                continue
            out_n.append(azk[keep])
            out_v.append(np.sign(e2[keep]) * np.sign(e3[keep]))
    return np.concatenate(out_n), np.concatenate(out_v)


if __name__ == "__main__":
    B = int(sys.argv[1]) if len(sys.argv) > 1 else 20000
    for small in (5, 50, 200):
        n, _ = ideals_upto(small)
        print(f"principal ideals with norm <= {small}: {len(n)}")

    norms, vals = ideals_upto(70 * B)

    def smoothed(cut):
        msk = norms <= 35 * cut
        return math.fsum(vals[msk] / norms[msk] * np.exp(-norms[msk] / cut))

    S1, S2 = smoothed(B), smoothed(2 * B)
    print(f"S(B)  = {S1:.14f}")
    print(f"S(2B) = {S2:.14f}")
    print(f"L(1,v) ~ {2 * S2 - S1:.12f}  (Richardson, error ~ |S2 - S1| = {abs(S2 - S1):.2e})")

    idx = np.argsort(norms, kind="stable")
    csum = np.cumsum(vals[idx] / norms[idx])
    msk = (norms[idx] >= B / 2) & (norms[idx] <= 2 * B)
    print(f"sharp partial sums over cutoffs in [B/2, 2B]: "
          f"min {csum[msk].min():.9f}, max {csum[msk].max():.9f}")
