#!/usr/bin/env python3
"""Independent cross-check for unit groups of totally real cubic fields.

Brute-force box search for units (exact resultant norms via sympy), lattice
reduction of their log vectors with mpmath at 50 digits, regulator from the
reduced pair, sign-character census from the full signature set. Produces
the values frozen in tests/fixtures/regulators.txt. No project code is used.

Usage: python3 units_regulator.py [bound]
"""
import itertools
import sys

import mpmath as mp
import numpy as np
import sympy as sp

mp.mp.dps = 50
x = sp.symbols("x")

FIELDS = [
    ((2, -3, -1), 257),
    ((-1, -2, 1), 49),
    ((0, -3, -1), 81),
    ((-4, -3, 1), 697),
    ((-4, -2, 2), 788),
    ((-4, -1, 5), 985),
]


def roots_desc(a, b, c):
    rts = mp.polyroots([1, a, b, c], maxsteps=400, extraprec=300)
    return sorted([mp.re(r) for r in rts], reverse=True)


def norm_form(a, b, c):
    q0, q1, q2 = sp.symbols("q0 q1 q2")
    nf = sp.expand(sp.resultant(x**3 + a * x * x + b * x + c, q0 + q1 * x + q2 * x * x, x))
    poly = sp.Poly(nf, q0, q1, q2)
    return {m: int(co) for m, co in zip(poly.monoms(), poly.coeffs())}


def units_in_box(poly, bound):
    """All z in Z[alpha] with |N(z)| = 1 and every |z^(i)| <= e^bound."""
    a, b, c = poly
    rts = roots_desc(a, b, c)
    rf = np.array([float(r) for r in rts])
    E = float(np.exp(bound))
    W = np.array([[rf[i] ** j for j in range(3)] for i in range(3)])
    caps = np.ceil(np.abs(np.linalg.inv(W)).sum(axis=1) * E).astype(int) + 1
    coeffs = norm_form(a, b, c)
    units = []
    q1v = np.arange(-caps[1], caps[1] + 1, dtype=np.int64)
    for q2 in range(-caps[2], caps[2] + 1):
        lo = np.full(len(q1v), -np.inf)
        hi = np.full(len(q1v), np.inf)
        for i in range(3):
            t = q1v * rf[i] + q2 * rf[i] * rf[i]
            lo = np.maximum(lo, -E - t)
            hi = np.minimum(hi, E - t)
        for idx in np.where(hi >= lo - 0.5)[0]:
            q1 = int(q1v[idx])
            for q0 in range(int(np.ceil(lo[idx] - 1e-9)), int(np.floor(hi[idx] + 1e-9)) + 1):
                if (q0, q1, q2) == (0, 0, 0):
                    continue
                n = sum(co * q0**i * q1**j * q2**k for (i, j, k), co in coeffs.items())
                if abs(n) == 1:
                    units.append((q0, q1, q2))
    return units, rts


def reduce_lattice(vecs):
    """Lagrange-reduced basis of the rank-2 lattice generated by vecs."""
    tol = mp.mpf("1e-35")

    def nrm(v):
        return mp.sqrt(v[0] ** 2 + v[1] ** 2)

    basis = []
    for w in sorted(vecs, key=nrm):
        for _ in range(300):
            changed = False
            for vb in basis:
                k = mp.nint((w[0] * vb[0] + w[1] * vb[1]) / (vb[0] ** 2 + vb[1] ** 2))
                if k != 0:
                    w = (w[0] - k * vb[0], w[1] - k * vb[1])
                    changed = True
            if not changed:
                break
        if nrm(w) > tol:
            basis.append(w)
            basis.sort(key=nrm)
            basis = basis[:2]
    return basis


def census(poly, bound):
    units, rts = units_in_box(poly, bound)
    sigs = set()
    vecs = []
    for u in units:
        e = [u[0] + u[1] * r + u[2] * r * r for r in rts]
        sigs.add(tuple(0 if v > 0 else 1 for v in e))
        vecs.append((mp.log(abs(e[0])), mp.log(abs(e[1]))))
    basis = reduce_lattice(vecs)
    assert len(basis) == 2, "unit search bound too small"
    R = abs(basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0])
    ngood = 0
    for ev in itertools.product((0, 1), repeat=3):
        if sum(ev) % 2 or ev == (0, 0, 0):
            continue
        if all(sum(p * q for p, q in zip(ev, s)) % 2 == 0 for s in sigs):
            ngood += 1
    return len(units), R, ngood


if __name__ == "__main__":
    bound = float(sys.argv[1]) if len(sys.argv) > 1 else 5.0
    for poly, disc in FIELDS:
        n, R, ngood = census(poly, bound)
        print(f"disc {disc}: {n} units in the box, regulator {mp.nstr(R, 32)}, "
              f"{ngood} nontrivial characters trivial on all units")
