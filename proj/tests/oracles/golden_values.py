"""Independent high-precision oracles for the frozen values in the C++ tests.

Uses mpmath quadrature and exact rational enumeration; nothing here shares
code with the C++ implementation. Run with `python3 golden_values.py`.
"""
from fractions import Fraction
from math import isqrt

from mpmath import mp, mpf, log, sqrt, quad, exp, pi, e

mp.dps = 40


def kappa_sigma(s):
    # distortion of the basic example as a function of s = log(1/r)
    return 1 + 2 * s - 2 * log(log(2) + s)


def stretch_rate(s):
    k = kappa_sigma(s)
    return k + sqrt(k * k - 1)


def log_rho(r):
    s_end = -log(mpf(r))
    return -quad(stretch_rate, [0, s_end])


def F(r):
    r = mpf(r)
    return 1 / (r * r * log(2 / r) ** 2)


def containment_ok(j, l, n):
    # |p| + 2^{-4n} <= 1 with p = (j, l) / 2^{n-1}, exactly
    p2 = Fraction(j * j + l * l, 4 ** (n - 1))
    one_minus = 1 - Fraction(1, 2 ** (4 * n))
    return p2 <= one_minus * one_minus


def enumerate_centers(max_level):
    chosen = set()
    out = []
    for n in range(1, max_level + 1):
        if n == 1:
            cand = [(0, 0)]
        else:
            m = 2 ** (n - 1) - 1
            cand = [(j, l) for j in range(-m, m + 1) for l in range(-m, m + 1)]
        level = []
        for (j, l) in cand:
            pt = (Fraction(j, 2 ** (n - 1)), Fraction(l, 2 ** (n - 1)))
            if pt in chosen or not containment_ok(j, l, n):
                continue
            chosen.add(pt)
            level.append((n, j, l, pt))
        out.extend(level)
    return out


def extended_series(z, p, kmax, centers):
    total = mpf(0)
    for k, (n, j, l, pt) in enumerate(centers[:kmax], start=1):
        cx, cy = mpf(pt[0].numerator) / pt[0].denominator, mpf(pt[1].numerator) / pt[1].denominator
        dist = sqrt((mpf(z[0]) - cx) ** 2 + (mpf(z[1]) - cy) ** 2)
        dk = 1 - sqrt(cx * cx + cy * cy)
        if dist < dk:
            total += F(dist) / mpf(2) ** k
    return total


if __name__ == "__main__":
    print("1/log2             =", mp.nstr(1 / log(2), 20))
    print("F(1)               =", mp.nstr(F(1), 20))
    print("K(0.1)             =", mp.nstr(kappa_sigma(-log(mpf('0.1'))), 20))
    print("K(2/e)             =", mp.nstr(3 - 2 * log(2), 20))
    print("log rho(0.5)       =", mp.nstr(log_rho('0.5'), 20))
    print("rho(0.5)           =", mp.nstr(exp(log_rho('0.5')), 20))
    print("log rho(0.25)      =", mp.nstr(log_rho('0.25'), 20))
    print("log rho(1e-4)      =", mp.nstr(log_rho('1e-4'), 20))
    print("2 pi e / log 2     =", mp.nstr(2 * pi * e / log(2), 20))
    print("pi e / log 2       =", mp.nstr(pi * e / log(2), 20))
    print("1/log4 - 1/log8    =", mp.nstr(1 / log(4) - 1 / log(8), 20))
    print("pi/63              =", mp.nstr(pi / 63, 20))
    for eps in ['1e-2', '1e-3', '1e-4', '1e-5']:
        # Dirichlet energy of the radial map over (eps, 1/2) in s = log(1/r)
        f = lambda s: exp(2 * log_rho(exp(-s))) * (stretch_rate(s) ** 2 + 1)
        val = 2 * pi * quad(f, [log(2), -log(mpf(eps))])
        print("dirichlet(%s,0.5) =" % eps, mp.nstr(val, 20))
    centers = enumerate_centers(8)
    counts = {}
    for c in centers:
        counts[c[0]] = counts.get(c[0], 0) + 1
    print("counts per level   =", [counts[n] for n in range(1, 9)])
    for N in range(1, 9):
        area = sum(counts[n] * pi / mpf(2) ** (8 * n) for n in range(1, N + 1))
        print("area(%d)            =" % N, mp.nstr(area, 20))
    print("first centers      =", [(c[0], c[1], c[2]) for c in centers[:12]])
    s = extended_series(('1e-4', '0'), 1, 100, centers)
    print("S(1e-4), kmax=100  =", mp.nstr(s, 25))
    print("K(1e-4), p=1       =", mp.nstr(1 + log(s), 25))
    s = extended_series(('0.9', '0'), 1, 200, centers)
    print("S(0.9), kmax=200   =", mp.nstr(s, 25))
    s = extended_series(('0.3', '-0.2'), 1, 200, centers)
    print("S(0.3-0.2i), kmax=200 =", mp.nstr(s, 25))
    ws = sum(2 * pi / mpf(2) ** k / log(2 / (1 - sqrt((mpf(c[3][0].numerator) / c[3][0].denominator) ** 2
                                                        + (mpf(c[3][1].numerator) / c[3][1].denominator) ** 2)))
             for k, c in enumerate(centers[:200], start=1))
    print("termwise(p=1)      =", mp.nstr(e * ws, 20))
