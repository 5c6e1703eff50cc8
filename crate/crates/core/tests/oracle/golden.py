"""Regenerates the golden data frozen in tests/golden.rs.

Determining equations are expanded symbolically and evaluated at 50-digit
precision on a sample sweep; an equation is certified for a bundle when its
relative residual stays below 1e-30 everywhere.  Run with `python3 golden.py`.
"""
import sympy as sp
import mpmath as mp

mp.mp.dps = 50
x, t, u = sp.symbols("x t u", real=True)


def equations(EI, m, T, xi, tau, A, B):
    d = lambda f, k=1: sp.diff(f, x, k)
    eta = A * u + B
    eta_u = A
    E, E1, E2, E3 = EI, d(EI), d(EI, 2), d(EI, 3)
    return {
        "R1": [sp.diff(tau, x)],
        "R2": [sp.diff(tau, u)],
        "R3": [sp.diff(xi, t)],
        "R4": [sp.diff(xi, u)],
        "R5": [m * sp.diff(eta, t, 2), -d(T) * d(eta), -T * d(eta, 2), E2 * d(eta, 2),
               2 * E1 * d(eta, 3), E * d(eta, 4)],
        "R6": [-2 * xi * E1**2 / E, 2 * xi * E2, 2 * E1 * d(xi), 4 * E * d(eta_u), -6 * E * d(xi, 2)],
        "R7": [T * xi * E1 / E, -xi * d(T), -xi * E1 * E2 / E, xi * E3, -2 * T * d(xi),
               2 * E2 * d(xi), 6 * E1 * d(eta_u), 6 * E1 * d(xi, 2), 6 * E * d(eta_u, 2),
               4 * E * d(xi, 3)],
        "R8": [d(T) * xi * E1 / E, -d(T, 2) * xi, -m * sp.diff(xi, t, 2), -3 * d(T) * d(xi),
               -2 * T * d(eta_u), 2 * E2 * d(eta_u), T * d(xi, 2), -E * d(xi, 2),
               6 * E1 * d(eta_u, 2), -2 * E1 * d(xi, 3), 4 * E * d(eta_u, 3), E * d(xi, 4)],
        "R9": [-m * xi * E1 / E, xi * d(m), -2 * m * sp.diff(tau, t), 4 * d(xi)],
        "R10": [2 * m * sp.diff(eta_u, t), -m * sp.diff(tau, t, 2), d(T) * d(tau), T * d(tau, 2),
                -E2 * d(tau, 2), -2 * E1 * d(tau, 3), -E * d(tau, 4)],
        "R11": [sp.diff(eta, u, 2)],
    }


def pde(EI, m, T, U):
    return [EI * sp.diff(U, x, 4), 2 * sp.diff(EI, x) * sp.diff(U, x, 3), sp.diff(EI, x, 2) * sp.diff(U, x, 2),
            m * sp.diff(U, t, 2), -sp.diff(T, x) * sp.diff(U, x), -T * sp.diff(U, x, 2)]


def rel(terms, pt):
    vals = [mp.mpf(sp.N(tm.subs(pt), 60)) for tm in terms]
    scale = max(abs(v) for v in vals)
    s = sum(vals)
    return abs(s) / scale if scale != 0 else abs(s)


def sweep(lo, hi, n=24):
    pts = []
    for k in range(1, n + 1):
        hx = sp.Rational(k * 7 % (n + 1), n + 1)
        ht = sp.Rational(k * 11 % (n + 1), n + 1)
        pts.append({x: lo + (hi - lo) * hx, t: 2 * ht, u: [0, 1, -1, 10, -10][k % 5]})
    return pts


R = sp.Rational


def bundle_a1(k=1, f0=1, T0=1, m0=1, c2=0, om=0):
    EI = k**3 * x**6 / (8 * f0**3)
    m = m0 * sp.exp(-4 * c2 / (k * x)) / x**2
    T = T0 * x**2 - R(3, 4) * k**3 * x**4 / f0**3
    xi = k * x**2 / 2
    tau = om * t / 2
    alpha = k - R(om, 4)
    lam = sp.sqrt(2 * (2 * f0**3 * T0 - k**3) / (f0**3 * m0))
    U = sp.exp(-2 / x) * (sp.exp(lam * t) + R(1, 2) * sp.exp(-lam * t))
    return EI, m, T, xi, tau, alpha + R(om, 4), 0, U, (R(1, 20), 1)


def bundle_a2(a0=1, a1=1, f0=1, m0=1, c2=0, om=0, r0=-3, alpha=0):
    EI = a1 * sp.exp(a0 * x)
    m = m0 * sp.exp(R(1, 3) * a0 * (-6 * c2 * sp.exp(-a0 * x / 3) / (a0 * f0) - x))
    T = -R(2, 9) * a0**2 * a1 * sp.exp(a0 * x)
    xi = 3 * f0 * sp.exp(a0 * x / 3) / a0
    U = sp.exp(x / r0) * (1 + R(1, 2) * t)
    return EI, m, T, xi, om * t / 2, alpha + R(om, 4), 0, U, (0, 1)


def bundle_b(v=1, a1=1, m0=1, c2=0, om=0):
    EI = a1 * sp.exp(-v * x)
    m = m0 * sp.exp(v * (-4 * c2 * sp.exp(-v * x) - 5 * x))
    T = 2 * a1 * v**2 * sp.exp(-v * x)
    xi = sp.exp(v * x) / (2 * v**2)
    U = sp.exp(2 * v * x) * (1 + R(1, 2) * t)
    return EI, m, T, xi, om * t / 2, sp.exp(v * x) / v + R(om, 4), 0, U, (0, 1)


def bundle_c(a0=1, a1=1, n=4, T1=1, f0=1, om=0, m0=1, A=(0, 0, 1)):
    z = a0 + a1 * x
    EI = z**n
    T = T1 * z**(n - 2) / (a1 * (n - 2))
    m = m0 * z**((f0 * (n - 4) + n * om) / sp.Integer(f0))
    xi = z / (a1 * n)
    r = sp.sqrt(a1**3 * (n - 2) * (n - 1)**2 + 4 * T1)
    q = a1**R(3, 2) * (n - 3) * sp.sqrt(n - 2)
    G = z**(-n) * (
        -2 * sp.sqrt(a1) * A[0] * sp.sqrt(n - 2) * z**(R(1, 2) * (-r / (a1**R(3, 2) * sp.sqrt(n - 2)) + n + 3)) / (q + r)
        - 2 * sp.sqrt(a1) * A[1] * sp.sqrt(n - 2) * z**(R(1, 2) * (r / (a1**R(3, 2) * sp.sqrt(n - 2)) + n + 3)) / (q - r)
        - A[2] * z**3 / (a1 * (n - 3)))
    return EI, m, T, xi, om * t / 2, R(om, 4), 0, 2 * t + G, (0, 1)


def bvp_m12(m0):
    s6 = sp.sqrt(6)
    c = sp.cbrt(s6 * m0**3 + 9 * m0**3)
    m1 = c / (3**R(2, 3) * sp.cbrt(5)) + sp.cbrt(R(5, 3)) * m0**2 / c - 2 * m0
    m2 = (5 * s6 * m0**3 + 195 * m0**3 + 8 * sp.cbrt(5) * (3 * (9 + s6))**R(2, 3) * (m0**3)**R(2, 3) * m0
          + 375 * m0**6 / (s6 * m0**3 + 9 * m0**3)
          + 120 * sp.cbrt(3) * 5**R(2, 3) * m0**5 / ((9 + s6)**R(2, 3) * (m0**3)**R(2, 3))
          - 120 * 3**R(2, 3) * sp.cbrt(R(5) / (9 + s6)) * m0**4 / sp.cbrt(m0**3)
          - 24 * 5**R(2, 3) * sp.cbrt(3 * (9 + s6)) * sp.cbrt(m0**3) * m0**2) / (240 * m0**2)
    return m1, m2


def bundle_bvp(m0=1, g1=R(1, 3000), om=2, c1=0):
    m1, m2 = bvp_m12(sp.nsimplify(m0))
    m = m0 + m1 * x + m2 * x**2
    w = 6 * m0 + x * (3 * m1 + 2 * m2 * x)
    EI = g1 * x**4 * w**4 / m**3
    poly = (-56 * m0**4 + 8 * m0**3 * x * (17 * m2 * x - 10 * m1)
            + 12 * m0**2 * x**2 * (-7 * m1**2 + 8 * m1 * m2 * x + 2 * m2**2 * x**2)
            + 2 * m0 * x**3 * (-22 * m1**3 + 9 * m1**2 * m2 * x + 24 * m1 * m2**2 * x**2 + 12 * m2**3 * x**3)
            - m1**2 * x**4 * (11 * m1**2 + 14 * m1 * m2 * x + 6 * m2**2 * x**2))
    T = g1 * x**2 * w**2 / m**5 * poly
    P = m0 * x + m1 * x**2 / 2 + m2 * x**3 / 3
    xi = P / m
    nu = 120 * sp.sqrt(3 * g1)
    U = P**2 * sp.cos(nu * t)
    return EI, m, T, xi, c1 + 0 * t, om, 0, U, (0, 1)


def report(name, b):
    EI, m, T, xi, tau, A, B, U, (lo, hi) = b
    eqs = equations(EI, m, T, xi, tau, A, B)
    pts = sweep(sp.nsimplify(lo), sp.nsimplify(hi))
    certified = [lab for lab, terms in eqs.items() if max(rel(terms, p) for p in pts) < mp.mpf("1e-30")]
    pde_rel = max(rel(pde(EI, m, T, U), p) for p in pts)
    print(f"{name}: certified = {certified}; max pde residual = {mp.nstr(pde_rel, 3)}")


if __name__ == "__main__":
    report("a1", bundle_a1())
    report("a2", bundle_a2())
    report("b", bundle_b())
    report("c", bundle_c())
    report("bvp", bundle_bvp())
    for m0 in (R(1, 2), 1, 2):
        m1, m2 = bvp_m12(sp.nsimplify(m0))
        print(f"bvp m0={m0}: m1 = {sp.N(m1, 15)}, m2 = {sp.N(m2, 15)}")
