"""Independent reference values for the C++ tests.

Works from the Cartesian segment formulas in 50-digit arithmetic and
differentiates numerically (mpmath), so it shares no code or closed forms
with the library. Run it and paste the printed values into the tests.
"""
from mpmath import mp, mpf, sqrt, sin, cos, pi, hypot, diff, findroot

mp.dps = 50


def segment(p, i, j, th):
    if (i, j) == (1, 1):
        x = p["L0"] - p["b1"] - p["ell1"] * sin(th / 2)
        y = p["d1"] - p["ell1"] * cos(th / 2)
    elif (i, j) == (1, 2):
        x = p["r1"] - p["ell1"] * sin(th / 2)
        y = p["s1"] - p["ell1"] * cos(th / 2)
    elif (i, j) == (2, 1):
        x = p["L0"] - p["b2"] + p["ell2"] * cos(pi + (pi + th) / 2)
        y = p["d2"] + p["ell2"] * sin(pi + (pi + th) / 2)
    else:
        x = p["r2"] + p["ell2"] * cos((pi - th) / 2)
        y = p["s2"] - p["ell2"] * sin((pi - th) / 2)
    return hypot(x, y)


def muscle(p, i, th):
    return segment(p, i, 1, th) + segment(p, i, 2, th)


def potential(p, th, thd, k):
    v1 = k * diff(lambda t: muscle(p, 2, t), thd)
    v2 = -k * diff(lambda t: muscle(p, 1, t), thd)
    return (muscle(p, 1, th) - muscle(p, 1, thd)) * v1 + (muscle(p, 2, th) - muscle(p, 2, thd)) * v2


def mm(**kw):
    return {k: mpf(v) / 1000 for k, v in kw.items()}


def table1(d1, d2):
    return mm(L0=285, L1=110, b1=87, b2=5, ell1=99, ell2=99, r1=35, r2=35, s1=35, s2=35, d1=d1, d2=d2)


def example1(kappa, L0):
    r = kappa / (2 * sqrt(2))
    return {"L0": L0, "L1": mpf("0.015"), "b1": L0 - 2 * kappa, "b2": L0 - 2 * sqrt(2) * kappa,
            "d1": 2 * kappa, "d2": 2 * sqrt(2) * kappa, "ell1": kappa, "ell2": kappa,
            "r1": r, "s1": r, "r2": r, "s2": r}


def fig5():
    return mm(L0=70, L1=15, b1=20, b2=20, d1=30, d2=30, ell1=30, ell2=30, r1=15, r2=15, s1=25, s2=25)


def show(name, x):
    print(f"{name} = {mp.nstr(x, 17)}")


thd = pi / 12

p = table1(198, 280)
dq2 = diff(lambda t: muscle(p, 2, t), thd)
dq1 = diff(lambda t: muscle(p, 1, t), thd)
k = mpf("7.84") / dq2
show("table1_stable gain", k)
show("table1_stable v2 predicted", -k * dq1)

p = table1(15, 15)
dq2 = diff(lambda t: muscle(p, 2, t), thd)
dq1 = diff(lambda t: muscle(p, 1, t), thd)
k = mpf("7.84") / dq2
show("table1_unstable gain", k)
show("table1_unstable v2 predicted", -k * dq1)
show("table1_unstable P''", diff(lambda t: potential(p, t, thd, k), thd, 2))

p = example1(mpf(1), mpf(3))
f2 = lambda t: diff(lambda s: segment(p, 2, 1, s), t, 2)
show("example1 (2,1) convexity end", findroot(f2, mpf("1.0")))
f2 = lambda t: diff(lambda s: segment(p, 2, 2, s), t, 2)
show("example1 (2,2) convexity end", findroot(f2, mpf("0.5")))

p = example1(mpf("0.030"), mpf("0.070"))
show("fig4 P'' (k=400)", diff(lambda t: potential(p, t, thd, 400), thd, 2))
show("fig4 P(0)", potential(p, mpf(0), thd, 400))
show("fig4 tau(pi/18)", -diff(lambda t: potential(p, t, thd, 400), pi / 18))

p = fig5()
show("fig5 P'' (k=400)", diff(lambda t: potential(p, t, thd, 400), thd, 2))
