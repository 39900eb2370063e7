"""Reference values frozen into the unit tests.

mpmath at 30 digits; derivatives by mpmath's own numerical differentiation and
Fock sums by direct summation, so nothing here reuses the C++ algebra.
Run with `python3 tests/oracle/freeze_values.py`.
"""
from mpmath import mp, mpf, sinh, tanh, cos, exp, sqrt, pi, diff, atanh

mp.dps = 30


def photocount(ge, gte, Phi, mu=1):
    s, y, c = sinh(ge), tanh(gte), cos(Phi)
    return 2 * mu * s * s * (1 + 2 * y * (c - y) / (1 + y * y - 2 * y * c))


def contraction_mean(x, y, Phi, K=400):
    # sum over n, p, q, q' of the signal-diagonal terms weighted by the idler number n + p
    total = mpf(0)
    norm = mpf(0)
    for n in range(K):
        for p in range(K - n):
            w = x ** (2 * (n + p))
            norm += w
            total += w * (n + p)
    return total / norm


def emit(name, v):
    print(f"{name} = {mp.nstr(v, 17)}")


g, gt = mpf("0.34"), mpf("0.2")
x, y = tanh(g), tanh(gt)
emit("N_phi0_mu0.9", photocount(g, gt, 0, mpf("0.9")))
emit("N_phipi_mu0.9", photocount(g, gt, pi, mpf("0.9")))
emit("baseline_0.34_mu0.9", 2 * mpf("0.9") * sinh(g) ** 2)
emit("V_0.2", 2 * y / (1 + y * y))
emit("pc_g0.1", photocount(mpf("0.1"), mpf("0.1"), 0))

mean = photocount(g, gt, pi / 4)
second = (1 + 2 * x * x) / (1 - x * x) * mean
dphi = abs(diff(lambda P: photocount(g, gt, P), pi / 4))
emit("mean_pi4", mean)
emit("second_pi4", second)
emit("dphi_pi4", dphi)
emit("dPhi_pi4", sqrt(second - mean * mean) / dphi)
emit("sql_0.2", 1 / sinh(gt))
emit("baseline_contraction_0.34", contraction_mean(x, 0, 0, 200))
emit("baseline_formula_0.34", 2 * x * x / (1 - x * x))

emit("sinh2_1.7", sinh(mpf("1.7")) ** 2)
emit("tanh2_0.5", tanh(mpf("0.5")) ** 2)

wr, tau = 2 * pi * mpf("250e6"), mpf("0.5e-9")
k = wr * wr * tau * tau / 4
emit("eta0", 1 / sum(exp(-j * j * k) for j in range(-5, 6)))

lam, w0, dist, r0 = mpf("1560e-9"), mpf("0.3"), mpf("100e3"), mpf("0.05")
z0 = pi * w0 ** 2 / lam
wd = w0 * sqrt(1 + (dist / z0) ** 2)
z0p = pi * wd ** 2 / lam
wp = wd * sqrt(1 + (dist / z0p) ** 2)
emit("z0", z0)
emit("w_d", wd)
emit("z0_prime", z0p)
emit("w_prime_0", wp)
emit("mu_coll", (w0 / wp) ** 2)
emit("on_axis_return_ratio", 1 / sqrt(1 + (2 * dist / z0) ** 2))
emit("wander", lam * dist / (2 * w0) * (w0 / r0) ** (mpf(5) / 6))
emit("spread", 2 * lam * dist / (pi * r0))
emit("r0_strong", mpf("0.186") * (lam ** 2 / (mpf("1e-13") * dist)) ** (mpf(3) / 5))
emit("feasibility_p", mpf("250e6") / 2 / mpf("10e3"))

u = tanh(mpf("1.7")) ** 2
emit("tmsv_mean_g1.7_cutoff40", sum(n * u ** n for n in range(41)) / sum(u ** n for n in range(41)))
